// SPDX-License-Identifier: Apache-2.0
//
// otadsgd: analog over-the-air distributed SGD simulator
// Copyright (C) 2026 The otadsgd authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "otadsgd/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <set>

namespace otadsgd {

using nlohmann::json;

namespace {

// Typed, range-checked access to one JSON object.
class ObjectReader {
public:
    ObjectReader(const json& obj, std::string where) : obj_(obj), where_(std::move(where)) {
        if (!obj_.is_object()) fail("must be a JSON object");
    }

    bool has(const std::string& key) const { return obj_.contains(key); }

    void reject_unknown(std::initializer_list<const char*> allowed) const {
        const std::set<std::string> ok(allowed.begin(), allowed.end());
        for (const auto& [key, value] : obj_.items()) {
            if (!ok.count(key)) fail("unknown key '" + key + "'");
        }
    }

    template <typename T>
    T integer(const std::string& key, T fallback, T min_value) const {
        if (!has(key)) return fallback;
        const json& v = obj_.at(key);
        if (!v.is_number_integer()) fail("'" + key + "' must be an integer");
        if (v.is_number_unsigned()) {
            const auto u = v.get<std::uint64_t>();
            if (u > static_cast<std::uint64_t>(std::numeric_limits<T>::max())) fail("'" + key + "' is too large");
            if (static_cast<std::int64_t>(min_value) > 0 && u < static_cast<std::uint64_t>(min_value))
                fail("'" + key + "' must be at least " + std::to_string(static_cast<std::int64_t>(min_value)));
            return static_cast<T>(u);
        }
        const auto x = v.get<std::int64_t>();
        if (x < static_cast<std::int64_t>(min_value))
            fail("'" + key + "' must be at least " + std::to_string(static_cast<std::int64_t>(min_value)));
        return static_cast<T>(x);
    }

    double number(const std::string& key, double fallback) const {
        if (!has(key)) return fallback;
        const json& v = obj_.at(key);
        if (!v.is_number()) fail("'" + key + "' must be a number");
        const double x = v.get<double>();
        if (!std::isfinite(x)) fail("'" + key + "' must be finite");
        return x;
    }

    std::string string(const std::string& key, const std::string& fallback) const {
        if (!has(key)) return fallback;
        const json& v = obj_.at(key);
        if (!v.is_string()) fail("'" + key + "' must be a string");
        return v.get<std::string>();
    }

    ObjectReader child(const std::string& key) const { return ObjectReader(obj_.at(key), where_ + "." + key); }

    [[noreturn]] void fail(const std::string& message) const { throw ConfigError(where_ + ": " + message); }

private:
    const json& obj_;
    std::string where_;
};

Normalization parse_normalization(const ObjectReader& r) {
    const std::string v = r.string("normalization", "scale_to_unit");
    if (v == "scale_to_unit") return Normalization::scale_to_unit;
    if (v == "none") return Normalization::none;
    r.fail("normalization must be 'none' or 'scale_to_unit'");
}

DatasetSpec parse_dataset(const ObjectReader& r) {
    DatasetSpec spec;
    const std::string source = r.string("source", "synthetic");
    spec.normalization = parse_normalization(r);
    if (source == "synthetic") {
        r.reject_unknown({"source", "classes", "features", "train_per_class", "test_per_class", "separation",
                          "seed", "normalization"});
        SyntheticSource syn;
        syn.classes = r.integer<int>("classes", syn.classes, 2);
        syn.features = r.integer<Index>("features", syn.features, 1);
        syn.train_per_class = r.integer<Index>("train_per_class", syn.train_per_class, 1);
        syn.test_per_class = r.integer<Index>("test_per_class", syn.test_per_class, 1);
        syn.separation = r.number("separation", syn.separation);
        if (syn.separation < 0.0) r.fail("separation must be nonnegative");
        syn.seed = r.integer<std::uint64_t>("seed", syn.seed, 0);
        spec.source = syn;
    } else if (source == "idx") {
        r.reject_unknown({"source", "train_images", "train_labels", "test_images", "test_labels", "normalization"});
        IdxSource idx;
        for (const char* key : {"train_images", "train_labels", "test_images", "test_labels"}) {
            if (!r.has(key)) r.fail(std::string("idx source needs '") + key + "'");
        }
        idx.train_images = r.string("train_images", "");
        idx.train_labels = r.string("train_labels", "");
        idx.test_images = r.string("test_images", "");
        idx.test_labels = r.string("test_labels", "");
        spec.source = idx;
    } else {
        r.fail("source must be 'synthetic' or 'idx'");
    }
    return spec;
}

json dataset_to_json(const DatasetSpec& spec) {
    json out;
    if (const auto* syn = std::get_if<SyntheticSource>(&spec.source)) {
        out = {{"source", "synthetic"},
               {"classes", syn->classes},
               {"features", syn->features},
               {"train_per_class", syn->train_per_class},
               {"test_per_class", syn->test_per_class},
               {"separation", syn->separation},
               {"seed", syn->seed}};
    } else {
        const auto& idx = std::get<IdxSource>(spec.source);
        out = {{"source", "idx"},
               {"train_images", idx.train_images.string()},
               {"train_labels", idx.train_labels.string()},
               {"test_images", idx.test_images.string()},
               {"test_labels", idx.test_labels.string()}};
    }
    out["normalization"] = spec.normalization == Normalization::scale_to_unit ? "scale_to_unit" : "none";
    return out;
}

std::uint32_t read_be32(std::istream& in) {
    unsigned char b[4] = {};
    in.read(reinterpret_cast<char*>(b), 4);
    if (!in) throw ConfigError("IDX header truncated");
    return (std::uint32_t{b[0]} << 24) | (std::uint32_t{b[1]} << 16) | (std::uint32_t{b[2]} << 8) | b[3];
}

}  // namespace

OptimizerState OptimizerSpec::make_state(Index d) const {
    if (kind == OptimizerState::Kind::sgd) return OptimizerState::sgd(learning_rate);
    return OptimizerState::adam(d, learning_rate, beta1, beta2, epsilon);
}

RunConfig parse_config(const json& doc) {
    const ObjectReader r(doc, "config");
    r.reject_unknown({"mode", "M", "K", "s", "d", "T", "sigma_h_sq", "sigma_z_sq", "channel_correlation", "power",
                      "optimizer", "dataset", "partition", "seed", "eval_every", "output", "sweep"});
    RunConfig c;

    const std::string mode = r.string("mode", "ota");
    if (mode == "ota") {
        c.mode = RunConfig::Mode::ota;
    } else if (mode == "error_free") {
        c.mode = RunConfig::Mode::error_free;
    } else {
        r.fail("mode must be 'ota' or 'error_free'");
    }

    c.devices = r.integer<Index>("M", c.devices, 1);
    c.antennas = r.integer<Index>("K", c.antennas, 1);
    if (r.has("s")) c.subchannels = r.integer<Index>("s", 1, 1);
    if (r.has("d")) c.model_size = r.integer<Index>("d", 1, 1);
    c.iterations = r.integer<std::int64_t>("T", c.iterations, 1);
    if (c.iterations >= 0x80000000LL) r.fail("T must be below 2^31");

    c.sigma_h_sq = r.number("sigma_h_sq", c.sigma_h_sq);
    if (!(c.sigma_h_sq > 0.0)) r.fail("sigma_h_sq must be positive");
    c.sigma_z_sq = r.number("sigma_z_sq", c.sigma_z_sq);
    if (c.sigma_z_sq < 0.0) r.fail("sigma_z_sq must be nonnegative");
    c.channel_correlation = r.string("channel_correlation", c.channel_correlation);
    if (c.channel_correlation != "iid") r.fail("channel_correlation supports only 'iid'");

    if (r.has("power")) {
        const ObjectReader p = r.child("power");
        p.reject_unknown({"kind", "alpha0", "slope"});
        const std::string kind = p.string("kind", "linear_ramp");
        if (kind == "constant") {
            c.power = PowerSchedule::constant(p.number("alpha0", 1.0));
            if (p.has("slope") && p.number("slope", 0.0) != 0.0) p.fail("constant schedule takes no slope");
        } else if (kind == "linear_ramp") {
            c.power = PowerSchedule::ramp(p.number("alpha0", 1.0), p.number("slope", 1.0e-3));
        } else {
            p.fail("kind must be 'constant' or 'linear_ramp'");
        }
    }
    try {
        c.power.validate(c.iterations);
    } catch (const std::invalid_argument& e) {
        r.fail(e.what());
    }

    if (r.has("optimizer")) {
        const ObjectReader o = r.child("optimizer");
        o.reject_unknown({"kind", "learning_rate", "beta1", "beta2", "epsilon"});
        const std::string kind = o.string("kind", "adam");
        if (kind == "adam") {
            c.optimizer.kind = OptimizerState::Kind::adam;
        } else if (kind == "sgd") {
            c.optimizer.kind = OptimizerState::Kind::sgd;
        } else {
            o.fail("kind must be 'sgd' or 'adam'");
        }
        c.optimizer.learning_rate = o.number("learning_rate", c.optimizer.learning_rate);
        c.optimizer.beta1 = o.number("beta1", c.optimizer.beta1);
        c.optimizer.beta2 = o.number("beta2", c.optimizer.beta2);
        c.optimizer.epsilon = o.number("epsilon", c.optimizer.epsilon);
        if (!(c.optimizer.learning_rate > 0.0)) o.fail("learning_rate must be positive");
        if (!(c.optimizer.beta1 > 0.0 && c.optimizer.beta1 < 1.0)) o.fail("beta1 must lie in (0, 1)");
        if (!(c.optimizer.beta2 > 0.0 && c.optimizer.beta2 < 1.0)) o.fail("beta2 must lie in (0, 1)");
        if (!(c.optimizer.epsilon > 0.0)) o.fail("epsilon must be positive");
    }

    if (r.has("dataset")) c.dataset = parse_dataset(r.child("dataset"));

    if (r.has("partition")) {
        const ObjectReader p = r.child("partition");
        p.reject_unknown({"per_device", "batch_size"});
        c.partition.per_device = p.integer<Index>("per_device", c.partition.per_device, 1);
        c.partition.batch_size = p.integer<Index>("batch_size", c.partition.batch_size, 0);
        if (c.partition.batch_size > c.partition.per_device) p.fail("batch_size exceeds per_device");
    }

    c.seed = r.integer<std::uint64_t>("seed", c.seed, 0);
    c.eval_every = r.integer<std::int64_t>("eval_every", c.eval_every, 1);
    c.output = r.string("output", c.output);

    if (r.has("sweep")) {
        const json& sweep = doc.at("sweep");
        if (!sweep.is_object()) r.fail("sweep must be an object of value lists");
        for (const auto& [key, values] : sweep.items()) {
            if (!values.is_array() || values.empty()) r.fail("sweep." + key + " must be a nonempty array");
        }
        c.sweep = sweep;
    }

    // Sizes that need no file access are checked here; idx headers are read in resolve_dims.
    if (std::holds_alternative<SyntheticSource>(c.dataset.source)) {
        const Index d = derived_model_size(c.dataset);
        if (c.model_size && *c.model_size != d)
            r.fail("d=" + std::to_string(*c.model_size) + " does not match the dataset's model size " +
                   std::to_string(d));
        if (c.subchannels && *c.subchannels > d) r.fail("s must not exceed d");
        const auto& syn = std::get<SyntheticSource>(c.dataset.source);
        if (c.partition.per_device > syn.train_per_class * syn.classes)
            r.fail("partition.per_device exceeds the training set size");
    } else if (c.model_size && c.subchannels && *c.subchannels > *c.model_size) {
        r.fail("s must not exceed d");
    }
    return c;
}

json read_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("malformed JSON in " + path.string() + ": " + e.what());
    }
}

json to_json(const RunConfig& c) {
    json out;
    out["mode"] = c.mode == RunConfig::Mode::ota ? "ota" : "error_free";
    out["M"] = c.devices;
    out["K"] = c.antennas;
    if (c.subchannels) out["s"] = *c.subchannels;
    if (c.model_size) out["d"] = *c.model_size;
    out["T"] = c.iterations;
    out["sigma_h_sq"] = c.sigma_h_sq;
    out["sigma_z_sq"] = c.sigma_z_sq;
    out["channel_correlation"] = c.channel_correlation;
    if (c.power.kind == PowerSchedule::Kind::constant) {
        out["power"] = {{"kind", "constant"}, {"alpha0", c.power.alpha0}};
    } else {
        out["power"] = {{"kind", "linear_ramp"}, {"alpha0", c.power.alpha0}, {"slope", c.power.slope}};
    }
    out["optimizer"] = {{"kind", c.optimizer.kind == OptimizerState::Kind::adam ? "adam" : "sgd"},
                        {"learning_rate", c.optimizer.learning_rate},
                        {"beta1", c.optimizer.beta1},
                        {"beta2", c.optimizer.beta2},
                        {"epsilon", c.optimizer.epsilon}};
    out["dataset"] = dataset_to_json(c.dataset);
    out["partition"] = {{"per_device", c.partition.per_device}, {"batch_size", c.partition.batch_size}};
    out["seed"] = c.seed;
    out["eval_every"] = c.eval_every;
    out["output"] = c.output;
    if (!c.sweep.empty()) out["sweep"] = c.sweep;
    return out;
}

void apply_override(json& doc, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + assignment + "' is not KEY=VALUE");
    const std::string key = assignment.substr(0, eq);
    const std::string text = assignment.substr(eq + 1);

    json value;
    try {
        value = json::parse(text);
    } catch (const json::parse_error&) {
        value = text;
    }

    json* node = &doc;
    std::size_t start = 0;
    while (true) {
        const auto dot = key.find('.', start);
        const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (part.empty()) throw ConfigError("override key '" + key + "' has an empty component");
        if (!node->is_object()) throw ConfigError("override key '" + key + "' descends into a non-object");
        if (dot == std::string::npos) {
            (*node)[part] = value;
            return;
        }
        node = &(*node)[part];
        if (node->is_null()) *node = json::object();
        start = dot + 1;
    }
}

Index derived_model_size(const DatasetSpec& dataset) {
    if (const auto* syn = std::get_if<SyntheticSource>(&dataset.source))
        return parameter_count(syn->features, syn->classes);
    const auto& idx = std::get<IdxSource>(dataset.source);
    std::ifstream in(idx.train_images, std::ios::binary);
    if (!in) throw ConfigError("cannot open " + idx.train_images.string());
    if (read_be32(in) != 0x00000803) throw ConfigError("bad IDX image magic in " + idx.train_images.string());
    read_be32(in);
    const Index rows = read_be32(in);
    const Index cols = read_be32(in);
    return parameter_count(rows * cols, 10);
}

ResolvedDims resolve_dims(const RunConfig& config) {
    ResolvedDims dims;
    dims.d = derived_model_size(config.dataset);
    if (config.model_size && *config.model_size != dims.d)
        throw ConfigError("config: d=" + std::to_string(*config.model_size) +
                          " does not match the dataset's model size " + std::to_string(dims.d));
    dims.s = config.subchannels.value_or((dims.d + 1) / 2);
    if (dims.s > dims.d) throw ConfigError("config: s must not exceed d");
    dims.symbols = symbol_count(dims.d, dims.s);
    return dims;
}

json config_template(const std::string& kind) {
    if (kind == "minimal") {
        return {{"mode", "ota"},
                {"M", 4},
                {"K", 8},
                {"s", 165},
                {"d", 330},
                {"T", 100},
                {"sigma_h_sq", 1.0},
                {"sigma_z_sq", 20.0},
                {"channel_correlation", "iid"},
                {"power", {{"kind", "linear_ramp"}, {"alpha0", 1.0}, {"slope", 0.001}}},
                {"optimizer", {{"kind", "adam"}, {"learning_rate", 0.01}}},
                {"dataset",
                 {{"source", "synthetic"},
                  {"classes", 10},
                  {"features", 32},
                  {"train_per_class", 100},
                  {"test_per_class", 50},
                  {"separation", 3.0},
                  {"seed", 7},
                  {"normalization", "none"}}},
                {"partition", {{"per_device", 200}, {"batch_size", 0}}},
                {"seed", 1},
                {"eval_every", 10},
                {"output", "metrics.csv"}};
    }
    if (kind == "paper_scale") {
        return {{"mode", "ota"},
                {"M", 20},
                {"K", 40},
                {"s", 3925},
                {"d", 7850},
                {"T", 800},
                {"sigma_h_sq", 1.0},
                {"sigma_z_sq", 20.0},
                {"channel_correlation", "iid"},
                {"power", {{"kind", "linear_ramp"}, {"alpha0", 1.0}, {"slope", 0.001}}},
                {"optimizer", {{"kind", "adam"}, {"learning_rate", 0.001}}},
                {"dataset",
                 {{"source", "idx"},
                  {"train_images", "data/mnist/train-images-idx3-ubyte"},
                  {"train_labels", "data/mnist/train-labels-idx1-ubyte"},
                  {"test_images", "data/mnist/t10k-images-idx3-ubyte"},
                  {"test_labels", "data/mnist/t10k-labels-idx1-ubyte"},
                  {"normalization", "scale_to_unit"}}},
                {"partition", {{"per_device", 1000}, {"batch_size", 0}}},
                {"seed", 1},
                {"eval_every", 10},
                {"output", "metrics.csv"}};
    }
    throw ConfigError("unknown template '" + kind + "' (expected 'minimal' or 'paper_scale')");
}

}  // namespace otadsgd
