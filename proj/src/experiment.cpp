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

#include "otadsgd/experiment.hpp"

#include "otadsgd/channel.hpp"
#include "otadsgd/ota.hpp"
#include "otadsgd/philox.hpp"

#include <cstdio>
#include <fstream>
#include <numeric>
#include <ostream>

namespace otadsgd {

using nlohmann::json;

namespace {

// Sample of batch_size distinct local rows for device m at iteration t.
std::vector<Index> draw_batch(std::uint64_t seed, std::int64_t t, Index m, Index local_size, Index batch_size) {
    std::vector<Index> order(static_cast<std::size_t>(local_size));
    std::iota(order.begin(), order.end(), Index{0});
    PhiloxStream stream(seed, StreamTag::minibatch, static_cast<std::uint32_t>(m));
    stream.seek(static_cast<std::uint64_t>(t) << 32);
    for (Index j = 0; j < batch_size; ++j) {
        const auto pick = j + static_cast<Index>(stream.next_below(static_cast<std::uint64_t>(local_size - j)));
        std::swap(order[static_cast<std::size_t>(j)], order[static_cast<std::size_t>(pick)]);
    }
    order.resize(static_cast<std::size_t>(batch_size));
    return order;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

}  // namespace

Eigen::VectorXd power_report(const PowerLedger& ledger) {
    if (ledger.energy.empty()) return {};
    Eigen::VectorXd total = Eigen::VectorXd::Zero(ledger.energy.front().size());
    for (const auto& row : ledger.energy) total += row;
    return total / (static_cast<double>(ledger.symbols) * static_cast<double>(ledger.energy.size()));
}

double RunResult::average_power() const {
    const Eigen::VectorXd per_device = power_report(power);
    return per_device.size() == 0 ? 0.0 : per_device.mean();
}

RunResult run(const RunConfig& config, const IterationObserver& observer) {
    RunResult result;
    result.dims = resolve_dims(config);
    const Index d = result.dims.d;
    const Index s = result.dims.s;
    const Index n_symbols = result.dims.symbols;
    const Index devices = config.devices;
    const bool over_the_air = config.mode == RunConfig::Mode::ota;

    auto [train, test] = load_dataset(config.dataset);
    if (config.partition.per_device > train.size())
        throw ConfigError("config: partition.per_device exceeds the training set size " +
                          std::to_string(train.size()));
    const std::vector<LocalDataset> shards = partition(train, devices, config.partition.per_device, config.seed);

    Eigen::VectorXd theta = Eigen::VectorXd::Zero(d);
    OptimizerState opt = config.optimizer.make_state(d);
    const ChannelDims channel_dims{n_symbols, devices, config.antennas, s};

    result.power.symbols = n_symbols;
    Eigen::VectorXd cumulative_energy = Eigen::VectorXd::Zero(devices);
    std::vector<Eigen::VectorXd> gradients(static_cast<std::size_t>(devices));
    std::vector<SymbolBlocks<double>> tx(static_cast<std::size_t>(devices));

    for (std::int64_t t = 1; t <= config.iterations; ++t) {
        const double alpha = config.power.alpha(t);

        Eigen::VectorXd average = Eigen::VectorXd::Zero(d);
        for (Index m = 0; m < devices; ++m) {
            const LocalDataset& shard = shards[static_cast<std::size_t>(m)];
            auto& g = gradients[static_cast<std::size_t>(m)];
            if (config.partition.batch_size > 0) {
                const std::vector<Index> batch =
                    draw_batch(config.seed, t, m, shard.size(), config.partition.batch_size);
                g = local_gradient(theta, shard, batch);
            } else {
                g = local_gradient(theta, shard);
            }
            if (!g.allFinite()) throw NumericAbort(t, "local_gradient");
            average += g;
        }
        average /= static_cast<double>(devices);

        Eigen::VectorXd estimate;
        Eigen::VectorXd energy = Eigen::VectorXd::Zero(devices);
        double mse = 0.0;
        if (over_the_air) {
            for (Index m = 0; m < devices; ++m) {
                tx[static_cast<std::size_t>(m)] = transmit(gradients[static_cast<std::size_t>(m)], alpha, s);
                energy(m) = symbol_energy(tx[static_cast<std::size_t>(m)]);
            }
            const auto iteration = static_cast<std::uint32_t>(t);
            const auto h = sample_channel<double>(config.seed, iteration, channel_dims, config.sigma_h_sq);
            const auto z = sample_noise<double>(config.seed, iteration, channel_dims, config.sigma_z_sq);
            const auto obs = combine(propagate(tx, h, z), h);
            estimate = estimate_average_gradient(obs, alpha, devices, config.sigma_h_sq, d);
            if (!estimate.allFinite()) throw NumericAbort(t, "estimate_average_gradient");
            mse = (estimate - average).squaredNorm() / static_cast<double>(d);
        } else {
            estimate = average;
        }
        result.power.record(energy);
        cumulative_energy += energy;

        apply_update(theta, estimate, opt);
        if (!theta.allFinite()) throw NumericAbort(t, "apply_update");
        if (observer) observer(t, theta);

        if (t % config.eval_every == 0 || t == config.iterations) {
            MetricsRecord rec;
            rec.iteration = t;
            rec.accuracy = evaluate_accuracy(theta, test);
            double loss = 0.0;
            for (const auto& shard : shards) loss += cross_entropy_loss(theta, shard);
            rec.loss = loss / static_cast<double>(devices);
            if (!std::isfinite(rec.loss)) throw NumericAbort(t, "loss");
            rec.inst_power = energy.mean() / static_cast<double>(n_symbols);
            rec.avg_power = cumulative_energy.mean() / (static_cast<double>(n_symbols) * static_cast<double>(t));
            rec.est_mse = mse;
            result.records.push_back(rec);
        }
    }
    result.theta = std::move(theta);
    return result;
}

void write_metrics_csv(std::ostream& out, const RunConfig& config, const RunResult& result) {
    json resolved = to_json(config);
    resolved.erase("sweep");
    resolved["d"] = result.dims.d;
    resolved["s"] = result.dims.s;
    out << "# otadsgd metrics\n";
    out << "# config: " << resolved.dump() << "\n";
    out << "# seed: " << config.seed << "\n";
    out << "# symbols_per_iteration: " << result.dims.symbols << "\n";
    out << "iter,accuracy,loss,inst_power,avg_power,est_mse\n";
    for (const auto& r : result.records) {
        out << r.iteration << ',' << format_double(r.accuracy) << ',' << format_double(r.loss) << ','
            << format_double(r.inst_power) << ',' << format_double(r.avg_power) << ',' << format_double(r.est_mse)
            << '\n';
    }
}

void write_metrics_csv(const std::filesystem::path& path, const RunConfig& config, const RunResult& result) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write metrics file " + path.string());
    write_metrics_csv(out, config, result);
}

std::string cell_file_name(const json& assignment) {
    std::string name;
    for (const auto& [key, value] : assignment.items()) {
        if (!name.empty()) name += '_';
        std::string text = value.is_string() ? value.get<std::string>() : value.dump();
        for (char& ch : text) {
            if (ch == '/' || ch == '\\' || ch == ' ' || ch == '"') ch = '-';
        }
        name += key + '=' + text;
    }
    return name.empty() ? "run.csv" : name + ".csv";
}

std::vector<SweepCell> run_matrix(const json& base, const json& sweep, const std::filesystem::path& out_dir) {
    if (!sweep.is_object()) throw ConfigError("sweep must be an object of value lists");

    // Every field must already name a key the base config understands.
    const json known = to_json(parse_config(base));
    std::vector<std::pair<std::string, json>> axes;
    for (const auto& [field, values] : sweep.items()) {
        const json::json_pointer pointer("/" + [&] {
            std::string p = field;
            for (char& ch : p) {
                if (ch == '.') ch = '/';
            }
            return p;
        }());
        if (!known.contains(pointer) && field != "s" && field != "d")
            throw ConfigError("sweep: unknown field '" + field + "'");
        if (!values.is_array() || values.empty()) throw ConfigError("sweep." + field + " must be a nonempty array");
        axes.emplace_back(field, values);
    }

    std::vector<json> assignments{json::object()};
    for (const auto& [field, values] : axes) {
        std::vector<json> next;
        for (const auto& partial : assignments) {
            for (const auto& v : values) {
                json cell = partial;
                cell[field] = v;
                next.push_back(std::move(cell));
            }
        }
        assignments = std::move(next);
    }

    std::vector<SweepCell> cells;
    for (const auto& assignment : assignments) {
        json doc = base;
        doc.erase("sweep");
        for (const auto& [field, value] : assignment.items()) apply_override(doc, field + "=" + value.dump());
        const RunConfig config = parse_config(doc);

        SweepCell cell;
        cell.assignment = assignment;
        cell.file = out_dir / (axes.empty() ? std::filesystem::path(config.output).filename().string()
                                            : cell_file_name(assignment));
        cell.result = run(config);
        write_metrics_csv(cell.file, config, cell.result);
        cells.push_back(std::move(cell));
    }
    return cells;
}

}  // namespace otadsgd
