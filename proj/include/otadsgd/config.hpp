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

// Run configuration and its JSON form.
//
// Top-level keys (all optional, defaults in RunConfig):
//   mode                  "ota" | "error_free"
//   M, K, s, d, T         devices, antennas, subchannels, model size, iterations
//                         (s defaults to ceil(d/2), i.e. one OFDM symbol; d is
//                         derived from the dataset and only checked if given)
//   sigma_h_sq, sigma_z_sq
//   channel_correlation   "iid" (only supported model)
//   power                 {kind: "constant"|"linear_ramp", alpha0, slope}
//   optimizer             {kind: "sgd"|"adam", learning_rate, beta1, beta2, epsilon}
//   dataset               {source: "synthetic", classes, features, train_per_class,
//                          test_per_class, separation, seed, normalization}
//                         {source: "idx", train_images, train_labels, test_images,
//                          test_labels, normalization}
//   partition             {per_device, batch_size}   (batch_size 0 = full local set)
//   seed, eval_every, output
//   sweep                 {field: [values...]}       (read by the sweep command only)
// Unknown keys are rejected.

#ifndef OTADSGD_CONFIG_HPP
#define OTADSGD_CONFIG_HPP

#include "otadsgd/data.hpp"
#include "otadsgd/learner.hpp"
#include "otadsgd/ota.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace otadsgd {

struct OptimizerSpec {
    OptimizerState::Kind kind = OptimizerState::Kind::adam;
    double learning_rate = 1.0e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1.0e-8;

    OptimizerState make_state(Index d) const;
};

struct PartitionSpec {
    Index per_device = 1000;
    Index batch_size = 0;
};

struct RunConfig {
    enum class Mode { ota, error_free };

    Mode mode = Mode::ota;
    Index devices = 20;                   // M
    Index antennas = 40;                  // K
    std::optional<Index> subchannels;     // s
    std::optional<Index> model_size;      // d
    std::int64_t iterations = 800;        // T
    double sigma_h_sq = 1.0;
    double sigma_z_sq = 20.0;
    std::string channel_correlation = "iid";
    PowerSchedule power = PowerSchedule::ramp(1.0, 1.0e-3);
    OptimizerSpec optimizer;
    DatasetSpec dataset;
    PartitionSpec partition;
    std::uint64_t seed = 1;
    std::int64_t eval_every = 10;
    std::string output = "metrics.csv";
    nlohmann::json sweep = nlohmann::json::object();
};

/// Parses and validates a configuration document. Throws ConfigError.
RunConfig parse_config(const nlohmann::json& doc);

/// Reads a JSON file; a missing or malformed file throws ConfigError naming the path.
nlohmann::json read_config_file(const std::filesystem::path& path);

/// Canonical JSON form; parse_config(to_json(c)) reproduces c.
nlohmann::json to_json(const RunConfig& config);

/// Applies "dotted.key=value" to a document. The value is read as JSON when
/// it parses, otherwise as a string.
void apply_override(nlohmann::json& doc, const std::string& assignment);

/// Model size implied by the dataset: (features + 1) * classes.
Index derived_model_size(const DatasetSpec& dataset);

/// Resolved s, d and N = ceil(d / 2s) for a validated config.
struct ResolvedDims {
    Index d = 0;
    Index s = 0;
    Index symbols = 0;
};
ResolvedDims resolve_dims(const RunConfig& config);

/// Ready-made configurations: "minimal" (seconds) or "paper_scale".
nlohmann::json config_template(const std::string& kind);

}  // namespace otadsgd

#endif  // OTADSGD_CONFIG_HPP
