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

// Training runs: device gradients -> transmit -> fading MAC -> combine ->
// estimate -> optimizer step, or the error-free baseline where the server
// receives the exact gradient average.

#ifndef OTADSGD_EXPERIMENT_HPP
#define OTADSGD_EXPERIMENT_HPP

#include "otadsgd/config.hpp"

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace otadsgd {

/// One CSV row, written at every eval_every-th iteration and at t = T.
struct MetricsRecord {
    std::int64_t iteration = 0;
    double accuracy = 0.0;    // test accuracy after this iteration's update
    double loss = 0.0;        // mean device training loss after the update
    double inst_power = 0.0;  // device-mean alpha_t^2 sum_n ||g^n_m||^2 / N at this iteration
    double avg_power = 0.0;   // device-mean running average power over iterations 1..t
    double est_mse = 0.0;     // ||g_hat - g_avg||^2 / d; zero in error_free mode
};

/// Realized transmit energy alpha_t^2 sum_n ||g^n_m(t)||^2, one row per iteration, one column per device.
struct PowerLedger {
    Index symbols = 1;
    std::vector<Eigen::VectorXd> energy;

    void record(Eigen::VectorXd per_device) { energy.push_back(std::move(per_device)); }
};

/// Average power per device: (1 / N T) sum_t alpha_t^2 sum_n ||g^n_m(t)||^2.
/// Empty ledger gives an empty vector.
Eigen::VectorXd power_report(const PowerLedger& ledger);

struct RunResult {
    std::vector<MetricsRecord> records;
    PowerLedger power;
    Eigen::VectorXd theta;
    ResolvedDims dims;

    double final_accuracy() const { return records.empty() ? 0.0 : records.back().accuracy; }
    /// Device-mean of power_report.
    double average_power() const;
};

using IterationObserver = std::function<void(std::int64_t iteration, const Eigen::VectorXd& theta)>;

/// Executes a full run. Throws ConfigError for unusable configs and
/// NumericAbort when a non-finite value appears.
RunResult run(const RunConfig& config, const IterationObserver& observer = {});

/// CSV with `#` provenance lines (resolved config) followed by
/// `iter,accuracy,loss,inst_power,avg_power,est_mse`.
void write_metrics_csv(std::ostream& out, const RunConfig& config, const RunResult& result);
void write_metrics_csv(const std::filesystem::path& path, const RunConfig& config, const RunResult& result);

struct SweepCell {
    nlohmann::json assignment;  // field -> value for this cell
    std::filesystem::path file;
    RunResult result;
};

/// Runs the cartesian product of `sweep` (field -> list of values, fields
/// are top-level or dotted config keys) over `base`, writing one CSV per cell
/// into out_dir. An empty sweep runs `base` once. Unknown fields throw ConfigError.
std::vector<SweepCell> run_matrix(const nlohmann::json& base, const nlohmann::json& sweep,
                                  const std::filesystem::path& out_dir);

/// File name encoding a sweep cell, e.g. "K=5_sigma_z_sq=20.csv".
std::string cell_file_name(const nlohmann::json& assignment);

}  // namespace otadsgd

#endif  // OTADSGD_EXPERIMENT_HPP
