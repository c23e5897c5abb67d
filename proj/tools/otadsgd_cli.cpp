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

// otadsgd command line.
//
//   otadsgd run --config c.json [--set KEY=VALUE ...] [--out DIR]
//   otadsgd sweep --config c.json [--sweep KEY=v1,v2 ...] [--set ...] [--out DIR]
//   otadsgd verify-stats [--trials N] [--seed N] [--M m --K k --sigma-h-sq v]
//   otadsgd template minimal|paper_scale
//
// Exit codes: 0 success, 2 config error, 3 numeric abort, 4 statistical failure.

#include "otadsgd/config.hpp"
#include "otadsgd/experiment.hpp"
#include "otadsgd/verification.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitStatistics = 4;

using nlohmann::json;

json load_with_overrides(const std::string& path, const std::vector<std::string>& overrides) {
    json doc = otadsgd::read_config_file(path);
    for (const auto& o : overrides) otadsgd::apply_override(doc, o);
    return doc;
}

json parse_sweep_axis(const std::string& spec) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0) throw otadsgd::ConfigError("sweep '" + spec + "' is not KEY=v1,v2,...");
    json values = json::array();
    std::string rest = spec.substr(eq + 1);
    std::size_t start = 0;
    while (start <= rest.size()) {
        const auto comma = rest.find(',', start);
        const std::string item = rest.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        try {
            values.push_back(json::parse(item));
        } catch (const json::parse_error&) {
            values.push_back(item);
        }
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return json{{spec.substr(0, eq), values}};
}

int cmd_run(const std::string& config_path, const std::vector<std::string>& overrides, const std::string& out_dir) {
    const json doc = load_with_overrides(config_path, overrides);
    const otadsgd::RunConfig config = otadsgd::parse_config(doc);
    std::filesystem::path target = config.output;
    if (!out_dir.empty()) target = std::filesystem::path(out_dir) / target.filename();

    const otadsgd::RunResult result = otadsgd::run(config);
    otadsgd::write_metrics_csv(target, config, result);
    std::printf("final accuracy: %.4f\n", result.final_accuracy());
    std::printf("average power per device: %.6g\n", result.average_power());
    std::printf("metrics: %s\n", target.string().c_str());
    return 0;
}

int cmd_sweep(const std::string& config_path, const std::vector<std::string>& overrides,
              const std::vector<std::string>& axes, const std::string& out_dir) {
    json doc = load_with_overrides(config_path, overrides);
    json sweep = doc.contains("sweep") ? doc.at("sweep") : json::object();
    for (const auto& axis : axes) sweep.update(parse_sweep_axis(axis));
    const auto cells = otadsgd::run_matrix(doc, sweep, out_dir.empty() ? "." : out_dir);
    for (const auto& cell : cells) {
        std::printf("%-40s accuracy=%.4f avg_power=%.6g -> %s\n", cell.assignment.dump().c_str(),
                    cell.result.final_accuracy(), cell.result.average_power(), cell.file.string().c_str());
    }
    return 0;
}

int cmd_verify(const otadsgd::VerifyOptions& options) {
    const auto checks = otadsgd::verify_stats(options);
    bool ok = true;
    for (const auto& c : checks) {
        std::printf("%s\n", c.summary().c_str());
        ok = ok && c.passed;
    }
    if (!ok) {
        std::fprintf(stderr, "statistical verification failed\n");
        return kExitStatistics;
    }
    std::printf("all %zu checks passed\n", checks.size());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Analog over-the-air distributed SGD simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_dir;

    auto* run = app.add_subcommand("run", "Run one experiment and write its metrics CSV");
    run->add_option("--config", config_path, "Run configuration (JSON)")->required();
    run->add_option("--set", overrides, "Override KEY=VALUE (dotted keys allowed)");
    run->add_option("--out", out_dir, "Output directory");

    std::vector<std::string> axes;
    auto* sweep = app.add_subcommand("sweep", "Run the cartesian product of parameter lists");
    sweep->add_option("--config", config_path, "Base configuration (JSON)")->required();
    sweep->add_option("--set", overrides, "Override KEY=VALUE applied before sweeping");
    sweep->add_option("--sweep", axes, "Sweep axis KEY=v1,v2,...");
    sweep->add_option("--out", out_dir, "Output directory");

    otadsgd::VerifyOptions verify_options;
    otadsgd::InterferenceCase single_case;
    auto* verify = app.add_subcommand("verify-stats", "Monte Carlo checks of the channel statistics");
    verify->add_option("--trials", verify_options.trials, "Monte Carlo trials per check")
        ->check(CLI::Range(std::int64_t{1000}, std::int64_t{0x7fffffff}));
    verify->add_option("--seed", verify_options.seed, "Master seed");
    auto* opt_m = verify->add_option("--M", single_case.devices, "Check only this device count");
    auto* opt_k = verify->add_option("--K", single_case.antennas, "Antenna count for --M")->check(CLI::PositiveNumber);
    verify->add_option("--sigma-h-sq", single_case.sigma_h_sq, "Gain variance for --M")->check(CLI::PositiveNumber);
    opt_m->check(CLI::PositiveNumber);
    opt_k->needs(opt_m);

    std::string template_kind = "minimal";
    auto* tmpl = app.add_subcommand("template", "Print a configuration template");
    tmpl->add_option("kind", template_kind, "minimal | paper_scale")->check(CLI::IsMember({"minimal", "paper_scale"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (*run) return cmd_run(config_path, overrides, out_dir);
        if (*sweep) return cmd_sweep(config_path, overrides, axes, out_dir);
        if (*verify) {
            if (*opt_m) verify_options.cases = {single_case};
            return cmd_verify(verify_options);
        }
        if (*tmpl) {
            std::cout << otadsgd::config_template(template_kind).dump(2) << "\n";
            return 0;
        }
    } catch (const otadsgd::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const otadsgd::NumericAbort& e) {
        std::cerr << "numeric abort: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const otadsgd::IdxError& e) {
        std::cerr << "dataset error: " << e.what() << "\n";
        return kExitConfig;
    }
    return 0;
}
