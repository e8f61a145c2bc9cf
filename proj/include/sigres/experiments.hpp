/* Copyright 2026 The sigres Authors. All Rights Reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *    http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 * ========================================================================= */
 // Experiment drivers behind the CLI subcommands, and the report they produce.


#ifndef SIGRES_EXPERIMENTS_HPP
#define SIGRES_EXPERIMENTS_HPP

#include <cstddef>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "sigres/config.hpp"
#include "sigres/path.hpp"

namespace sigres {

    /* One line of the kernel-convergence table. `num_rff` is 0 outside RF-CDE. */
    struct KernelRow {
        std::size_t num_rff = 0;
        std::size_t width = 0;
        double mean = 0.0;
        double std_error = 0.0;
        double oracle = 0.0;
        double abs_error = 0.0;
        std::size_t rank = 0;
    };

    struct RunReport {
        ExperimentKind kind = ExperimentKind::KernelConvergence;
        std::string config;  // resolved INI echo
        /* Deterministic results: identical across reruns with the same configuration. */
        std::vector<std::pair<std::string, std::string>> metrics;
        /* Wall-clock measurements and anything derived from them. */
        std::vector<std::pair<std::string, std::string>> timings;
        std::vector<KernelRow> kernel_table;
        std::vector<std::string> notes;
        std::vector<std::string> artifacts;
        /* Acceptance thresholds (kernel-convergence); true for the other experiments. */
        bool passed = true;

        /* Value of a metric or timing key; throws std::out_of_range when absent. */
        const std::string& value(const std::string& key) const;

        /* Flat "key = value" text with [config], [metrics], [table], [timings], [notes], [artifacts] parts. */
        std::string text() const;
        /* Same content as JSON. */
        std::string json() const;
    };

    /* Validates the configuration, runs the experiment and writes its artifacts under cfg.out. */
    RunReport run_experiment(const ExperimentConfig& cfg);

    /* Writes report.txt and summary.json into `dir` (created if needed) and returns their paths. */
    std::vector<std::filesystem::path> write_report(const RunReport& report, const std::filesystem::path& dir);

    /* The fixed 2-D test pair on 50 equispaced samples of [0, 1]:
     *   x(t) = 0.7 (0.8 t, 0.5 sin 2 pi t),   y(t) = 0.7 (0.6 t^2 + 0.2 t, 0.4 cos pi t). */
    std::pair<Path, Path> smooth_test_pair();

    /* Least-squares slope of log(time) against log(length); NaN for fewer than two points. */
    double loglog_slope(const std::vector<double>& lengths, const std::vector<double>& times);

}  // namespace sigres

#endif  // SIGRES_EXPERIMENTS_HPP
