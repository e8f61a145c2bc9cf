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
 // Experiment configuration: an INI file ("key = value" lines under [section] headers, ';' or '#' comments).
 //
 // Every field has a default, so an empty file is valid; the resolved configuration, defaults included, is
 // echoed into each report. List values are comma-separated. The schema lives in config_keys() and README.md.


#ifndef SIGRES_CONFIG_HPP
#define SIGRES_CONFIG_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "sigres/corruption.hpp"
#include "sigres/dataset_io.hpp"
#include "sigres/fbm.hpp"
#include "sigres/grid_search.hpp"
#include "sigres/preprocess.hpp"
#include "sigres/reservoir.hpp"

namespace sigres {

    enum class ExperimentKind { KernelConvergence, Hurst, MissingData, Timing, Run, GenFbm, LogSig };

    std::string to_string(ExperimentKind k);
    /* Accepts the CLI subcommand names: kernel-convergence, hurst, missing-data, timing, run, gen-fbm, logsig. */
    ExperimentKind parse_experiment_kind(const std::string& s);

    struct KernelConvergenceSettings {
        Variant variant = Variant::RCDE;
        std::vector<std::size_t> widths{256, 1024, 4096};
        std::size_t seeds = 50;
        double sigma_a = 1.0;
        double sigma_b = 0.0;
        double sigma_0 = 1.0;
        Activation activation = Activation::Identity;
        std::vector<std::size_t> num_rff{256, 1024};  // RF-CDE: one ladder per value
        double frequency_scale = 1.0;  // absolute, not relative to a median heuristic
        int level = 2;
        std::size_t chunk_size = 5;
        std::string pair = "smooth";  // smooth | constant | path of a 2-sample dataset file
        int refinement = 32;
        std::size_t oracle_rff = 8192;
        double rank_tolerance = 1e-4;
        bool shared_rff = false;
        std::size_t single_precision_from = 1024;  // widths >= this run in float; 0 disables
        std::size_t degeneracy_paths = 20;  // R-RDE: m = 1 / chunk 1 vs R-CDE check; 0 disables
    };

    struct DataSettings {
        HurstVariant hurst_variant = HurstVariant::V1;
        std::size_t n_train = 20;  // per class
        std::size_t n_test = 10;   // per class
        std::size_t length = 128;
        std::size_t dim = 3;
        std::string train;  // run, logsig
        std::string test;   // run
        DatasetFormat format = DatasetFormat::File;
        AugmentationConfig augment{true, true, true, false, std::nullopt};
    };

    struct CorruptionSettings {
        std::vector<double> probabilities{0.0, 0.2, 0.4};
        EmptyChannelPolicy policy = EmptyChannelPolicy::Reject;
        std::uint64_t seed = 0;  // mask stream index under the base seed
    };

    struct TimingSettings {
        std::vector<Variant> variants{Variant::RFCDE, Variant::RCDE};
        std::vector<std::size_t> lengths{100, 200, 400, 800};
        std::size_t width = 128;
        std::size_t num_rff = 64;
        std::size_t dim = 3;
        std::size_t batch = 4;
        std::size_t repeats = 3;
        std::size_t warmup = 1;
        int level = 2;
        std::size_t chunks = 10;  // R-RDE: windows per path, so chunk_size = (length - 1) / chunks
        double slope_min = 0.8;
        double slope_max = 1.3;
    };

    struct LogSigSettings {
        int level = 2;
    };

    struct ExperimentConfig {
        ExperimentKind kind = ExperimentKind::KernelConvergence;
        std::uint64_t seed = 0;
        std::size_t threads = 1;
        std::string out = "sigres_out";

        KernelConvergenceSettings kernel;
        DataSettings data;
        std::vector<Variant> variants{Variant::RCDE, Variant::RFCDE, Variant::RRDE};
        std::map<Variant, GridSearchConfig> grids;  // per variant; seed and threads are filled at run time
        CorruptionSettings corruption;
        TimingSettings timing;
        LogSigSettings logsig;

        /* Throws ConfigError naming the offending key; checks that referenced files exist. */
        void validate() const;

        /* Resolved configuration in the input syntax, one section per group, every key present. */
        std::string to_ini() const;

        /* The grid actually searched for a variant, with seed and threads applied. */
        GridSearchConfig grid_for(Variant v) const;
    };

    /* Desk-scale defaults for the experiment. */
    ExperimentConfig default_config(ExperimentKind kind);

    /* Sets "section.key" (grid keys: "grid.key" for every variant, "grid.<variant>.key" for one).
     * Throws ConfigError for unknown keys or unparsable values. */
    void set_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& value);

    /* Defaults for `kind`, then every key of the file ([grid] keys before [grid.<variant>] keys). An
     * [experiment] kind entry, if present, must name `kind`. */
    ExperimentConfig parse_config(std::istream& in, ExperimentKind kind);
    ExperimentConfig load_config(const std::filesystem::path& file, ExperimentKind kind);

    /* Documented keys with one-line descriptions, in to_ini() order. */
    const std::vector<std::pair<std::string, std::string>>& config_keys();

}  // namespace sigres

#endif  // SIGRES_CONFIG_HPP
