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
 // Hyperparameter search: k-fold cross-validation over a lattice of reservoir and readout settings, followed by
 // the repeated-run protocol (fixed configuration, fresh reservoir seeds, median test accuracy).


#ifndef SIGRES_GRID_SEARCH_HPP
#define SIGRES_GRID_SEARCH_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "sigres/path.hpp"
#include "sigres/readout.hpp"
#include "sigres/reservoir.hpp"

namespace sigres {

    /* One lattice point. `frequency_scale` multiplies 1 / (median heuristic of the training points). */
    struct ModelConfig {
        Variant variant = Variant::RCDE;
        double sigma_a = 1.0;
        double sigma_b = 0.0;
        double sigma_0 = 1.0;
        Activation activation = Activation::Identity;
        std::size_t num_rff = 64;
        int level = 2;
        double frequency_scale = 1.0;
        bool normalize = true;
        double lambda = 1.0;

        /* "sigma_a=... sigma_b=... ..." listing the fields relevant to the variant. */
        std::string describe() const;
    };

    /* 1e-4, 1e-3, ..., 1e3. */
    std::vector<double> default_lambdas();

    struct GridSearchConfig {
        Variant variant = Variant::RCDE;
        std::size_t width = 64;
        std::size_t chunk_size = 1;  // R-RDE window length in steps

        std::vector<double> sigma_a{1.0};
        std::vector<double> sigma_b{0.0};
        std::vector<double> sigma_0{1.0};
        std::vector<Activation> activation{Activation::Identity};
        std::vector<std::size_t> num_rff{64};
        std::vector<int> level{2};
        std::vector<double> frequency_scale{1.0};
        std::vector<bool> normalize{true};
        std::vector<double> lambda = default_lambdas();

        std::size_t folds = 3;
        std::size_t runs = 3;
        std::uint64_t seed = 0;
        std::size_t threads = 1;

        /* Throws ConfigError naming the field. */
        void validate() const;

        /* Every combination in lexicographic order of (sigma_a, sigma_b, sigma_0, activation, num_rff, level,
         * frequency_scale, normalize, lambda), lambda varying fastest. Axes that do not apply to the variant
         * (num_rff and frequency_scale outside RF-CDE, level outside R-RDE) contribute their first value only. */
        std::vector<ModelConfig> lattice() const;
    };

    /* Fold index in [0, k) per sample: each class is shuffled with Rng(derive_seed(seed, Folds, class)) and dealt
     * round-robin, continuing the deal across classes so fold sizes differ by at most one. */
    std::vector<int> stratified_folds(const std::vector<int>& labels, int num_classes, std::size_t k, std::uint64_t seed);

    /* Reservoir seed of run r: derive_seed(seed, Runs, r). The search uses run 0. */
    std::uint64_t run_seed(std::uint64_t seed, std::size_t run);

    ReservoirSpec make_reservoir_spec(const ModelConfig& m, const GridSearchConfig& g, std::size_t input_dim,
                                      double median_distance, std::uint64_t seed);

    struct TrainedPipeline {
        ReservoirState state;
        RidgeModel model;
    };

    /* Extracts training features with the run's reservoir and fits the readout on all of them. */
    TrainedPipeline fit_pipeline(const LabeledDataset& train, const ModelConfig& m, const GridSearchConfig& g,
                                 double median_distance, std::size_t run);

    Metrics evaluate_pipeline(const TrainedPipeline& p, const LabeledDataset& test, std::size_t threads = 1);

    struct ConfigScore {
        ModelConfig config;
        double cv_accuracy = 0.0;
        bool failed = false;
        std::string error;
    };

    struct GridSearchResult {
        ModelConfig best;
        double best_cv_accuracy = 0.0;
        double median_distance = 1.0;
        std::vector<ConfigScore> scores;  // lattice order
        std::vector<double> run_accuracies;
        double median_accuracy = 0.0;
        Metrics metrics;  // of the run attaining the median
    };

    /* Search only: best = highest mean fold accuracy; ties go to the smaller lambda, then to the earlier lattice
     * point. Configurations whose extraction overflows are recorded as failed and skipped; other errors are
     * rethrown prefixed with the configuration. Throws NumericalError if every configuration fails. */
    GridSearchResult search(const LabeledDataset& train, const GridSearchConfig& g);

    /* search() followed by `runs` refits on the full training set and one test evaluation each. */
    GridSearchResult grid_search(const LabeledDataset& train, const LabeledDataset& test, const GridSearchConfig& g);

}  // namespace sigres

#endif  // SIGRES_GRID_SEARCH_HPP
