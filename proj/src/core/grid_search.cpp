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


#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>

#include "sigres/dataset_io.hpp"
#include "sigres/errors.hpp"
#include "sigres/grid_search.hpp"
#include "sigres/logging.hpp"
#include "sigres/rff.hpp"
#include "sigres/seeding.hpp"

namespace sigres {

    namespace {

        double seconds_since(std::chrono::steady_clock::time_point t0) {
            return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        }

        // Same exception type, message prefixed.
        [[noreturn]] void rethrow_with(const std::string& prefix) {
            try {
                throw;
            } catch (const ConfigError& e) {
                throw ConfigError(e.field(), prefix + e.what());
            } catch (const ShapeError& e) {
                throw ShapeError(prefix + e.what());
            } catch (const DataError& e) {
                throw DataError(prefix + e.what());
            } catch (const NumericalError& e) {
                throw NumericalError(prefix + e.what());
            }
        }

        bool same_reservoir(const ModelConfig& a, const ModelConfig& b) {
            return a.sigma_a == b.sigma_a && a.sigma_b == b.sigma_b && a.sigma_0 == b.sigma_0 &&
                   a.activation == b.activation && a.num_rff == b.num_rff && a.level == b.level &&
                   a.frequency_scale == b.frequency_scale;
        }

        template <class T>
        void require_nonempty(const std::vector<T>& v, const char* field) {
            if (v.empty()) throw ConfigError(field, "grid axis is empty");
        }

        Eigen::MatrixXd take_rows(const Eigen::MatrixXd& x, const std::vector<std::size_t>& rows) {
            Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), x.cols());
            for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = x.row(static_cast<Eigen::Index>(rows[i]));
            return out;
        }

    }  // namespace

    std::string ModelConfig::describe() const {
        std::ostringstream s;
        s << "variant=" << to_string(variant) << " sigma_a=" << format_double(sigma_a)
          << " sigma_b=" << format_double(sigma_b) << " sigma_0=" << format_double(sigma_0)
          << " activation=" << to_string(activation);
        if (variant == Variant::RFCDE) {
            s << " num_rff=" << num_rff << " frequency_scale=" << format_double(frequency_scale);
        }
        if (variant == Variant::RRDE) s << " level=" << level;
        s << " normalize=" << (normalize ? 1 : 0) << " lambda=" << format_double(lambda);
        return s.str();
    }

    std::vector<double> default_lambdas() {
        return {1e-4, 1e-3, 1e-2, 1e-1, 1.0, 1e1, 1e2, 1e3};
    }

    void GridSearchConfig::validate() const {
        if (width < 1) throw ConfigError("width", "must be >= 1");
        if (variant == Variant::RRDE && chunk_size < 1) throw ConfigError("chunk_size", "must be >= 1");
        require_nonempty(sigma_a, "sigma_a");
        require_nonempty(sigma_b, "sigma_b");
        require_nonempty(sigma_0, "sigma_0");
        require_nonempty(activation, "activation");
        require_nonempty(num_rff, "num_rff");
        require_nonempty(level, "level");
        require_nonempty(frequency_scale, "frequency_scale");
        require_nonempty(normalize, "normalize");
        require_nonempty(lambda, "lambda");
        for (double l : lambda) {
            if (!(l > 0.0) || !std::isfinite(l)) throw ConfigError("lambda", "values must be positive");
        }
        for (double f : frequency_scale) {
            if (!(f > 0.0) || !std::isfinite(f)) throw ConfigError("frequency_scale", "values must be positive");
        }
        if (folds < 2) throw ConfigError("folds", "must be >= 2");
        if (runs < 1) throw ConfigError("runs", "must be >= 1");
    }

    std::vector<ModelConfig> GridSearchConfig::lattice() const {
        validate();
        const bool rf = variant == Variant::RFCDE;
        const bool rde = variant == Variant::RRDE;
        const std::vector<std::size_t> f_axis = rf ? num_rff : std::vector<std::size_t>{num_rff.front()};
        const std::vector<double> s_axis = rf ? frequency_scale : std::vector<double>{frequency_scale.front()};
        const std::vector<int> m_axis = rde ? level : std::vector<int>{level.front()};
        std::vector<ModelConfig> out;
        for (double sa : sigma_a)
            for (double sb : sigma_b)
                for (double s0 : sigma_0)
                    for (Activation act : activation)
                        for (std::size_t f : f_axis)
                            for (int m : m_axis)
                                for (double fs : s_axis)
                                    for (bool norm : normalize)
                                        for (double lam : lambda) {
                                            out.push_back({variant, sa, sb, s0, act, f, m, fs, norm, lam});
                                        }
        return out;
    }

    std::vector<int> stratified_folds(const std::vector<int>& labels, int num_classes, std::size_t k, std::uint64_t seed) {
        if (k < 2) throw ConfigError("folds", "must be >= 2");
        std::vector<int> fold(labels.size(), 0);
        std::size_t deal = 0;
        for (int c = 0; c < num_classes; ++c) {
            std::vector<std::size_t> idx;
            for (std::size_t i = 0; i < labels.size(); ++i) {
                if (labels[i] == c) idx.push_back(i);
            }
            Rng rng(derive_seed(seed, SeedStream::Folds, static_cast<std::uint64_t>(c)));
            // Fisher-Yates with raw engine output so the permutation is library-independent.
            for (std::size_t i = idx.size(); i > 1; --i) std::swap(idx[i - 1], idx[rng() % i]);
            for (std::size_t i : idx) fold[i] = static_cast<int>(deal++ % k);
        }
        return fold;
    }

    std::uint64_t run_seed(std::uint64_t seed, std::size_t run) {
        return derive_seed(seed, SeedStream::Runs, run);
    }

    ReservoirSpec make_reservoir_spec(const ModelConfig& m, const GridSearchConfig& g, std::size_t input_dim,
                                      double median_distance, std::uint64_t seed) {
        ReservoirSpec s;
        s.variant = m.variant;
        s.width = g.width;
        s.input_dim = input_dim;
        s.activation = m.activation;
        s.sigma_a = m.sigma_a;
        s.sigma_b = m.sigma_b;
        s.sigma_0 = m.sigma_0;
        s.seed = seed;
        s.num_rff = m.num_rff;
        s.frequency_scale = m.frequency_scale / median_distance;
        s.level = m.level;
        s.chunk_size = g.chunk_size;
        s.validate();
        return s;
    }

    TrainedPipeline fit_pipeline(const LabeledDataset& train, const ModelConfig& m, const GridSearchConfig& g,
                                 double median_distance, std::size_t run) {
        try {
            ReservoirState state(make_reservoir_spec(m, g, train.dim(), median_distance, run_seed(g.seed, run)));
            const FeatureMatrix f = extract_batch(state, train, g.threads);
            RidgeModel model = fit_ridge(f.values, train.labels, train.num_classes, m.lambda, m.normalize);
            return {std::move(state), std::move(model)};
        } catch (...) {
            rethrow_with("config " + m.describe() + ": ");
        }
    }

    Metrics evaluate_pipeline(const TrainedPipeline& p, const LabeledDataset& test, std::size_t threads) {
        auto t0 = std::chrono::steady_clock::now();
        const FeatureMatrix f = extract_batch(p.state, test, threads);
        const double t_extract = seconds_since(t0);
        t0 = std::chrono::steady_clock::now();
        Metrics m = compute_metrics(test.labels, predict(p.model, f.values), test.num_classes);
        m.timings["extract_test"] = t_extract;
        m.timings["predict"] = seconds_since(t0);
        return m;
    }

    GridSearchResult search(const LabeledDataset& train, const GridSearchConfig& g) {
        train.validate();
        const std::vector<ModelConfig> configs = g.lattice();
        GridSearchResult res;
        res.median_distance = median_heuristic(train, derive_seed(g.seed, SeedStream::Experiment, 0));
        const std::vector<int> fold = stratified_folds(train.labels, train.num_classes, g.folds, g.seed);
        std::vector<std::vector<std::size_t>> fit_rows(g.folds);
        std::vector<std::vector<std::size_t>> val_rows(g.folds);
        for (std::size_t i = 0; i < fold.size(); ++i) {
            for (std::size_t k = 0; k < g.folds; ++k) {
                (static_cast<std::size_t>(fold[i]) == k ? val_rows : fit_rows)[k].push_back(i);
            }
        }
        for (std::size_t k = 0; k < g.folds; ++k) {
            if (val_rows[k].empty()) throw ConfigError("folds", "more folds than training samples");
        }

        res.scores.resize(configs.size());
        std::size_t begin = 0;
        while (begin < configs.size()) {
            std::size_t end = begin + 1;
            while (end < configs.size() && same_reservoir(configs[begin], configs[end])) ++end;
            Eigen::MatrixXd features;
            std::string failure;
            try {
                const ReservoirState state(
                    make_reservoir_spec(configs[begin], g, train.dim(), res.median_distance, run_seed(g.seed, 0)));
                features = extract_batch(state, train, g.threads).values;
            } catch (const NumericalError& e) {
                failure = e.what();
                log_warning("grid search: skipping " + configs[begin].describe() + ": " + failure);
            } catch (...) {
                rethrow_with("config " + configs[begin].describe() + ": ");
            }
            for (std::size_t c = begin; c < end; ++c) {
                ConfigScore& s = res.scores[c];
                s.config = configs[c];
                if (!failure.empty()) {
                    s.failed = true;
                    s.error = failure;
                    continue;
                }
                try {
                    double acc = 0.0;
                    for (std::size_t k = 0; k < g.folds; ++k) {
                        std::vector<int> y_fit;
                        std::vector<int> y_val;
                        for (std::size_t i : fit_rows[k]) y_fit.push_back(train.labels[i]);
                        for (std::size_t i : val_rows[k]) y_val.push_back(train.labels[i]);
                        const RidgeModel model = fit_ridge(take_rows(features, fit_rows[k]), y_fit, train.num_classes,
                                                           configs[c].lambda, configs[c].normalize);
                        acc += compute_metrics(y_val, predict(model, take_rows(features, val_rows[k])),
                                               train.num_classes)
                                   .accuracy;
                    }
                    s.cv_accuracy = acc / static_cast<double>(g.folds);
                } catch (const NumericalError& e) {
                    s.failed = true;
                    s.error = e.what();
                } catch (...) {
                    rethrow_with("config " + configs[c].describe() + ": ");
                }
            }
            begin = end;
        }

        const ConfigScore* best = nullptr;
        for (const ConfigScore& s : res.scores) {
            if (s.failed) continue;
            // Lattice order is scanned ascending, so strict comparisons keep the earliest point on full ties.
            if (!best || s.cv_accuracy > best->cv_accuracy ||
                (s.cv_accuracy == best->cv_accuracy && s.config.lambda < best->config.lambda)) {
                best = &s;
            }
        }
        if (!best) throw NumericalError("grid search: every configuration failed (last: " + res.scores.back().error + ")");
        res.best = best->config;
        res.best_cv_accuracy = best->cv_accuracy;
        return res;
    }

    GridSearchResult grid_search(const LabeledDataset& train, const LabeledDataset& test, const GridSearchConfig& g) {
        test.validate();
        if (test.num_classes != train.num_classes || test.dim() != train.dim()) {
            throw ShapeError("train and test sets disagree on dimension or class count");
        }
        GridSearchResult res = search(train, g);
        std::vector<Metrics> runs;
        for (std::size_t r = 0; r < g.runs; ++r) {
            const auto t0 = std::chrono::steady_clock::now();
            const TrainedPipeline p = fit_pipeline(train, res.best, g, res.median_distance, r);
            const double t_fit = seconds_since(t0);
            runs.push_back(evaluate_pipeline(p, test, g.threads));
            runs.back().timings["fit"] = t_fit;
            res.run_accuracies.push_back(runs.back().accuracy);
        }
        std::vector<std::size_t> order(runs.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return runs[a].accuracy < runs[b].accuracy; });
        const std::size_t mid = (order.size() - 1) / 2;
        res.median_accuracy = order.size() % 2 ? runs[order[mid]].accuracy
                                               : 0.5 * (runs[order[mid]].accuracy + runs[order[mid + 1]].accuracy);
        res.metrics = runs[order[mid]];
        return res;
    }

}  // namespace sigres
