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
#include <fstream>
#include <iomanip>
#include <limits>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <boost/container_hash/hash.hpp>
#include <json.hpp>

#include "sigres/corruption.hpp"
#include "sigres/dataset_io.hpp"
#include "sigres/errors.hpp"
#include "sigres/experiments.hpp"
#include "sigres/fbm.hpp"
#include "sigres/kernels.hpp"
#include "sigres/logging.hpp"
#include "sigres/mc_kernel.hpp"
#include "sigres/preprocess.hpp"
#include "sigres/reservoir.hpp"
#include "sigres/rff.hpp"
#include "sigres/seeding.hpp"
#include "sigres/signature.hpp"

namespace sigres {

    namespace {

        using Clock = std::chrono::steady_clock;

        double seconds_since(Clock::time_point t0) {
            return std::chrono::duration<double>(Clock::now() - t0).count();
        }

        std::string fmt(double x) { return format_double(x); }

        std::string fmt_list(const std::vector<double>& v) {
            std::string s;
            for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + fmt(v[i]);
            return s;
        }

        std::string hex(std::uint64_t h) {
            std::ostringstream s;
            s << std::hex << std::setw(16) << std::setfill('0') << h;
            return s.str();
        }

        // Hash of the exact bit patterns, for bit-for-bit comparisons across reruns.
        std::uint64_t digest(const Eigen::MatrixXd& m, std::uint64_t h = 0) {
            boost::hash_combine(h, m.rows());
            boost::hash_combine(h, m.cols());
            for (Eigen::Index i = 0; i < m.size(); ++i) boost::hash_combine(h, m.data()[i]);
            return h;
        }

        std::uint64_t digest(const LabeledDataset& ds) {
            std::uint64_t h = 0;
            for (std::size_t i = 0; i < ds.size(); ++i) {
                boost::hash_combine(h, ds.labels[i]);
                for (double t : ds.paths[i].times()) boost::hash_combine(h, t);
                h = digest(ds.paths[i].values(), h);
            }
            return h;
        }

        /* The single writer of a run directory. */
        class RunWriter {
        public:
            explicit RunWriter(std::filesystem::path dir) : dir_(std::move(dir)) {}

            std::filesystem::path path(const std::string& name) {
                std::lock_guard<std::mutex> lock(mutex_);
                std::filesystem::create_directories(dir_);
                return dir_ / name;
            }

            void text(const std::string& name, const std::string& content, RunReport& report) {
                const auto p = path(name);
                std::lock_guard<std::mutex> lock(mutex_);
                std::ofstream out(p, std::ios::binary);
                out << content;
                if (!out) throw std::runtime_error("cannot write " + p.string());
                report.artifacts.push_back(p.string());
            }

            void dataset(const std::string& name, const LabeledDataset& ds, DatasetFormat format, RunReport& report) {
                const auto p = path(name);
                std::lock_guard<std::mutex> lock(mutex_);
                save_dataset(p, ds, format);
                report.artifacts.push_back(p.string());
            }

        private:
            std::filesystem::path dir_;
            std::mutex mutex_;
        };

        void metric(RunReport& r, const std::string& key, const std::string& value) { r.metrics.emplace_back(key, value); }
        void timing(RunReport& r, const std::string& key, double seconds) { r.timings.emplace_back(key, fmt(seconds)); }

        Path scaled(const Path& p, double s) { return Path(p.times(), s * p.values()); }

        // ------------------------------------------------------------------ kernel-convergence

        std::pair<Path, Path> kernel_pair(const KernelConvergenceSettings& k) {
            if (k.pair == "smooth") return smooth_test_pair();
            if (k.pair == "constant") {
                return {Path::uniform(Eigen::MatrixXd::Constant(50, 2, 0.3)),
                        Path::uniform(Eigen::MatrixXd::Constant(50, 2, -0.5))};
            }
            const LabeledDataset ds = load_dataset(k.pair);
            if (ds.size() < 2) throw DataError(k.pair + ": kernel pair file needs two samples");
            return {ds.paths[0], ds.paths[1]};
        }

        void kernel_convergence(const ExperimentConfig& cfg, RunReport& rep, RunWriter& out) {
            const auto& k = cfg.kernel;
            const auto [x, y] = kernel_pair(k);
            if (x.dim() != y.dim()) throw ShapeError("kernel pair: paths have different dimensions");
            const PDEGrid grid{k.refinement, 2};
            const bool rf = k.variant == Variant::RFCDE;
            const double s0 = k.sigma_0 * k.sigma_0;

            auto t0 = Clock::now();
            double oracle = 0.0;
            if (rf) {
                const RFFSpec o(x.dim(), k.oracle_rff, k.frequency_scale, derive_seed(cfg.seed, SeedStream::Experiment, 1));
                oracle = s0 * sig_kernel_pde(scaled(lift_path(o, x), k.sigma_a), scaled(lift_path(o, y), k.sigma_a), grid);
            } else {
                oracle = s0 * sig_kernel_pde(scaled(x, k.sigma_a), scaled(y, k.sigma_a), grid);
            }
            timing(rep, "oracle_seconds", seconds_since(t0));
            metric(rep, "oracle", fmt(oracle));

            const std::vector<std::size_t> fs = rf ? k.num_rff : std::vector<std::size_t>{0};
            bool all_pass = true;
            for (std::size_t f : fs) {
                const std::string prefix = rf ? "f" + std::to_string(f) + "." : "";
                std::vector<KernelRow> ladder;
                for (std::size_t n : k.widths) {
                    McKernelConfig mc;
                    mc.spec.variant = k.variant;
                    mc.spec.width = n;
                    mc.spec.input_dim = x.dim();
                    mc.spec.activation = k.activation;
                    mc.spec.sigma_a = k.sigma_a;
                    mc.spec.sigma_b = k.sigma_b;
                    mc.spec.sigma_0 = k.sigma_0;
                    mc.spec.seed = cfg.seed;
                    mc.spec.num_rff = rf ? f : 1;
                    mc.spec.frequency_scale = k.frequency_scale;
                    mc.spec.level = k.level;
                    mc.spec.chunk_size = k.chunk_size;
                    mc.num_seeds = k.seeds;
                    mc.single_precision = k.single_precision_from > 0 && n >= k.single_precision_from;
                    mc.shared_rff = k.shared_rff;
                    mc.rank_tolerance = k.rank_tolerance;
                    mc.threads = cfg.threads;
                    t0 = Clock::now();
                    const McKernelEstimate est = mc_kernel_estimate(mc, x, y);
                    const std::string key = prefix + "n" + std::to_string(n);
                    timing(rep, key + ".seconds", seconds_since(t0));
                    KernelRow row{f, n, est.mean, est.std_error, oracle, std::abs(est.mean - oracle), est.rank};
                    ladder.push_back(row);
                    rep.kernel_table.push_back(row);
                    metric(rep, key + ".mean", fmt(row.mean));
                    metric(rep, key + ".stderr", fmt(row.std_error));
                    metric(rep, key + ".abs_error", fmt(row.abs_error));
                    if (rf) metric(rep, key + ".rank", std::to_string(row.rank));
                    log_info("kernel-convergence " + key + ": mean " + fmt(row.mean) + " stderr " + fmt(row.std_error) +
                             " oracle " + fmt(oracle));
                }
                // Decay: each error may exceed its predecessor by at most two combined standard errors.
                bool decay = true;
                for (std::size_t i = 1; i < ladder.size(); ++i) {
                    const double slack = 2.0 * std::hypot(ladder[i - 1].std_error, ladder[i].std_error);
                    if (ladder[i].abs_error > ladder[i - 1].abs_error + slack) decay = false;
                }
                const KernelRow& last = ladder.back();
                const double tol = std::max(3.0 * last.std_error, 0.05 * std::abs(oracle));
                const bool within = last.abs_error <= tol;
                metric(rep, prefix + "decay_pass", decay ? "1" : "0");
                metric(rep, prefix + "final_tolerance", fmt(tol));
                metric(rep, prefix + "tolerance_pass", within ? "1" : "0");
                all_pass = all_pass && decay && within;
            }

            if (k.variant == Variant::RRDE && k.degeneracy_paths > 0) {
                ReservoirSpec a;
                a.variant = Variant::RCDE;
                a.width = std::min<std::size_t>(k.widths.front(), 256);
                a.input_dim = x.dim();
                a.sigma_a = k.sigma_a;
                a.sigma_0 = k.sigma_0;
                a.seed = derive_seed(cfg.seed, SeedStream::Experiment, 3);
                ReservoirSpec b = a;
                b.variant = Variant::RRDE;
                b.level = 1;
                b.chunk_size = 1;
                const ReservoirState ra(a);
                const ReservoirState rb(b);
                Rng rng(derive_seed(cfg.seed, SeedStream::Experiment, 4));
                double worst = 0.0;
                for (std::size_t i = 0; i < k.degeneracy_paths; ++i) {
                    const Path p = generate_fbm(0.5, 10 + i % 7, x.dim(), rng());
                    const Eigen::VectorXd za = extract(ra, p);
                    const Eigen::VectorXd zb = extract(rb, p);
                    worst = std::max(worst, (za - zb).cwiseAbs().maxCoeff() / std::max(1.0, za.cwiseAbs().maxCoeff()));
                }
                const bool ok = worst <= 1e-10;
                metric(rep, "degeneracy_max_rel_diff", fmt(worst));
                metric(rep, "degeneracy_pass", ok ? "1" : "0");
                all_pass = all_pass && ok;
            }
            metric(rep, "passed", all_pass ? "1" : "0");
            rep.passed = all_pass;

            std::ostringstream table;
            table << "num_rff width mean stderr oracle abs_error rank\n";
            for (const KernelRow& r : rep.kernel_table) {
                table << r.num_rff << ' ' << r.width << ' ' << fmt(r.mean) << ' ' << fmt(r.std_error) << ' '
                      << fmt(r.oracle) << ' ' << fmt(r.abs_error) << ' ' << r.rank << '\n';
            }
            out.text("kernel_table.txt", table.str(), rep);
        }

        // ------------------------------------------------------------------ classification experiments

        std::string confusion_string(const Eigen::MatrixXi& c) {
            std::string s;
            for (Eigen::Index i = 0; i < c.rows(); ++i) {
                if (i) s += "; ";
                for (Eigen::Index j = 0; j < c.cols(); ++j) s += (j ? " " : "") + std::to_string(c(i, j));
            }
            return s;
        }

        double paper_reference(HurstVariant h, Variant v, std::size_t width) {
            // Hurst classification accuracies reported for the full-scale task (50/25 per class, l = 256).
            const int row = (h == HurstVariant::V1 ? 0 : 2) + (width == 100 ? 1 : 0);
            static const double table[4][3] = {
                {0.870, 0.895, 0.955}, {0.900, 0.945, 0.950}, {0.635, 0.645, 0.735}, {0.650, 0.695, 0.730}};
            if (width != 64 && width != 100) return std::numeric_limits<double>::quiet_NaN();
            return table[row][static_cast<int>(v)];
        }

        void report_search(RunReport& rep, const std::string& p, const GridSearchResult& r, int num_classes) {
            std::size_t failed = 0;
            for (const auto& s : r.scores) failed += s.failed;
            metric(rep, p + "configs", std::to_string(r.scores.size()));
            metric(rep, p + "failed_configs", std::to_string(failed));
            metric(rep, p + "best_config", r.best.describe());
            metric(rep, p + "cv_accuracy", fmt(r.best_cv_accuracy));
            metric(rep, p + "median_distance", fmt(r.median_distance));
            if (!r.run_accuracies.empty()) {
                metric(rep, p + "run_accuracies", fmt_list(r.run_accuracies));
                metric(rep, p + "median_accuracy", fmt(r.median_accuracy));
                metric(rep, p + "chance", fmt(1.0 / num_classes));
                metric(rep, p + "per_class", fmt_list(r.metrics.per_class));
                metric(rep, p + "confusion", confusion_string(r.metrics.confusion));
            }
        }

        void check_standardized(const LabeledDataset& ds) {
            for (std::size_t i = 0; i < ds.size(); ++i) {
                const Eigen::MatrixXd& v = ds.paths[i].values();
                for (Eigen::Index c = 0; c < v.cols(); ++c) {
                    const double mu = v.col(c).mean();
                    const double var = (v.col(c).array() - mu).square().mean();
                    if (std::abs(mu) > 1e-12 || std::abs(var - 1.0) > 1e-9) {
                        throw NumericalError("V2 sample " + std::to_string(i) + " channel " + std::to_string(c) +
                                             " is not standardised (mean " + fmt(mu) + ", variance " + fmt(var) + ")");
                    }
                }
            }
        }

        std::pair<LabeledDataset, LabeledDataset> hurst_data(const ExperimentConfig& cfg) {
            auto data = hurst_dataset(cfg.data.hurst_variant, cfg.data.n_train, cfg.data.n_test, cfg.data.length,
                                      cfg.data.dim, cfg.seed);
            if (cfg.data.hurst_variant == HurstVariant::V2) {
                check_standardized(data.first);
                check_standardized(data.second);
            }
            return data;
        }

        void classification(const ExperimentConfig& cfg, const LabeledDataset& raw_train,
                             const LabeledDataset& raw_test, RunReport& rep, bool hurst) {
            auto t0 = Clock::now();
            const auto [train, test] = preprocess(raw_train, raw_test, cfg.data.augment);
            timing(rep, "preprocess_seconds", seconds_since(t0));
            metric(rep, "train_samples", std::to_string(train.size()));
            metric(rep, "test_samples", std::to_string(test.size()));
            metric(rep, "input_dim", std::to_string(train.dim()));
            metric(rep, "data_digest", hex(digest(train) ^ (digest(test) << 1)));
            for (Variant v : cfg.variants) {
                const std::string p = to_string(v) + ".";
                const GridSearchConfig g = cfg.grid_for(v);
                t0 = Clock::now();
                const GridSearchResult r = grid_search(train, test, g);
                timing(rep, p + "seconds", seconds_since(t0));
                for (const auto& [name, sec] : r.metrics.timings) timing(rep, p + name, sec);
                report_search(rep, p, r, train.num_classes);
                if (hurst) {
                    const double ref = paper_reference(cfg.data.hurst_variant, v, g.width);
                    if (!std::isnan(ref)) metric(rep, p + "paper_reference", fmt(ref));
                }
                log_info(to_string(v) + ": median test accuracy " + fmt(r.median_accuracy));
            }
        }

        void missing_data(const ExperimentConfig& cfg, RunReport& rep) {
            const auto [raw_train, raw_test] = hurst_data(cfg);
            const Preprocessor pre(cfg.data.augment, raw_train);
            const LabeledDataset train = pre.apply(raw_train);
            const auto& probs = cfg.corruption.probabilities;

            std::vector<LabeledDataset> tests;
            for (double prob : probs) {
                CorruptionConfig cc{prob, derive_seed(cfg.seed, SeedStream::Corruption, cfg.corruption.seed), cfg.corruption.policy};
                tests.push_back(pre.apply(corrupt_and_impute(raw_test, cc)));
                metric(rep, "p" + fmt(prob) + ".test_digest", hex(digest(tests.back())));
            }
            for (Variant v : cfg.variants) {
                const std::string p = to_string(v) + ".";
                const GridSearchConfig g = cfg.grid_for(v);
                auto t0 = Clock::now();
                const GridSearchResult r = search(train, g);
                report_search(rep, p, r, train.num_classes);
                std::vector<std::vector<double>> acc(probs.size());
                for (std::size_t run = 0; run < g.runs; ++run) {
                    const TrainedPipeline pipe = fit_pipeline(train, r.best, g, r.median_distance, run);
                    for (std::size_t i = 0; i < probs.size(); ++i) {
                        acc[i].push_back(evaluate_pipeline(pipe, tests[i], g.threads).accuracy);
                    }
                }
                timing(rep, p + "seconds", seconds_since(t0));
                std::vector<double> med(probs.size());
                for (std::size_t i = 0; i < probs.size(); ++i) {
                    std::vector<double> s = acc[i];
                    std::sort(s.begin(), s.end());
                    const std::size_t m = s.size() / 2;
                    med[i] = s.size() % 2 ? s[m] : 0.5 * (s[m - 1] + s[m]);
                }
                const std::size_t base = static_cast<std::size_t>(
                    std::find(probs.begin(), probs.end(), 0.0) - probs.begin());
                for (std::size_t i = 0; i < probs.size(); ++i) {
                    const std::string q = p + "p" + fmt(probs[i]) + ".";
                    metric(rep, q + "run_accuracies", fmt_list(acc[i]));
                    metric(rep, q + "median_accuracy", fmt(med[i]));
                    if (base < probs.size()) metric(rep, q + "delta", fmt(med[i] - med[base]));
                }
                // Accuracy should not improve with more missing data; flag rises beyond binomial noise.
                const double n = static_cast<double>(tests.front().size());
                for (std::size_t i = 1; i < probs.size(); ++i) {
                    if (probs[i] <= probs[i - 1]) continue;
                    const double noise = 2.0 * std::sqrt(std::max(med[i - 1] * (1.0 - med[i - 1]), 1.0 / n) / n);
                    if (med[i] > med[i - 1] + noise) {
                        rep.notes.push_back(to_string(v) + ": accuracy rises from p=" + fmt(probs[i - 1]) + " to p=" +
                                            fmt(probs[i]) + " beyond noise (" + fmt(med[i - 1]) + " -> " +
                                            fmt(med[i]) + ")");
                    }
                }
            }
        }

        // ------------------------------------------------------------------ timing

        void timing_experiment(const ExperimentConfig& cfg, RunReport& rep) {
            const auto& t = cfg.timing;
            for (Variant v : t.variants) {
                const std::string p = to_string(v) + ".";
                // One state per distinct spec: the same draws are timed at every length, so the slope does not
                // pick up differences in where each copy of the matrices landed in memory.
                std::vector<std::shared_ptr<const ReservoirState>> states;
                std::vector<std::vector<Path>> batches;
                for (std::size_t len : t.lengths) {
                    ReservoirSpec s;
                    s.variant = v;
                    s.width = t.width;
                    s.input_dim = t.dim;
                    s.activation = Activation::Tanh;
                    s.sigma_a = 0.5;
                    s.sigma_b = 0.1;
                    s.seed = derive_seed(cfg.seed, SeedStream::Experiment, 5);
                    s.num_rff = t.num_rff;
                    s.level = t.level;
                    s.chunk_size = std::max<std::size_t>(1, (len - 1) / t.chunks);
                    if (states.empty() || states.back()->spec().hash() != s.hash()) {
                        states.push_back(std::make_shared<const ReservoirState>(s));
                    } else {
                        states.push_back(states.back());
                    }
                    std::vector<Path> paths;
                    for (std::size_t b = 0; b < t.batch; ++b) {
                        paths.push_back(generate_fbm(0.5, len, t.dim, derive_seed(cfg.seed, SeedStream::Experiment, 6, len, b)));
                    }
                    batches.push_back(std::move(paths));
                }
                // Repetitions cycle through the lengths so a burst of machine noise does not land on one length.
                std::vector<FeatureMatrix> features(t.lengths.size());
                std::vector<double> best(t.lengths.size(), std::numeric_limits<double>::infinity());
                for (std::size_t r = 0; r < t.warmup + t.repeats; ++r) {
                    for (std::size_t i = 0; i < t.lengths.size(); ++i) {
                        const auto t0 = Clock::now();
                        features[i] = extract_batch(*states[i], batches[i], 1);
                        if (r >= t.warmup) best[i] = std::min(best[i], seconds_since(t0));
                    }
                }
                std::vector<double> ls;
                for (std::size_t i = 0; i < t.lengths.size(); ++i) {
                    const std::string q = p + "l" + std::to_string(t.lengths[i]);
                    metric(rep, q + ".feature_digest", hex(digest(features[i].values)));
                    timing(rep, q + ".seconds", best[i]);
                    ls.push_back(static_cast<double>(t.lengths[i]));
                }
                const double slope = loglog_slope(ls, best);
                if (std::isnan(slope)) {
                    rep.timings.emplace_back(p + "slope", "n/a");
                    rep.timings.emplace_back(p + "slope_in_range", "n/a");
                } else {
                    const bool ok = slope >= t.slope_min && slope <= t.slope_max;
                    timing(rep, p + "slope", slope);
                    rep.timings.emplace_back(p + "slope_in_range", ok ? "1" : "0");
                    if (!ok) rep.notes.push_back(to_string(v) + ": log-log slope " + fmt(slope) + " outside [" +
                                                 fmt(t.slope_min) + ", " + fmt(t.slope_max) + "]");
                }
            }
        }

        // ------------------------------------------------------------------ gen-fbm, logsig

        void gen_fbm(const ExperimentConfig& cfg, RunReport& rep, RunWriter& out) {
            const auto [train, test] = hurst_data(cfg);
            const bool dir = cfg.data.format == DatasetFormat::Directory;
            out.dataset(dir ? "train" : "train.txt", train, cfg.data.format, rep);
            out.dataset(dir ? "test" : "test.txt", test, cfg.data.format, rep);
            metric(rep, "train_samples", std::to_string(train.size()));
            metric(rep, "test_samples", std::to_string(test.size()));
            metric(rep, "classes", std::to_string(train.num_classes));
            metric(rep, "train_digest", hex(digest(train)));
            metric(rep, "test_digest", hex(digest(test)));
        }

        void logsig(const ExperimentConfig& cfg, RunReport& rep, RunWriter& out) {
            const LabeledDataset ds = preprocess(load_dataset(cfg.data.train, cfg.data.format), cfg.data.augment);
            const auto basis = LyndonBasis::get(static_cast<int>(ds.dim()), cfg.logsig.level);
            std::ostringstream s;
            s << "#logsig d=" << ds.dim() << " level=" << cfg.logsig.level << " words=" << basis->size() << '\n';
            s << "label";
            for (const LyndonWord& w : basis->words()) s << ' ' << w.word.str();
            s << '\n';
            std::uint64_t h = 0;
            for (std::size_t i = 0; i < ds.size(); ++i) {
                const LieElement l = log_signature(ds.paths[i], *basis);
                s << ds.labels[i];
                for (double c : l.coeffs) {
                    s << ' ' << fmt(c);
                    boost::hash_combine(h, c);
                }
                s << '\n';
            }
            out.text("logsig.txt", s.str(), rep);
            metric(rep, "samples", std::to_string(ds.size()));
            metric(rep, "words", std::to_string(basis->size()));
            metric(rep, "logsig_digest", hex(h));
        }


    }  // namespace

    std::pair<Path, Path> smooth_test_pair() {
        const int n = 50;
        Eigen::MatrixXd x(n, 2);
        Eigen::MatrixXd y(n, 2);
        for (int i = 0; i < n; ++i) {
            const double t = static_cast<double>(i) / (n - 1);
            x(i, 0) = 0.7 * 0.8 * t;
            x(i, 1) = 0.7 * 0.5 * std::sin(2.0 * std::numbers::pi * t);
            y(i, 0) = 0.7 * (0.6 * t * t + 0.2 * t);
            y(i, 1) = 0.7 * 0.4 * std::cos(std::numbers::pi * t);
        }
        return {Path::uniform(x), Path::uniform(y)};
    }

    double loglog_slope(const std::vector<double>& lengths, const std::vector<double>& times) {
        if (lengths.size() != times.size()) throw ShapeError("loglog_slope: size mismatch");
        if (lengths.size() < 2) return std::numeric_limits<double>::quiet_NaN();
        const auto n = static_cast<Eigen::Index>(lengths.size());
        Eigen::MatrixXd a(n, 2);
        Eigen::VectorXd b(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            a(i, 0) = 1.0;
            a(i, 1) = std::log(lengths[static_cast<std::size_t>(i)]);
            b(i) = std::log(times[static_cast<std::size_t>(i)]);
        }
        return a.colPivHouseholderQr().solve(b)(1);
    }

    const std::string& RunReport::value(const std::string& key) const {
        for (const auto* list : {&metrics, &timings}) {
            for (const auto& [k, v] : *list) {
                if (k == key) return v;
            }
        }
        throw std::out_of_range("report has no key '" + key + "'");
    }

    std::string RunReport::text() const {
        std::ostringstream s;
        s << "# sigres " << to_string(kind) << " report\n";
        s << "status = " << (passed ? "pass" : "fail") << "\n\n";
        s << "[config]\n" << config << '\n';
        s << "[metrics]\n";
        for (const auto& [k, v] : metrics) s << k << " = " << v << '\n';
        if (!kernel_table.empty()) {
            s << "\n[table]\n# num_rff width mean stderr oracle abs_error rank\n";
            for (const KernelRow& r : kernel_table) {
                s << r.num_rff << ' ' << r.width << ' ' << format_double(r.mean) << ' ' << format_double(r.std_error)
                  << ' ' << format_double(r.oracle) << ' ' << format_double(r.abs_error) << ' ' << r.rank << '\n';
            }
        }
        s << "\n[timings]\n";
        for (const auto& [k, v] : timings) s << k << " = " << v << '\n';
        if (!notes.empty()) {
            s << "\n[notes]\n";
            for (const auto& n : notes) s << n << '\n';
        }
        if (!artifacts.empty()) {
            s << "\n[artifacts]\n";
            for (const auto& a : artifacts) s << a << '\n';
        }
        return s.str();
    }

    std::string RunReport::json() const {
        nlohmann::ordered_json j;
        j["experiment"] = to_string(kind);
        j["passed"] = passed;
        j["config"] = config;
        for (const auto& [k, v] : metrics) j["metrics"][k] = v;
        for (const auto& [k, v] : timings) j["timings"][k] = v;
        j["table"] = nlohmann::ordered_json::array();
        for (const KernelRow& r : kernel_table) {
            j["table"].push_back({{"num_rff", r.num_rff}, {"width", r.width}, {"mean", r.mean},
                                  {"stderr", r.std_error}, {"oracle", r.oracle}, {"abs_error", r.abs_error},
                                  {"rank", r.rank}});
        }
        j["notes"] = notes;
        j["artifacts"] = artifacts;
        return j.dump(2) + "\n";
    }

    RunReport run_experiment(const ExperimentConfig& cfg) {
        cfg.validate();
        RunReport rep;
        rep.kind = cfg.kind;
        rep.config = cfg.to_ini();
        RunWriter out(cfg.out);
        const auto t0 = Clock::now();
        switch (cfg.kind) {
            case ExperimentKind::KernelConvergence: kernel_convergence(cfg, rep, out); break;
            case ExperimentKind::Hurst: {
                const auto [train, test] = hurst_data(cfg);
                classification(cfg, train, test, rep, true);
                break;
            }
            case ExperimentKind::MissingData: missing_data(cfg, rep); break;
            case ExperimentKind::Timing: timing_experiment(cfg, rep); break;
            case ExperimentKind::Run: {
                const LabeledDataset train = load_dataset(cfg.data.train, cfg.data.format, Split::Train);
                const LabeledDataset test = load_dataset(cfg.data.test, cfg.data.format, Split::Test);
                classification(cfg, train, test, rep, false);
                break;
            }
            case ExperimentKind::GenFbm: gen_fbm(cfg, rep, out); break;
            case ExperimentKind::LogSig: logsig(cfg, rep, out); break;
        }
        timing(rep, "total_seconds", seconds_since(t0));
        return rep;
    }

    std::vector<std::filesystem::path> write_report(const RunReport& report, const std::filesystem::path& dir) {
        std::filesystem::create_directories(dir);
        const std::vector<std::filesystem::path> paths{dir / "report.txt", dir / "summary.json"};
        const std::string content[2] = {report.text(), report.json()};
        for (int i = 0; i < 2; ++i) {
            std::ofstream out(paths[static_cast<std::size_t>(i)], std::ios::binary);
            out << content[i];
            if (!out) throw std::runtime_error("cannot write " + paths[static_cast<std::size_t>(i)].string());
        }
        return paths;
    }

}  // namespace sigres
