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
#include <cctype>
#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "sigres/config.hpp"
#include "sigres/errors.hpp"

namespace sigres {

    namespace {

        const std::vector<Variant> kAllVariants{Variant::RCDE, Variant::RFCDE, Variant::RRDE};

        std::string trim(const std::string& s) {
            const auto b = s.find_first_not_of(" \t\r");
            if (b == std::string::npos) return {};
            const auto e = s.find_last_not_of(" \t\r");
            return s.substr(b, e - b + 1);
        }

        std::string lower(std::string s) {
            for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
            return s;
        }

        std::vector<std::string> split_list(const std::string& key, const std::string& v) {
            std::vector<std::string> out;
            std::stringstream ss(v);
            for (std::string item; std::getline(ss, item, ',');) {
                item = trim(item);
                if (item.empty()) throw ConfigError(key, "empty list element in '" + v + "'");
                out.push_back(item);
            }
            if (out.empty()) throw ConfigError(key, "empty list");
            return out;
        }

        double to_double(const std::string& key, const std::string& v) {
            double x = 0.0;
            if (!parse_double(trim(v), x)) throw ConfigError(key, "expected a number, got '" + v + "'");
            return x;
        }

        std::uint64_t to_u64(const std::string& key, const std::string& v) {
            const std::string t = trim(v);
            std::uint64_t x = 0;
            const auto r = std::from_chars(t.data(), t.data() + t.size(), x);
            if (t.empty() || r.ec != std::errc() || r.ptr != t.data() + t.size()) {
                throw ConfigError(key, "expected a non-negative integer, got '" + v + "'");
            }
            return x;
        }

        std::size_t to_size(const std::string& key, const std::string& v) {
            return static_cast<std::size_t>(to_u64(key, v));
        }

        int to_int(const std::string& key, const std::string& v) {
            const std::uint64_t x = to_u64(key, v);
            if (x > 1000000) throw ConfigError(key, "value too large");
            return static_cast<int>(x);
        }

        bool to_bool(const std::string& key, const std::string& v) {
            const std::string t = lower(trim(v));
            if (t == "1" || t == "true" || t == "yes" || t == "on") return true;
            if (t == "0" || t == "false" || t == "no" || t == "off") return false;
            throw ConfigError(key, "expected a boolean, got '" + v + "'");
        }

        template <class F>
        auto to_list(const std::string& key, const std::string& v, F f) {
            std::vector<decltype(f(key, v))> out;
            for (const auto& item : split_list(key, v)) out.push_back(f(key, item));
            return out;
        }

        Variant to_variant(const std::string& key, const std::string& v) {
            try {
                return parse_variant(trim(v));
            } catch (const ConfigError& e) {
                throw ConfigError(key, e.what());
            }
        }

        Activation to_activation(const std::string& key, const std::string& v) {
            try {
                return parse_activation(trim(v));
            } catch (const ConfigError& e) {
                throw ConfigError(key, e.what());
            }
        }

        std::string fmt(double x) { return format_double(x); }
        std::string fmt(std::size_t x) { return std::to_string(x); }
        std::string fmt(int x) { return std::to_string(x); }
        std::string fmt(bool x) { return x ? "1" : "0"; }
        std::string fmt(Variant v) { return to_string(v); }
        std::string fmt(Activation a) { return to_string(a); }
        std::string fmt(const std::string& s) { return s; }

        template <class T>
        std::string fmt(const std::vector<T>& v) {
            std::string s;
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (i) s += ", ";
                if constexpr (std::is_same_v<T, bool>) {
                    s += v[i] ? "1" : "0";
                } else {
                    s += fmt(v[i]);
                }
            }
            return s;
        }

        struct Key {
            std::string name;
            std::string help;
            std::function<void(ExperimentConfig&, const std::string&, const std::string&)> set;
            std::function<std::string(const ExperimentConfig&)> get;
        };

        struct GridKey {
            std::string field;
            std::string help;
            std::function<void(GridSearchConfig&, const std::string&, const std::string&)> set;
            std::function<std::string(const GridSearchConfig&)> get;
        };

#define SIGRES_KEY(name, help, member, parse) \
    Key { name, help, [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.member = parse(k, v); }, \
          [](const ExperimentConfig& c) { return fmt(c.member); } }

#define SIGRES_LIST_KEY(name, help, member, parse) \
    Key { name, help, [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.member = to_list(k, v, parse); }, \
          [](const ExperimentConfig& c) { return fmt(c.member); } }

#define SIGRES_GRID_KEY(field, help, parse) \
    GridKey { #field, help, [](GridSearchConfig& g, const std::string& k, const std::string& v) { g.field = parse(k, v); }, \
              [](const GridSearchConfig& g) { return fmt(g.field); } }

#define SIGRES_GRID_LIST(field, help, parse) \
    GridKey { #field, help, [](GridSearchConfig& g, const std::string& k, const std::string& v) { auto l = to_list(k, v, parse); g.field.assign(l.begin(), l.end()); }, \
              [](const GridSearchConfig& g) { return fmt(g.field); } }

        HurstVariant to_hurst_variant(const std::string& key, const std::string& v) {
            const std::string t = lower(trim(v));
            if (t == "v1") return HurstVariant::V1;
            if (t == "v2") return HurstVariant::V2;
            throw ConfigError(key, "expected V1 or V2, got '" + v + "'");
        }
        std::string fmt(HurstVariant h) { return h == HurstVariant::V1 ? "V1" : "V2"; }

        DatasetFormat to_format(const std::string& key, const std::string& v) {
            const std::string t = lower(trim(v));
            if (t == "file") return DatasetFormat::File;
            if (t == "directory") return DatasetFormat::Directory;
            throw ConfigError(key, "expected file or directory, got '" + v + "'");
        }
        std::string fmt(DatasetFormat f) { return f == DatasetFormat::File ? "file" : "directory"; }

        EmptyChannelPolicy to_policy(const std::string& key, const std::string& v) {
            const std::string t = lower(trim(v));
            if (t == "reject") return EmptyChannelPolicy::Reject;
            if (t == "fill_zero") return EmptyChannelPolicy::FillZero;
            throw ConfigError(key, "expected reject or fill_zero, got '" + v + "'");
        }
        std::string fmt(EmptyChannelPolicy p) { return p == EmptyChannelPolicy::Reject ? "reject" : "fill_zero"; }

        std::string to_string_value(const std::string&, const std::string& v) { return trim(v); }

        std::size_t to_resample(const std::string& key, const std::string& v) { return to_size(key, v); }

        const std::vector<Key>& keys() {
            static const std::vector<Key> k{
                Key{"experiment.kind", "experiment name; must match the subcommand",
                    [](ExperimentConfig& c, const std::string& key, const std::string& v) {
                        if (parse_experiment_kind(trim(v)) != c.kind) {
                            throw ConfigError(key, "file is for '" + trim(v) + "' but the command is '" + to_string(c.kind) + "'");
                        }
                    },
                    [](const ExperimentConfig& c) { return to_string(c.kind); }},
                SIGRES_KEY("experiment.seed", "base seed of every random stream", seed, to_u64),
                SIGRES_KEY("experiment.threads", "worker threads (results do not depend on it)", threads, to_size),
                SIGRES_KEY("experiment.out", "output directory", out, to_string_value),
                SIGRES_LIST_KEY("experiment.variants", "reservoir variants to evaluate", variants, to_variant),

                SIGRES_KEY("kernel.variant", "rcde, rfcde or rrde", kernel.variant, to_variant),
                SIGRES_LIST_KEY("kernel.widths", "reservoir widths N of the ladder", kernel.widths, to_size),
                SIGRES_KEY("kernel.seeds", "Monte Carlo seeds per width", kernel.seeds, to_size),
                SIGRES_KEY("kernel.sigma_a", "matrix scale", kernel.sigma_a, to_double),
                SIGRES_KEY("kernel.sigma_b", "bias scale (must be 0)", kernel.sigma_b, to_double),
                SIGRES_KEY("kernel.sigma_0", "initial-state scale", kernel.sigma_0, to_double),
                SIGRES_KEY("kernel.activation", "must be identity", kernel.activation, to_activation),
                SIGRES_LIST_KEY("kernel.num_rff", "RF-CDE feature counts F, one ladder each", kernel.num_rff, to_size),
                SIGRES_KEY("kernel.frequency_scale", "RFF frequency scale (absolute)", kernel.frequency_scale, to_double),
                SIGRES_KEY("kernel.level", "R-RDE log-signature level", kernel.level, to_int),
                SIGRES_KEY("kernel.chunk_size", "R-RDE window length in steps", kernel.chunk_size, to_size),
                SIGRES_KEY("kernel.pair", "smooth, constant, or a dataset file with two samples", kernel.pair, to_string_value),
                SIGRES_KEY("kernel.refinement", "PDE oracle grid refinement", kernel.refinement, to_int),
                SIGRES_KEY("kernel.oracle_rff", "RF-CDE oracle feature count", kernel.oracle_rff, to_size),
                SIGRES_KEY("kernel.rank_tolerance", "RF-CDE reduced sampler eigenvalue cut", kernel.rank_tolerance, to_double),
                SIGRES_KEY("kernel.shared_rff", "RF-CDE: one frequency draw for all seeds", kernel.shared_rff, to_bool),
                SIGRES_KEY("kernel.single_precision_from", "widths at or above run in float (0 = never)", kernel.single_precision_from, to_size),
                SIGRES_KEY("kernel.degeneracy_paths", "R-RDE: random paths for the m=1 check (0 = skip)", kernel.degeneracy_paths, to_size),

                SIGRES_KEY("data.hurst_variant", "V1 (raw) or V2 (standardised)", data.hurst_variant, to_hurst_variant),
                SIGRES_KEY("data.n_train", "training samples per class", data.n_train, to_size),
                SIGRES_KEY("data.n_test", "test samples per class", data.n_test, to_size),
                SIGRES_KEY("data.length", "samples per path", data.length, to_size),
                SIGRES_KEY("data.dim", "channels per path", data.dim, to_size),
                SIGRES_KEY("data.train", "training dataset file (run) or input file (logsig)", data.train, to_string_value),
                SIGRES_KEY("data.test", "test dataset file (run)", data.test, to_string_value),
                SIGRES_KEY("data.format", "file or directory", data.format, to_format),
                SIGRES_KEY("data.time_augment", "append a normalised time channel", data.augment.time_augment, to_bool),
                SIGRES_KEY("data.basepoint", "prepend a zero sample", data.augment.basepoint, to_bool),
                SIGRES_KEY("data.lead_lag", "lead-lag transform", data.augment.lead_lag, to_bool),
                SIGRES_KEY("data.minmax_scale", "min-max scale to [-1, 1] (fit on train)", data.augment.minmax_scale, to_bool),
                Key{"data.resample_length", "resample to this many samples (0 = off)",
                    [](ExperimentConfig& c, const std::string& key, const std::string& v) {
                        const std::size_t n = to_resample(key, v);
                        c.data.augment.resample_length = n ? std::optional<std::size_t>(n) : std::nullopt;
                    },
                    [](const ExperimentConfig& c) { return fmt(c.data.augment.resample_length.value_or(0)); }},

                SIGRES_LIST_KEY("corruption.probabilities", "test-set missing probabilities", corruption.probabilities, to_double),
                SIGRES_KEY("corruption.policy", "reject or fill_zero for fully dropped channels", corruption.policy, to_policy),
                SIGRES_KEY("corruption.seed", "index of the corruption-mask stream", corruption.seed, to_u64),

                SIGRES_LIST_KEY("timing.variants", "variants to time", timing.variants, to_variant),
                SIGRES_LIST_KEY("timing.lengths", "path lengths", timing.lengths, to_size),
                SIGRES_KEY("timing.width", "reservoir width", timing.width, to_size),
                SIGRES_KEY("timing.num_rff", "RF-CDE feature count", timing.num_rff, to_size),
                SIGRES_KEY("timing.dim", "path channels", timing.dim, to_size),
                SIGRES_KEY("timing.batch", "paths per timed extraction", timing.batch, to_size),
                SIGRES_KEY("timing.repeats", "timed repetitions (best is kept)", timing.repeats, to_size),
                SIGRES_KEY("timing.warmup", "untimed warm-up repetitions", timing.warmup, to_size),
                SIGRES_KEY("timing.level", "R-RDE level", timing.level, to_int),
                SIGRES_KEY("timing.chunks", "R-RDE windows per path", timing.chunks, to_size),
                SIGRES_KEY("timing.slope_min", "lower end of the accepted log-log slope", timing.slope_min, to_double),
                SIGRES_KEY("timing.slope_max", "upper end of the accepted log-log slope", timing.slope_max, to_double),

                SIGRES_KEY("logsig.level", "log-signature level", logsig.level, to_int),
            };
            return k;
        }

        const std::vector<GridKey>& grid_keys() {
            static const std::vector<GridKey> k{
                SIGRES_GRID_KEY(width, "reservoir width N (feature budget)", to_size),
                SIGRES_GRID_KEY(chunk_size, "R-RDE window length in steps", to_size),
                SIGRES_GRID_LIST(sigma_a, "matrix scales", to_double),
                SIGRES_GRID_LIST(sigma_b, "bias scales", to_double),
                SIGRES_GRID_LIST(sigma_0, "initial-state scales", to_double),
                SIGRES_GRID_LIST(activation, "identity, tanh, relu", to_activation),
                SIGRES_GRID_LIST(num_rff, "RF-CDE feature counts F", to_size),
                SIGRES_GRID_LIST(level, "R-RDE log-signature levels", to_int),
                SIGRES_GRID_LIST(frequency_scale, "RFF scale, multiple of 1 / median pairwise distance", to_double),
                SIGRES_GRID_LIST(normalize, "feature normalisation on/off", to_bool),
                SIGRES_GRID_LIST(lambda, "ridge penalties", to_double),
                SIGRES_GRID_KEY(folds, "cross-validation folds", to_size),
                SIGRES_GRID_KEY(runs, "repeated runs (median reported)", to_size),
            };
            return k;
        }

#undef SIGRES_KEY
#undef SIGRES_LIST_KEY
#undef SIGRES_GRID_KEY
#undef SIGRES_GRID_LIST

        void require_file(const std::string& key, const std::string& path) {
            if (path.empty()) throw ConfigError(key, "required");
            if (!std::filesystem::exists(path)) throw ConfigError(key, "no such file or directory: " + path);
        }

        GridSearchConfig desk_grid(Variant v) {
            GridSearchConfig g;
            g.variant = v;
            g.width = 64;
            g.chunk_size = 16;
            g.sigma_a = {0.25, 0.5, 1.0, 2.0};
            g.sigma_b = {0.1, 0.5};
            g.sigma_0 = {1.0};
            g.activation = {Activation::Tanh};
            g.num_rff = {32};
            g.level = {2};
            g.frequency_scale = {0.2, 1.0};
            g.normalize = {true};
            return g;
        }

    }  // namespace

    std::string to_string(ExperimentKind k) {
        switch (k) {
            case ExperimentKind::KernelConvergence: return "kernel-convergence";
            case ExperimentKind::Hurst: return "hurst";
            case ExperimentKind::MissingData: return "missing-data";
            case ExperimentKind::Timing: return "timing";
            case ExperimentKind::Run: return "run";
            case ExperimentKind::GenFbm: return "gen-fbm";
            case ExperimentKind::LogSig: return "logsig";
        }
        return "?";
    }

    ExperimentKind parse_experiment_kind(const std::string& s) {
        for (auto k : {ExperimentKind::KernelConvergence, ExperimentKind::Hurst, ExperimentKind::MissingData,
                       ExperimentKind::Timing, ExperimentKind::Run, ExperimentKind::GenFbm, ExperimentKind::LogSig}) {
            if (lower(s) == to_string(k)) return k;
        }
        throw ConfigError("experiment.kind", "unknown experiment '" + s + "'");
    }

    ExperimentConfig default_config(ExperimentKind kind) {
        ExperimentConfig c;
        c.kind = kind;
        for (Variant v : kAllVariants) c.grids[v] = desk_grid(v);
        if (kind == ExperimentKind::Run) c.data.augment = AugmentationConfig{true, true, false, true, std::nullopt};
        if (kind == ExperimentKind::LogSig) c.data.augment = AugmentationConfig{};
        return c;
    }

    GridSearchConfig ExperimentConfig::grid_for(Variant v) const {
        GridSearchConfig g = grids.count(v) ? grids.at(v) : desk_grid(v);
        g.variant = v;
        g.seed = seed;
        g.threads = threads;
        return g;
    }

    void set_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
        if (key.rfind("grid.", 0) == 0) {
            std::string rest = key.substr(5);
            std::vector<Variant> targets = kAllVariants;
            const auto dot = rest.find('.');
            if (dot != std::string::npos) {
                targets = {to_variant(key, rest.substr(0, dot))};
                rest = rest.substr(dot + 1);
            }
            for (const GridKey& g : grid_keys()) {
                if (g.field == rest) {
                    for (Variant v : targets) {
                        if (!cfg.grids.count(v)) cfg.grids[v] = desk_grid(v);
                        g.set(cfg.grids[v], key, value);
                    }
                    return;
                }
            }
            throw ConfigError(key, "unknown key");
        }
        for (const Key& k : keys()) {
            if (k.name == key) {
                k.set(cfg, key, value);
                return;
            }
        }
        throw ConfigError(key, "unknown key");
    }

    ExperimentConfig parse_config(std::istream& in, ExperimentKind kind) {
        namespace pt = boost::property_tree;
        pt::ptree tree;
        try {
            pt::ini_parser::read_ini(in, tree);
        } catch (const pt::ini_parser_error& e) {
            throw ConfigError("config", "line " + std::to_string(e.line()) + ": " + e.message());
        }
        ExperimentConfig cfg = default_config(kind);
        std::vector<std::pair<std::string, std::string>> grid_all;
        std::vector<std::pair<std::string, std::string>> grid_one;
        std::vector<std::pair<std::string, std::string>> other;
        for (const auto& [section, body] : tree) {
            if (body.empty()) throw ConfigError(section, "key outside of a section");
            for (const auto& [name, value] : body) {
                const std::string key = section + "." + name;
                auto& bucket = section == "grid" ? grid_all : section.rfind("grid.", 0) == 0 ? grid_one : other;
                bucket.emplace_back(key, value.data());
            }
        }
        for (auto* bucket : {&other, &grid_all, &grid_one}) {
            for (const auto& [k, v] : *bucket) set_config_value(cfg, k, v);
        }
        return cfg;
    }

    ExperimentConfig load_config(const std::filesystem::path& file, ExperimentKind kind) {
        std::ifstream in(file);
        if (!in) throw ConfigError("--config", "cannot open " + file.string());
        return parse_config(in, kind);
    }

    void ExperimentConfig::validate() const {
        if (threads < 1) throw ConfigError("experiment.threads", "must be >= 1");
        if (out.empty()) throw ConfigError("experiment.out", "must not be empty");
        if (variants.empty()) throw ConfigError("experiment.variants", "empty list");
        try {
            data.augment.validate();
        } catch (const ConfigError& e) {
            throw ConfigError("data.resample_length", e.what());
        }
        switch (kind) {
            case ExperimentKind::KernelConvergence: {
                const auto& k = kernel;
                if (k.widths.empty()) throw ConfigError("kernel.widths", "empty ladder");
                for (std::size_t i = 0; i < k.widths.size(); ++i) {
                    if (k.widths[i] < 1) throw ConfigError("kernel.widths", "widths must be >= 1");
                    if (i && k.widths[i] <= k.widths[i - 1]) throw ConfigError("kernel.widths", "must be increasing");
                }
                if (k.seeds < 2) throw ConfigError("kernel.seeds", "need at least 2 seeds for a standard error");
                if (k.activation != Activation::Identity) {
                    throw ConfigError("kernel.activation", "the infinite-width limits hold for the identity activation only");
                }
                if (k.sigma_b != 0.0) throw ConfigError("kernel.sigma_b", "the limit kernels are stated without biases; set 0");
                if (!(k.sigma_a > 0.0)) throw ConfigError("kernel.sigma_a", "must be > 0");
                if (!(k.sigma_0 >= 0.0)) throw ConfigError("kernel.sigma_0", "must be >= 0");
                if (k.refinement < 1) throw ConfigError("kernel.refinement", "must be >= 1");
                if (k.variant == Variant::RFCDE) {
                    if (k.num_rff.empty()) throw ConfigError("kernel.num_rff", "empty list");
                    for (std::size_t f : k.num_rff) {
                        if (f < 1) throw ConfigError("kernel.num_rff", "must be >= 1");
                    }
                    if (k.oracle_rff < 1) throw ConfigError("kernel.oracle_rff", "must be >= 1");
                    if (!(k.frequency_scale > 0.0)) throw ConfigError("kernel.frequency_scale", "must be > 0");
                    if (!(k.rank_tolerance >= 0.0 && k.rank_tolerance < 1.0)) {
                        throw ConfigError("kernel.rank_tolerance", "must lie in [0, 1)");
                    }
                }
                if (k.variant == Variant::RRDE) {
                    if (k.level < 1 || k.level > 8) throw ConfigError("kernel.level", "must be in 1..8");
                    if (k.chunk_size < 1) throw ConfigError("kernel.chunk_size", "must be >= 1");
                }
                if (k.pair != "smooth" && k.pair != "constant") require_file("kernel.pair", k.pair);
                break;
            }
            case ExperimentKind::Hurst:
            case ExperimentKind::MissingData:
            case ExperimentKind::GenFbm:
                if (data.n_train < 1) throw ConfigError("data.n_train", "must be >= 1");
                if (data.n_test < 1) throw ConfigError("data.n_test", "must be >= 1");
                if (data.length < 2) throw ConfigError("data.length", "must be >= 2");
                if (data.dim < 1) throw ConfigError("data.dim", "must be >= 1");
                break;
            case ExperimentKind::Run:
                require_file("data.train", data.train);
                require_file("data.test", data.test);
                break;
            case ExperimentKind::LogSig:
                require_file("data.train", data.train);
                if (logsig.level < 1 || logsig.level > 8) throw ConfigError("logsig.level", "must be in 1..8");
                break;
            case ExperimentKind::Timing: {
                const auto& t = timing;
                if (t.variants.empty()) throw ConfigError("timing.variants", "empty list");
                if (t.lengths.empty()) throw ConfigError("timing.lengths", "empty list");
                for (std::size_t l : t.lengths) {
                    if (l < 2) throw ConfigError("timing.lengths", "lengths must be >= 2");
                    if (t.chunks < 1 || (l - 1) / t.chunks < 1) throw ConfigError("timing.chunks", "more windows than steps");
                }
                if (t.width < 1 || t.dim < 1 || t.batch < 1 || t.num_rff < 1) {
                    throw ConfigError("timing", "width, dim, batch and num_rff must be >= 1");
                }
                if (t.repeats < 1) throw ConfigError("timing.repeats", "must be >= 1");
                if (t.level < 1 || t.level > 8) throw ConfigError("timing.level", "must be in 1..8");
                if (!(t.slope_min <= t.slope_max)) throw ConfigError("timing.slope_min", "must not exceed slope_max");
                break;
            }
        }
        if (kind == ExperimentKind::Hurst || kind == ExperimentKind::MissingData || kind == ExperimentKind::Run) {
            for (Variant v : variants) {
                try {
                    grid_for(v).validate();
                } catch (const ConfigError& e) {
                    throw ConfigError("grid." + to_string(v) + "." + e.field(), e.what());
                }
            }
        }
        if (kind == ExperimentKind::MissingData) {
            if (corruption.probabilities.empty()) throw ConfigError("corruption.probabilities", "empty list");
            for (double p : corruption.probabilities) {
                if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("corruption.probabilities", "values must lie in [0, 1]");
            }
        }
    }

    std::string ExperimentConfig::to_ini() const {
        std::ostringstream s;
        std::string section;
        for (const Key& k : keys()) {
            const auto dot = k.name.find('.');
            const std::string sec = k.name.substr(0, dot);
            if (sec != section) {
                s << (section.empty() ? "" : "\n") << '[' << sec << "]\n";
                section = sec;
            }
            s << k.name.substr(dot + 1) << " = " << k.get(*this) << '\n';
        }
        for (Variant v : kAllVariants) {
            s << "\n[grid." << to_string(v) << "]\n";
            const GridSearchConfig g = grid_for(v);
            for (const GridKey& k : grid_keys()) s << k.field << " = " << k.get(g) << '\n';
        }
        return s.str();
    }

    const std::vector<std::pair<std::string, std::string>>& config_keys() {
        static const std::vector<std::pair<std::string, std::string>> out = [] {
            std::vector<std::pair<std::string, std::string>> o;
            for (const Key& k : keys()) o.emplace_back(k.name, k.help);
            for (const GridKey& k : grid_keys()) o.emplace_back("grid[.<variant>]." + k.field, k.help);
            return o;
        }();
        return out;
    }

}  // namespace sigres
