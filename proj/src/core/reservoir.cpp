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
#include <atomic>
#include <cctype>
#include <charconv>
#include <cmath>
#include <exception>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>

#include <boost/container_hash/hash.hpp>

#include "reservoir_engine.hpp"
#include "sigres/dataset_io.hpp"
#include "sigres/errors.hpp"
#include "sigres/reservoir.hpp"
#include "sigres/seeding.hpp"
#include "sigres/signature.hpp"

namespace sigres {

    struct ReservoirState::Impl {
        detail::Operators<double> ops;
    };

    namespace {

        constexpr std::size_t kLockstep = 4;

        std::string normalized(const std::string& s) {
            std::string out;
            for (char c : s) {
                if (c == '-' || c == '_') continue;
                out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
            }
            return out;
        }

    }  // namespace

    std::string to_string(Variant v) {
        switch (v) {
            case Variant::RCDE: return "rcde";
            case Variant::RFCDE: return "rfcde";
            case Variant::RRDE: return "rrde";
        }
        return "?";
    }

    std::string to_string(Activation a) {
        switch (a) {
            case Activation::Identity: return "identity";
            case Activation::Tanh: return "tanh";
            case Activation::Relu: return "relu";
        }
        return "?";
    }

    Variant parse_variant(const std::string& s) {
        const std::string n = normalized(s);
        if (n == "rcde") return Variant::RCDE;
        if (n == "rfcde") return Variant::RFCDE;
        if (n == "rrde") return Variant::RRDE;
        throw ConfigError("variant", "unknown variant '" + s + "' (expected rcde, rfcde or rrde)");
    }

    Activation parse_activation(const std::string& s) {
        const std::string n = normalized(s);
        if (n == "identity" || n == "id") return Activation::Identity;
        if (n == "tanh") return Activation::Tanh;
        if (n == "relu") return Activation::Relu;
        throw ConfigError("activation", "unknown activation '" + s + "' (expected identity, tanh or relu)");
    }

    void ReservoirSpec::validate() const {
        if (width < 1) throw ConfigError("width", "must be >= 1");
        if (input_dim < 1) throw ConfigError("input_dim", "must be >= 1");
        if (!(sigma_a > 0.0) || !std::isfinite(sigma_a)) throw ConfigError("sigma_a", "must be > 0");
        if (!(sigma_b >= 0.0) || !std::isfinite(sigma_b)) throw ConfigError("sigma_b", "must be >= 0");
        if (!(sigma_0 >= 0.0) || !std::isfinite(sigma_0)) throw ConfigError("sigma_0", "must be >= 0");
        if (variant == Variant::RFCDE) {
            if (num_rff < 1) throw ConfigError("num_rff", "must be >= 1");
            if (!(frequency_scale > 0.0) || !std::isfinite(frequency_scale)) {
                throw ConfigError("frequency_scale", "must be > 0");
            }
        }
        if (variant == Variant::RRDE) {
            if (level < 1 || level > 8) throw ConfigError("level", "must lie in 1..8");
            if (chunk_size < 1) throw ConfigError("chunk_size", "must be >= 1");
        }
    }

    std::size_t ReservoirSpec::matrix_count() const {
        return variant == Variant::RFCDE ? 2 * num_rff : input_dim;
    }

    std::size_t ReservoirSpec::driver_dim() const {
        if (variant == Variant::RRDE) return LyndonBasis::get(static_cast<int>(input_dim), level)->size();
        return matrix_count();
    }

    std::uint64_t ReservoirSpec::hash() const {
        std::size_t h = 0;
        boost::hash_combine(h, static_cast<int>(variant));
        boost::hash_combine(h, width);
        boost::hash_combine(h, input_dim);
        boost::hash_combine(h, static_cast<int>(activation));
        boost::hash_combine(h, sigma_a);
        boost::hash_combine(h, sigma_b);
        boost::hash_combine(h, sigma_0);
        boost::hash_combine(h, seed);
        if (variant == Variant::RFCDE) {
            boost::hash_combine(h, num_rff);
            boost::hash_combine(h, frequency_scale);
        }
        if (variant == Variant::RRDE) {
            boost::hash_combine(h, level);
            boost::hash_combine(h, chunk_size);
        }
        return static_cast<std::uint64_t>(h);
    }

    ReservoirState::ReservoirState(const ReservoirSpec& spec) : spec_(spec) {
        spec_.validate();
        const std::size_t n = spec_.width;
        const std::size_t count = spec_.matrix_count();
        auto draws = detail::draw_standard<double>(derive_seed(spec_.seed, SeedStream::ReservoirMatrices), n, count);
        biases_ = std::move(draws.biases);
        z0_ = draws.z0.col(0);
        if (spec_.variant == Variant::RFCDE) {
            rff_.emplace(spec_.input_dim, spec_.num_rff, spec_.frequency_scale,
                         derive_seed(spec_.seed, SeedStream::RffFrequencies));
        }
        if (spec_.variant == Variant::RRDE) basis_ = LyndonBasis::get(static_cast<int>(spec_.input_dim), spec_.level);
        auto impl = std::make_shared<Impl>();
        impl->ops = detail::make_operators<double>(spec_, std::move(draws.letters), biases_, basis_.get());
        impl_ = std::move(impl);
    }

    Eigen::MatrixXd ReservoirState::matrix(std::size_t i) const {
        if (i >= spec_.matrix_count()) throw ShapeError("matrix index out of range");
        const auto nn = static_cast<Eigen::Index>(spec_.width);
        const auto& ops = impl_->ops;
        if (spec_.variant == Variant::RRDE && ops.brackets == nullptr) {
            // Stored pre-scaled; undo N^{-1/2} for the letter.
            return ops.stacked.middleRows(static_cast<Eigen::Index>(i) * nn, nn) / ops.bracket_scale[i];
        }
        return ops.stacked.middleRows(static_cast<Eigen::Index>(i) * nn, nn);
    }

    Eigen::MatrixXd ReservoirState::commutator(std::size_t j) const {
        if (spec_.variant != Variant::RRDE) throw ShapeError("commutator: only defined for R-RDE");
        if (j >= basis_->size()) throw ShapeError("commutator index out of range");
        const auto nn = static_cast<Eigen::Index>(spec_.width);
        const auto& ops = impl_->ops;
        if (ops.brackets == nullptr) return ops.stacked.middleRows(static_cast<Eigen::Index>(j) * nn, nn);
        return ops.bracket_scale[j] * ops.apply_bracket(j, Eigen::MatrixXd::Identity(nn, nn));
    }

    ReservoirState ReservoirState::with_initial_state(const Eigen::VectorXd& z0) const {
        if (z0.size() != static_cast<Eigen::Index>(spec_.width)) throw ShapeError("initial state has wrong width");
        ReservoirState copy = *this;
        copy.z0_ = z0;
        return copy;
    }

    Eigen::MatrixXd ReservoirState::drive(const Path& path) const {
        if (path.dim() != spec_.input_dim) {
            throw ShapeError(to_string(spec_.variant) + ": reservoir expects d=" + std::to_string(spec_.input_dim) +
                             " but path has d=" + std::to_string(path.dim()));
        }
        switch (spec_.variant) {
            case Variant::RCDE: return path.increments();
            case Variant::RFCDE: return lift_path(*rff_, path).increments();
            case Variant::RRDE: {
                const std::size_t steps = path.length() - 1;
                const std::size_t c = spec_.chunk_size;
                if (c > steps) {
                    throw ShapeError("chunk_size " + std::to_string(c) + " exceeds the " + std::to_string(steps) +
                                     " steps of the path");
                }
                const std::size_t windows = (steps + c - 1) / c;
                Eigen::MatrixXd out(static_cast<Eigen::Index>(windows), static_cast<Eigen::Index>(basis_->size()));
                for (std::size_t k = 0; k < windows; ++k) {
                    const LieElement l = log_signature(path, *basis_, k * c, std::min((k + 1) * c, steps));
                    for (std::size_t j = 0; j < l.coeffs.size(); ++j) {
                        out(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) = l.coeffs[j];
                    }
                }
                return out;
            }
        }
        return {};
    }

    namespace {

        /* Runs up to kLockstep paths, padded with empty drives so the arithmetic never depends on group size. */
        Eigen::MatrixXd run_group(const ReservoirState& state, const std::vector<Eigen::MatrixXd>& drives,
                                  std::vector<Eigen::MatrixXd>* trajectories) {
            const auto nn = static_cast<Eigen::Index>(state.width());
            const Eigen::MatrixXd empty(0, static_cast<Eigen::Index>(state.impl().ops.count));
            std::vector<const Eigen::MatrixXd*> ptrs(kLockstep, &empty);
            for (std::size_t g = 0; g < drives.size(); ++g) ptrs[g] = &drives[g];
            Eigen::MatrixXd z = (state.spec().sigma_0 * state.initial_state()).replicate(1, static_cast<Eigen::Index>(kLockstep));
            if (trajectories != nullptr) {
                trajectories->resize(drives.size());
                for (std::size_t g = 0; g < drives.size(); ++g) {
                    (*trajectories)[g].resize(drives[g].rows() + 1, nn);
                    (*trajectories)[g].row(0) = z.col(static_cast<Eigen::Index>(g)).transpose();
                }
            }
            detail::run_lockstep<double>(state.impl().ops, state.spec().activation, state.spec().sigma_a, ptrs, z,
                                         [&](std::size_t t, const Eigen::MatrixXd& zz) {
                                             if (trajectories == nullptr) return;
                                             for (std::size_t g = 0; g < drives.size(); ++g) {
                                                 const auto tt = static_cast<Eigen::Index>(t);
                                                 if (tt < drives[g].rows()) {
                                                     (*trajectories)[g].row(tt + 1) =
                                                         zz.col(static_cast<Eigen::Index>(g)).transpose();
                                                 }
                                             }
                                         });
            return z.leftCols(static_cast<Eigen::Index>(drives.size()));
        }

    }  // namespace

    Eigen::VectorXd extract(const ReservoirState& state, const Path& path) {
        return run_group(state, {state.drive(path)}, nullptr).col(0);
    }

    Eigen::MatrixXd extract_trajectory(const ReservoirState& state, const Path& path) {
        std::vector<Eigen::MatrixXd> traj;
        run_group(state, {state.drive(path)}, &traj);
        return traj[0];
    }

    namespace {
        void require_variant(const ReservoirState& s, Variant v) {
            if (s.spec().variant != v) {
                throw ShapeError(to_string(v) + "_extract called on a " + to_string(s.spec().variant) + " reservoir");
            }
        }
    }  // namespace

    Eigen::VectorXd rcde_extract(const ReservoirState& state, const Path& path) {
        require_variant(state, Variant::RCDE);
        return extract(state, path);
    }

    Eigen::VectorXd rfcde_extract(const ReservoirState& state, const Path& path) {
        require_variant(state, Variant::RFCDE);
        return extract(state, path);
    }

    Eigen::VectorXd rrde_extract(const ReservoirState& state, const Path& path) {
        require_variant(state, Variant::RRDE);
        return extract(state, path);
    }

    FeatureMatrix extract_batch(const ReservoirState& state, const std::vector<Path>& paths, std::size_t threads) {
        const std::size_t n = paths.size();
        FeatureMatrix out;
        out.variant = state.spec().variant;
        out.spec_hash = state.spec().hash();
        out.values.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(state.width()));
        const std::size_t groups = (n + kLockstep - 1) / kLockstep;
        std::vector<std::string> errors(n);
        std::atomic<std::size_t> next{0};

        auto worker = [&]() {
            for (std::size_t g = next++; g < groups; g = next++) {
                const std::size_t first = g * kLockstep;
                const std::size_t last = std::min(n, first + kLockstep);
                std::vector<Eigen::MatrixXd> drives;
                try {
                    for (std::size_t i = first; i < last; ++i) drives.push_back(state.drive(paths[i]));
                    const Eigen::MatrixXd z = run_group(state, drives, nullptr);
                    for (std::size_t i = first; i < last; ++i) {
                        out.values.row(static_cast<Eigen::Index>(i)) = z.col(static_cast<Eigen::Index>(i - first)).transpose();
                    }
                } catch (const std::exception&) {
                    // Retry one by one to attribute the failure.
                    for (std::size_t i = first; i < last; ++i) {
                        try {
                            out.values.row(static_cast<Eigen::Index>(i)) = extract(state, paths[i]).transpose();
                        } catch (const std::exception& e) {
                            errors[i] = e.what();
                        }
                    }
                }
            }
        };

        const std::size_t t = std::max<std::size_t>(1, std::min(threads, groups));
        if (t == 1) {
            worker();
        } else {
            std::vector<std::thread> pool;
            for (std::size_t i = 0; i < t; ++i) pool.emplace_back(worker);
            for (auto& th : pool) th.join();
        }

        std::string msg;
        std::size_t failed = 0;
        bool numerical = false;
        for (std::size_t i = 0; i < n; ++i) {
            if (errors[i].empty()) continue;
            if (failed < 5) msg += (msg.empty() ? "" : "; ") + ("sample " + std::to_string(i) + ": " + errors[i]);
            numerical = numerical || errors[i].find("overflow") != std::string::npos;
            ++failed;
        }
        if (failed > 0) {
            msg = "feature extraction failed for " + std::to_string(failed) + " sample(s): " + msg;
            if (numerical) throw NumericalError(msg);
            throw ShapeError(msg);
        }
        return out;
    }

    FeatureMatrix extract_batch(const ReservoirState& state, const LabeledDataset& ds, std::size_t threads) {
        return extract_batch(state, ds.paths, threads);
    }

    void write_features(std::ostream& out, const FeatureMatrix& f) {
        char hex[17];
        const auto res = std::to_chars(hex, hex + 16, f.spec_hash, 16);
        out << "#features n=" << f.rows() << " N=" << f.cols() << " variant=" << to_string(f.variant)
            << " spec=" << std::string(hex, res.ptr) << '\n';
        std::string row;
        for (Eigen::Index i = 0; i < f.values.rows(); ++i) {
            row.clear();
            for (Eigen::Index j = 0; j < f.values.cols(); ++j) {
                if (j > 0) row += ' ';
                row += format_double(f.values(i, j));
            }
            row += '\n';
            out << row;
        }
    }

    FeatureMatrix read_features(std::istream& in) {
        std::string line;
        if (!std::getline(in, line)) throw DataError("empty features file", 1);
        std::size_t rows = 0;
        std::size_t cols = 0;
        std::string variant;
        std::string hash;
        {
            std::istringstream hs(line);
            std::string tag;
            std::string a;
            std::string b;
            std::string c;
            std::string d;
            hs >> tag >> a >> b >> c >> d;
            auto value = [](const std::string& kv, const std::string& key) -> std::string {
                if (kv.rfind(key + "=", 0) != 0) throw DataError("malformed features header", 1);
                return kv.substr(key.size() + 1);
            };
            if (tag != "#features") throw DataError("malformed features header", 1);
            try {
                rows = std::stoul(value(a, "n"));
                cols = std::stoul(value(b, "N"));
            } catch (const std::logic_error&) {
                throw DataError("malformed features header", 1);
            }
            variant = value(c, "variant");
            hash = value(d, "spec");
        }
        FeatureMatrix f;
        try {
            f.variant = parse_variant(variant);
        } catch (const ConfigError&) {
            throw DataError("unknown variant '" + variant + "'", 1);
        }
        const auto res = std::from_chars(hash.data(), hash.data() + hash.size(), f.spec_hash, 16);
        if (res.ec != std::errc() || res.ptr != hash.data() + hash.size()) throw DataError("bad spec hash", 1);
        f.values.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
        for (std::size_t i = 0; i < rows; ++i) {
            const std::size_t line_no = i + 2;
            if (!std::getline(in, line)) throw DataError("expected " + std::to_string(rows) + " rows", line_no);
            std::istringstream ls(line);
            std::string tok;
            std::size_t j = 0;
            while (ls >> tok) {
                double v = 0.0;
                if (j >= cols || !parse_double(tok, v)) throw DataError("bad feature row", line_no);
                f.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j++)) = v;
            }
            if (j != cols) throw DataError("ragged feature row", line_no);
        }
        return f;
    }

}  // namespace sigres
