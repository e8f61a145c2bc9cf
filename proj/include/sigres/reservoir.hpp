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
 // Random CDE/RDE reservoirs: R-CDE (Euler), RF-CDE (Euler on an RFF-lifted path) and R-RDE (log-ODE).
 //
 // Updates for a state Z in R^N, activation phi and driver increments dx (resp. window log-signatures L):
 //
 //   R-CDE   Z += sum_k (sigma_A / sqrt(N)) A_k phi(Z) dx^k + sigma_b b_k dx^k
 //   RF-CDE  Z += (1 / sqrt(N)) sum_i (sigma_A A_i phi(Z) + sigma_b b_i) dX^i,   X = lift_path(x)
 //   R-RDE   Z += sigma_A sum_w L_w B^(w) phi(Z) + sigma_b sum_k b_k L_k
 //
 // with Z_0 = sigma_0 z_0, A_k, B_k, b_k, z_0 standard normal, and B^(w) = N^{-|w|/2} P(w)(B_1, ..., B_d) the
 // standard Lyndon bracketing of the letter matrices. For m = 1 and one-step windows R-RDE equals R-CDE.


#ifndef SIGRES_RESERVOIR_HPP
#define SIGRES_RESERVOIR_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sigres/lyndon.hpp"
#include "sigres/path.hpp"
#include "sigres/rff.hpp"

namespace sigres {

    enum class Variant { RCDE, RFCDE, RRDE };
    enum class Activation { Identity, Tanh, Relu };

    std::string to_string(Variant v);
    std::string to_string(Activation a);

    /* Accepts "rcde", "rfcde", "rrde" (case-insensitive, dashes ignored). Throws ConfigError. */
    Variant parse_variant(const std::string& s);
    /* Accepts "identity"/"id", "tanh", "relu". Throws ConfigError. */
    Activation parse_activation(const std::string& s);

    struct ReservoirSpec {
        Variant variant = Variant::RCDE;
        std::size_t width = 64;  // N
        std::size_t input_dim = 1;  // d of the raw path
        Activation activation = Activation::Identity;
        double sigma_a = 1.0;
        double sigma_b = 0.0;
        double sigma_0 = 1.0;
        std::uint64_t seed = 0;

        // RF-CDE only.
        std::size_t num_rff = 64;  // F
        double frequency_scale = 1.0;

        // R-RDE only.
        int level = 2;  // m
        std::size_t chunk_size = 1;

        /* Throws ConfigError naming the field. */
        void validate() const;

        /* Number of driving channels: d, 2F, or the Lyndon basis size of (d, m). */
        std::size_t driver_dim() const;

        /* Number of independent N x N matrices drawn: d, 2F, d. */
        std::size_t matrix_count() const;

        /* Stable 64-bit hash of every field relevant to the variant. */
        std::uint64_t hash() const;
    };

    /* Frozen random draws for a spec.
     *
     * Draw order from Rng(derive_seed(seed, ReservoirMatrices)) with standard normals: the matrices one after
     * another, each row by row; then the bias vectors b_1, b_2, ...; then z_0. RFF frequencies use the
     * separate stream derive_seed(seed, RffFrequencies). */
    class ReservoirState {
    public:
        explicit ReservoirState(const ReservoirSpec& spec);

        const ReservoirSpec& spec() const noexcept { return spec_; }
        std::size_t width() const noexcept { return spec_.width; }

        /* Unscaled i-th matrix (A_i or B_i). */
        Eigen::MatrixXd matrix(std::size_t i) const;

        /* Unscaled bias vectors as columns, N x matrix_count(). */
        const Eigen::MatrixXd& biases() const noexcept { return biases_; }

        /* Unscaled z_0. */
        const Eigen::VectorXd& initial_state() const noexcept { return z0_; }

        const RFFSpec* rff() const noexcept { return rff_ ? &*rff_ : nullptr; }
        const LyndonBasis* basis() const noexcept { return basis_.get(); }

        /* B^(w) for Lyndon word index j, scaling included. R-RDE only. */
        Eigen::MatrixXd commutator(std::size_t j) const;

        /* Copy with z_0 replaced (unscaled; sigma_0 still applies). */
        ReservoirState with_initial_state(const Eigen::VectorXd& z0) const;

        /* Driving coefficients of a path, one row per step: increments (R-CDE), lifted increments (RF-CDE), or
         * Lyndon coordinates of each window's log-signature (R-RDE). */
        Eigen::MatrixXd drive(const Path& path) const;

        struct Impl;
        const Impl& impl() const noexcept { return *impl_; }

    private:
        ReservoirSpec spec_;
        Eigen::MatrixXd biases_;
        Eigen::VectorXd z0_;
        std::optional<RFFSpec> rff_;
        std::shared_ptr<const LyndonBasis> basis_;
        std::shared_ptr<const Impl> impl_;
    };

    /* Terminal state Z_T for any variant. */
    Eigen::VectorXd extract(const ReservoirState& state, const Path& path);

    /* States Z_0, Z_1, ..., one row per step (per window for R-RDE). */
    Eigen::MatrixXd extract_trajectory(const ReservoirState& state, const Path& path);

    /* Variant-checked entry points. */
    Eigen::VectorXd rcde_extract(const ReservoirState& state, const Path& path);
    Eigen::VectorXd rfcde_extract(const ReservoirState& state, const Path& path);
    Eigen::VectorXd rrde_extract(const ReservoirState& state, const Path& path);

    struct FeatureMatrix {
        Eigen::MatrixXd values;  // samples x N
        Variant variant = Variant::RCDE;
        std::uint64_t spec_hash = 0;

        std::size_t rows() const noexcept { return static_cast<std::size_t>(values.rows()); }
        std::size_t cols() const noexcept { return static_cast<std::size_t>(values.cols()); }
    };

    /* One row per path. Paths are processed in fixed groups of four (zero-padded), so results do not depend on
     * `threads`. Per-sample failures are rethrown with the sample index. */
    FeatureMatrix extract_batch(const ReservoirState& state, const std::vector<Path>& paths, std::size_t threads = 1);
    FeatureMatrix extract_batch(const ReservoirState& state, const LabeledDataset& ds, std::size_t threads = 1);

    /* #features n=<rows> N=<cols> variant=<str> spec=<hex hash>, then one row per line. */
    void write_features(std::ostream& out, const FeatureMatrix& f);
    FeatureMatrix read_features(std::istream& in);

}  // namespace sigres

#endif  // SIGRES_RESERVOIR_HPP
