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
 // Lockstep recursion shared by feature extraction (double) and the Monte Carlo kernel estimator (float).
 //
 // A drive is a (steps x D) coefficient matrix c. Every variant reduces to
 //
 //   Z <- Z + sum_j c_{t,j} (alpha * O_j phi(Z) + beta_j)
 //
 // with operators O_j, bias columns beta_j and a scalar alpha fixed per reservoir.


#ifndef SIGRES_RESERVOIR_ENGINE_HPP
#define SIGRES_RESERVOIR_ENGINE_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sigres/errors.hpp"
#include <boost/random/normal_distribution.hpp>

#include "sigres/lyndon.hpp"
#include "sigres/reservoir.hpp"
#include "sigres/seeding.hpp"

namespace sigres::detail {

    inline constexpr double kOverflowLimit = 1e100;

    template <typename S>
    using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;

    template <typename S>
    using RowMat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

    /* out(i, g) = a.row(i) . x.col(g) for a row-major `a` (rows x n) and column-major out with leading
     * dimension ld. One pass over `a`; each output is an Eigen dot product, so a column's result does not
     * depend on how many columns are computed alongside it. */
    template <typename S>
    void rowwise_product(const S* a, Eigen::Index rows, Eigen::Index n, const Mat<S>& x, S* out, Eigen::Index ld) {
        const Eigen::Index g = x.cols();
        for (Eigen::Index i = 0; i < rows; ++i) {
            const Eigen::Map<const Eigen::Matrix<S, Eigen::Dynamic, 1>> row(a + i * n, n);
            for (Eigen::Index c = 0; c < g; ++c) out[c * ld + i] = row.dot(x.col(c));
        }
    }

    template <typename S>
    struct Operators {
        std::size_t width = 0;
        std::size_t count = 0;  // D
        RowMat<S> stacked;      // (count * N) x N, or (letters * N) x N when `brackets` is set
        S alpha = 1;
        Mat<S> bias;            // N x D, already scaled; empty when zero

        // Lazy Lie brackets: operator j is scale_j * P(w_j)(B_1..B_d) built from the letter matrices.
        const LyndonBasis* brackets = nullptr;
        std::vector<S> bracket_scale;

        Mat<S> apply_letter(std::size_t i, const Mat<S>& x) const {
            const auto n = static_cast<Eigen::Index>(width);
            Mat<S> out(n, x.cols());
            rowwise_product(stacked.data() + static_cast<Eigen::Index>(i) * n * n, n, n, x, out.data(), n);
            return out;
        }

        Mat<S> apply_bracket(std::size_t j, const Mat<S>& x) const {
            const LyndonWord& w = (*brackets)[j];
            if (w.is_letter()) return apply_letter(static_cast<std::size_t>(w.word.letters[0] - 1), x);
            const auto u = static_cast<std::size_t>(w.left);
            const auto v = static_cast<std::size_t>(w.right);
            return apply_bracket(u, apply_bracket(v, x)) - apply_bracket(v, apply_bracket(u, x));
        }

        /* (count * N) x G, block j = O_j phi. */
        Mat<S> apply(const Mat<S>& phi) const {
            const auto n = static_cast<Eigen::Index>(width);
            Mat<S> out(static_cast<Eigen::Index>(count) * n, phi.cols());
            rowwise_product(stacked.data(), stacked.rows(), n, phi, out.data(), out.rows());
            if (brackets == nullptr) return out;
            const auto letters = static_cast<std::size_t>(brackets->dim());
            for (std::size_t j = letters; j < count; ++j) {
                out.middleRows(static_cast<Eigen::Index>(j) * n, n) = bracket_scale[j] * apply_bracket(j, phi);
            }
            for (std::size_t j = 0; j < letters; ++j) out.middleRows(static_cast<Eigen::Index>(j) * n, n) *= bracket_scale[j];
            return out;
        }
    };

    template <typename S>
    struct Draws {
        RowMat<S> letters;  // (count * N) x N
        Mat<S> biases;      // N x count
        Mat<S> z0;          // N x 1
    };

    /* Standard normals in the documented order: matrices row by row, then bias vectors, then z_0. Drawn in
     * double and rounded, so float and double draws agree to rounding. */
    template <typename S>
    Draws<S> draw_standard(std::uint64_t seed, std::size_t width, std::size_t count) {
        const auto n = static_cast<Eigen::Index>(width);
        const auto c = static_cast<Eigen::Index>(count);
        Rng rng(seed);
        boost::random::normal_distribution<double> normal;
        Draws<S> d;
        d.letters.resize(c * n, n);
        S* p = d.letters.data();
        for (Eigen::Index i = 0; i < d.letters.size(); ++i) p[i] = static_cast<S>(normal(rng));
        d.biases.resize(n, c);
        for (Eigen::Index j = 0; j < c; ++j) {
            for (Eigen::Index r = 0; r < n; ++r) d.biases(r, j) = static_cast<S>(normal(rng));
        }
        d.z0.resize(n, 1);
        for (Eigen::Index r = 0; r < n; ++r) d.z0(r, 0) = static_cast<S>(normal(rng));
        return d;
    }

    // Bracket tables above this width are applied lazily instead of being materialised.
    inline constexpr std::size_t kMaterializeLimit = 512;

    /* Scaled operators for `spec`. For R-RDE, `basis` must match (d, m); `letters` holds B_1..B_d. For the
     * Euler variants the operator count is taken from `letters`, so reduced drives can reuse this. */
    template <typename S>
    Operators<S> make_operators(const ReservoirSpec& spec, RowMat<S> letters, const Mat<S>& biases,
                                const LyndonBasis* basis) {
        const std::size_t n = spec.width;
        const auto nn = static_cast<Eigen::Index>(n);
        const std::size_t count = static_cast<std::size_t>(letters.rows()) / n;
        const double sqrt_n = std::sqrt(static_cast<double>(n));
        Operators<S> ops;
        ops.width = n;
        if (spec.variant != Variant::RRDE) {
            ops.count = count;
            ops.alpha = static_cast<S>(spec.sigma_a / sqrt_n);
            ops.stacked = std::move(letters);
            const double bias_scale = spec.variant == Variant::RFCDE ? spec.sigma_b / sqrt_n : spec.sigma_b;
            if (spec.sigma_b > 0.0) ops.bias = static_cast<S>(bias_scale) * biases;
            return ops;
        }
        const std::size_t words = basis->size();
        ops.count = words;
        ops.alpha = static_cast<S>(spec.sigma_a);
        ops.bracket_scale.resize(words);
        for (std::size_t j = 0; j < words; ++j) {
            const auto k = static_cast<double>((*basis)[j].word.letters.size());
            ops.bracket_scale[j] = static_cast<S>(std::pow(static_cast<double>(n), -0.5 * k));
        }
        if (spec.sigma_b > 0.0) {
            ops.bias = Mat<S>::Zero(nn, static_cast<Eigen::Index>(words));
            ops.bias.leftCols(static_cast<Eigen::Index>(count)) = static_cast<S>(spec.sigma_b) * biases;
        }
        if (n <= kMaterializeLimit || words == count) {
            std::vector<Mat<S>> raw(words);
            for (std::size_t j = 0; j < words; ++j) {
                const LyndonWord& w = (*basis)[j];
                if (w.is_letter()) {
                    const auto i = static_cast<Eigen::Index>(w.word.letters[0] - 1);
                    raw[j] = letters.middleRows(i * nn, nn);
                } else {
                    const auto& u = raw[static_cast<std::size_t>(w.left)];
                    const auto& v = raw[static_cast<std::size_t>(w.right)];
                    raw[j] = u * v - v * u;
                }
            }
            ops.stacked.resize(static_cast<Eigen::Index>(words) * nn, nn);
            for (std::size_t j = 0; j < words; ++j) {
                ops.stacked.middleRows(static_cast<Eigen::Index>(j) * nn, nn) = ops.bracket_scale[j] * raw[j];
            }
        } else {
            ops.stacked = std::move(letters);
            ops.brackets = basis;
        }
        return ops;
    }

    template <typename S>
    void activate(Activation a, const Mat<S>& z, Mat<S>& phi) {
        switch (a) {
            case Activation::Identity: phi = z; break;
            case Activation::Tanh: phi = z.array().tanh().matrix(); break;
            case Activation::Relu: phi = z.cwiseMax(S(0)); break;
        }
    }

    template <typename S>
    void check_state(const Mat<S>& z, std::size_t step, double sigma_a) {
        if (!z.allFinite() || static_cast<double>(z.cwiseAbs().maxCoeff()) > kOverflowLimit) {
            throw NumericalError("reservoir state overflow (|z| > 1e100 or non-finite) at step " + std::to_string(step) +
                                 "; sigma_A=" + std::to_string(sigma_a) + " is likely too large");
        }
    }

    /* Advances the N x G state through all steps. drives[g] is steps_g x D (row t = coefficients of step t);
     * shorter drives are treated as zero-padded, which leaves their state unchanged. `on_step(t, Z)` sees the
     * state after each step when provided. */
    template <typename S, typename OnStep>
    void run_lockstep(const Operators<S>& ops, Activation act, double sigma_a, const std::vector<const Mat<S>*>& drives,
                      Mat<S>& z, OnStep&& on_step) {
        const auto n = static_cast<Eigen::Index>(ops.width);
        const auto g = static_cast<Eigen::Index>(drives.size());
        std::size_t steps = 0;
        for (const auto* d : drives) steps = std::max(steps, static_cast<std::size_t>(d->rows()));
        Mat<S> phi(n, g);
        Mat<S> coeff(static_cast<Eigen::Index>(ops.count), g);
        for (std::size_t t = 0; t < steps; ++t) {
            const auto tt = static_cast<Eigen::Index>(t);
            bool any = false;
            for (Eigen::Index c = 0; c < g; ++c) {
                const auto& d = *drives[static_cast<std::size_t>(c)];
                if (tt < d.rows()) {
                    coeff.col(c) = d.row(tt).transpose();
                    any = any || !coeff.col(c).isZero(0);
                } else {
                    coeff.col(c).setZero();
                }
            }
            if (any) {
                activate(act, z, phi);
                const Mat<S> y = ops.apply(phi);
                for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(ops.count); ++j) {
                    z.noalias() += y.middleRows(j * n, n) * (ops.alpha * coeff.row(j).transpose()).asDiagonal();
                }
                if (ops.bias.size() > 0) z.noalias() += ops.bias * coeff;
                check_state(z, t, sigma_a);
            }
            on_step(t, z);
        }
    }

}  // namespace sigres::detail

#endif  // SIGRES_RESERVOIR_ENGINE_HPP
