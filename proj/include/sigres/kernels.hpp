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
 // Signature kernels: Goursat PDE solver, truncated inner products, RBF-lifted kernels and Gram matrices.


#ifndef SIGRES_KERNELS_HPP
#define SIGRES_KERNELS_HPP

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sigres/path.hpp"
#include "sigres/rff.hpp"

namespace sigres {

    /* Each input cell is split into refinement x refinement sub-cells. */
    struct PDEGrid {
        int refinement = 1;
        int order = 2;  // 1 or 2

        void validate() const;
    };

    struct PDESolution {
        double value = 0.0;
        /* K at the original sample points (l_x x l_y) when requested, else empty. */
        Eigen::MatrixXd surface;
    };

    /* Solves d^2 K / ds dt = <x'(s), y'(t)> K, K(0, .) = K(., 0) = 1, with the source term piecewise constant:
     * `inc(i, j)` is the inner product of the i-th and j-th increments.
     *
     * order 1: K_{a+1,b+1} = K_{a+1,b} + K_{a,b+1} + K_{a,b} (c - 1)
     * order 2: K_{a+1,b+1} = (K_{a+1,b} + K_{a,b+1}) (1 + c/2 + c^2/12) - K_{a,b} (1 - c^2/12)
     * with c = inc(i, j) / refinement^2 on each sub-cell. */
    PDESolution goursat_solve(const Eigen::MatrixXd& inc, const PDEGrid& grid, bool keep_surface = false);

    double sig_kernel_pde(const Path& x, const Path& y, const PDEGrid& grid = {});
    PDESolution sig_kernel_pde_surface(const Path& x, const Path& y, const PDEGrid& grid = {});

    /* <Sig^m(x), Sig^m(y)>; m = 0 gives 1. */
    double sig_kernel_truncated(const Path& x, const Path& y, int level);

    /* PDE kernel of the two lifted paths (shared frequencies). */
    double rbf_lifted_sig_kernel(const Path& x, const Path& y, const RFFSpec& rff, const PDEGrid& grid = {});

    /* F -> infinity limit of rbf_lifted_sig_kernel: the source term on cell (i, j) is the double difference
     * k(x_{i+1}, y_{j+1}) - k(x_{i+1}, y_j) - k(x_i, y_{j+1}) + k(x_i, y_j) of the Gaussian kernel
     * k(u, v) = exp(-s^2 |u - v|^2 / 2), s = frequency_scale. */
    double rbf_lifted_sig_kernel_exact(const Path& x, const Path& y, double frequency_scale, const PDEGrid& grid = {});

    /* sum_{k=0}^{terms} c^k / (k!)^2: the signature kernel of two single-segment paths with <dx, dy> = c. */
    double linear_kernel_series(double c, int terms = 30);

    struct GramMatrix {
        Eigen::MatrixXd values;
        std::string kind;
        int refinement = 0;

        /* Smallest eigenvalue >= -1e-8 * trace. Square matrices only. */
        bool is_psd() const;
    };

    using PathKernel = std::function<double(const Path&, const Path&)>;

    /* values(i, j) = k(xs[i], ys[j]); pairs distributed over `threads`. */
    GramMatrix gram_matrix(const std::vector<Path>& xs, const std::vector<Path>& ys, const PathKernel& k,
                           const std::string& kind, std::size_t threads = 1);

    /* Symmetric version: computes the upper triangle and mirrors it. */
    GramMatrix gram_matrix(const std::vector<Path>& xs, const PathKernel& k, const std::string& kind,
                           std::size_t threads = 1);

    /* #gram kind=<str> n=<rows> m=<cols>, then one row per line. */
    void write_gram(std::ostream& out, const GramMatrix& g);
    GramMatrix read_gram(std::istream& in);

}  // namespace sigres

#endif  // SIGRES_KERNELS_HPP
