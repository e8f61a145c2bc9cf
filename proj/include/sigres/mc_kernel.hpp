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
 // Monte Carlo estimate of the infinite-width reservoir kernel lim (1/N) E<Z_T(x), Z_T(y)>.


#ifndef SIGRES_MC_KERNEL_HPP
#define SIGRES_MC_KERNEL_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "sigres/path.hpp"
#include "sigres/reservoir.hpp"

namespace sigres {

    struct McKernelConfig {
        /* Variant, width and scales. `spec.seed` is the base seed; seed s uses
         * derive_seed(spec.seed, MonteCarlo, s). The activation must be the identity. */
        ReservoirSpec spec;
        std::size_t num_seeds = 50;

        /* Store matrices and states in float. Halves memory traffic at large N. */
        bool single_precision = false;

        /* RF-CDE: draw the RFF frequencies once (stream derive_seed(spec.seed, RffFrequencies)) instead of
         * once per seed. */
        bool shared_rff = true;

        /* RF-CDE: eigenvalues of the lifted-increment Gram below rank_tolerance * max are dropped. */
        double rank_tolerance = 1e-10;

        std::size_t threads = 1;
    };

    struct McKernelEstimate {
        double mean = 0.0;
        double std_error = 0.0;
        std::vector<double> samples;  // one per seed, in seed order
        std::size_t rank = 0;         // RF-CDE reduced sampler rank (0 otherwise)
    };

    /* Per seed, one draw of matrices, biases and z_0 is shared by x and y, which are simulated in lockstep.
     *
     * R-CDE and R-RDE use exactly the draws of ReservoirState(spec with the per-seed seed). RF-CDE uses an
     * equivalent-in-law reduced sampler: the operators M_t = sum_i A_i dX_t^i over all lifted increments of
     * x and y are jointly Gaussian with entrywise covariance G_{ts} = <dX_t, dX_s>, so with G = C C^T they are
     * drawn as M_t = sum_r C_{tr} W_r from rank(G) independent matrices W_r (likewise for the biases).
     *
     * Throws ConfigError for a non-identity activation. */
    McKernelEstimate mc_kernel_estimate(const McKernelConfig& cfg, const Path& x, const Path& y);

    struct ReducedDrives {
        Eigen::MatrixXd cx;  // steps_x x r
        Eigen::MatrixXd cy;  // steps_y x r
    };

    /* Factor [dx; dy][dx; dy]^T = C C^T through its eigendecomposition, keeping eigenvalues above
     * tolerance * max. */
    ReducedDrives reduce_drives(const Eigen::MatrixXd& dx, const Eigen::MatrixXd& dy, double tolerance);

}  // namespace sigres

#endif  // SIGRES_MC_KERNEL_HPP
