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
 // Random Fourier features for the Gaussian kernel and the pointwise lift of paths.


#ifndef SIGRES_RFF_HPP
#define SIGRES_RFF_HPP

#include <cstddef>
#include <cstdint>

#include <Eigen/Dense>

#include "sigres/path.hpp"

namespace sigres {

    /* phi(x) = F^{-1/2} (cos(w_1.x), sin(w_1.x), ..., cos(w_F.x), sin(w_F.x)) with w_j ~ N(0, s^2 I).
     *
     * <phi(x), phi(y)> approximates exp(-s^2 |x - y|^2 / 2). Frequencies are drawn once, at construction. */
    class RFFSpec {
    public:
        RFFSpec(std::size_t input_dim, std::size_t num_features, double frequency_scale, std::uint64_t seed);

        std::size_t input_dim() const noexcept { return static_cast<std::size_t>(omega_.cols()); }
        std::size_t num_features() const noexcept { return static_cast<std::size_t>(omega_.rows()); }
        std::size_t output_dim() const noexcept { return 2 * num_features(); }
        double frequency_scale() const noexcept { return scale_; }
        std::uint64_t seed() const noexcept { return seed_; }

        /* F x d, row j is w_j. */
        const Eigen::MatrixXd& frequencies() const noexcept { return omega_; }

        Eigen::VectorXd map(const Eigen::Ref<const Eigen::VectorXd>& x) const;

    private:
        Eigen::MatrixXd omega_;
        double scale_;
        std::uint64_t seed_;
    };

    /* Row-wise phi; same sample times, 2F channels. */
    Path lift_path(const RFFSpec& spec, const Path& path);

    /* exp(-|x - y|^2 / (2 bandwidth^2)). */
    double rbf_kernel(const Eigen::Ref<const Eigen::VectorXd>& x, const Eigen::Ref<const Eigen::VectorXd>& y,
                      double bandwidth);

    /* Median pairwise Euclidean distance between sample points pooled from the dataset, using at most
     * `max_points` points drawn without replacement with the given seed. Returns 1 if every distance is 0. */
    double median_heuristic(const LabeledDataset& ds, std::uint64_t seed, std::size_t max_points = 1000);

}  // namespace sigres

#endif  // SIGRES_RFF_HPP
