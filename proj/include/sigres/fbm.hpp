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
 // Fractional Brownian motion and the Hurst-exponent classification dataset.


#ifndef SIGRES_FBM_HPP
#define SIGRES_FBM_HPP

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "sigres/path.hpp"

namespace sigres {

    enum class FbmMethod {
        Auto,         // Davies-Harte, falling back to Cholesky if the circulant embedding is not PSD
        DaviesHarte,  // throws NumericalError instead of falling back
        Cholesky,
    };

    /* d independent fBm channels with Hurst exponent H at l equispaced times on [0, 1], starting at 0. */
    Path generate_fbm(double hurst, std::size_t length, std::size_t dim, std::uint64_t seed,
                      FbmMethod method = FbmMethod::Auto);

    /* E[B_s B_t] = (s^{2H} + t^{2H} - |t - s|^{2H}) / 2. */
    double fbm_covariance(double hurst, double s, double t);

    enum class HurstVariant { V1, V2 };

    /* The 8 class Hurst exponents 0.05, 0.15, ..., 0.75; label k corresponds to hurst_classes()[k]. */
    const std::vector<double>& hurst_classes();

    /* Standardizes each channel to zero mean and unit population variance. Constant channels become 0. */
    Path standardize_channels(const Path& p);

    /* Balanced train/test splits with n_train and n_test samples per class. V2 standardizes every sample. */
    std::pair<LabeledDataset, LabeledDataset> hurst_dataset(HurstVariant variant, std::size_t n_train,
                                                            std::size_t n_test, std::size_t length, std::size_t dim,
                                                            std::uint64_t seed);

}  // namespace sigres

#endif  // SIGRES_FBM_HPP
