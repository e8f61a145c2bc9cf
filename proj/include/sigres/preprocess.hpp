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
 // Preprocessing and augmentation of path datasets.
 //
 // The pipeline always runs in this order:
 //   min-max scaling -> linear resampling -> time channel -> lead-lag -> basepoint


#ifndef SIGRES_PREPROCESS_HPP
#define SIGRES_PREPROCESS_HPP

#include <cstddef>
#include <optional>
#include <utility>

#include "sigres/path.hpp"

namespace sigres {

    struct AugmentationConfig {
        bool time_augment = false;
        bool basepoint = false;
        bool lead_lag = false;
        bool minmax_scale = false;
        std::optional<std::size_t> resample_length;

        void validate() const;
    };

    /* Per-coordinate affine map onto [-1, 1]. A constant coordinate maps to 0. */
    struct MinMaxScaler {
        Eigen::RowVectorXd lo;
        Eigen::RowVectorXd hi;

        static MinMaxScaler fit(const LabeledDataset& ds);
        Path apply(const Path& p) const;
    };

    /* Resample on `n` equispaced times spanning the original time range, interpolating linearly. */
    Path resample_linear(const Path& p, std::size_t n);

    /* Appends the channel (t - t_0) / (t_end - t_0). */
    Path add_time_channel(const Path& p);

    /* Lead-lag transform: d -> 2d channels (lead first), l -> 2l - 1 samples. The lead copy steps first;
     * inserted samples sit at the midpoint times. */
    Path lead_lag(const Path& p);

    /* Prepends an all-zero sample one step (t_1 - t_0) before t_0. */
    Path add_basepoint(const Path& p);

    /* Fitted pipeline. Scaling statistics come from the dataset given to fit() and are reused for every
     * later apply(). */
    class Preprocessor {
    public:
        Preprocessor() = default;
        Preprocessor(AugmentationConfig cfg, const LabeledDataset& fit_on);

        const AugmentationConfig& config() const noexcept { return cfg_; }
        Path apply(const Path& p) const;
        LabeledDataset apply(const LabeledDataset& ds) const;

    private:
        AugmentationConfig cfg_;
        std::optional<MinMaxScaler> scaler_;
    };

    /* Fits on `ds` itself. */
    LabeledDataset preprocess(const LabeledDataset& ds, const AugmentationConfig& cfg);

    /* Fits on `train`, applies to both splits. */
    std::pair<LabeledDataset, LabeledDataset> preprocess(const LabeledDataset& train, const LabeledDataset& test,
                                                         const AugmentationConfig& cfg);

}  // namespace sigres

#endif  // SIGRES_PREPROCESS_HPP
