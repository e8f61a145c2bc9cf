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
 // Missing-data corruption with linear-interpolation imputation.


#ifndef SIGRES_CORRUPTION_HPP
#define SIGRES_CORRUPTION_HPP

#include <cstdint>

#include "sigres/path.hpp"

namespace sigres {

    /* What to do when every entry of a channel is dropped. */
    enum class EmptyChannelPolicy { Reject, FillZero };

    struct CorruptionConfig {
        double missing_prob = 0.0;
        std::uint64_t seed = 0;
        EmptyChannelPolicy policy = EmptyChannelPolicy::Reject;

        void validate() const;
    };

    /* Drops each (t, channel) cell independently with probability p, then fills interior gaps by linear
     * interpolation in time and edge gaps with the nearest surviving value.
     *
     * Throws DataError for a fully dropped channel under EmptyChannelPolicy::Reject. */
    Path corrupt_and_impute(const Path& path, const CorruptionConfig& cfg);

    /* Applies corrupt_and_impute to every sample, with per-sample seeds derived from cfg.seed. */
    LabeledDataset corrupt_and_impute(const LabeledDataset& ds, const CorruptionConfig& cfg);

}  // namespace sigres

#endif  // SIGRES_CORRUPTION_HPP
