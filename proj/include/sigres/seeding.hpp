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
 // Deterministic seed derivation. Every random component gets its own stream:
 //
 //   derive_seed(base, {tag, i, j, ...})
 //
 // feeds the 32-bit halves of `base` followed by the stream ids into std::seed_seq and packs the first two
 // generated words into a 64-bit seed. The mapping depends only on the inputs, never on thread count or
 // evaluation order.

#ifndef SIGRES_SEEDING_HPP
#define SIGRES_SEEDING_HPP

#include <cstdint>
#include <initializer_list>
#include <random>

namespace sigres {

    /* Stream tags used across the library, so that no two components share a stream by accident. */
    enum class SeedStream : std::uint64_t {
        ReservoirMatrices = 1,
        RffFrequencies = 2,
        FbmTrain = 3,
        FbmTest = 4,
        Corruption = 5,
        Folds = 6,
        MonteCarlo = 7,
        Runs = 8,
        Experiment = 9,
    };

    std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> stream);

    inline std::uint64_t derive_seed(std::uint64_t base, SeedStream tag, std::uint64_t a = 0, std::uint64_t b = 0,
                                     std::uint64_t c = 0) {
        return derive_seed(base, {static_cast<std::uint64_t>(tag), a, b, c});
    }

    /* The engine used everywhere: 64-bit Mersenne twister. */
    using Rng = std::mt19937_64;

}  // namespace sigres

#endif  // SIGRES_SEEDING_HPP
