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

#include <vector>

#include "sigres/seeding.hpp"

namespace sigres {

    std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> stream) {
        std::vector<std::uint32_t> words;
        words.reserve(2 + 2 * stream.size());
        auto push = [&words](std::uint64_t x) {
            words.push_back(static_cast<std::uint32_t>(x & 0xffffffffu));
            words.push_back(static_cast<std::uint32_t>(x >> 32));
        };
        push(base);
        for (std::uint64_t s : stream) push(s);
        std::seed_seq seq(words.begin(), words.end());
        std::uint32_t out[2];
        seq.generate(out, out + 2);
        return (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
    }

}  // namespace sigres
