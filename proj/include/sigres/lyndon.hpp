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
 // Lyndon words, their standard bracketings, and the Lie <-> tensor change of basis.


#ifndef SIGRES_LYNDON_HPP
#define SIGRES_LYNDON_HPP

#include <cstddef>
#include <memory>
#include <vector>

#include "sigres/tensor.hpp"

namespace sigres {

    /* A Lyndon word together with its standard factorisation w = uv, v the longest proper Lyndon suffix.
     * `left`/`right` index u and v within the owning basis; both are -1 for single letters. */
    struct LyndonWord {
        Word word;
        int left = -1;
        int right = -1;

        bool is_letter() const noexcept { return left < 0; }
    };

    /* True when `w` is strictly smaller than each of its proper rotations. */
    bool is_lyndon(const Word& w);

    class LyndonBasis;

    /* Coordinates of a Lie polynomial in the Lyndon basis of the same (d, m). */
    struct LieElement {
        int dim = 0;
        int level = 0;
        std::vector<double> coeffs;  // aligned with LyndonBasis::words()
    };

    /* All Lyndon words of length 1..m over {1..d}, sorted by length then lexicographically.
     *
     * Each word carries the dense tensor expansion of its bracketing P(w), where P(a) = a for a letter and
     * P(uv) = [P(u), P(v)]. For the standard factorisation P(w) = w + (lexicographically larger words of
     * the same length), so tensor -> Lie projection is a forward substitution. */
    class LyndonBasis {
    public:
        LyndonBasis(int dim, int level);

        /* Shared, lazily-built instance for (d, m). Safe to call concurrently. */
        static std::shared_ptr<const LyndonBasis> get(int dim, int level);

        int dim() const noexcept { return dim_; }
        int level() const noexcept { return level_; }
        std::size_t size() const noexcept { return words_.size(); }
        const std::vector<LyndonWord>& words() const noexcept { return words_; }
        const LyndonWord& operator[](std::size_t i) const { return words_[i]; }

        /* Number of Lyndon words of exactly length k. */
        std::size_t count_of_length(int k) const;

        /* Index of the first word of length k within words(). */
        std::size_t first_of_length(int k) const;

        /* Dense level-|w| coefficients of P(w), ordered by word_rank. */
        const std::vector<double>& expansion(std::size_t i) const { return expansions_[i]; }

        /* Lie element -> tensor (zero scalar part). */
        TruncatedTensor expand(const LieElement& x) const;

        /* Tensor Lie polynomial -> Lyndon coordinates. Components outside the Lie algebra are ignored,
         * only the coefficients on Lyndon words are read. */
        LieElement project(const TruncatedTensor& t) const;

    private:
        int dim_;
        int level_;
        std::vector<LyndonWord> words_;
        std::vector<std::size_t> length_start_;  // size level+2
        std::vector<std::vector<double>> expansions_;
    };

    /* Fresh basis for (d, m). Same contents as LyndonBasis::get. */
    LyndonBasis enumerate_lyndon(int dim, int level);

}  // namespace sigres

#endif  // SIGRES_LYNDON_HPP
