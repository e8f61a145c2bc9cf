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
 // Truncated tensor algebra T^m(R^d) with dense per-level storage.


#ifndef SIGRES_TENSOR_HPP
#define SIGRES_TENSOR_HPP

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace sigres {

    /* A word i_1 ... i_k over the alphabet {1, ..., d}. The empty word indexes the scalar level.
     *
     * Letters are stored 1-based, as they are written. */
    struct Word {
        std::vector<int> letters;

        Word() = default;
        Word(std::initializer_list<int> l) : letters(l) {}
        explicit Word(std::vector<int> l) : letters(std::move(l)) {}

        std::size_t length() const noexcept { return letters.size(); }
        bool empty() const noexcept { return letters.empty(); }

        /* "12" style for d <= 9, otherwise letters separated by commas. */
        std::string str() const;

        friend auto operator<=>(const Word&, const Word&) = default;
    };

    /* Number of coordinates of T^m(R^d): 1 + d + ... + d^m. */
    std::size_t tensor_size(int dim, int level);

    /* Rank of `w` within its level: the base-d number i_1 ... i_k (first letter most significant). */
    std::size_t word_rank(int dim, const Word& w);

    /* Inverse of word_rank for a given length. */
    Word word_from_rank(int dim, int length, std::size_t rank);

    /* Element of the truncated tensor algebra. Levels 0..m are stored contiguously, level k holding
     * d^k coefficients ordered by word_rank. */
    class TruncatedTensor {
    public:
        /* Zero tensor. */
        TruncatedTensor(int dim, int level);

        static TruncatedTensor unit(int dim, int level);

        /* Tensor whose only nonzero level is level 1, equal to `v`. */
        static TruncatedTensor from_level1(int dim, int level, std::span<const double> v);

        int dim() const noexcept { return dim_; }
        int level() const noexcept { return level_; }
        std::size_t size() const noexcept { return coeffs_.size(); }

        std::span<double> level_coeffs(int k);
        std::span<const double> level_coeffs(int k) const;

        std::span<double> data() noexcept { return coeffs_; }
        std::span<const double> data() const noexcept { return coeffs_; }

        double scalar() const noexcept { return coeffs_[0]; }

        double operator[](const Word& w) const;
        double& operator[](const Word& w);

        TruncatedTensor& operator+=(const TruncatedTensor& other);
        TruncatedTensor& operator-=(const TruncatedTensor& other);
        TruncatedTensor& operator*=(double s);

        friend TruncatedTensor operator+(TruncatedTensor a, const TruncatedTensor& b) { return a += b; }
        friend TruncatedTensor operator-(TruncatedTensor a, const TruncatedTensor& b) { return a -= b; }
        friend TruncatedTensor operator*(TruncatedTensor a, double s) { return a *= s; }
        friend TruncatedTensor operator*(double s, TruncatedTensor a) { return a *= s; }

        /* Largest absolute coefficient difference. Shapes must agree. */
        double max_abs_diff(const TruncatedTensor& other) const;

        /* Euclidean norm of level k. */
        double level_norm(int k) const;

    private:
        std::size_t offset(int k) const noexcept { return offsets_[static_cast<std::size_t>(k)]; }

        int dim_;
        int level_;
        std::vector<std::size_t> offsets_;
        std::vector<double> coeffs_;
    };

    /* Tensor (Chen) product, truncated at the common level. Throws ShapeError on mismatch. */
    TruncatedTensor chen_product(const TruncatedTensor& a, const TruncatedTensor& b);

    /* Truncated exponential sum_{n<=m} a^n / n!. Requires a zero scalar coefficient. */
    TruncatedTensor tensor_exp(const TruncatedTensor& a);

    /* Truncated logarithm sum_{n<=m} (-1)^{n-1} (g - 1)^n / n. Requires a unit scalar coefficient. */
    TruncatedTensor tensor_log(const TruncatedTensor& g);

    /* Sum over all words of coefficient products. */
    double inner_product(const TruncatedTensor& a, const TruncatedTensor& b);

    /* In-place s <- s (x) exp(v) for a level-1 increment v, without materialising exp(v). */
    void multiply_by_segment_exp(TruncatedTensor& s, std::span<const double> v);

}  // namespace sigres

#endif  // SIGRES_TENSOR_HPP
