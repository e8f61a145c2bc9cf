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


#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "sigres/errors.hpp"
#include "sigres/tensor.hpp"

namespace sigres {
    namespace {
        void check_shape(int dim, int level) {
            if (dim < 1) throw ShapeError("tensor dimension must be >= 1, got " + std::to_string(dim));
            if (level < 0) throw ShapeError("tensor level must be >= 0, got " + std::to_string(level));
        }

        void check_same_shape(const TruncatedTensor& a, const TruncatedTensor& b, const char* op) {
            if (a.dim() != b.dim() || a.level() != b.level()) {
                std::ostringstream msg;
                msg << op << ": shape mismatch (d=" << a.dim() << ", m=" << a.level() << ") vs (d=" << b.dim()
                    << ", m=" << b.level() << ")";
                throw ShapeError(msg.str());
            }
        }

        std::size_t ipow(std::size_t base, int exp) {
            std::size_t out = 1;
            for (int i = 0; i < exp; ++i) out *= base;
            return out;
        }

        // out_{i+j} += a_i (x) b_j over all splits, for levels 1..m of `out` (level 0 handled by callers).
        void accumulate_product(std::span<const double> a, std::span<const double> b, std::span<double> out,
                                const std::vector<std::size_t>& offsets, int dim, int level) {
            for (int k = 0; k <= level; ++k) {
                double* dst = out.data() + offsets[static_cast<std::size_t>(k)];
                for (int i = 0; i <= k; ++i) {
                    const int j = k - i;
                    const double* ai = a.data() + offsets[static_cast<std::size_t>(i)];
                    const double* bj = b.data() + offsets[static_cast<std::size_t>(j)];
                    const std::size_t ni = ipow(static_cast<std::size_t>(dim), i);
                    const std::size_t nj = ipow(static_cast<std::size_t>(dim), j);
                    for (std::size_t p = 0; p < ni; ++p) {
                        const double av = ai[p];
                        if (av == 0.0) continue;
                        double* row = dst + p * nj;
                        for (std::size_t q = 0; q < nj; ++q) row[q] += av * bj[q];
                    }
                }
            }
        }
    }  // namespace

    std::string Word::str() const {
        if (letters.empty()) return "()";
        std::string out;
        const bool wide = std::any_of(letters.begin(), letters.end(), [](int l) { return l > 9; });
        for (std::size_t i = 0; i < letters.size(); ++i) {
            if (wide && i > 0) out += ',';
            out += std::to_string(letters[i]);
        }
        return out;
    }

    std::size_t tensor_size(int dim, int level) {
        check_shape(dim, level);
        std::size_t total = 0;
        std::size_t block = 1;
        for (int k = 0; k <= level; ++k) {
            total += block;
            block *= static_cast<std::size_t>(dim);
        }
        return total;
    }

    std::size_t word_rank(int dim, const Word& w) {
        std::size_t r = 0;
        for (int l : w.letters) {
            if (l < 1 || l > dim) {
                throw ShapeError("letter " + std::to_string(l) + " outside alphabet {1.." + std::to_string(dim) + "}");
            }
            r = r * static_cast<std::size_t>(dim) + static_cast<std::size_t>(l - 1);
        }
        return r;
    }

    Word word_from_rank(int dim, int length, std::size_t rank) {
        std::vector<int> letters(static_cast<std::size_t>(length));
        for (int i = length - 1; i >= 0; --i) {
            letters[static_cast<std::size_t>(i)] = static_cast<int>(rank % static_cast<std::size_t>(dim)) + 1;
            rank /= static_cast<std::size_t>(dim);
        }
        return Word(std::move(letters));
    }

    TruncatedTensor::TruncatedTensor(int dim, int level) : dim_(dim), level_(level) {
        check_shape(dim, level);
        offsets_.resize(static_cast<std::size_t>(level) + 2);
        std::size_t block = 1;
        offsets_[0] = 0;
        for (int k = 0; k <= level; ++k) {
            offsets_[static_cast<std::size_t>(k) + 1] = offsets_[static_cast<std::size_t>(k)] + block;
            block *= static_cast<std::size_t>(dim);
        }
        coeffs_.assign(offsets_.back(), 0.0);
    }

    TruncatedTensor TruncatedTensor::unit(int dim, int level) {
        TruncatedTensor t(dim, level);
        t.coeffs_[0] = 1.0;
        return t;
    }

    TruncatedTensor TruncatedTensor::from_level1(int dim, int level, std::span<const double> v) {
        if (v.size() != static_cast<std::size_t>(dim)) {
            throw ShapeError("level-1 vector has " + std::to_string(v.size()) + " entries, expected " +
                             std::to_string(dim));
        }
        TruncatedTensor t(dim, level);
        if (level >= 1) std::copy(v.begin(), v.end(), t.level_coeffs(1).begin());
        return t;
    }

    std::span<double> TruncatedTensor::level_coeffs(int k) {
        if (k < 0 || k > level_) throw ShapeError("level " + std::to_string(k) + " out of range");
        return {coeffs_.data() + offset(k), offset(k + 1) - offset(k)};
    }

    std::span<const double> TruncatedTensor::level_coeffs(int k) const {
        if (k < 0 || k > level_) throw ShapeError("level " + std::to_string(k) + " out of range");
        return {coeffs_.data() + offset(k), offset(k + 1) - offset(k)};
    }

    double TruncatedTensor::operator[](const Word& w) const {
        const int k = static_cast<int>(w.length());
        if (k > level_) throw ShapeError("word " + w.str() + " longer than truncation level");
        return coeffs_[offset(k) + word_rank(dim_, w)];
    }

    double& TruncatedTensor::operator[](const Word& w) {
        const int k = static_cast<int>(w.length());
        if (k > level_) throw ShapeError("word " + w.str() + " longer than truncation level");
        return coeffs_[offset(k) + word_rank(dim_, w)];
    }

    TruncatedTensor& TruncatedTensor::operator+=(const TruncatedTensor& other) {
        check_same_shape(*this, other, "add");
        for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
        return *this;
    }

    TruncatedTensor& TruncatedTensor::operator-=(const TruncatedTensor& other) {
        check_same_shape(*this, other, "subtract");
        for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
        return *this;
    }

    TruncatedTensor& TruncatedTensor::operator*=(double s) {
        for (double& c : coeffs_) c *= s;
        return *this;
    }

    double TruncatedTensor::max_abs_diff(const TruncatedTensor& other) const {
        check_same_shape(*this, other, "max_abs_diff");
        double out = 0.0;
        for (std::size_t i = 0; i < coeffs_.size(); ++i) out = std::max(out, std::abs(coeffs_[i] - other.coeffs_[i]));
        return out;
    }

    double TruncatedTensor::level_norm(int k) const {
        double s = 0.0;
        for (double c : level_coeffs(k)) s += c * c;
        return std::sqrt(s);
    }

    TruncatedTensor chen_product(const TruncatedTensor& a, const TruncatedTensor& b) {
        check_same_shape(a, b, "chen_product");
        TruncatedTensor out(a.dim(), a.level());
        std::vector<std::size_t> offsets(static_cast<std::size_t>(a.level()) + 1);
        for (int k = 0; k <= a.level(); ++k) {
            offsets[static_cast<std::size_t>(k)] =
                static_cast<std::size_t>(a.level_coeffs(k).data() - a.data().data());
        }
        accumulate_product(a.data(), b.data(), out.data(), offsets, a.dim(), a.level());
        return out;
    }

    TruncatedTensor tensor_exp(const TruncatedTensor& a) {
        if (a.scalar() != 0.0) throw ShapeError("tensor_exp: scalar coefficient must be 0");
        TruncatedTensor out = TruncatedTensor::unit(a.dim(), a.level());
        TruncatedTensor power = TruncatedTensor::unit(a.dim(), a.level());
        for (int n = 1; n <= a.level(); ++n) {
            power = chen_product(power, a);
            power *= 1.0 / n;
            out += power;
        }
        return out;
    }

    TruncatedTensor tensor_log(const TruncatedTensor& g) {
        if (g.scalar() != 1.0) throw ShapeError("tensor_log: scalar coefficient must be 1");
        TruncatedTensor x = g;
        x.data()[0] = 0.0;
        TruncatedTensor out(g.dim(), g.level());
        TruncatedTensor power = TruncatedTensor::unit(g.dim(), g.level());
        for (int n = 1; n <= g.level(); ++n) {
            power = chen_product(power, x);
            const double c = (n % 2 == 1 ? 1.0 : -1.0) / n;
            TruncatedTensor term = power;
            term *= c;
            out += term;
        }
        return out;
    }

    double inner_product(const TruncatedTensor& a, const TruncatedTensor& b) {
        check_same_shape(a, b, "inner_product");
        double s = 0.0;
        const auto da = a.data();
        const auto db = b.data();
        for (std::size_t i = 0; i < da.size(); ++i) s += da[i] * db[i];
        return s;
    }

    void multiply_by_segment_exp(TruncatedTensor& s, std::span<const double> v) {
        const int d = s.dim();
        if (v.size() != static_cast<std::size_t>(d)) throw ShapeError("segment increment has wrong dimension");
        // Horner form, top level first so lower levels are still the old values:
        //   new_k = s_k + (...((s_0 v/k + s_1) v/(k-1) + s_2) ... + s_{k-1}) v/1
        std::vector<double> acc;
        std::vector<double> next;
        for (int k = s.level(); k >= 1; --k) {
            acc.assign(1, s.scalar() / k);
            for (int j = 1; j <= k; ++j) {
                const double scale = j < k ? 1.0 / (k - j) : 1.0;
                next.resize(acc.size() * static_cast<std::size_t>(d));
                for (std::size_t p = 0; p < acc.size(); ++p) {
                    for (int q = 0; q < d; ++q) next[p * static_cast<std::size_t>(d) + static_cast<std::size_t>(q)] = acc[p] * v[static_cast<std::size_t>(q)];
                }
                const auto lvl = s.level_coeffs(j);
                if (j < k) {
                    for (std::size_t p = 0; p < next.size(); ++p) next[p] = (next[p] + lvl[p]) * scale;
                } else {
                    for (std::size_t p = 0; p < next.size(); ++p) next[p] += lvl[p];
                }
                acc.swap(next);
            }
            auto dst = s.level_coeffs(k);
            std::copy(acc.begin(), acc.end(), dst.begin());
        }
    }

}  // namespace sigres
