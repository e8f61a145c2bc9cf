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
#include <map>
#include <mutex>
#include <string>
#include <utility>

#include "sigres/errors.hpp"
#include "sigres/lyndon.hpp"

namespace sigres {
    namespace {
        // Duval's algorithm: every Lyndon word of length <= n over {1..d}, in lexicographic order.
        std::vector<Word> duval(int d, int n) {
            std::vector<Word> out;
            std::vector<int> w{1};
            while (!w.empty()) {
                out.emplace_back(w);
                const std::size_t period = w.size();
                while (w.size() < static_cast<std::size_t>(n)) w.push_back(w[w.size() - period]);
                while (!w.empty() && w.back() == d) w.pop_back();
                if (!w.empty()) ++w.back();
            }
            return out;
        }

        std::vector<double> outer(const std::vector<double>& a, const std::vector<double>& b) {
            std::vector<double> out(a.size() * b.size());
            for (std::size_t i = 0; i < a.size(); ++i) {
                for (std::size_t j = 0; j < b.size(); ++j) out[i * b.size() + j] = a[i] * b[j];
            }
            return out;
        }
    }  // namespace

    bool is_lyndon(const Word& w) {
        const std::size_t n = w.length();
        if (n == 0) return false;
        for (std::size_t r = 1; r < n; ++r) {
            // Compare w with its rotation by r.
            for (std::size_t i = 0; i < n; ++i) {
                const int a = w.letters[i];
                const int b = w.letters[(i + r) % n];
                if (a < b) break;
                if (a > b) return false;
                if (i + 1 == n) return false;  // equal to a rotation: periodic
            }
        }
        return true;
    }

    LyndonBasis::LyndonBasis(int dim, int level) : dim_(dim), level_(level) {
        if (dim < 1) throw ShapeError("Lyndon basis needs d >= 1, got " + std::to_string(dim));
        if (level < 1) throw ShapeError("Lyndon basis needs m >= 1, got " + std::to_string(level));

        std::vector<Word> all = duval(dim, level);
        std::stable_sort(all.begin(), all.end(),
                         [](const Word& a, const Word& b) { return a.length() < b.length(); });

        std::map<std::vector<int>, int> index;
        words_.reserve(all.size());
        expansions_.reserve(all.size());
        length_start_.assign(static_cast<std::size_t>(level) + 2, all.size());
        for (std::size_t i = 0; i < all.size(); ++i) {
            const int k = static_cast<int>(all[i].length());
            length_start_[static_cast<std::size_t>(k)] =
                std::min(length_start_[static_cast<std::size_t>(k)], i);

            LyndonWord lw{all[i], -1, -1};
            if (k == 1) {
                std::vector<double> e(static_cast<std::size_t>(dim), 0.0);
                e[static_cast<std::size_t>(all[i].letters[0] - 1)] = 1.0;
                expansions_.push_back(std::move(e));
            } else {
                // Longest proper suffix that is Lyndon; it is shorter so already indexed.
                for (std::size_t cut = 1; cut < all[i].length(); ++cut) {
                    std::vector<int> suffix(all[i].letters.begin() + static_cast<std::ptrdiff_t>(cut),
                                            all[i].letters.end());
                    auto it = index.find(suffix);
                    if (it != index.end()) {
                        std::vector<int> prefix(all[i].letters.begin(),
                                                all[i].letters.begin() + static_cast<std::ptrdiff_t>(cut));
                        lw.left = index.at(prefix);
                        lw.right = it->second;
                        break;
                    }
                }
                if (lw.left < 0) throw ShapeError("internal: no standard factorisation for " + all[i].str());
                const auto& eu = expansions_[static_cast<std::size_t>(lw.left)];
                const auto& ev = expansions_[static_cast<std::size_t>(lw.right)];
                // Both outer products are indexed by the rank of the concatenated word.
                std::vector<double> uv = outer(eu, ev);
                const std::vector<double> vu = outer(ev, eu);
                for (std::size_t r = 0; r < uv.size(); ++r) uv[r] -= vu[r];
                expansions_.push_back(std::move(uv));
            }
            index.emplace(all[i].letters, static_cast<int>(i));
            words_.push_back(std::move(lw));
        }
        for (int k = level; k >= 1; --k) {
            auto& s = length_start_[static_cast<std::size_t>(k)];
            s = std::min(s, length_start_[static_cast<std::size_t>(k) + 1]);
        }
    }

    std::shared_ptr<const LyndonBasis> LyndonBasis::get(int dim, int level) {
        static std::mutex mutex;
        static std::map<std::pair<int, int>, std::shared_ptr<const LyndonBasis>> cache;
        std::lock_guard<std::mutex> lock(mutex);
        auto& slot = cache[{dim, level}];
        if (!slot) slot = std::make_shared<const LyndonBasis>(dim, level);
        return slot;
    }

    std::size_t LyndonBasis::count_of_length(int k) const {
        if (k < 1 || k > level_) return 0;
        return length_start_[static_cast<std::size_t>(k) + 1] - length_start_[static_cast<std::size_t>(k)];
    }

    std::size_t LyndonBasis::first_of_length(int k) const {
        if (k < 1 || k > level_) throw ShapeError("length out of range");
        return length_start_[static_cast<std::size_t>(k)];
    }

    TruncatedTensor LyndonBasis::expand(const LieElement& x) const {
        if (x.dim != dim_ || x.level != level_ || x.coeffs.size() != words_.size()) {
            throw ShapeError("Lie element does not match basis (d=" + std::to_string(dim_) +
                             ", m=" + std::to_string(level_) + ")");
        }
        TruncatedTensor out(dim_, level_);
        for (std::size_t i = 0; i < words_.size(); ++i) {
            const double c = x.coeffs[i];
            if (c == 0.0) continue;
            auto lvl = out.level_coeffs(static_cast<int>(words_[i].word.length()));
            const auto& e = expansions_[i];
            for (std::size_t p = 0; p < e.size(); ++p) lvl[p] += c * e[p];
        }
        return out;
    }

    LieElement LyndonBasis::project(const TruncatedTensor& t) const {
        if (t.dim() != dim_ || t.level() != level_) {
            throw ShapeError("tensor does not match basis (d=" + std::to_string(dim_) + ", m=" +
                             std::to_string(level_) + ")");
        }
        LieElement out{dim_, level_, std::vector<double>(words_.size(), 0.0)};
        for (int k = 1; k <= level_; ++k) {
            const auto lvl = t.level_coeffs(k);
            const std::size_t begin = first_of_length(k);
            const std::size_t end = begin + count_of_length(k);
            for (std::size_t i = begin; i < end; ++i) {
                const std::size_t r = word_rank(dim_, words_[i].word);
                double c = lvl[r];
                for (std::size_t j = begin; j < i; ++j) c -= out.coeffs[j] * expansions_[j][r];
                out.coeffs[i] = c;
            }
        }
        return out;
    }

    LyndonBasis enumerate_lyndon(int dim, int level) { return LyndonBasis(dim, level); }

}  // namespace sigres
