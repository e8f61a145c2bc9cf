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
 // Random path generators shared by the unit tests.

#ifndef SIGRES_TEST_UTIL_HPP
#define SIGRES_TEST_UTIL_HPP

#include <cmath>
#include <random>
#include <vector>

#include "sigres/path.hpp"

namespace test_util {

    /* Random walk with N(0, 0.3^2) increments at irregular increasing times. */
    inline sigres::Path random_path(int d, std::size_t length, std::mt19937_64& rng, double step = 0.3) {
        std::normal_distribution<double> n(0.0, step);
        std::uniform_real_distribution<double> gap(0.1, 1.0);
        Eigen::MatrixXd v(static_cast<Eigen::Index>(length), d);
        std::vector<double> t(length);
        double time = 0.0;
        for (std::size_t i = 0; i < length; ++i) {
            t[i] = time;
            time += gap(rng);
            for (int c = 0; c < d; ++c) {
                v(static_cast<Eigen::Index>(i), c) = i == 0 ? n(rng) : v(static_cast<Eigen::Index>(i) - 1, c) + n(rng);
            }
        }
        return sigres::Path(std::move(t), std::move(v));
    }

    /* Inserts a copy of a random sample (same value) at a fresh time just after it. */
    inline sigres::Path with_duplicated_sample(const sigres::Path& p, std::mt19937_64& rng) {
        std::uniform_int_distribution<std::size_t> pick(0, p.length() - 2);
        const std::size_t i = pick(rng);
        std::vector<double> t;
        Eigen::MatrixXd v(static_cast<Eigen::Index>(p.length() + 1), static_cast<Eigen::Index>(p.dim()));
        Eigen::Index row = 0;
        for (std::size_t j = 0; j < p.length(); ++j) {
            t.push_back(p.times()[j]);
            v.row(row++) = p.values().row(static_cast<Eigen::Index>(j));
            if (j == i) {
                t.push_back(0.5 * (p.times()[j] + p.times()[j + 1]));
                v.row(row++) = p.values().row(static_cast<Eigen::Index>(j));
            }
        }
        return sigres::Path(std::move(t), std::move(v));
    }

    /* Same samples at times t -> exp(t) - 1 + t^3 (strictly increasing). */
    inline sigres::Path time_warped(const sigres::Path& p) {
        std::vector<double> t = p.times();
        for (double& x : t) x = std::exp(x) - 1.0 + x * x * x;
        return sigres::Path(std::move(t), p.values());
    }

}  // namespace test_util

#endif  // SIGRES_TEST_UTIL_HPP
