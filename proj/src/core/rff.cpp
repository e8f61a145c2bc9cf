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
#include <numeric>
#include <string>
#include <vector>

#include <boost/random/normal_distribution.hpp>

#include "sigres/errors.hpp"
#include "sigres/rff.hpp"
#include "sigres/seeding.hpp"

namespace sigres {

    RFFSpec::RFFSpec(std::size_t input_dim, std::size_t num_features, double frequency_scale, std::uint64_t seed)
        : scale_(frequency_scale), seed_(seed) {
        if (input_dim < 1) throw ConfigError("input_dim", "must be >= 1");
        if (num_features < 1) throw ConfigError("num_features", "must be >= 1");
        if (!(frequency_scale > 0.0) || !std::isfinite(frequency_scale)) {
            throw ConfigError("frequency_scale", "must be positive, got " + std::to_string(frequency_scale));
        }
        omega_.resize(static_cast<Eigen::Index>(num_features), static_cast<Eigen::Index>(input_dim));
        Rng rng(seed);
        boost::random::normal_distribution<double> normal(0.0, frequency_scale);
        for (Eigen::Index j = 0; j < omega_.rows(); ++j) {
            for (Eigen::Index c = 0; c < omega_.cols(); ++c) omega_(j, c) = normal(rng);
        }
    }

    Eigen::VectorXd RFFSpec::map(const Eigen::Ref<const Eigen::VectorXd>& x) const {
        if (x.size() != omega_.cols()) {
            throw ShapeError("rff_map: expected dimension " + std::to_string(omega_.cols()) + ", got " +
                             std::to_string(x.size()));
        }
        const Eigen::VectorXd angle = omega_ * x;
        const double norm = 1.0 / std::sqrt(static_cast<double>(omega_.rows()));
        Eigen::VectorXd out(2 * omega_.rows());
        for (Eigen::Index j = 0; j < omega_.rows(); ++j) {
            out(2 * j) = norm * std::cos(angle(j));
            out(2 * j + 1) = norm * std::sin(angle(j));
        }
        return out;
    }

    Path lift_path(const RFFSpec& spec, const Path& path) {
        if (path.dim() != spec.input_dim()) {
            throw ShapeError("lift_path: spec expects d=" + std::to_string(spec.input_dim()) + " but path has d=" +
                             std::to_string(path.dim()));
        }
        const Eigen::MatrixXd angle = path.values() * spec.frequencies().transpose();  // l x F
        const double norm = 1.0 / std::sqrt(static_cast<double>(spec.num_features()));
        Eigen::MatrixXd v(angle.rows(), 2 * angle.cols());
        for (Eigen::Index j = 0; j < angle.cols(); ++j) {
            for (Eigen::Index i = 0; i < angle.rows(); ++i) {
                v(i, 2 * j) = norm * std::cos(angle(i, j));
                v(i, 2 * j + 1) = norm * std::sin(angle(i, j));
            }
        }
        return Path(path.times(), std::move(v));
    }

    double rbf_kernel(const Eigen::Ref<const Eigen::VectorXd>& x, const Eigen::Ref<const Eigen::VectorXd>& y,
                      double bandwidth) {
        if (!(bandwidth > 0.0)) throw ConfigError("bandwidth", "must be positive");
        if (x.size() != y.size()) throw ShapeError("rbf_kernel: dimension mismatch");
        return std::exp(-(x - y).squaredNorm() / (2.0 * bandwidth * bandwidth));
    }

    double median_heuristic(const LabeledDataset& ds, std::uint64_t seed, std::size_t max_points) {
        if (ds.paths.empty()) throw DataError("no samples");
        std::vector<std::pair<std::size_t, Eigen::Index>> all;
        for (std::size_t p = 0; p < ds.paths.size(); ++p) {
            for (Eigen::Index i = 0; i < ds.paths[p].values().rows(); ++i) all.emplace_back(p, i);
        }
        if (all.size() > max_points) {
            // Partial Fisher-Yates with a fixed engine keeps the subsample reproducible.
            Rng rng(seed);
            for (std::size_t i = 0; i < max_points; ++i) {
                const std::size_t j = i + static_cast<std::size_t>(rng() % (all.size() - i));
                std::swap(all[i], all[j]);
            }
            all.resize(max_points);
        }
        std::vector<double> dist;
        dist.reserve(all.size() * (all.size() - 1) / 2);
        for (std::size_t a = 0; a < all.size(); ++a) {
            const auto xa = ds.paths[all[a].first].values().row(all[a].second);
            for (std::size_t b = a + 1; b < all.size(); ++b) {
                dist.push_back((xa - ds.paths[all[b].first].values().row(all[b].second)).norm());
            }
        }
        if (dist.empty()) return 1.0;
        const auto mid = dist.begin() + static_cast<std::ptrdiff_t>(dist.size() / 2);
        std::nth_element(dist.begin(), mid, dist.end());
        double med = *mid;
        if (dist.size() % 2 == 0) med = 0.5 * (med + *std::max_element(dist.begin(), mid));
        return med > 0.0 ? med : 1.0;
    }

}  // namespace sigres
