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

#include <string>
#include <vector>

#include <boost/random/bernoulli_distribution.hpp>

#include "sigres/corruption.hpp"
#include "sigres/errors.hpp"
#include "sigres/seeding.hpp"

namespace sigres {

    void CorruptionConfig::validate() const {
        if (!(missing_prob >= 0.0 && missing_prob <= 1.0)) {
            throw ConfigError("missing_prob", "must lie in [0, 1], got " + std::to_string(missing_prob));
        }
    }

    Path corrupt_and_impute(const Path& path, const CorruptionConfig& cfg) {
        cfg.validate();
        if (cfg.missing_prob == 0.0) return path;

        const auto l = static_cast<Eigen::Index>(path.length());
        const Eigen::Index d = path.values().cols();
        const auto& t = path.times();
        Rng rng(cfg.seed);
        boost::random::bernoulli_distribution<double> drop(cfg.missing_prob);

        // Row-major draw order: cell (i, c) is the (i * d + c)-th draw.
        std::vector<char> kept(static_cast<std::size_t>(l * d));
        for (auto& k : kept) k = drop(rng) ? 0 : 1;

        Eigen::MatrixXd out = path.values();
        std::vector<Eigen::Index> alive;
        for (Eigen::Index c = 0; c < d; ++c) {
            alive.clear();
            for (Eigen::Index i = 0; i < l; ++i) {
                if (kept[static_cast<std::size_t>(i * d + c)]) alive.push_back(i);
            }
            if (alive.empty()) {
                if (cfg.policy == EmptyChannelPolicy::Reject) {
                    throw DataError("channel " + std::to_string(c) + " has no surviving entries");
                }
                out.col(c).setZero();
                continue;
            }
            for (Eigen::Index i = 0; i < alive.front(); ++i) out(i, c) = out(alive.front(), c);
            for (Eigen::Index i = alive.back() + 1; i < l; ++i) out(i, c) = out(alive.back(), c);
            for (std::size_t k = 0; k + 1 < alive.size(); ++k) {
                const Eigen::Index a = alive[k];
                const Eigen::Index b = alive[k + 1];
                const auto ta = t[static_cast<std::size_t>(a)];
                const auto tb = t[static_cast<std::size_t>(b)];
                for (Eigen::Index i = a + 1; i < b; ++i) {
                    const double w = (t[static_cast<std::size_t>(i)] - ta) / (tb - ta);
                    out(i, c) = (1.0 - w) * out(a, c) + w * out(b, c);
                }
            }
        }
        return Path(t, std::move(out));
    }

    LabeledDataset corrupt_and_impute(const LabeledDataset& ds, const CorruptionConfig& cfg) {
        LabeledDataset out;
        out.labels = ds.labels;
        out.num_classes = ds.num_classes;
        out.split = ds.split;
        out.paths.reserve(ds.paths.size());
        CorruptionConfig per = cfg;
        for (std::size_t i = 0; i < ds.paths.size(); ++i) {
            per.seed = derive_seed(cfg.seed, SeedStream::Corruption, static_cast<std::uint64_t>(ds.split), i);
            try {
                out.paths.push_back(corrupt_and_impute(ds.paths[i], per));
            } catch (const DataError& e) {
                throw DataError("sample " + std::to_string(i) + ": " + e.what());
            }
        }
        return out;
    }

}  // namespace sigres
