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
#include <string>

#include "sigres/errors.hpp"
#include "sigres/preprocess.hpp"

namespace sigres {

    void AugmentationConfig::validate() const {
        if (resample_length && *resample_length < 2) {
            throw ConfigError("resample_length", "must be >= 2, got " + std::to_string(*resample_length));
        }
    }

    MinMaxScaler MinMaxScaler::fit(const LabeledDataset& ds) {
        if (ds.paths.empty()) throw DataError("no samples");
        const auto d = static_cast<Eigen::Index>(ds.dim());
        MinMaxScaler s;
        s.lo = Eigen::RowVectorXd::Constant(d, std::numeric_limits<double>::infinity());
        s.hi = Eigen::RowVectorXd::Constant(d, -std::numeric_limits<double>::infinity());
        for (const Path& p : ds.paths) {
            s.lo = s.lo.cwiseMin(p.values().colwise().minCoeff());
            s.hi = s.hi.cwiseMax(p.values().colwise().maxCoeff());
        }
        return s;
    }

    Path MinMaxScaler::apply(const Path& p) const {
        if (p.values().cols() != lo.size()) throw ShapeError("MinMaxScaler: dimension mismatch");
        Eigen::MatrixXd v = p.values();
        for (Eigen::Index c = 0; c < v.cols(); ++c) {
            const double range = hi(c) - lo(c);
            if (range > 0.0) {
                v.col(c) = (2.0 * (v.col(c).array() - lo(c)) / range - 1.0).matrix();
            } else {
                v.col(c).setZero();
            }
        }
        return Path(p.times(), std::move(v));
    }

    Path resample_linear(const Path& p, std::size_t n) {
        if (n < 2) throw ConfigError("resample_length", "must be >= 2");
        const auto& t = p.times();
        const double t0 = t.front();
        const double t1 = t.back();
        std::vector<double> nt(n);
        Eigen::MatrixXd v(static_cast<Eigen::Index>(n), p.values().cols());
        std::size_t seg = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double s = i + 1 == n ? t1 : t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(n - 1);
            nt[i] = s;
            while (seg + 2 < t.size() && t[seg + 1] < s) ++seg;
            const double w = std::clamp((s - t[seg]) / (t[seg + 1] - t[seg]), 0.0, 1.0);
            const auto r = static_cast<Eigen::Index>(seg);
            v.row(static_cast<Eigen::Index>(i)) = (1.0 - w) * p.values().row(r) + w * p.values().row(r + 1);
        }
        return Path(std::move(nt), std::move(v));
    }

    Path add_time_channel(const Path& p) {
        const auto& t = p.times();
        Eigen::MatrixXd v(p.values().rows(), p.values().cols() + 1);
        v.leftCols(p.values().cols()) = p.values();
        const double span = t.back() - t.front();
        for (std::size_t i = 0; i < t.size(); ++i) {
            v(static_cast<Eigen::Index>(i), p.values().cols()) = (t[i] - t.front()) / span;
        }
        return Path(t, std::move(v));
    }

    Path lead_lag(const Path& p) {
        const auto l = static_cast<Eigen::Index>(p.length());
        const Eigen::Index d = p.values().cols();
        const auto& t = p.times();
        std::vector<double> nt(static_cast<std::size_t>(2 * l - 1));
        Eigen::MatrixXd v(2 * l - 1, 2 * d);
        for (Eigen::Index i = 0; i < l; ++i) {
            nt[static_cast<std::size_t>(2 * i)] = t[static_cast<std::size_t>(i)];
            v.block(2 * i, 0, 1, d) = p.values().row(i);
            v.block(2 * i, d, 1, d) = p.values().row(i);
            if (i + 1 < l) {
                nt[static_cast<std::size_t>(2 * i + 1)] =
                    0.5 * (t[static_cast<std::size_t>(i)] + t[static_cast<std::size_t>(i + 1)]);
                v.block(2 * i + 1, 0, 1, d) = p.values().row(i + 1);
                v.block(2 * i + 1, d, 1, d) = p.values().row(i);
            }
        }
        return Path(std::move(nt), std::move(v));
    }

    Path add_basepoint(const Path& p) {
        const auto& t = p.times();
        std::vector<double> nt;
        nt.reserve(t.size() + 1);
        nt.push_back(t[0] - (t[1] - t[0]));
        nt.insert(nt.end(), t.begin(), t.end());
        Eigen::MatrixXd v(p.values().rows() + 1, p.values().cols());
        v.row(0).setZero();
        v.bottomRows(p.values().rows()) = p.values();
        return Path(std::move(nt), std::move(v));
    }

    Preprocessor::Preprocessor(AugmentationConfig cfg, const LabeledDataset& fit_on) : cfg_(std::move(cfg)) {
        cfg_.validate();
        if (fit_on.paths.empty()) throw DataError("no samples");
        if (cfg_.minmax_scale) scaler_ = MinMaxScaler::fit(fit_on);
    }

    Path Preprocessor::apply(const Path& p) const {
        Path out = scaler_ ? scaler_->apply(p) : p;
        if (cfg_.resample_length) out = resample_linear(out, *cfg_.resample_length);
        if (cfg_.time_augment) out = add_time_channel(out);
        if (cfg_.lead_lag) out = lead_lag(out);
        if (cfg_.basepoint) out = add_basepoint(out);
        return out;
    }

    LabeledDataset Preprocessor::apply(const LabeledDataset& ds) const {
        if (ds.paths.empty()) throw DataError("no samples");
        LabeledDataset out;
        out.labels = ds.labels;
        out.num_classes = ds.num_classes;
        out.split = ds.split;
        out.paths.reserve(ds.paths.size());
        for (const Path& p : ds.paths) out.paths.push_back(apply(p));
        return out;
    }

    LabeledDataset preprocess(const LabeledDataset& ds, const AugmentationConfig& cfg) {
        return Preprocessor(cfg, ds).apply(ds);
    }

    std::pair<LabeledDataset, LabeledDataset> preprocess(const LabeledDataset& train, const LabeledDataset& test,
                                                         const AugmentationConfig& cfg) {
        const Preprocessor pre(cfg, train);
        return {pre.apply(train), pre.apply(test)};
    }

}  // namespace sigres
