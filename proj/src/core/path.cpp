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


#include <cmath>
#include <string>

#include "sigres/errors.hpp"
#include "sigres/path.hpp"

namespace sigres {

    Path::Path(std::vector<double> times, Eigen::MatrixXd values)
        : times_(std::move(times)), values_(std::move(values)) {
        if (times_.size() < 2) throw DataError("path needs at least 2 samples, got " + std::to_string(times_.size()));
        if (static_cast<std::size_t>(values_.rows()) != times_.size()) {
            throw DataError("path has " + std::to_string(times_.size()) + " times but " +
                            std::to_string(values_.rows()) + " value rows");
        }
        if (values_.cols() < 1) throw DataError("path dimension must be >= 1");
        for (std::size_t i = 0; i < times_.size(); ++i) {
            if (!std::isfinite(times_[i])) throw DataError("non-finite time at sample " + std::to_string(i));
            if (i > 0 && !(times_[i] > times_[i - 1])) {
                throw DataError("times not strictly increasing at sample " + std::to_string(i));
            }
        }
        if (!values_.allFinite()) throw DataError("path contains non-finite values");
    }

    Path Path::uniform(Eigen::MatrixXd values) {
        const auto n = static_cast<std::size_t>(values.rows());
        std::vector<double> t(n);
        for (std::size_t i = 0; i < n; ++i) t[i] = n > 1 ? static_cast<double>(i) / static_cast<double>(n - 1) : 0.0;
        return Path(std::move(t), std::move(values));
    }

    Eigen::VectorXd Path::increment(std::size_t i) const {
        const auto r = static_cast<Eigen::Index>(i);
        return (values_.row(r + 1) - values_.row(r)).transpose();
    }

    Eigen::MatrixXd Path::increments() const {
        const Eigen::Index n = values_.rows() - 1;
        return values_.bottomRows(n) - values_.topRows(n);
    }

    Path Path::slice(std::size_t first, std::size_t last) const {
        if (first >= last || last >= length()) {
            throw DataError("invalid slice [" + std::to_string(first) + ", " + std::to_string(last) + "]");
        }
        std::vector<double> t(times_.begin() + static_cast<std::ptrdiff_t>(first),
                              times_.begin() + static_cast<std::ptrdiff_t>(last) + 1);
        return Path(std::move(t),
                    values_.middleRows(static_cast<Eigen::Index>(first), static_cast<Eigen::Index>(last - first + 1)));
    }

    double Path::total_variation() const {
        return increments().rowwise().norm().sum();
    }

    void LabeledDataset::validate() const {
        if (paths.empty()) throw DataError("no samples");
        if (paths.size() != labels.size()) {
            throw DataError(std::to_string(paths.size()) + " paths but " + std::to_string(labels.size()) + " labels");
        }
        if (num_classes < 2) throw DataError("dataset needs at least 2 classes, got " + std::to_string(num_classes));
        const std::size_t d = paths.front().dim();
        for (std::size_t i = 0; i < paths.size(); ++i) {
            if (paths[i].dim() != d) {
                throw DataError("sample " + std::to_string(i) + " has dimension " + std::to_string(paths[i].dim()) +
                                ", expected " + std::to_string(d));
            }
            if (labels[i] < 0 || labels[i] >= num_classes) {
                throw DataError("sample " + std::to_string(i) + " has unknown label " + std::to_string(labels[i]));
            }
        }
    }

}  // namespace sigres
