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
 // Piecewise-linear paths and labelled datasets of them.


#ifndef SIGRES_PATH_HPP
#define SIGRES_PATH_HPP

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace sigres {

    /* Samples (t_i, x_i), i = 0..l-1, of a piecewise-linear path in R^d.
     *
     * Invariants: l >= 2, times strictly increasing, every value finite. */
    class Path {
    public:
        /* `values` is l x d, one sample per row. Throws DataError if an invariant is violated. */
        Path(std::vector<double> times, Eigen::MatrixXd values);

        /* Samples at equispaced times on [0, 1]. */
        static Path uniform(Eigen::MatrixXd values);

        std::size_t length() const noexcept { return times_.size(); }
        std::size_t dim() const noexcept { return static_cast<std::size_t>(values_.cols()); }

        const std::vector<double>& times() const noexcept { return times_; }
        const Eigen::MatrixXd& values() const noexcept { return values_; }

        /* x_{i+1} - x_i. */
        Eigen::VectorXd increment(std::size_t i) const;

        /* (l-1) x d matrix of all increments. */
        Eigen::MatrixXd increments() const;

        /* Samples first..last inclusive. */
        Path slice(std::size_t first, std::size_t last) const;

        /* Sum of Euclidean segment lengths. */
        double total_variation() const;

    private:
        std::vector<double> times_;
        Eigen::MatrixXd values_;
    };

    enum class Split { Train, Test };

    struct LabeledDataset {
        std::vector<Path> paths;
        std::vector<int> labels;
        int num_classes = 0;
        Split split = Split::Train;

        std::size_t size() const noexcept { return paths.size(); }
        std::size_t dim() const noexcept { return paths.empty() ? 0 : paths.front().dim(); }

        /* Throws DataError unless sizes agree, labels lie in [0, C), C >= 2 and dims are shared. */
        void validate() const;
    };

}  // namespace sigres

#endif  // SIGRES_PATH_HPP
