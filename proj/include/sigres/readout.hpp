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
 // Linear readout on frozen features: per-column normalisation, one-vs-rest ridge regression, metrics.


#ifndef SIGRES_READOUT_HPP
#define SIGRES_READOUT_HPP

#include <cstddef>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace sigres {

    /* Per-column standardisation with statistics frozen from the training rows. Columns whose population
     * standard deviation is zero map to 0. A disabled normaliser is the identity. */
    struct Normalizer {
        bool enabled = false;
        Eigen::RowVectorXd mean;
        Eigen::RowVectorXd inv_std;  // 0 for constant columns

        static Normalizer fit(const Eigen::MatrixXd& x, bool enabled = true);
        Eigen::MatrixXd apply(const Eigen::MatrixXd& x) const;
    };

    struct RidgeModel {
        Eigen::MatrixXd weights;  // C x N
        Eigen::VectorXd intercepts;  // C
        double lambda = 1.0;
        Normalizer normalizer;

        std::size_t num_classes() const noexcept { return static_cast<std::size_t>(weights.rows()); }
        std::size_t num_features() const noexcept { return static_cast<std::size_t>(weights.cols()); }
    };

    /* One-vs-rest least squares on {0, 1} targets with penalty lambda |W|^2 (intercepts unpenalised).
     * Solved through the N x N normal equations when n >= N, otherwise through the n x n dual system; both are
     * Cholesky (LDLT) solves of centred data, so the result does not depend on row order beyond rounding.
     *
     * Throws ConfigError for lambda <= 0, DataError for non-finite features or fewer than two distinct labels,
     * ShapeError when rows and labels disagree. */
    RidgeModel fit_ridge(const Eigen::MatrixXd& features, const std::vector<int>& labels, int num_classes,
                         double lambda, bool normalize = true);

    /* Class scores, samples x C. */
    Eigen::MatrixXd decision_scores(const RidgeModel& model, const Eigen::MatrixXd& features);

    /* Argmax of the scores; ties go to the lowest class index. */
    std::vector<int> predict(const RidgeModel& model, const Eigen::MatrixXd& features);

    /* #ridge C=<int> N=<int> lambda=<float> normalize=<0|1>
     * then C lines "intercept w_1 ... w_N", then "mean ..." and "inv_std ..." lines when normalize=1. */
    void save_model(std::ostream& out, const RidgeModel& model);
    RidgeModel load_model(std::istream& in);

    struct Metrics {
        double accuracy = 0.0;
        std::vector<double> per_class;  // NaN for classes absent from the test set
        Eigen::MatrixXi confusion;  // row = true class, column = predicted class
        std::map<std::string, double> timings;  // seconds per stage
    };

    Metrics compute_metrics(const std::vector<int>& truth, const std::vector<int>& predicted, int num_classes);

}  // namespace sigres

#endif  // SIGRES_READOUT_HPP
