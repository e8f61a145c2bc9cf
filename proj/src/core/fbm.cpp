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
#include <complex>
#include <mutex>
#include <string>

#include <boost/random/normal_distribution.hpp>
#include <fftw3.h>

#include "sigres/errors.hpp"
#include "sigres/fbm.hpp"
#include "sigres/logging.hpp"
#include "sigres/seeding.hpp"

namespace sigres {

    namespace {

        // The FFTW planner is not thread safe; execution on fresh arrays is.
        std::mutex fftw_planner_mutex;

        struct FftwBuffer {
            explicit FftwBuffer(std::size_t n)
                : data(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))) {
                if (data == nullptr) throw std::bad_alloc();
            }
            ~FftwBuffer() { fftw_free(data); }
            FftwBuffer(const FftwBuffer&) = delete;
            FftwBuffer& operator=(const FftwBuffer&) = delete;
            fftw_complex* data;
        };

        void fft_inplace(fftw_complex* buf, int n) {
            fftw_plan plan;
            {
                std::lock_guard<std::mutex> lock(fftw_planner_mutex);
                plan = fftw_plan_dft_1d(n, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
            }
            fftw_execute(plan);
            std::lock_guard<std::mutex> lock(fftw_planner_mutex);
            fftw_destroy_plan(plan);
        }

        /* Autocovariance of fractional Gaussian noise with step dt at lag k. */
        double fgn_autocov(double hurst, double dt, std::size_t k) {
            const double h2 = 2.0 * hurst;
            const double kk = static_cast<double>(k);
            return 0.5 * std::pow(dt, h2) *
                   (std::pow(kk + 1.0, h2) - 2.0 * std::pow(kk, h2) + std::pow(std::abs(kk - 1.0), h2));
        }

        /* Square roots of the circulant eigenvalues scaled by 1/(2n), or empty if the embedding is not PSD. */
        std::vector<double> davies_harte_weights(double hurst, std::size_t n, double dt) {
            const std::size_t m = 2 * n;
            FftwBuffer buf(m);
            for (std::size_t k = 0; k <= n; ++k) {
                buf.data[k][0] = fgn_autocov(hurst, dt, k);
                buf.data[k][1] = 0.0;
            }
            for (std::size_t k = n + 1; k < m; ++k) {
                buf.data[k][0] = buf.data[m - k][0];
                buf.data[k][1] = 0.0;
            }
            fft_inplace(buf.data, static_cast<int>(m));
            double max_ev = 0.0;
            for (std::size_t k = 0; k < m; ++k) max_ev = std::max(max_ev, buf.data[k][0]);
            std::vector<double> w(m);
            for (std::size_t k = 0; k < m; ++k) {
                double ev = buf.data[k][0];
                if (ev < -1e-10 * max_ev) return {};
                w[k] = std::sqrt(std::max(ev, 0.0) / static_cast<double>(m));
            }
            return w;
        }

        void fill_davies_harte(const std::vector<double>& weights, std::size_t n, Rng& rng, Eigen::Ref<Eigen::VectorXd> incr) {
            const std::size_t m = weights.size();
            FftwBuffer buf(m);
            boost::random::normal_distribution<double> normal;
            for (std::size_t k = 0; k < m; ++k) {
                buf.data[k][0] = weights[k] * normal(rng);
                buf.data[k][1] = weights[k] * normal(rng);
            }
            fft_inplace(buf.data, static_cast<int>(m));
            for (std::size_t k = 0; k < n; ++k) incr(static_cast<Eigen::Index>(k)) = buf.data[k][0];
        }

    }  // namespace

    double fbm_covariance(double hurst, double s, double t) {
        const double h2 = 2.0 * hurst;
        return 0.5 * (std::pow(s, h2) + std::pow(t, h2) - std::pow(std::abs(t - s), h2));
    }

    Path generate_fbm(double hurst, std::size_t length, std::size_t dim, std::uint64_t seed, FbmMethod method) {
        if (!(hurst > 0.0 && hurst < 1.0)) throw ConfigError("hurst", "must lie in (0, 1), got " + std::to_string(hurst));
        if (length < 2) throw ConfigError("length", "fBm needs at least 2 samples");
        if (dim < 1) throw ConfigError("dim", "must be >= 1");

        const std::size_t n = length - 1;
        const double dt = 1.0 / static_cast<double>(n);
        Rng rng(seed);
        Eigen::MatrixXd values = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(length), static_cast<Eigen::Index>(dim));

        std::vector<double> weights;
        if (method != FbmMethod::Cholesky) {
            weights = davies_harte_weights(hurst, n, dt);
            if (weights.empty()) {
                if (method == FbmMethod::DaviesHarte) {
                    throw NumericalError("Davies-Harte circulant embedding has negative eigenvalues for H=" +
                                         std::to_string(hurst));
                }
                log_warning("Davies-Harte embedding not PSD for H=" + std::to_string(hurst) + ", l=" +
                            std::to_string(length) + "; falling back to Cholesky");
            }
        }

        if (!weights.empty()) {
            Eigen::VectorXd incr(static_cast<Eigen::Index>(n));
            for (std::size_t c = 0; c < dim; ++c) {
                fill_davies_harte(weights, n, rng, incr);
                double acc = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    acc += incr(static_cast<Eigen::Index>(k));
                    values(static_cast<Eigen::Index>(k + 1), static_cast<Eigen::Index>(c)) = acc;
                }
            }
        } else {
            const auto nn = static_cast<Eigen::Index>(n);
            Eigen::MatrixXd cov(nn, nn);
            for (Eigen::Index i = 0; i < nn; ++i) {
                for (Eigen::Index j = 0; j < nn; ++j) {
                    cov(i, j) = fbm_covariance(hurst, static_cast<double>(i + 1) * dt, static_cast<double>(j + 1) * dt);
                }
            }
            Eigen::LLT<Eigen::MatrixXd> llt(cov);
            if (llt.info() != Eigen::Success) throw NumericalError("fBm covariance is not positive definite");
            boost::random::normal_distribution<double> normal;
            Eigen::VectorXd z(nn);
            for (std::size_t c = 0; c < dim; ++c) {
                for (Eigen::Index k = 0; k < nn; ++k) z(k) = normal(rng);
                values.col(static_cast<Eigen::Index>(c)).tail(nn) = llt.matrixL() * z;
            }
        }
        return Path::uniform(std::move(values));
    }

    const std::vector<double>& hurst_classes() {
        static const std::vector<double> hs = {0.05, 0.15, 0.25, 0.35, 0.45, 0.55, 0.65, 0.75};
        return hs;
    }

    Path standardize_channels(const Path& p) {
        Eigen::MatrixXd v = p.values();
        const double n = static_cast<double>(v.rows());
        for (Eigen::Index c = 0; c < v.cols(); ++c) {
            const double mean = v.col(c).sum() / n;
            v.col(c).array() -= mean;
            // Second pass on centred data keeps the mean at rounding level.
            v.col(c).array() -= v.col(c).sum() / n;
            const double var = v.col(c).squaredNorm() / n;
            if (var > 0.0) {
                v.col(c) /= std::sqrt(var);
            } else {
                v.col(c).setZero();
            }
        }
        return Path(p.times(), std::move(v));
    }

    std::pair<LabeledDataset, LabeledDataset> hurst_dataset(HurstVariant variant, std::size_t n_train,
                                                            std::size_t n_test, std::size_t length, std::size_t dim,
                                                            std::uint64_t seed) {
        if (n_train < 1) throw ConfigError("n_train", "must be >= 1");
        if (n_test < 1) throw ConfigError("n_test", "must be >= 1");
        const auto& hs = hurst_classes();
        const int num_classes = static_cast<int>(hs.size());

        auto build = [&](std::size_t per_class, Split split, SeedStream stream) {
            LabeledDataset ds;
            ds.num_classes = num_classes;
            ds.split = split;
            ds.paths.reserve(per_class * hs.size());
            for (int k = 0; k < num_classes; ++k) {
                for (std::size_t i = 0; i < per_class; ++i) {
                    Path p = generate_fbm(hs[static_cast<std::size_t>(k)], length, dim,
                                          derive_seed(seed, stream, static_cast<std::uint64_t>(k), i));
                    ds.paths.push_back(variant == HurstVariant::V2 ? standardize_channels(p) : std::move(p));
                    ds.labels.push_back(k);
                }
            }
            return ds;
        };
        return {build(n_train, Split::Train, SeedStream::FbmTrain), build(n_test, Split::Test, SeedStream::FbmTest)};
    }

}  // namespace sigres
