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
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "reservoir_engine.hpp"
#include "sigres/errors.hpp"
#include "sigres/mc_kernel.hpp"
#include "sigres/seeding.hpp"

namespace sigres {

    ReducedDrives reduce_drives(const Eigen::MatrixXd& dx, const Eigen::MatrixXd& dy, double tolerance) {
        if (dx.cols() != dy.cols()) throw ShapeError("reduce_drives: column mismatch");
        Eigen::MatrixXd v(dx.rows() + dy.rows(), dx.cols());
        v << dx, dy;
        const Eigen::MatrixXd g = v * v.transpose();
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
        const Eigen::VectorXd& ev = es.eigenvalues();  // ascending
        const double top = ev.size() > 0 ? ev.maxCoeff() : 0.0;
        Eigen::Index keep = 0;
        for (Eigen::Index i = 0; i < ev.size(); ++i) {
            if (ev(i) > tolerance * top && ev(i) > 0.0) ++keep;
        }
        keep = std::max<Eigen::Index>(keep, 1);
        // Largest eigenvalue first.
        Eigen::MatrixXd c(v.rows(), keep);
        for (Eigen::Index r = 0; r < keep; ++r) {
            const Eigen::Index src = ev.size() - 1 - r;
            c.col(r) = es.eigenvectors().col(src) * std::sqrt(std::max(ev(src), 0.0));
        }
        return {c.topRows(dx.rows()), c.bottomRows(dy.rows())};
    }

    namespace {

        template <typename S>
        double run_seed(const McKernelConfig& cfg, std::size_t s, const Eigen::MatrixXd& drive_x,
                        const Eigen::MatrixXd& drive_y, const std::shared_ptr<const LyndonBasis>& basis) {
            ReservoirSpec spec = cfg.spec;
            spec.seed = derive_seed(cfg.spec.seed, SeedStream::MonteCarlo, s);
            const std::size_t count = spec.variant == Variant::RFCDE ? static_cast<std::size_t>(drive_x.cols())
                                                                      : spec.matrix_count();
            auto draws = detail::draw_standard<S>(derive_seed(spec.seed, SeedStream::ReservoirMatrices), spec.width, count);
            const detail::Operators<S> ops =
                detail::make_operators<S>(spec, std::move(draws.letters), draws.biases, basis.get());
            const detail::Mat<S> dx = drive_x.cast<S>();
            const detail::Mat<S> dy = drive_y.cast<S>();
            detail::Mat<S> z = (static_cast<S>(spec.sigma_0) * draws.z0).replicate(1, 2);
            detail::run_lockstep<S>(ops, Activation::Identity, spec.sigma_a, {&dx, &dy}, z,
                                    [](std::size_t, const detail::Mat<S>&) {});
            const Eigen::VectorXd zx = z.col(0).template cast<double>();
            const Eigen::VectorXd zy = z.col(1).template cast<double>();
            return zx.dot(zy) / static_cast<double>(spec.width);
        }

    }  // namespace

    McKernelEstimate mc_kernel_estimate(const McKernelConfig& cfg, const Path& x, const Path& y) {
        cfg.spec.validate();
        if (cfg.spec.activation != Activation::Identity) {
            throw ConfigError("activation", "the Monte Carlo kernel limit requires the identity activation");
        }
        if (cfg.num_seeds < 2) throw ConfigError("num_seeds", "must be >= 2");
        if (x.dim() != cfg.spec.input_dim || y.dim() != cfg.spec.input_dim) {
            throw ShapeError("mc_kernel_estimate: paths do not match input_dim=" + std::to_string(cfg.spec.input_dim));
        }

        McKernelEstimate est;
        est.samples.assign(cfg.num_seeds, 0.0);
        std::shared_ptr<const LyndonBasis> basis;
        Eigen::MatrixXd drive_x;
        Eigen::MatrixXd drive_y;
        const bool per_seed_drive = cfg.spec.variant == Variant::RFCDE && !cfg.shared_rff;

        auto rff_drives = [&](std::uint64_t rff_seed, Eigen::MatrixXd& cx, Eigen::MatrixXd& cy) {
            const RFFSpec rff(cfg.spec.input_dim, cfg.spec.num_rff, cfg.spec.frequency_scale, rff_seed);
            const ReducedDrives red =
                reduce_drives(lift_path(rff, x).increments(), lift_path(rff, y).increments(), cfg.rank_tolerance);
            cx = red.cx;
            cy = red.cy;
        };

        switch (cfg.spec.variant) {
            case Variant::RCDE:
                drive_x = x.increments();
                drive_y = y.increments();
                break;
            case Variant::RFCDE:
                if (!per_seed_drive) {
                    rff_drives(derive_seed(cfg.spec.seed, SeedStream::RffFrequencies), drive_x, drive_y);
                    est.rank = static_cast<std::size_t>(drive_x.cols());
                }
                break;
            case Variant::RRDE: {
                // Window log-signatures do not depend on the random draws.
                ReservoirSpec small = cfg.spec;
                small.width = 1;
                const ReservoirState st(small);
                drive_x = st.drive(x);
                drive_y = st.drive(y);
                basis = LyndonBasis::get(static_cast<int>(cfg.spec.input_dim), cfg.spec.level);
                break;
            }
        }

        auto one = [&](std::size_t s) {
            Eigen::MatrixXd dx = drive_x;
            Eigen::MatrixXd dy = drive_y;
            if (per_seed_drive) {
                const std::uint64_t seed_s = derive_seed(cfg.spec.seed, SeedStream::MonteCarlo, s);
                rff_drives(derive_seed(seed_s, SeedStream::RffFrequencies), dx, dy);
            }
            est.samples[s] = cfg.single_precision ? run_seed<float>(cfg, s, dx, dy, basis)
                                                  : run_seed<double>(cfg, s, dx, dy, basis);
        };

        const std::size_t t = std::max<std::size_t>(1, std::min(cfg.threads, cfg.num_seeds));
        if (t == 1) {
            for (std::size_t s = 0; s < cfg.num_seeds; ++s) one(s);
        } else {
            std::atomic<std::size_t> next{0};
            std::exception_ptr err;
            std::mutex mu;
            std::vector<std::thread> pool;
            for (std::size_t w = 0; w < t; ++w) {
                pool.emplace_back([&]() {
                    for (std::size_t s = next++; s < cfg.num_seeds; s = next++) {
                        try {
                            one(s);
                        } catch (...) {
                            std::lock_guard<std::mutex> lock(mu);
                            if (!err) err = std::current_exception();
                        }
                    }
                });
            }
            for (auto& th : pool) th.join();
            if (err) std::rethrow_exception(err);
        }

        // Seed-order reduction keeps the result independent of the thread count.
        double sum = 0.0;
        for (double v : est.samples) sum += v;
        est.mean = sum / static_cast<double>(cfg.num_seeds);
        double ss = 0.0;
        for (double v : est.samples) ss += (v - est.mean) * (v - est.mean);
        est.std_error = std::sqrt(ss / static_cast<double>(cfg.num_seeds - 1) / static_cast<double>(cfg.num_seeds));
        return est;
    }

}  // namespace sigres
