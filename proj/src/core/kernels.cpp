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
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <mutex>
#include <thread>

#include "sigres/dataset_io.hpp"
#include "sigres/errors.hpp"
#include "sigres/kernels.hpp"
#include "sigres/signature.hpp"

namespace sigres {

    void PDEGrid::validate() const {
        if (refinement < 1) throw ConfigError("refinement", "must be >= 1");
        if (order != 1 && order != 2) throw ConfigError("order", "must be 1 or 2");
    }

    PDESolution goursat_solve(const Eigen::MatrixXd& inc, const PDEGrid& grid, bool keep_surface) {
        grid.validate();
        if (inc.rows() < 1 || inc.cols() < 1) throw ShapeError("goursat_solve: paths need at least 2 samples");
        const Eigen::Index nx = inc.rows();
        const Eigen::Index ny = inc.cols();
        const Eigen::Index r = grid.refinement;
        const Eigen::Index cols = ny * r + 1;
        const double inv_r2 = 1.0 / static_cast<double>(r * r);

        PDESolution sol;
        if (keep_surface) {
            sol.surface.resize(nx + 1, ny + 1);
            sol.surface.row(0).setOnes();
        }

        // Per-column coefficients of the current input row, then a sweep over two refined rows.
        std::vector<double> prev(static_cast<std::size_t>(cols), 1.0);
        std::vector<double> cur(static_cast<std::size_t>(cols));
        std::vector<double> a(static_cast<std::size_t>(ny));
        std::vector<double> b(static_cast<std::size_t>(ny));
        for (Eigen::Index i = 0; i < nx; ++i) {
            for (Eigen::Index j = 0; j < ny; ++j) {
                const double c = inc(i, j) * inv_r2;
                if (grid.order == 2) {
                    a[static_cast<std::size_t>(j)] = 1.0 + 0.5 * c + c * c / 12.0;
                    b[static_cast<std::size_t>(j)] = 1.0 - c * c / 12.0;
                } else {
                    a[static_cast<std::size_t>(j)] = 1.0;
                    b[static_cast<std::size_t>(j)] = 1.0 - c;
                }
            }
            for (Eigen::Index sub = 0; sub < r; ++sub) {
                cur[0] = 1.0;
                for (Eigen::Index j = 0; j < ny; ++j) {
                    const double aj = a[static_cast<std::size_t>(j)];
                    const double bj = b[static_cast<std::size_t>(j)];
                    for (Eigen::Index q = j * r; q < (j + 1) * r; ++q) {
                        const auto u = static_cast<std::size_t>(q);
                        cur[u + 1] = (cur[u] + prev[u + 1]) * aj - prev[u] * bj;
                    }
                }
                std::swap(prev, cur);
            }
            if (keep_surface) {
                for (Eigen::Index j = 0; j <= ny; ++j) sol.surface(i + 1, j) = prev[static_cast<std::size_t>(j * r)];
            }
        }
        sol.value = prev.back();
        if (!std::isfinite(sol.value)) throw NumericalError("signature kernel PDE produced a non-finite value");
        return sol;
    }

    namespace {
        Eigen::MatrixXd increment_gram(const Path& x, const Path& y) {
            if (x.dim() != y.dim()) {
                throw ShapeError("signature kernel: paths have d=" + std::to_string(x.dim()) + " and d=" +
                                 std::to_string(y.dim()));
            }
            return x.increments() * y.increments().transpose();
        }
    }  // namespace

    double sig_kernel_pde(const Path& x, const Path& y, const PDEGrid& grid) {
        return goursat_solve(increment_gram(x, y), grid).value;
    }

    PDESolution sig_kernel_pde_surface(const Path& x, const Path& y, const PDEGrid& grid) {
        return goursat_solve(increment_gram(x, y), grid, true);
    }

    double sig_kernel_truncated(const Path& x, const Path& y, int level) {
        if (level < 0) throw ShapeError("truncation level must be >= 0");
        if (x.dim() != y.dim()) throw ShapeError("signature kernel: dimension mismatch");
        if (level == 0) return 1.0;
        return inner_product(signature(x, level), signature(y, level));
    }

    double rbf_lifted_sig_kernel(const Path& x, const Path& y, const RFFSpec& rff, const PDEGrid& grid) {
        return sig_kernel_pde(lift_path(rff, x), lift_path(rff, y), grid);
    }

    double rbf_lifted_sig_kernel_exact(const Path& x, const Path& y, double frequency_scale, const PDEGrid& grid) {
        if (x.dim() != y.dim()) throw ShapeError("signature kernel: dimension mismatch");
        if (!(frequency_scale > 0.0)) throw ConfigError("frequency_scale", "must be > 0");
        const Eigen::Index lx = static_cast<Eigen::Index>(x.length());
        const Eigen::Index ly = static_cast<Eigen::Index>(y.length());
        const double s2 = frequency_scale * frequency_scale;
        Eigen::MatrixXd k(lx, ly);
        for (Eigen::Index i = 0; i < lx; ++i) {
            for (Eigen::Index j = 0; j < ly; ++j) {
                k(i, j) = std::exp(-0.5 * s2 * (x.values().row(i) - y.values().row(j)).squaredNorm());
            }
        }
        const Eigen::MatrixXd inc = k.bottomRightCorner(lx - 1, ly - 1) - k.bottomLeftCorner(lx - 1, ly - 1) -
                                    k.topRightCorner(lx - 1, ly - 1) + k.topLeftCorner(lx - 1, ly - 1);
        return goursat_solve(inc, grid).value;
    }

    double linear_kernel_series(double c, int terms) {
        double term = 1.0;
        double sum = 1.0;
        for (int k = 1; k <= terms; ++k) {
            term *= c / (static_cast<double>(k) * static_cast<double>(k));
            sum += term;
        }
        return sum;
    }

    bool GramMatrix::is_psd() const {
        if (values.rows() != values.cols()) throw ShapeError("is_psd: Gram matrix is not square");
        if (values.size() == 0) return true;
        const Eigen::MatrixXd sym = 0.5 * (values + values.transpose());
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
        return es.eigenvalues().minCoeff() >= -1e-8 * std::abs(values.trace());
    }

    namespace {
        template <typename Fn>
        void parallel_for(std::size_t n, std::size_t threads, Fn&& fn) {
            const std::size_t t = std::max<std::size_t>(1, std::min(threads, n));
            if (t == 1) {
                for (std::size_t i = 0; i < n; ++i) fn(i);
                return;
            }
            std::atomic<std::size_t> next{0};
            std::exception_ptr err;
            std::mutex mu;
            std::vector<std::thread> pool;
            for (std::size_t w = 0; w < t; ++w) {
                pool.emplace_back([&]() {
                    for (std::size_t i = next++; i < n; i = next++) {
                        try {
                            fn(i);
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
    }  // namespace

    GramMatrix gram_matrix(const std::vector<Path>& xs, const std::vector<Path>& ys, const PathKernel& k,
                           const std::string& kind, std::size_t threads) {
        GramMatrix g;
        g.kind = kind;
        g.values.resize(static_cast<Eigen::Index>(xs.size()), static_cast<Eigen::Index>(ys.size()));
        const std::size_t total = xs.size() * ys.size();
        parallel_for(total, threads, [&](std::size_t p) {
            const std::size_t i = p / ys.size();
            const std::size_t j = p % ys.size();
            g.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = k(xs[i], ys[j]);
        });
        return g;
    }

    GramMatrix gram_matrix(const std::vector<Path>& xs, const PathKernel& k, const std::string& kind,
                           std::size_t threads) {
        GramMatrix g;
        g.kind = kind;
        const std::size_t n = xs.size();
        g.values.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        std::vector<std::pair<std::size_t, std::size_t>> pairs;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i; j < n; ++j) pairs.emplace_back(i, j);
        }
        parallel_for(pairs.size(), threads, [&](std::size_t p) {
            const auto [i, j] = pairs[p];
            const double v = k(xs[i], xs[j]);
            g.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
            g.values(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
        });
        return g;
    }

    void write_gram(std::ostream& out, const GramMatrix& g) {
        out << "#gram kind=" << g.kind << " n=" << g.values.rows() << " m=" << g.values.cols() << '\n';
        std::string row;
        for (Eigen::Index i = 0; i < g.values.rows(); ++i) {
            row.clear();
            for (Eigen::Index j = 0; j < g.values.cols(); ++j) {
                if (j > 0) row += ' ';
                row += format_double(g.values(i, j));
            }
            row += '\n';
            out << row;
        }
    }

    GramMatrix read_gram(std::istream& in) {
        std::string line;
        if (!std::getline(in, line)) throw DataError("empty gram file", 1);
        std::istringstream hs(line);
        std::string tag;
        std::string kind;
        std::string n;
        std::string m;
        hs >> tag >> kind >> n >> m;
        if (tag != "#gram" || kind.rfind("kind=", 0) != 0 || n.rfind("n=", 0) != 0 || m.rfind("m=", 0) != 0) {
            throw DataError("malformed gram header, expected '#gram kind=<str> n=<int> m=<int>'", 1);
        }
        GramMatrix g;
        g.kind = kind.substr(5);
        std::size_t rows = 0;
        std::size_t cols = 0;
        try {
            rows = std::stoul(n.substr(2));
            cols = std::stoul(m.substr(2));
        } catch (const std::logic_error&) {
            throw DataError("malformed gram header", 1);
        }
        g.values.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
        for (std::size_t i = 0; i < rows; ++i) {
            const std::size_t line_no = i + 2;
            if (!std::getline(in, line)) throw DataError("expected " + std::to_string(rows) + " rows", line_no);
            std::istringstream ls(line);
            std::string tok;
            std::size_t j = 0;
            while (ls >> tok) {
                double v = 0.0;
                if (j >= cols || !parse_double(tok, v)) throw DataError("bad gram row", line_no);
                g.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j++)) = v;
            }
            if (j != cols) throw DataError("ragged gram row", line_no);
        }
        return g;
    }

}  // namespace sigres
