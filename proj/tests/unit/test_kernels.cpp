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
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "sigres/errors.hpp"
#include "sigres/kernels.hpp"
#include "sigres/signature.hpp"
#include "test_util.hpp"

using namespace sigres;

namespace {

    Path segment(const Eigen::VectorXd& v, std::size_t pieces = 1) {
        Eigen::MatrixXd m(static_cast<Eigen::Index>(pieces + 1), v.size());
        for (std::size_t i = 0; i <= pieces; ++i) {
            m.row(static_cast<Eigen::Index>(i)) = v.transpose() * (static_cast<double>(i) / static_cast<double>(pieces));
        }
        return Path::uniform(m);
    }

    // Oracle: direct summation of c^k / (k!)^2, independent of the library helper.
    double series(double c) {
        double s = 0.0;
        double term = 1.0;
        for (int k = 0; k <= 30; ++k) {
            if (k > 0) term *= c / (static_cast<double>(k) * static_cast<double>(k));
            s += term;
        }
        return s;
    }

    Path smooth_pair_x() {
        Eigen::MatrixXd v(20, 2);
        for (int i = 0; i < 20; ++i) {
            const double t = i / 19.0;
            v(i, 0) = 0.5 * t;
            v(i, 1) = 0.3 * std::sin(3.0 * t);
        }
        return Path::uniform(v);
    }

    Path smooth_pair_y() {
        Eigen::MatrixXd v(15, 2);
        for (int i = 0; i < 15; ++i) {
            const double t = i / 14.0;
            v(i, 0) = 0.4 * t * t;
            v(i, 1) = 0.35 * std::cos(2.0 * t);
        }
        return Path::uniform(v);
    }

}  // namespace

TEST_CASE("series oracle") {
    CHECK(series(1.0) == doctest::Approx(2.2795853).epsilon(1e-7));
    CHECK(series(-1.0) == doctest::Approx(0.2238908).epsilon(1e-6));
    for (double c : {-2.0, -0.3, 0.0, 0.7, 3.0}) CHECK(linear_kernel_series(c) == doctest::Approx(series(c)).epsilon(1e-15));
}

TEST_CASE("goursat solver on single segments") {
    const PDEGrid fine{32, 2};
    for (double c : {-1.0, 0.0, 1.0}) {
        const Path x = segment(Eigen::Vector2d(1.0, 0.0));
        const Path y = segment(Eigen::Vector2d(c, 0.5));
        CHECK(std::abs(sig_kernel_pde(x, y, fine) - series(c)) <= 1e-4);
    }
    SUBCASE("convergence order") {
        const Path x = segment(Eigen::Vector2d(1.0, 0.0));
        const Path y = segment(Eigen::Vector2d(1.0, 0.0));
        const double exact = series(1.0);
        for (int order : {1, 2}) {
            const double e4 = std::abs(sig_kernel_pde(x, y, {4, order}) - exact);
            const double e8 = std::abs(sig_kernel_pde(x, y, {8, order}) - exact);
            const double e16 = std::abs(sig_kernel_pde(x, y, {16, order}) - exact);
            const double target = order == 1 ? 2.0 : 4.0;
            for (double ratio : {e4 / e8, e8 / e16}) {
                CHECK(ratio >= target / 2.0);
                CHECK(ratio <= target * 2.0);
            }
        }
    }
    SUBCASE("subdividing a segment does not change the order-2 value much") {
        const Path x = segment(Eigen::Vector2d(0.6, -0.8), 5);
        const Path y = segment(Eigen::Vector2d(1.0, 0.2), 3);
        CHECK(std::abs(sig_kernel_pde(x, y, {16, 2}) - series(0.6 - 0.16)) <= 1e-5);
    }
}

TEST_CASE("goursat solver properties") {
    std::mt19937_64 rng(5);
    const Path x = test_util::random_path(3, 9, rng);
    const Path y = test_util::random_path(3, 6, rng);

    SUBCASE("constant path gives 1 everywhere") {
        const Path c = Path::uniform(Eigen::MatrixXd::Constant(5, 3, 2.0));
        const PDESolution s = sig_kernel_pde_surface(c, x, {4, 2});
        CHECK(s.value == 1.0);
        CHECK((s.surface.array() == 1.0).all());
    }
    SUBCASE("symmetry") {
        for (int order : {1, 2}) {
            const PDEGrid g{3, order};
            CHECK(std::abs(sig_kernel_pde(x, y, g) - sig_kernel_pde(y, x, g)) <= 1e-12);
        }
    }
    SUBCASE("surface boundary and shape") {
        const PDESolution s = sig_kernel_pde_surface(x, y, {4, 2});
        REQUIRE(s.surface.rows() == 9);
        REQUIRE(s.surface.cols() == 6);
        CHECK((s.surface.row(0).array() == 1.0).all());
        CHECK((s.surface.col(0).array() == 1.0).all());
        CHECK(s.surface(8, 5) == s.value);
    }
    SUBCASE("reparameterisation invariance") {
        const double k = sig_kernel_pde(x, y, {8, 2});
        CHECK(sig_kernel_pde(test_util::time_warped(x), y, {8, 2}) == k);
    }
    SUBCASE("grid convergence on a smooth pair") {
        const Path a = smooth_pair_x();
        const Path b = smooth_pair_y();
        const double k4 = sig_kernel_pde(a, b, {4, 2});
        const double k8 = sig_kernel_pde(a, b, {8, 2});
        const double k16 = sig_kernel_pde(a, b, {16, 2});
        const double ratio = std::abs(k4 - k8) / std::abs(k8 - k16);
        CHECK(ratio >= 2.0);
        CHECK(ratio <= 8.0);
    }
    SUBCASE("invalid grids") {
        CHECK_THROWS_AS(sig_kernel_pde(x, y, {0, 2}), ConfigError);
        CHECK_THROWS_AS(sig_kernel_pde(x, y, {1, 3}), ConfigError);
        CHECK_THROWS_AS(sig_kernel_pde(x, Path::uniform(Eigen::MatrixXd::Zero(3, 2)), {1, 2}), ShapeError);
    }
}

TEST_CASE("truncated signature kernel") {
    std::mt19937_64 rng(6);
    const Path x = test_util::random_path(2, 6, rng, 0.15);
    const Path y = test_util::random_path(2, 5, rng, 0.15);

    CHECK(sig_kernel_truncated(x, y, 0) == 1.0);
    double prev = 1.0;
    for (int m = 1; m <= 6; ++m) {
        const double k = sig_kernel_truncated(x, x, m);
        CHECK(k >= prev);
        prev = k;
    }
    // Oracle: signatures built level by level, inner product summed over all words.
    const TruncatedTensor sx = signature(x, 4);
    const TruncatedTensor sy = signature(y, 4);
    double manual = 0.0;
    for (int k = 0; k <= 4; ++k) {
        const auto a = sx.level_coeffs(k);
        const auto b = sy.level_coeffs(k);
        for (std::size_t i = 0; i < a.size(); ++i) manual += a[i] * b[i];
    }
    CHECK(sig_kernel_truncated(x, y, 4) == doctest::Approx(manual).epsilon(1e-14));

    SUBCASE("agreement with the PDE solver for short paths") {
        const double pde = sig_kernel_pde(x, y, {64, 2});
        CHECK(std::abs(sig_kernel_truncated(x, y, 8) - pde) <= 1e-4);
        const Path a = smooth_pair_x();
        const Path b = smooth_pair_y();
        REQUIRE(a.total_variation() <= 1.0);
        REQUIRE(b.total_variation() <= 1.0);
        CHECK(std::abs(sig_kernel_truncated(a, b, 10) - sig_kernel_pde(a, b, {64, 2})) <= 1e-6);
    }
}

TEST_CASE("RBF-lifted signature kernel") {
    const Path x = smooth_pair_x();
    const Path y = smooth_pair_y();

    SUBCASE("constant pair gives 1") {
        const Path c = Path::uniform(Eigen::MatrixXd::Constant(4, 2, 0.3));
        CHECK(rbf_lifted_sig_kernel(c, c, RFFSpec(2, 64, 1.0, 1)) == 1.0);
        CHECK(rbf_lifted_sig_kernel_exact(c, x, 1.0) == 1.0);
    }
    SUBCASE("finite-F lift approaches the closed form") {
        const double exact = rbf_lifted_sig_kernel_exact(x, y, 1.0, {4, 2});
        const double lifted = rbf_lifted_sig_kernel(x, y, RFFSpec(2, 8192, 1.0, 12), {4, 2});
        CHECK(std::abs(lifted - exact) <= 0.02 * std::abs(exact));
    }
    SUBCASE("Monte Carlo rate in F") {
        const double exact = rbf_lifted_sig_kernel_exact(x, y, 2.0, {2, 2});
        auto mean_err = [&](std::size_t f) {
            double e = 0.0;
            for (std::uint64_t s = 0; s < 12; ++s) e += std::abs(rbf_lifted_sig_kernel(x, y, RFFSpec(2, f, 2.0, 50 + s), {2, 2}) - exact);
            return e / 12.0;
        };
        CHECK(mean_err(4096) < mean_err(64) / 3.0);
    }
    SUBCASE("small increments: lifted kernel matches the PDE kernel of scaled paths") {
        // For tiny paths exp(-|u - v|^2 / 2) is locally linear, so the source term tends to s^2 <dx, dy>.
        const Path a = segment(Eigen::Vector2d(1e-3, 0.0));
        const Path b = segment(Eigen::Vector2d(1e-3, 1e-3));
        CHECK(rbf_lifted_sig_kernel_exact(a, b, 1.0) == doctest::Approx(series(1e-6)).epsilon(1e-10));
    }
}

TEST_CASE("gram matrices") {
    std::mt19937_64 rng(8);
    std::vector<Path> xs;
    for (int i = 0; i < 6; ++i) xs.push_back(test_util::random_path(2, 5 + static_cast<std::size_t>(i), rng));
    const PathKernel k = [](const Path& a, const Path& b) { return sig_kernel_pde(a, b, {2, 2}); };

    const GramMatrix g = gram_matrix(xs, k, "sigpde", 1);
    CHECK(g.values.rows() == 6);
    CHECK((g.values - g.values.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(g.is_psd());
    for (int i = 0; i < 6; ++i) {
        for (int j = 0; j < 6; ++j) CHECK(g.values(i, j) == k(xs[static_cast<std::size_t>(i)], xs[static_cast<std::size_t>(j)]));
    }
    CHECK(gram_matrix(xs, k, "sigpde", 3).values == g.values);

    const std::vector<Path> ys(xs.begin(), xs.begin() + 2);
    const GramMatrix r = gram_matrix(xs, ys, k, "sigpde", 2);
    CHECK(r.values.rows() == 6);
    CHECK(r.values.cols() == 2);
    CHECK(r.values == g.values.leftCols(2));

    GramMatrix bad = g;
    bad.values(0, 0) = -100.0;
    CHECK_FALSE(bad.is_psd());

    std::stringstream ss;
    write_gram(ss, r);
    CHECK(ss.str().rfind("#gram kind=sigpde n=6 m=2", 0) == 0);
    const GramMatrix back = read_gram(ss);
    CHECK(back.values == r.values);
    CHECK(back.kind == "sigpde");
}
