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

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "sigres/errors.hpp"
#include "sigres/mc_kernel.hpp"
#include "sigres/reservoir.hpp"
#include "sigres/rff.hpp"
#include "sigres/seeding.hpp"
#include "sigres/signature.hpp"
#include "test_util.hpp"

using namespace sigres;

namespace {

    ReservoirSpec make_spec(Variant v, std::size_t n, std::size_t d, std::uint64_t seed = 1) {
        ReservoirSpec s;
        s.variant = v;
        s.width = n;
        s.input_dim = d;
        s.seed = seed;
        s.num_rff = 6;
        s.level = 2;
        s.chunk_size = 3;
        return s;
    }

    double rel_diff(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
        return (a - b).cwiseAbs().maxCoeff() / std::max(1.0, b.cwiseAbs().maxCoeff());
    }

    Path constant_path(std::size_t d, std::size_t l, double value = 0.7) {
        return Path::uniform(Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(d), value));
    }

}  // namespace

TEST_CASE("rff_map") {
    const RFFSpec spec(3, 4096, 1.0, 42);
    std::mt19937_64 rng(1);
    std::normal_distribution<double> n01;

    SUBCASE("unit norm and self inner product") {
        for (int i = 0; i < 20; ++i) {
            const Eigen::Vector3d x(n01(rng), n01(rng), n01(rng));
            const Eigen::VectorXd phi = spec.map(x);
            CHECK(phi.size() == 8192);
            CHECK(std::abs(phi.squaredNorm() - 1.0) <= 1e-12);
        }
    }
    SUBCASE("inner products approximate the Gaussian kernel") {
        for (int i = 0; i < 20; ++i) {
            const Eigen::Vector3d x(n01(rng), n01(rng), n01(rng));
            const Eigen::Vector3d y = x + 0.7 * Eigen::Vector3d(n01(rng), n01(rng), n01(rng));
            const double exact = std::exp(-0.5 * (x - y).squaredNorm());
            CHECK(std::abs(spec.map(x).dot(spec.map(y)) - exact) <= 3.0 / std::sqrt(4096.0));
        }
    }
    SUBCASE("shift invariance with shared frequencies") {
        for (int i = 0; i < 20; ++i) {
            const Eigen::Vector3d x(n01(rng), n01(rng), n01(rng));
            const Eigen::Vector3d y(n01(rng), n01(rng), n01(rng));
            const Eigen::Vector3d c(n01(rng), n01(rng), n01(rng));
            CHECK(std::abs(spec.map(x + c).dot(spec.map(y + c)) - spec.map(x).dot(spec.map(y))) <= 1e-12);
        }
    }
    SUBCASE("interleaved cos/sin layout") {
        const Eigen::Vector3d x(0.3, -0.2, 0.5);
        const Eigen::VectorXd phi = spec.map(x);
        const double a = spec.frequencies().row(7).dot(x);
        CHECK(phi(14) == doctest::Approx(std::cos(a) / 64.0).epsilon(1e-14));
        CHECK(phi(15) == doctest::Approx(std::sin(a) / 64.0).epsilon(1e-14));
    }
    SUBCASE("frequency scale matches the kernel bandwidth") {
        const RFFSpec wide(2, 8192, 0.5, 3);
        const Eigen::Vector2d x(0.0, 0.0);
        const Eigen::Vector2d y(1.5, -1.0);
        const double exact = rbf_kernel(x, y, 1.0 / 0.5);
        CHECK(std::abs(wide.map(x).dot(wide.map(y)) - exact) <= 3.0 / std::sqrt(8192.0));
    }
    SUBCASE("same seed, same frequencies") {
        CHECK(RFFSpec(3, 16, 2.0, 9).frequencies() == RFFSpec(3, 16, 2.0, 9).frequencies());
        CHECK(RFFSpec(3, 16, 2.0, 9).frequencies() != RFFSpec(3, 16, 2.0, 10).frequencies());
    }
    SUBCASE("invalid specs") {
        CHECK_THROWS_AS(RFFSpec(3, 0, 1.0, 0), ConfigError);
        CHECK_THROWS_AS(RFFSpec(3, 4, 0.0, 0), ConfigError);
        CHECK_THROWS_AS(spec.map(Eigen::Vector2d(1, 2)), ShapeError);
    }
}

TEST_CASE("lift_path") {
    std::mt19937_64 rng(2);
    const RFFSpec spec(2, 64, 1.3, 5);

    SUBCASE("constant path lifts to a constant path") {
        const Path lifted = lift_path(spec, constant_path(2, 6));
        CHECK(lifted.increments().cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("rows have unit norm and times are kept") {
        const Path p = test_util::random_path(2, 2, rng);
        const Path lifted = lift_path(spec, p);
        CHECK(lifted.length() == 2);
        CHECK(lifted.times() == p.times());
        for (Eigen::Index i = 0; i < 2; ++i) CHECK(std::abs(lifted.values().row(i).squaredNorm() - 1.0) <= 1e-12);
    }
    SUBCASE("lifted increment inner products converge to the kernel double difference") {
        const Path x = test_util::random_path(2, 6, rng, 0.8);
        const Path y = test_util::random_path(2, 6, rng, 0.8);
        // Oracle: F -> infinity limit of <dX_i, dY_j> is the double difference of exp(-s^2 |u - v|^2 / 2).
        Eigen::MatrixXd exact(5, 5);
        for (Eigen::Index i = 0; i < 5; ++i) {
            for (Eigen::Index j = 0; j < 5; ++j) {
                auto k = [&](Eigen::Index a, Eigen::Index b) {
                    return std::exp(-0.5 * 1.69 * (x.values().row(a) - y.values().row(b)).squaredNorm());
                };
                exact(i, j) = k(i + 1, j + 1) - k(i + 1, j) - k(i, j + 1) + k(i, j);
            }
        }
        auto mean_err = [&](std::size_t f) {
            double e = 0.0;
            for (std::uint64_t s = 0; s < 16; ++s) {
                const RFFSpec r(2, f, 1.3, 100 + s);
                e += (lift_path(r, x).increments() * lift_path(r, y).increments().transpose() - exact).cwiseAbs().mean();
            }
            return e / 16.0;
        };
        const double e_small = mean_err(256);
        const double e_large = mean_err(4096);
        // Monte Carlo rate 1/sqrt(F): a 16x larger F should shrink the error about 4x.
        CHECK(e_large < e_small / 2.5);
        CHECK(e_large < 0.02);
    }
    SUBCASE("dimension mismatch") {
        CHECK_THROWS_AS(lift_path(spec, constant_path(3, 4)), ShapeError);
    }
}

TEST_CASE("median_heuristic") {
    std::mt19937_64 rng(4);
    LabeledDataset ds;
    ds.num_classes = 2;
    for (int i = 0; i < 5; ++i) {
        ds.paths.push_back(test_util::random_path(2, 7, rng));
        ds.labels.push_back(i % 2);
    }
    // Oracle: all pairs, full sort.
    std::vector<Eigen::RowVectorXd> pts;
    for (const auto& p : ds.paths) {
        for (Eigen::Index i = 0; i < p.values().rows(); ++i) pts.push_back(p.values().row(i));
    }
    std::vector<double> d;
    for (std::size_t a = 0; a < pts.size(); ++a) {
        for (std::size_t b = a + 1; b < pts.size(); ++b) d.push_back((pts[a] - pts[b]).norm());
    }
    std::sort(d.begin(), d.end());
    const double expect = d.size() % 2 ? d[d.size() / 2] : 0.5 * (d[d.size() / 2 - 1] + d[d.size() / 2]);
    CHECK(median_heuristic(ds, 0) == doctest::Approx(expect).epsilon(1e-14));
    const double sub = median_heuristic(ds, 7, 20);
    CHECK(sub > 0.0);
    CHECK(sub == median_heuristic(ds, 7, 20));
}

TEST_CASE("rbf_kernel") {
    const Eigen::Vector2d x(1.0, 2.0);
    CHECK(rbf_kernel(x, x, 0.3) == 1.0);
    double prev = 1.0;
    for (double r : {0.5, 1.0, 2.0, 4.0, 8.0}) {
        const double k = rbf_kernel(x, x + Eigen::Vector2d(r, 0.0), 1.0);
        CHECK(k < prev);
        prev = k;
    }
    CHECK(prev < 1e-10);
    CHECK(rbf_kernel(x, Eigen::Vector2d(0, 0), 1e6) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK_THROWS_AS(rbf_kernel(x, x, 0.0), ConfigError);
}

TEST_CASE("reservoir single-step recursions") {
    const std::size_t n = 7;

    SUBCASE("constant path returns sigma_0 z_0 for every variant") {
        for (Variant v : {Variant::RCDE, Variant::RFCDE, Variant::RRDE}) {
            ReservoirSpec s = make_spec(v, n, 2);
            s.sigma_0 = 0.8;
            s.sigma_b = 0.3;
            s.activation = Activation::Tanh;
            const ReservoirState st(s);
            CHECK(extract(st, constant_path(2, 7)) == 0.8 * st.initial_state());
        }
    }
    SUBCASE("R-CDE one step along e_k") {
        ReservoirSpec s = make_spec(Variant::RCDE, n, 3);
        s.sigma_a = 0.9;
        s.sigma_b = 0.4;
        s.sigma_0 = 1.1;
        const ReservoirState st(s);
        Eigen::MatrixXd v = Eigen::MatrixXd::Zero(2, 3);
        v(1, 1) = 1.0;
        const Eigen::VectorXd z0 = 1.1 * st.initial_state();
        const Eigen::VectorXd expect =
            z0 + 0.9 / std::sqrt(7.0) * st.matrix(1) * z0 + 0.4 * st.biases().col(1);
        CHECK(rel_diff(rcde_extract(st, Path::uniform(v)), expect) <= 1e-14);
    }
    SUBCASE("RF-CDE one step follows the lifted Euler update") {
        ReservoirSpec s = make_spec(Variant::RFCDE, n, 2);
        s.sigma_a = 0.7;
        s.sigma_b = 0.5;
        s.activation = Activation::Tanh;
        const ReservoirState st(s);
        Eigen::MatrixXd v(2, 2);
        v << 0.1, -0.3, 0.6, 0.2;
        const Path p = Path::uniform(v);
        const Eigen::VectorXd dx = lift_path(*st.rff(), p).increment(0);
        const Eigen::VectorXd z0 = st.initial_state();
        const Eigen::VectorXd phi = z0.array().tanh().matrix();
        Eigen::VectorXd expect = z0;
        for (std::size_t i = 0; i < 12; ++i) {
            expect += (0.7 * st.matrix(i) * phi + 0.5 * st.biases().col(static_cast<Eigen::Index>(i))) *
                      dx(static_cast<Eigen::Index>(i)) / std::sqrt(7.0);
        }
        CHECK(rel_diff(rfcde_extract(st, p), expect) <= 1e-13);
    }
    SUBCASE("R-RDE one window uses the scaled bracket table") {
        ReservoirSpec s = make_spec(Variant::RRDE, n, 2);
        s.sigma_a = 1.2;
        s.sigma_b = 0.25;
        s.activation = Activation::Relu;
        s.chunk_size = 4;
        const ReservoirState st(s);
        std::mt19937_64 rng(3);
        const Path p = test_util::random_path(2, 5, rng);
        const LieElement l = log_signature(p, *st.basis());
        REQUIRE(l.coeffs.size() == 3);
        // Oracle: B^(1), B^(2) = N^{-1/2} B_i and B^(12) = N^{-1} [B_1, B_2], built from the raw draws.
        const Eigen::MatrixXd b1 = st.matrix(0);
        const Eigen::MatrixXd b2 = st.matrix(1);
        const Eigen::MatrixXd pi = (l.coeffs[0] * b1 + l.coeffs[1] * b2) / std::sqrt(7.0) +
                                   l.coeffs[2] * (b1 * b2 - b2 * b1) / 7.0;
        const Eigen::VectorXd z0 = st.initial_state();
        const Eigen::VectorXd expect = z0 + 1.2 * pi * z0.cwiseMax(0.0) +
                                       0.25 * (l.coeffs[0] * st.biases().col(0) + l.coeffs[1] * st.biases().col(1));
        CHECK(rel_diff(rrde_extract(st, p), expect) <= 1e-12);
    }
    SUBCASE("variant-checked entry points") {
        const ReservoirState st(make_spec(Variant::RCDE, n, 2));
        CHECK_THROWS_AS(rrde_extract(st, constant_path(2, 4)), ShapeError);
        CHECK_THROWS_AS(extract(st, constant_path(3, 4)), ShapeError);
    }
}

TEST_CASE("R-RDE bracket table") {
    SUBCASE("level 3 brackets follow the standard factorisation") {
        ReservoirSpec s = make_spec(Variant::RRDE, 5, 2);
        s.level = 3;
        const ReservoirState st(s);
        const auto& basis = *st.basis();
        REQUIRE(basis.size() == 5);
        const Eigen::MatrixXd b1 = st.matrix(0);
        const Eigen::MatrixXd b2 = st.matrix(1);
        const Eigen::MatrixXd c12 = b1 * b2 - b2 * b1;
        // 112 = 1 . 12 and 122 = 12 . 2.
        const Eigen::MatrixXd c112 = b1 * c12 - c12 * b1;
        const Eigen::MatrixXd c122 = c12 * b2 - b2 * c12;
        const double n32 = std::pow(5.0, -1.5);
        CHECK((st.commutator(2) - c12 / 5.0).cwiseAbs().maxCoeff() <= 1e-12);
        CHECK((st.commutator(3) - n32 * c112).cwiseAbs().maxCoeff() <= 1e-12);
        CHECK((st.commutator(4) - n32 * c122).cwiseAbs().maxCoeff() <= 1e-12);
    }
    SUBCASE("lazy application at large width matches explicit products") {
        ReservoirSpec s = make_spec(Variant::RRDE, 520, 2);
        const ReservoirState st(s);
        const Eigen::MatrixXd b1 = st.matrix(0);
        const Eigen::MatrixXd b2 = st.matrix(1);
        const Eigen::MatrixXd expect = (b1 * b2 - b2 * b1) / 520.0;
        CHECK((st.commutator(2) - expect).cwiseAbs().maxCoeff() <= 1e-10);
        std::mt19937_64 rng(8);
        const Path p = test_util::random_path(2, 7, rng, 0.1);
        const LieElement l1 = log_signature(p.slice(0, 3), *st.basis());
        const LieElement l2 = log_signature(p.slice(3, 6), *st.basis());
        Eigen::VectorXd z = st.initial_state();
        for (const auto* l : {&l1, &l2}) {
            const Eigen::MatrixXd pi =
                (l->coeffs[0] * b1 + l->coeffs[1] * b2) / std::sqrt(520.0) + l->coeffs[2] * expect;
            z += pi * z;
        }
        CHECK(rel_diff(extract(st, p), z) <= 1e-10);
    }
}

TEST_CASE("reservoir invariants on random paths") {
    std::mt19937_64 rng(21);

    SUBCASE("linearity in z_0 with identity activation and no bias") {
        for (Variant v : {Variant::RCDE, Variant::RFCDE, Variant::RRDE}) {
            const ReservoirState st(make_spec(v, 9, 2));
            const ReservoirState doubled = st.with_initial_state(2.0 * st.initial_state());
            for (int i = 0; i < 5; ++i) {
                const Path p = test_util::random_path(2, 9, rng);
                const Eigen::VectorXd a = extract(st, p);
                CHECK(rel_diff(extract(doubled, p), 2.0 * a) <= 1e-12);
            }
        }
    }
    SUBCASE("m = 1, one-step windows reproduce R-CDE") {
        for (Activation act : {Activation::Identity, Activation::Tanh}) {
            for (double sigma_b : {0.0, 0.4}) {
                ReservoirSpec a = make_spec(Variant::RCDE, 11, 3, 77);
                a.activation = act;
                a.sigma_b = sigma_b;
                a.sigma_a = 0.8;
                ReservoirSpec b = a;
                b.variant = Variant::RRDE;
                b.level = 1;
                b.chunk_size = 1;
                const ReservoirState ra(a);
                const ReservoirState rb(b);
                for (int i = 0; i < 20; ++i) {
                    const Path p = test_util::random_path(3, 10, rng);
                    CHECK(rel_diff(extract(rb, p), extract(ra, p)) <= 1e-10);
                }
            }
        }
    }
    SUBCASE("R-RDE features ignore duplicated samples inside a window") {
        ReservoirSpec s = make_spec(Variant::RRDE, 8, 2);
        s.chunk_size = 9;
        const ReservoirState st(s);
        const Path p = test_util::random_path(2, 10, rng);
        const Path q = test_util::with_duplicated_sample(p, rng);
        ReservoirSpec s2 = s;
        s2.chunk_size = 10;
        const ReservoirState st2(s2);
        CHECK(rel_diff(extract(st2, q), extract(st, p)) <= 1e-10);
    }
    SUBCASE("R-RDE short final window") {
        ReservoirSpec s = make_spec(Variant::RRDE, 6, 2);
        s.chunk_size = 4;
        const ReservoirState st(s);
        const Path p = test_util::random_path(2, 11, rng);  // 10 steps: windows of 4, 4, 2
        CHECK(st.drive(p).rows() == 3);
        CHECK(extract_trajectory(st, p).rows() == 4);
        ReservoirSpec too_long = s;
        too_long.chunk_size = 11;
        CHECK_THROWS_AS(extract(ReservoirState(too_long), p), ShapeError);
    }
    SUBCASE("determinism") {
        for (Variant v : {Variant::RCDE, Variant::RFCDE, Variant::RRDE}) {
            const Path p = test_util::random_path(2, 12, rng);
            CHECK(extract(ReservoirState(make_spec(v, 10, 2, 5)), p) == extract(ReservoirState(make_spec(v, 10, 2, 5)), p));
            CHECK(extract(ReservoirState(make_spec(v, 10, 2, 5)), p) != extract(ReservoirState(make_spec(v, 10, 2, 6)), p));
        }
    }
    SUBCASE("trajectory ends at the terminal state") {
        const ReservoirState st(make_spec(Variant::RCDE, 10, 2));
        const Path p = test_util::random_path(2, 12, rng);
        const Eigen::MatrixXd traj = extract_trajectory(st, p);
        CHECK(traj.rows() == 12);
        CHECK(Eigen::VectorXd(traj.row(0).transpose()) == st.initial_state());
        CHECK(Eigen::VectorXd(traj.row(11).transpose()) == extract(st, p));
    }
    SUBCASE("overflow names sigma_A") {
        ReservoirSpec s = make_spec(Variant::RCDE, 20, 2);
        s.sigma_a = 1e40;
        const ReservoirState st(s);
        const Path p = test_util::random_path(2, 30, rng, 1.0);
        try {
            extract(st, p);
            FAIL("expected overflow");
        } catch (const NumericalError& e) {
            CHECK(std::string(e.what()).find("sigma_A") != std::string::npos);
        }
    }
    SUBCASE("spec validation") {
        ReservoirSpec s = make_spec(Variant::RRDE, 4, 2);
        s.chunk_size = 0;
        CHECK_THROWS_AS(ReservoirState{s}, ConfigError);
        s = make_spec(Variant::RCDE, 4, 2);
        s.sigma_a = 0.0;
        CHECK_THROWS_AS(ReservoirState{s}, ConfigError);
        CHECK_THROWS_AS(parse_variant("lstm"), ConfigError);
        CHECK(parse_variant("R-CDE") == Variant::RCDE);
        CHECK(parse_activation("ReLU") == Activation::Relu);
    }
}

TEST_CASE("extract_batch") {
    std::mt19937_64 rng(31);
    std::vector<Path> paths;
    for (int i = 0; i < 11; ++i) paths.push_back(test_util::random_path(2, 6 + static_cast<std::size_t>(i % 4), rng));

    for (Variant v : {Variant::RCDE, Variant::RFCDE, Variant::RRDE}) {
        ReservoirSpec s = make_spec(v, 12, 2);
        s.activation = Activation::Tanh;
        s.sigma_b = 0.2;
        const ReservoirState st(s);
        const FeatureMatrix f = extract_batch(st, paths);
        REQUIRE(f.rows() == 11);
        CHECK(f.cols() == 12);
        CHECK(f.spec_hash == s.hash());
        for (std::size_t i = 0; i < paths.size(); ++i) {
            CHECK(Eigen::VectorXd(f.values.row(static_cast<Eigen::Index>(i)).transpose()) == extract(st, paths[i]));
        }
        const FeatureMatrix single = extract_batch(st, std::vector<Path>{paths[3]});
        CHECK(Eigen::VectorXd(single.values.row(0).transpose()) == extract(st, paths[3]));

        std::vector<Path> perm(paths.rbegin(), paths.rend());
        const FeatureMatrix fp = extract_batch(st, perm);
        for (std::size_t i = 0; i < paths.size(); ++i) {
            CHECK(fp.values.row(static_cast<Eigen::Index>(i)) == f.values.row(static_cast<Eigen::Index>(paths.size() - 1 - i)));
        }
        CHECK(extract_batch(st, paths, 3).values == f.values);
    }
    SUBCASE("failures are reported with the sample index") {
        ReservoirSpec s = make_spec(Variant::RCDE, 12, 2);
        std::vector<Path> bad = paths;
        bad[5] = constant_path(3, 4);
        try {
            extract_batch(ReservoirState(s), bad);
            FAIL("expected failure");
        } catch (const ShapeError& e) {
            CHECK(std::string(e.what()).find("sample 5") != std::string::npos);
        }
    }
    SUBCASE("features text round trip") {
        const FeatureMatrix f = extract_batch(ReservoirState(make_spec(Variant::RRDE, 5, 2)), paths);
        std::stringstream ss;
        write_features(ss, f);
        CHECK(ss.str().rfind("#features n=11 N=5 variant=rrde spec=", 0) == 0);
        const FeatureMatrix back = read_features(ss);
        CHECK(back.values == f.values);
        CHECK(back.variant == Variant::RRDE);
        CHECK(back.spec_hash == f.spec_hash);
    }
}

TEST_CASE("mc_kernel_estimate") {
    std::mt19937_64 rng(41);
    const Path x = test_util::random_path(2, 8, rng, 0.2);
    const Path y = test_util::random_path(2, 8, rng, 0.2);

    SUBCASE("per-seed values equal literal extraction for R-CDE and R-RDE") {
        for (Variant v : {Variant::RCDE, Variant::RRDE}) {
            McKernelConfig cfg;
            cfg.spec = make_spec(v, 24, 2, 99);
            cfg.spec.sigma_a = 0.9;
            cfg.num_seeds = 6;
            const McKernelEstimate est = mc_kernel_estimate(cfg, x, y);
            for (std::size_t s = 0; s < cfg.num_seeds; ++s) {
                ReservoirSpec spec = cfg.spec;
                spec.seed = derive_seed(99, SeedStream::MonteCarlo, s);
                const ReservoirState st(spec);
                const double literal = extract(st, x).dot(extract(st, y)) / 24.0;
                CHECK(est.samples[s] == doctest::Approx(literal).epsilon(1e-12));
            }
            cfg.single_precision = true;
            const McKernelEstimate f = mc_kernel_estimate(cfg, x, y);
            CHECK(f.mean == doctest::Approx(est.mean).epsilon(1e-4));
        }
    }
    SUBCASE("reduced RF-CDE sampler agrees in law with the literal recursion") {
        McKernelConfig cfg;
        cfg.spec = make_spec(Variant::RFCDE, 12, 2, 5);
        cfg.spec.num_rff = 5;
        cfg.spec.frequency_scale = 1.5;
        cfg.shared_rff = false;
        cfg.rank_tolerance = 0.0;
        cfg.num_seeds = 3000;
        const McKernelEstimate est = mc_kernel_estimate(cfg, x, y);
        std::vector<double> lit;
        for (std::size_t s = 0; s < cfg.num_seeds; ++s) {
            ReservoirSpec spec = cfg.spec;
            spec.seed = derive_seed(1777, SeedStream::MonteCarlo, s);
            const ReservoirState st(spec);
            lit.push_back(extract(st, x).dot(extract(st, y)) / 12.0);
        }
        double m = 0.0;
        for (double v : lit) m += v;
        m /= static_cast<double>(lit.size());
        double ss = 0.0;
        for (double v : lit) ss += (v - m) * (v - m);
        const double se = std::sqrt(ss / static_cast<double>(lit.size() - 1) / static_cast<double>(lit.size()));
        CHECK(std::abs(est.mean - m) <= 4.0 * std::hypot(se, est.std_error));
    }
    SUBCASE("reduce_drives reproduces the increment Gram") {
        const Eigen::MatrixXd dx = Eigen::MatrixXd::Random(6, 10);
        const Eigen::MatrixXd dy = Eigen::MatrixXd::Random(4, 10);
        const ReducedDrives r = reduce_drives(dx, dy, 0.0);
        CHECK((r.cx * r.cy.transpose() - dx * dy.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
        CHECK((r.cx * r.cx.transpose() - dx * dx.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
        CHECK(r.cx.cols() == 10);
    }
    SUBCASE("constant pair gives |sigma_0 z_0|^2 / N") {
        McKernelConfig cfg;
        cfg.spec = make_spec(Variant::RCDE, 64, 2, 3);
        cfg.num_seeds = 200;
        const McKernelEstimate est = mc_kernel_estimate(cfg, constant_path(2, 5), constant_path(2, 9, -1.0));
        CHECK(std::abs(est.mean - 1.0) <= 4.0 * est.std_error);
        ReservoirSpec spec = cfg.spec;
        spec.seed = derive_seed(3, SeedStream::MonteCarlo, 0);
        CHECK(est.samples[0] == doctest::Approx(ReservoirState(spec).initial_state().squaredNorm() / 64.0).epsilon(1e-14));
    }
    SUBCASE("thread count does not change the result") {
        McKernelConfig cfg;
        cfg.spec = make_spec(Variant::RFCDE, 16, 2, 8);
        cfg.num_seeds = 8;
        const McKernelEstimate a = mc_kernel_estimate(cfg, x, y);
        cfg.threads = 3;
        const McKernelEstimate b = mc_kernel_estimate(cfg, x, y);
        CHECK(a.samples == b.samples);
        CHECK(a.mean == b.mean);
    }
    SUBCASE("non-identity activation is rejected") {
        McKernelConfig cfg;
        cfg.spec = make_spec(Variant::RCDE, 16, 2);
        cfg.spec.activation = Activation::Tanh;
        CHECK_THROWS_AS(mc_kernel_estimate(cfg, x, y), ConfigError);
    }
}
