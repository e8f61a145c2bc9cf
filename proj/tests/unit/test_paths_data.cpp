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
#include <filesystem>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "sigres/corruption.hpp"
#include "sigres/dataset_io.hpp"
#include "sigres/errors.hpp"
#include "sigres/fbm.hpp"
#include "sigres/logging.hpp"
#include "sigres/preprocess.hpp"
#include "test_util.hpp"

using namespace sigres;

namespace {

    LabeledDataset small_dataset(std::mt19937_64& rng, int d = 2, std::size_t n = 6) {
        LabeledDataset ds;
        ds.num_classes = 3;
        for (std::size_t i = 0; i < n; ++i) {
            ds.paths.push_back(test_util::random_path(d, 5 + i, rng));
            ds.labels.push_back(static_cast<int>(i % 3));
        }
        return ds;
    }

    bool same_path(const Path& a, const Path& b) {
        return a.times() == b.times() && a.values().rows() == b.values().rows() &&
               a.values().cols() == b.values().cols() && a.values() == b.values();
    }

    // Oracle: np.interp-style imputation from an explicit keep mask, written independently of the library.
    std::vector<double> interp_with_mask(const std::vector<double>& t, const std::vector<double>& x,
                                         const std::vector<bool>& keep) {
        std::vector<double> xs;
        std::vector<double> ts;
        for (std::size_t i = 0; i < t.size(); ++i) {
            if (keep[i]) {
                ts.push_back(t[i]);
                xs.push_back(x[i]);
            }
        }
        std::vector<double> out(t.size());
        for (std::size_t i = 0; i < t.size(); ++i) {
            if (t[i] <= ts.front()) {
                out[i] = xs.front();
            } else if (t[i] >= ts.back()) {
                out[i] = xs.back();
            } else {
                std::size_t k = 0;
                while (ts[k + 1] < t[i]) ++k;
                const double w = (t[i] - ts[k]) / (ts[k + 1] - ts[k]);
                out[i] = xs[k] + w * (xs[k + 1] - xs[k]);
            }
        }
        return out;
    }

}  // namespace

TEST_CASE("preprocess") {
    std::mt19937_64 rng(11);
    const LabeledDataset ds = small_dataset(rng);

    SUBCASE("all flags off is the identity") {
        const LabeledDataset out = preprocess(ds, AugmentationConfig{});
        REQUIRE(out.size() == ds.size());
        for (std::size_t i = 0; i < ds.size(); ++i) CHECK(same_path(out.paths[i], ds.paths[i]));
        CHECK(out.labels == ds.labels);
    }
    SUBCASE("time channel on a length-3 path") {
        const Path p({0.0, 3.0, 6.0}, Eigen::MatrixXd::Constant(3, 1, 2.0));
        const Path q = add_time_channel(p);
        REQUIRE(q.dim() == 2);
        CHECK(q.values()(0, 1) == 0.0);
        CHECK(q.values()(1, 1) == 0.5);
        CHECK(q.values()(2, 1) == 1.0);
    }
    SUBCASE("min-max maps a constant channel to 0 and others onto [-1, 1]") {
        LabeledDataset c = ds;
        for (auto& p : c.paths) {
            Eigen::MatrixXd v = p.values();
            v.col(1).setConstant(4.2);
            p = Path(p.times(), v);
        }
        AugmentationConfig cfg;
        cfg.minmax_scale = true;
        const LabeledDataset out = preprocess(c, cfg);
        double lo = 1e9;
        double hi = -1e9;
        for (const auto& p : out.paths) {
            CHECK(p.values().col(1).cwiseAbs().maxCoeff() == 0.0);
            lo = std::min(lo, p.values().col(0).minCoeff());
            hi = std::max(hi, p.values().col(0).maxCoeff());
        }
        CHECK(lo == doctest::Approx(-1.0).epsilon(1e-14));
        CHECK(hi == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("min-max statistics come from the train split") {
        AugmentationConfig cfg;
        cfg.minmax_scale = true;
        LabeledDataset test = ds;
        test.split = Split::Test;
        for (auto& p : test.paths) p = Path(p.times(), p.values() * 3.0);
        const auto [tr, te] = preprocess(ds, test, cfg);
        const MinMaxScaler s = MinMaxScaler::fit(ds);
        for (std::size_t i = 0; i < te.size(); ++i) {
            const Eigen::MatrixXd& x = test.paths[i].values();
            Eigen::MatrixXd expect(x.rows(), x.cols());
            for (Eigen::Index r = 0; r < x.rows(); ++r) {
                for (Eigen::Index c = 0; c < x.cols(); ++c) {
                    expect(r, c) = 2.0 * (x(r, c) - s.lo(c)) / (s.hi(c) - s.lo(c)) - 1.0;
                }
            }
            CHECK((te.paths[i].values() - expect).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
    SUBCASE("resampling a linear path is exact and keeps the time range") {
        Eigen::MatrixXd v(4, 1);
        v << 1.0, 2.0, 3.0, 4.0;
        const Path p({0.0, 0.2, 0.7, 1.0}, v);
        const Path q = resample_linear(p, 6);
        REQUIRE(q.length() == 6);
        CHECK(q.times().front() == 0.0);
        CHECK(q.times().back() == 1.0);
        // Piecewise-linear oracle evaluated by hand at t = 0.4.
        const double expect = 2.0 + (0.4 - 0.2) / 0.5;
        CHECK(q.values()(2, 0) == doctest::Approx(expect).epsilon(1e-14));
    }
    SUBCASE("lead-lag doubles channels and maps l to 2l - 1") {
        Eigen::MatrixXd v(3, 1);
        v << 1.0, 4.0, 9.0;
        const Path q = lead_lag(Path({0.0, 1.0, 2.0}, v));
        REQUIRE(q.length() == 5);
        REQUIRE(q.dim() == 2);
        Eigen::MatrixXd expect(5, 2);
        expect << 1, 1, 4, 1, 4, 4, 9, 4, 9, 9;
        CHECK(q.values() == expect);
        CHECK(q.times() == std::vector<double>{0.0, 0.5, 1.0, 1.5, 2.0});
    }
    SUBCASE("basepoint prepends a zero row") {
        const Path& p = ds.paths[0];
        const Path q = add_basepoint(p);
        REQUIRE(q.length() == p.length() + 1);
        CHECK(q.values().row(0).cwiseAbs().maxCoeff() == 0.0);
        CHECK(q.values().bottomRows(static_cast<Eigen::Index>(p.length())) == p.values());
        CHECK(q.times()[0] < p.times()[0]);
    }
    SUBCASE("full pipeline shapes follow the fixed order") {
        AugmentationConfig cfg;
        cfg.minmax_scale = cfg.time_augment = cfg.lead_lag = cfg.basepoint = true;
        cfg.resample_length = 10;
        const LabeledDataset out = preprocess(ds, cfg);
        for (const auto& p : out.paths) {
            CHECK(p.dim() == 2 * (ds.dim() + 1));
            CHECK(p.length() == 2 * 10 - 1 + 1);
        }
    }
    SUBCASE("flag-only pipeline is deterministic") {
        AugmentationConfig cfg;
        cfg.time_augment = cfg.basepoint = true;
        const LabeledDataset a = preprocess(ds, cfg);
        const LabeledDataset b = preprocess(ds, cfg);
        for (std::size_t i = 0; i < a.size(); ++i) CHECK(same_path(a.paths[i], b.paths[i]));
    }
    SUBCASE("errors") {
        AugmentationConfig cfg;
        cfg.resample_length = 1;
        CHECK_THROWS_AS(preprocess(ds, cfg), ConfigError);
        CHECK_THROWS_AS(preprocess(LabeledDataset{}, AugmentationConfig{}), DataError);
    }
}

TEST_CASE("corrupt_and_impute") {
    std::mt19937_64 rng(5);
    const Path p = test_util::random_path(3, 40, rng);

    SUBCASE("p = 0 is the identity") {
        CHECK(same_path(corrupt_and_impute(p, {0.0, 123, EmptyChannelPolicy::Reject}), p));
    }
    SUBCASE("p = 1 empties every channel") {
        CHECK_THROWS_AS(corrupt_and_impute(p, {1.0, 1, EmptyChannelPolicy::Reject}), DataError);
        const Path z = corrupt_and_impute(p, {1.0, 1, EmptyChannelPolicy::FillZero});
        CHECK(z.values().cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("single interior drop is the midpoint of its neighbours") {
        Eigen::MatrixXd v(3, 1);
        v << 0.0, 5.0, 2.0;
        const Path q({0.0, 0.5, 1.0}, v);
        // Some seed drops exactly the middle cell; that is the only mask producing (0, 1, 2).
        bool found = false;
        for (std::uint64_t s = 0; s < 500 && !found; ++s) {
            try {
                const Path r = corrupt_and_impute(q, {0.4, s, EmptyChannelPolicy::Reject});
                if (r.values()(0, 0) == 0.0 && r.values()(2, 0) == 2.0 && r.values()(1, 0) != 5.0) {
                    CHECK(r.values()(1, 0) == 1.0);
                    found = true;
                }
            } catch (const DataError&) {
            }
        }
        CHECK(found);
    }
    SUBCASE("survivors are untouched and gaps match an independent interpolation") {
        for (double prob : {0.1, 0.3, 0.5}) {
            const Path r = corrupt_and_impute(p, {prob, 77, EmptyChannelPolicy::Reject});
            REQUIRE(r.length() == p.length());
            CHECK(r.values().allFinite());
            for (Eigen::Index c = 0; c < 3; ++c) {
                // Random-walk values are distinct, so equality identifies the surviving cells.
                std::vector<bool> keep(p.length());
                std::vector<double> x(p.length());
                std::size_t dropped = 0;
                for (std::size_t i = 0; i < p.length(); ++i) {
                    x[i] = p.values()(static_cast<Eigen::Index>(i), c);
                    keep[i] = r.values()(static_cast<Eigen::Index>(i), c) == x[i];
                    dropped += keep[i] ? 0 : 1;
                }
                CHECK(dropped > 0);
                const auto expect = interp_with_mask(p.times(), x, keep);
                for (std::size_t i = 0; i < p.length(); ++i) {
                    CHECK(r.values()(static_cast<Eigen::Index>(i), c) == doctest::Approx(expect[i]).epsilon(1e-12));
                }
            }
        }
    }
    SUBCASE("drop rate matches p") {
        const Path big = test_util::random_path(4, 5000, rng);
        const Path r = corrupt_and_impute(big, {0.3, 9, EmptyChannelPolicy::Reject});
        const double rate = static_cast<double>((r.values().array() != big.values().array()).count()) / 20000.0;
        CHECK(std::abs(rate - 0.3) < 5.0 * std::sqrt(0.3 * 0.7 / 20000.0));
    }
    SUBCASE("invalid probability") {
        CHECK_THROWS_AS(corrupt_and_impute(p, {1.5, 0, EmptyChannelPolicy::Reject}), ConfigError);
    }
}

TEST_CASE("generate_fbm") {
    SUBCASE("shape, start at zero, unit time grid") {
        const Path p = generate_fbm(0.3, 17, 3, 1);
        CHECK(p.length() == 17);
        CHECK(p.dim() == 3);
        CHECK(p.values().row(0).cwiseAbs().maxCoeff() == 0.0);
        CHECK(p.times().front() == 0.0);
        CHECK(p.times().back() == 1.0);
    }
    SUBCASE("same seed gives identical paths") {
        CHECK(same_path(generate_fbm(0.65, 64, 2, 99), generate_fbm(0.65, 64, 2, 99)));
    }
    SUBCASE("Var(B_1) at H = 0.25 over 10^4 seeds") {
        const int n = 10000;
        double s2 = 0.0;
        for (int i = 0; i < n; ++i) {
            const double b1 = generate_fbm(0.25, 32, 1, static_cast<std::uint64_t>(i) + 1000).values()(31, 0);
            s2 += b1 * b1;
        }
        CHECK(std::abs(s2 / n - 1.0) <= 0.05);
    }
    SUBCASE("H = 0.5 increments: variance dt, no lag-1 correlation") {
        const int n = 10000;
        const std::size_t l = 9;
        const double dt = 1.0 / static_cast<double>(l - 1);
        double v = 0.0;
        double v4 = 0.0;
        double cross = 0.0;
        for (int i = 0; i < n; ++i) {
            const Path p = generate_fbm(0.5, l, 1, static_cast<std::uint64_t>(i) + 50000);
            const double a = p.values()(3, 0) - p.values()(2, 0);
            const double b = p.values()(4, 0) - p.values()(3, 0);
            v += a * a;
            v4 += a * a * a * a;
            cross += a * b;
        }
        const double var = v / n;
        const double se = std::sqrt((v4 / n - var * var) / n);
        CHECK(std::abs(var - dt) <= 5.0 * se);
        CHECK(std::abs(cross / n / dt) <= 3.0 / std::sqrt(static_cast<double>(n)));
    }
    SUBCASE("empirical covariance matches the closed form for both samplers") {
        const double h = 0.75;
        const std::size_t l = 9;
        const int n = 8000;
        for (FbmMethod method : {FbmMethod::DaviesHarte, FbmMethod::Cholesky}) {
            Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(l));
            for (int i = 0; i < n; ++i) {
                const Eigen::VectorXd x = generate_fbm(h, l, 1, static_cast<std::uint64_t>(i) + 7, method).values().col(0);
                acc += x * x.transpose();
            }
            acc /= n;
            for (std::size_t a = 1; a < l; a += 3) {
                for (std::size_t b = 1; b < l; b += 2) {
                    const double s = static_cast<double>(a) / 8.0;
                    const double t = static_cast<double>(b) / 8.0;
                    // Oracle: direct evaluation of the fBm covariance; tolerance ~5 standard errors.
                    const double expect = 0.5 * (std::pow(s, 2 * h) + std::pow(t, 2 * h) - std::pow(std::abs(s - t), 2 * h));
                    const double se = std::sqrt((std::pow(s, 2 * h) * std::pow(t, 2 * h) + expect * expect) / n);
                    CHECK(std::abs(acc(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) - expect) <= 5.0 * se);
                }
            }
        }
    }
    SUBCASE("H = 0.5 covariance is min(s, t)") {
        CHECK(fbm_covariance(0.5, 0.3, 0.7) == doctest::Approx(0.3).epsilon(1e-15));
    }
    SUBCASE("invalid parameters") {
        CHECK_THROWS_AS(generate_fbm(0.0, 10, 1, 0), ConfigError);
        CHECK_THROWS_AS(generate_fbm(1.0, 10, 1, 0), ConfigError);
        CHECK_THROWS_AS(generate_fbm(0.5, 1, 1, 0), ConfigError);
    }
}

TEST_CASE("hurst_dataset") {
    SUBCASE("sizes and labels") {
        const auto [tr, te] = hurst_dataset(HurstVariant::V1, 3, 2, 32, 3, 4);
        CHECK(tr.size() == 24);
        CHECK(te.size() == 16);
        CHECK(tr.num_classes == 8);
        CHECK(tr.split == Split::Train);
        CHECK(te.split == Split::Test);
        CHECK(hurst_classes().front() == 0.05);
        CHECK(hurst_classes().back() == 0.75);
        for (std::size_t i = 0; i < tr.size(); ++i) CHECK(tr.labels[i] == static_cast<int>(i / 3));
        CHECK(tr.paths[0].dim() == 3);
        CHECK(tr.paths[0].length() == 32);
        CHECK(!same_path(tr.paths[0], te.paths[0]));
    }
    SUBCASE("V2 standardizes every channel of every sample") {
        const auto [tr, te] = hurst_dataset(HurstVariant::V2, 2, 1, 64, 3, 8);
        for (const auto* ds : {&tr, &te}) {
            for (const Path& p : ds->paths) {
                for (Eigen::Index c = 0; c < 3; ++c) {
                    const double mean = p.values().col(c).mean();
                    const double var = (p.values().col(c).array() - mean).square().mean();
                    CHECK(std::abs(mean) <= 1e-12);
                    CHECK(std::abs(var - 1.0) <= 1e-9);
                }
            }
        }
    }
}

TEST_CASE("dataset io") {
    std::mt19937_64 rng(3);
    LabeledDataset ds = small_dataset(rng);

    SUBCASE("round trip is bit exact") {
        std::stringstream ss;
        write_dataset(ss, ds);
        const LabeledDataset back = read_dataset(ss);
        REQUIRE(back.size() == ds.size());
        CHECK(back.num_classes == ds.num_classes);
        CHECK(back.labels == ds.labels);
        for (std::size_t i = 0; i < ds.size(); ++i) CHECK(same_path(back.paths[i], ds.paths[i]));
    }
    SUBCASE("well-formed 2-sample file") {
        std::istringstream in("#dataset d=1 classes=2\nsample label=0 len=2\n0 1\n1 2\n\nsample label=1 len=3\n0 0\n0.5 1e-3\n1 -2\n");
        const LabeledDataset got = read_dataset(in);
        CHECK(got.size() == 2);
        CHECK(got.labels == std::vector<int>{0, 1});
        CHECK(got.paths[1].values()(1, 0) == 1e-3);
    }
    SUBCASE("file and directory round trips") {
        const auto dir = std::filesystem::temp_directory_path() / "sigres_test_io";
        std::filesystem::remove_all(dir);
        std::filesystem::create_directories(dir);
        save_dataset(dir / "one.txt", ds);
        save_dataset(dir / "many", ds, DatasetFormat::Directory);
        for (const auto& back : {load_dataset(dir / "one.txt"), load_dataset(dir / "many", DatasetFormat::Directory)}) {
            REQUIRE(back.size() == ds.size());
            CHECK(back.labels == ds.labels);
            for (std::size_t i = 0; i < ds.size(); ++i) CHECK(same_path(back.paths[i], ds.paths[i]));
        }
        std::filesystem::remove_all(dir);
    }

    auto error_of = [](const std::string& text) -> std::string {
        std::istringstream in(text);
        try {
            read_dataset(in);
        } catch (const DataError& e) {
            return e.what();
        }
        return "no error";
    };
    SUBCASE("empty file") {
        CHECK(error_of("") == "no samples");
        CHECK(error_of("#dataset d=1 classes=2\n\n") == "no samples");
    }
    SUBCASE("errors cite the line") {
        CHECK(error_of("#dataset d=1 classes=2\nsample label=0 len=3\n0 1\n1 2\n1 3\n").find("line 5") == 0);
        CHECK(error_of("#dataset d=2 classes=2\nsample label=0 len=2\n0 1 2\n1 2\n").find("line 4: ragged") == 0);
        CHECK(error_of("#dataset d=1 classes=2\nsample label=2 len=2\n0 1\n1 2\n").find("line 2: unknown label") == 0);
        CHECK(error_of("#data d=1\n").find("line 1: malformed header") == 0);
        CHECK(error_of("#dataset d=1 classes=2\nsample label=0 len=3\n0 1\n1 2\n\n").find("line 5") == 0);
        CHECK(error_of("#dataset d=1 classes=2\nsample label=0 len=2\n0 x\n1 2\n").find("line 3") == 0);
    }
}

TEST_CASE("logging sink") {
    std::vector<std::string> seen;
    set_log_sink([&seen](LogLevel, const std::string& m) { seen.push_back(m); });
    log_warning("hello");
    set_log_sink({});
    CHECK(seen == std::vector<std::string>{"hello"});
}
