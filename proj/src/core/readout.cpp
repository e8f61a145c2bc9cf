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
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "sigres/dataset_io.hpp"
#include "sigres/errors.hpp"
#include "sigres/readout.hpp"

namespace sigres {

    Normalizer Normalizer::fit(const Eigen::MatrixXd& x, bool enabled) {
        Normalizer n;
        n.enabled = enabled;
        if (!enabled) return n;
        if (x.rows() == 0) throw ShapeError("normaliser needs at least one row");
        n.mean = x.colwise().mean();
        const Eigen::MatrixXd c = x.rowwise() - n.mean;
        const Eigen::RowVectorXd var = c.array().square().colwise().sum() / static_cast<double>(x.rows());
        n.inv_std.resize(x.cols());
        for (Eigen::Index j = 0; j < x.cols(); ++j) n.inv_std(j) = var(j) > 0.0 ? 1.0 / std::sqrt(var(j)) : 0.0;
        return n;
    }

    Eigen::MatrixXd Normalizer::apply(const Eigen::MatrixXd& x) const {
        if (!enabled) return x;
        if (x.cols() != mean.size()) {
            throw ShapeError("normaliser fitted on " + std::to_string(mean.size()) + " columns, got " +
                             std::to_string(x.cols()));
        }
        return ((x.rowwise() - mean).array().rowwise() * inv_std.array()).matrix();
    }

    RidgeModel fit_ridge(const Eigen::MatrixXd& features, const std::vector<int>& labels, int num_classes,
                         double lambda, bool normalize) {
        if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ConfigError("lambda", "must be positive and finite");
        if (static_cast<std::size_t>(features.rows()) != labels.size()) {
            throw ShapeError("ridge: " + std::to_string(features.rows()) + " feature rows but " +
                             std::to_string(labels.size()) + " labels");
        }
        if (labels.empty()) throw DataError("ridge: no training samples");
        if (num_classes < 2) throw DataError("ridge: need at least 2 classes");
        if (!features.allFinite()) throw DataError("ridge: features contain NaN or infinite values");
        bool seen_two = false;
        for (int l : labels) {
            if (l < 0 || l >= num_classes) throw DataError("ridge: label " + std::to_string(l) + " out of range");
            seen_two = seen_two || l != labels.front();
        }
        if (!seen_two) throw DataError("ridge: training data contains a single class");

        RidgeModel model;
        model.lambda = lambda;
        model.normalizer = Normalizer::fit(features, normalize);
        const Eigen::MatrixXd x = model.normalizer.apply(features);
        const Eigen::Index n = x.rows();
        const Eigen::Index p = x.cols();

        Eigen::MatrixXd y = Eigen::MatrixXd::Zero(n, num_classes);
        for (Eigen::Index i = 0; i < n; ++i) y(i, labels[static_cast<std::size_t>(i)]) = 1.0;

        const Eigen::RowVectorXd xm = x.colwise().mean();
        const Eigen::RowVectorXd ym = y.colwise().mean();
        const Eigen::MatrixXd xc = x.rowwise() - xm;
        const Eigen::MatrixXd yc = y.rowwise() - ym;

        Eigen::MatrixXd w;  // p x C
        if (n >= p) {
            Eigen::MatrixXd g = xc.transpose() * xc;
            g.diagonal().array() += lambda;
            w = g.ldlt().solve(xc.transpose() * yc);
        } else {
            Eigen::MatrixXd g = xc * xc.transpose();
            g.diagonal().array() += lambda;
            w = xc.transpose() * g.ldlt().solve(yc);
        }
        if (!w.allFinite()) throw NumericalError("ridge: solve produced non-finite weights");
        model.weights = w.transpose();
        model.intercepts = (ym - xm * w).transpose();
        return model;
    }

    Eigen::MatrixXd decision_scores(const RidgeModel& model, const Eigen::MatrixXd& features) {
        if (static_cast<std::size_t>(features.cols()) != model.num_features()) {
            throw ShapeError("predict: model has " + std::to_string(model.num_features()) + " features, got " +
                             std::to_string(features.cols()));
        }
        Eigen::MatrixXd s = model.normalizer.apply(features) * model.weights.transpose();
        s.rowwise() += model.intercepts.transpose();
        return s;
    }

    std::vector<int> predict(const RidgeModel& model, const Eigen::MatrixXd& features) {
        const Eigen::MatrixXd s = decision_scores(model, features);
        std::vector<int> out(static_cast<std::size_t>(s.rows()));
        for (Eigen::Index i = 0; i < s.rows(); ++i) {
            Eigen::Index best = 0;
            for (Eigen::Index c = 1; c < s.cols(); ++c) {
                if (s(i, c) > s(i, best)) best = c;
            }
            out[static_cast<std::size_t>(i)] = static_cast<int>(best);
        }
        return out;
    }

    void save_model(std::ostream& out, const RidgeModel& m) {
        out << "#ridge C=" << m.num_classes() << " N=" << m.num_features() << " lambda=" << format_double(m.lambda)
            << " normalize=" << (m.normalizer.enabled ? 1 : 0) << '\n';
        for (Eigen::Index c = 0; c < m.weights.rows(); ++c) {
            out << format_double(m.intercepts(c));
            for (Eigen::Index j = 0; j < m.weights.cols(); ++j) out << ' ' << format_double(m.weights(c, j));
            out << '\n';
        }
        if (m.normalizer.enabled) {
            auto row = [&](const char* name, const Eigen::RowVectorXd& v) {
                out << name;
                for (Eigen::Index j = 0; j < v.size(); ++j) out << ' ' << format_double(v(j));
                out << '\n';
            };
            row("mean", m.normalizer.mean);
            row("inv_std", m.normalizer.inv_std);
        }
    }

    namespace {

        std::vector<std::string> split_ws(const std::string& line) {
            std::istringstream ss(line);
            std::vector<std::string> out;
            for (std::string tok; ss >> tok;) out.push_back(tok);
            return out;
        }

        std::string header_value(const std::string& tok, const std::string& key, std::size_t line) {
            if (tok.rfind(key + "=", 0) != 0) throw DataError("malformed model header, expected " + key, line);
            return tok.substr(key.size() + 1);
        }

        double number(const std::string& tok, std::size_t line) {
            double v = 0.0;
            if (!parse_double(tok, v)) throw DataError("cannot parse number '" + tok + "'", line);
            return v;
        }

    }  // namespace

    RidgeModel load_model(std::istream& in) {
        std::string line;
        std::size_t lineno = 1;
        if (!std::getline(in, line)) throw DataError("empty model file", 1);
        const auto head = split_ws(line);
        if (head.size() != 5 || head[0] != "#ridge") throw DataError("malformed model header", 1);
        RidgeModel m;
        long c = 0;
        long n = 0;
        try {
            c = std::stol(header_value(head[1], "C", 1));
            n = std::stol(header_value(head[2], "N", 1));
        } catch (const std::logic_error&) {
            throw DataError("malformed model header", 1);
        }
        m.lambda = number(header_value(head[3], "lambda", 1), 1);
        const std::string norm = header_value(head[4], "normalize", 1);
        if (c < 2 || n < 1 || (norm != "0" && norm != "1")) throw DataError("malformed model header", 1);
        m.weights.resize(c, n);
        m.intercepts.resize(c);
        auto read_row = [&](std::size_t expect) {
            if (!std::getline(in, line)) throw DataError("unexpected end of model file", lineno + 1);
            ++lineno;
            auto toks = split_ws(line);
            if (toks.size() != expect) throw DataError("ragged row", lineno);
            return toks;
        };
        for (long r = 0; r < c; ++r) {
            const auto toks = read_row(static_cast<std::size_t>(n) + 1);
            m.intercepts(r) = number(toks[0], lineno);
            for (long j = 0; j < n; ++j) m.weights(r, j) = number(toks[static_cast<std::size_t>(j) + 1], lineno);
        }
        m.normalizer.enabled = norm == "1";
        if (m.normalizer.enabled) {
            for (auto [name, dst] : {std::pair{"mean", &m.normalizer.mean}, std::pair{"inv_std", &m.normalizer.inv_std}}) {
                const auto toks = read_row(static_cast<std::size_t>(n) + 1);
                if (toks[0] != name) throw DataError(std::string("expected ") + name + " row", lineno);
                dst->resize(n);
                for (long j = 0; j < n; ++j) (*dst)(j) = number(toks[static_cast<std::size_t>(j) + 1], lineno);
            }
        }
        return m;
    }

    Metrics compute_metrics(const std::vector<int>& truth, const std::vector<int>& predicted, int num_classes) {
        if (truth.size() != predicted.size()) throw ShapeError("metrics: label counts differ");
        if (truth.empty()) throw ShapeError("metrics: no samples");
        Metrics m;
        m.confusion = Eigen::MatrixXi::Zero(num_classes, num_classes);
        std::size_t correct = 0;
        for (std::size_t i = 0; i < truth.size(); ++i) {
            if (truth[i] < 0 || truth[i] >= num_classes || predicted[i] < 0 || predicted[i] >= num_classes) {
                throw ShapeError("metrics: label out of range at sample " + std::to_string(i));
            }
            ++m.confusion(truth[i], predicted[i]);
            correct += truth[i] == predicted[i];
        }
        m.accuracy = static_cast<double>(correct) / static_cast<double>(truth.size());
        m.per_class.resize(static_cast<std::size_t>(num_classes));
        for (int c = 0; c < num_classes; ++c) {
            const int total = m.confusion.row(c).sum();
            m.per_class[static_cast<std::size_t>(c)] =
                total ? static_cast<double>(m.confusion(c, c)) / total : std::numeric_limits<double>::quiet_NaN();
        }
        return m;
    }

}  // namespace sigres
