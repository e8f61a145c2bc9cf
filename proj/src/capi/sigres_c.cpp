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


#include <cstdlib>
#include <cstring>
#include <new>
#include <stdexcept>
#include <string>

#include "sigres/config.hpp"
#include "sigres/errors.hpp"
#include "sigres/experiments.hpp"
#include "sigres/kernels.hpp"
#include "sigres/logging.hpp"
#include "sigres/reservoir.hpp"
#include "sigres/signature.hpp"
#include "sigres/sigres.h"

struct sigres_config {
    sigres::ExperimentConfig value;
};

struct sigres_report {
    sigres::RunReport value;
};

struct sigres_reservoir {
    sigres::ReservoirState value;
};

namespace {

    thread_local std::string last_error;

    sigres_status fail(sigres_status s, const std::string& message) {
        last_error = message;
        return s;
    }

    struct NullArgument : std::invalid_argument {
        using std::invalid_argument::invalid_argument;
    };

    template <class T>
    void require(const T* p, const char* name) {
        if (p == nullptr) throw NullArgument(std::string(name) + " is NULL");
    }

    // Runs f, mapping the library's exception types onto status codes.
    template <class F>
    sigres_status checked(F&& f) {
        try {
            f();
            return SIGRES_OK;
        } catch (const NullArgument& e) {
            return fail(SIGRES_ERR_ARGUMENT, e.what());
        } catch (const sigres::ConfigError& e) {
            return fail(SIGRES_ERR_CONFIG, e.what());
        } catch (const sigres::ShapeError& e) {
            return fail(SIGRES_ERR_SHAPE, e.what());
        } catch (const sigres::DataError& e) {
            return fail(SIGRES_ERR_DATA, e.what());
        } catch (const sigres::NumericalError& e) {
            return fail(SIGRES_ERR_NUMERICAL, e.what());
        } catch (const std::bad_alloc&) {
            return fail(SIGRES_ERR_INTERNAL, "out of memory");
        } catch (const std::exception& e) {
            return fail(SIGRES_ERR_INTERNAL, e.what());
        } catch (...) {
            return fail(SIGRES_ERR_INTERNAL, "unknown error");
        }
    }

    char* copy(const std::string& s) {
        char* out = static_cast<char*>(std::malloc(s.size() + 1));
        if (out == nullptr) throw std::bad_alloc();
        std::memcpy(out, s.c_str(), s.size() + 1);
        return out;
    }

    Eigen::MatrixXd rows(const double* values, std::size_t length, std::size_t dim) {
        require(values, "values");
        return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
            values, static_cast<Eigen::Index>(length), static_cast<Eigen::Index>(dim));
    }

    sigres_log_callback log_callback = nullptr;
    void* log_user = nullptr;

}  // namespace

extern "C" {

const char* sigres_version(void) { return "0.1.0"; }

const char* sigres_last_error(void) { return last_error.c_str(); }

void sigres_string_free(char* s) { std::free(s); }

void sigres_set_log_callback(sigres_log_callback callback, void* user) {
    log_callback = callback;
    log_user = user;
    if (callback == nullptr) {
        sigres::set_log_sink({});
        return;
    }
    sigres::set_log_sink([](sigres::LogLevel level, const std::string& m) {
        log_callback(level == sigres::LogLevel::Warning ? 1 : 0, m.c_str(), log_user);
    });
}

sigres_status sigres_config_default(const char* kind, sigres_config** out) {
    return checked([&] {
        require(kind, "kind");
        require(out, "out");
        *out = new sigres_config{sigres::default_config(sigres::parse_experiment_kind(kind))};
    });
}

sigres_status sigres_config_load(const char* kind, const char* file, sigres_config** out) {
    return checked([&] {
        require(kind, "kind");
        require(file, "file");
        require(out, "out");
        *out = new sigres_config{sigres::load_config(file, sigres::parse_experiment_kind(kind))};
    });
}

sigres_status sigres_config_set(sigres_config* cfg, const char* key, const char* value) {
    return checked([&] {
        require(cfg, "config");
        require(key, "key");
        require(value, "value");
        sigres::set_config_value(cfg->value, key, value);
    });
}

sigres_status sigres_config_validate(const sigres_config* cfg) {
    return checked([&] {
        require(cfg, "config");
        cfg->value.validate();
    });
}

sigres_status sigres_config_ini(const sigres_config* cfg, char** out) {
    return checked([&] {
        require(cfg, "config");
        require(out, "out");
        *out = copy(cfg->value.to_ini());
    });
}

void sigres_config_free(sigres_config* cfg) { delete cfg; }

sigres_status sigres_run(const sigres_config* cfg, sigres_report** out) {
    return checked([&] {
        require(cfg, "config");
        require(out, "out");
        *out = new sigres_report{sigres::run_experiment(cfg->value)};
    });
}

int sigres_report_passed(const sigres_report* report) { return report != nullptr && report->value.passed ? 1 : 0; }

sigres_status sigres_report_text(const sigres_report* report, char** out) {
    return checked([&] {
        require(report, "report");
        require(out, "out");
        *out = copy(report->value.text());
    });
}

sigres_status sigres_report_json(const sigres_report* report, char** out) {
    return checked([&] {
        require(report, "report");
        require(out, "out");
        *out = copy(report->value.json());
    });
}

sigres_status sigres_report_value(const sigres_report* report, const char* key, char** out) {
    return checked([&] {
        require(report, "report");
        require(key, "key");
        require(out, "out");
        try {
            *out = copy(report->value.value(key));
        } catch (const std::out_of_range& e) {
            throw NullArgument(e.what());
        }
    });
}

sigres_status sigres_report_write(const sigres_report* report, const char* dir) {
    return checked([&] {
        require(report, "report");
        require(dir, "dir");
        sigres::write_report(report->value, dir);
    });
}

void sigres_report_free(sigres_report* report) { delete report; }

void sigres_reservoir_spec_init(sigres_reservoir_spec* spec) {
    if (spec == nullptr) return;
    const sigres::ReservoirSpec d;
    *spec = sigres_reservoir_spec{"rcde",    "identity", d.width,           d.input_dim,
                                  d.sigma_a, d.sigma_b,  d.sigma_0,         d.seed,
                                  d.num_rff, d.frequency_scale, d.level, d.chunk_size};
}

sigres_status sigres_reservoir_create(const sigres_reservoir_spec* spec, sigres_reservoir** out) {
    return checked([&] {
        require(spec, "spec");
        require(out, "out");
        require(spec->variant, "spec.variant");
        require(spec->activation, "spec.activation");
        sigres::ReservoirSpec s;
        s.variant = sigres::parse_variant(spec->variant);
        s.activation = sigres::parse_activation(spec->activation);
        s.width = spec->width;
        s.input_dim = spec->input_dim;
        s.sigma_a = spec->sigma_a;
        s.sigma_b = spec->sigma_b;
        s.sigma_0 = spec->sigma_0;
        s.seed = spec->seed;
        s.num_rff = spec->num_rff;
        s.frequency_scale = spec->frequency_scale;
        s.level = spec->level;
        s.chunk_size = spec->chunk_size;
        *out = new sigres_reservoir{sigres::ReservoirState(s)};
    });
}

size_t sigres_reservoir_width(const sigres_reservoir* r) { return r == nullptr ? 0 : r->value.width(); }

sigres_status sigres_reservoir_extract(const sigres_reservoir* r, const double* times, const double* values,
                                       size_t length, size_t dim, double* features) {
    return checked([&] {
        require(r, "reservoir");
        require(features, "features");
        Eigen::MatrixXd v = rows(values, length, dim);
        const sigres::Path p = times == nullptr ? sigres::Path::uniform(std::move(v))
                                                : sigres::Path(std::vector<double>(times, times + length), std::move(v));
        const Eigen::VectorXd z = sigres::extract(r->value, p);
        std::memcpy(features, z.data(), sizeof(double) * static_cast<std::size_t>(z.size()));
    });
}

void sigres_reservoir_free(sigres_reservoir* r) { delete r; }

sigres_status sigres_sig_kernel_pde(const double* x, size_t x_length, const double* y, size_t y_length, size_t dim,
                                    int refinement, int order, double* out) {
    return checked([&] {
        require(out, "out");
        const sigres::Path px = sigres::Path::uniform(rows(x, x_length, dim));
        const sigres::Path py = sigres::Path::uniform(rows(y, y_length, dim));
        *out = sigres::sig_kernel_pde(px, py, sigres::PDEGrid{refinement, order});
    });
}

sigres_status sigres_log_signature(const double* values, size_t length, size_t dim, int level, double* coeffs,
                                   size_t capacity, size_t* count) {
    return checked([&] {
        require(count, "count");
        const sigres::Path p = sigres::Path::uniform(rows(values, length, dim));
        const auto basis = sigres::LyndonBasis::get(static_cast<int>(dim), level);
        *count = basis->size();
        if (capacity < *count) return;
        require(coeffs, "coeffs");
        const sigres::LieElement l = sigres::log_signature(p, *basis);
        std::memcpy(coeffs, l.coeffs.data(), sizeof(double) * *count);
    });
}

}  // extern "C"
