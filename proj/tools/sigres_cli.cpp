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
 // sigres command-line front end. Links only the C interface.


#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sigres/sigres.h"

namespace {

    enum Exit { kPass = 0, kRunError = 1, kConfigError = 2, kThresholdFailure = 3 };

    struct Options {
        std::string config;
        std::string out;
        std::uint64_t seed = 0;
        bool seed_given = false;
        std::size_t threads = 0;
        std::vector<std::string> overrides;
        std::string logsig_file;
        int logsig_level = 0;
        bool json = false;
        bool quiet = false;
    };

    using ConfigPtr = std::unique_ptr<sigres_config, decltype(&sigres_config_free)>;
    using ReportPtr = std::unique_ptr<sigres_report, decltype(&sigres_report_free)>;

    std::string take(char* s) {
        std::string out = s ? s : "";
        sigres_string_free(s);
        return out;
    }

    int report_error(sigres_status s, const std::string& what) {
        std::cerr << "sigres: " << what << ": " << sigres_last_error() << '\n';
        return s == SIGRES_ERR_CONFIG ? kConfigError : kRunError;
    }

    int set(sigres_config* cfg, const std::string& key, const std::string& value) {
        const sigres_status s = sigres_config_set(cfg, key.c_str(), value.c_str());
        return s == SIGRES_OK ? kPass : report_error(s, "--" + key);
    }

    int run(const std::string& kind, const Options& o) {
        sigres_config* raw = nullptr;
        const sigres_status loaded = o.config.empty() ? sigres_config_default(kind.c_str(), &raw)
                                                      : sigres_config_load(kind.c_str(), o.config.c_str(), &raw);
        if (loaded != SIGRES_OK) return report_error(loaded, "configuration");
        ConfigPtr cfg(raw, &sigres_config_free);

        for (const std::string& kv : o.overrides) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) {
                std::cerr << "sigres: --set expects key=value, got '" << kv << "'\n";
                return kConfigError;
            }
            if (int rc = set(cfg.get(), kv.substr(0, eq), kv.substr(eq + 1))) return rc;
        }
        if (o.seed_given) {
            if (int rc = set(cfg.get(), "experiment.seed", std::to_string(o.seed))) return rc;
        }
        if (o.threads > 0) {
            if (int rc = set(cfg.get(), "experiment.threads", std::to_string(o.threads))) return rc;
        }
        if (!o.out.empty()) {
            if (int rc = set(cfg.get(), "experiment.out", o.out)) return rc;
        }
        if (!o.logsig_file.empty()) {
            if (int rc = set(cfg.get(), "data.train", o.logsig_file)) return rc;
        }
        if (o.logsig_level > 0) {
            if (int rc = set(cfg.get(), "logsig.level", std::to_string(o.logsig_level))) return rc;
        }
        if (sigres_status s = sigres_config_validate(cfg.get()); s != SIGRES_OK) return report_error(s, "configuration");

        sigres_report* rep_raw = nullptr;
        if (sigres_status s = sigres_run(cfg.get(), &rep_raw); s != SIGRES_OK) return report_error(s, kind);
        ReportPtr rep(rep_raw, &sigres_report_free);

        char* out_dir = nullptr;
        std::string dir;
        {
            std::istringstream ini(take((sigres_config_ini(cfg.get(), &out_dir), out_dir)));
            std::string line;
            bool in_experiment = false;
            while (std::getline(ini, line)) {
                if (!line.empty() && line[0] == '[') in_experiment = line == "[experiment]";
                if (in_experiment && line.rfind("out = ", 0) == 0) dir = line.substr(6);
            }
        }
        if (sigres_status s = sigres_report_write(rep.get(), dir.c_str()); s != SIGRES_OK) {
            return report_error(s, "writing the report");
        }

        if (!o.quiet) {
            char* text = nullptr;
            if (o.json ? sigres_report_json(rep.get(), &text) : sigres_report_text(rep.get(), &text)) {
                return report_error(SIGRES_ERR_INTERNAL, "formatting the report");
            }
            if (kind == "logsig" && !o.json) {
                std::ifstream in(dir + "/logsig.txt");
                std::cout << in.rdbuf();
                sigres_string_free(text);
            } else {
                std::cout << take(text);
            }
        }
        if (kind == "kernel-convergence" && !sigres_report_passed(rep.get())) {
            std::cerr << "sigres: kernel-convergence thresholds not met (see " << dir << "/report.txt)\n";
            return kThresholdFailure;
        }
        return kPass;
    }

    void log_to_stderr(int level, const char* message, void*) {
        std::cerr << (level ? "warning: " : "") << message << '\n';
    }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Random CDE/RDE reservoir features and signature kernels"};
    app.set_version_flag("--version", std::string("sigres ") + sigres_version());
    app.require_subcommand(1);
    Options o;

    const std::vector<std::pair<std::string, std::string>> commands{
        {"kernel-convergence", "Monte Carlo reservoir kernels against their limits (exit 3 on threshold failure)"},
        {"hurst", "fBm Hurst-exponent classification"},
        {"missing-data", "Hurst classification with a corrupted test set"},
        {"timing", "extraction time against path length"},
        {"run", "full pipeline on a dataset file pair"},
        {"gen-fbm", "write a Hurst train/test dataset pair"},
        {"logsig", "print the log-signatures of the paths in a dataset file"},
    };
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--config", o.config, "INI configuration file")->check(CLI::ExistingFile);
        sub->add_option_function<std::uint64_t>(
            "--seed", [&o](std::uint64_t s) { o.seed = s, o.seed_given = true; }, "base seed (overrides the file)");
        sub->add_option("--out", o.out, "output directory (overrides the file)");
        sub->add_option("--threads", o.threads, "worker threads (overrides the file)")->check(CLI::PositiveNumber);
        sub->add_option("--set", o.overrides, "extra key=value override, e.g. grid.rcde.lambda=0.1,1");
        sub->add_flag("--json", o.json, "print summary.json instead of the text report");
        sub->add_flag("--quiet", o.quiet, "print nothing on success");
        if (name == "logsig") {
            sub->add_option("file", o.logsig_file, "dataset file");
            sub->add_option("--level", o.logsig_level, "truncation level")->check(CLI::PositiveNumber);
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kPass : kConfigError;
    }

    sigres_set_log_callback(&log_to_stderr, nullptr);
    const std::string kind = app.get_subcommands().front()->get_name();
    try {
        return run(kind, o);
    } catch (const std::exception& e) {
        std::cerr << "sigres: " << e.what() << '\n';
        return kRunError;
    }
}
