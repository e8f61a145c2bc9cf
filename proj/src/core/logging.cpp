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

#include <iostream>
#include <mutex>

#include "sigres/logging.hpp"

namespace sigres {
    namespace {
        std::mutex& sink_mutex() {
            static std::mutex m;
            return m;
        }
        LogSink& sink() {
            static LogSink s;
            return s;
        }
    }  // namespace

    void set_log_sink(LogSink s) {
        std::lock_guard<std::mutex> lock(sink_mutex());
        sink() = std::move(s);
    }

    void log_message(LogLevel level, const std::string& message) {
        std::lock_guard<std::mutex> lock(sink_mutex());
        if (sink()) {
            sink()(level, message);
            return;
        }
        std::clog << "[sigres] " << (level == LogLevel::Warning ? "warning: " : "") << message << '\n';
    }

}  // namespace sigres
