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

#ifndef SIGRES_LOGGING_HPP
#define SIGRES_LOGGING_HPP

#include <functional>
#include <string>

namespace sigres {

    enum class LogLevel { Info, Warning };

    using LogSink = std::function<void(LogLevel, const std::string&)>;

    /* Replaces the process-wide sink (default: std::clog). Passing an empty function restores the default. */
    void set_log_sink(LogSink sink);

    void log_message(LogLevel level, const std::string& message);
    inline void log_info(const std::string& m) { log_message(LogLevel::Info, m); }
    inline void log_warning(const std::string& m) { log_message(LogLevel::Warning, m); }

}  // namespace sigres

#endif  // SIGRES_LOGGING_HPP
