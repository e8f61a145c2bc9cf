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
 // Exception types thrown by the library. The C API maps each one onto a status code.

#ifndef SIGRES_ERRORS_HPP
#define SIGRES_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sigres {

    /* Shape or level mismatch between operands, or a violated precondition. */
    class ShapeError : public std::invalid_argument {
    public:
        using std::invalid_argument::invalid_argument;
    };

    /* Malformed input data: dataset files, paths, labels. Carries a line number when one is known. */
    class DataError : public std::runtime_error {
    public:
        explicit DataError(const std::string& what, std::size_t line = 0)
            : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
              line_(line) {}
        std::size_t line() const noexcept { return line_; }

    private:
        std::size_t line_;
    };

    /* Diverging or non-finite numerics (reservoir overflow, non-finite features). */
    class NumericalError : public std::runtime_error {
    public:
        using std::runtime_error::runtime_error;
    };

    /* Invalid experiment configuration. `field` names the offending key. */
    class ConfigError : public std::invalid_argument {
    public:
        ConfigError(const std::string& field, const std::string& what)
            : std::invalid_argument(field + ": " + what), field_(field) {}
        const std::string& field() const noexcept { return field_; }

    private:
        std::string field_;
    };

}  // namespace sigres

#endif  // SIGRES_ERRORS_HPP
