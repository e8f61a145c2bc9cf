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


#include <string>
#include <vector>

#include "sigres/errors.hpp"
#include "sigres/signature.hpp"

namespace sigres {

    TruncatedTensor signature(const Path& path, int level, std::size_t first, std::size_t last) {
        if (level < 1) throw ShapeError("signature level must be >= 1, got " + std::to_string(level));
        if (first >= last || last >= path.length()) throw ShapeError("signature: invalid sample range");
        const int d = static_cast<int>(path.dim());
        TruncatedTensor s = TruncatedTensor::unit(d, level);
        std::vector<double> v(static_cast<std::size_t>(d));
        const auto& x = path.values();
        for (std::size_t i = first; i < last; ++i) {
            for (int c = 0; c < d; ++c) {
                v[static_cast<std::size_t>(c)] =
                    x(static_cast<Eigen::Index>(i + 1), c) - x(static_cast<Eigen::Index>(i), c);
            }
            multiply_by_segment_exp(s, v);
        }
        return s;
    }

    TruncatedTensor signature(const Path& path, int level) {
        return signature(path, level, 0, path.length() - 1);
    }

    LieElement log_signature(const Path& path, const LyndonBasis& basis, std::size_t first, std::size_t last) {
        if (static_cast<std::size_t>(basis.dim()) != path.dim()) {
            throw ShapeError("log_signature: basis has d=" + std::to_string(basis.dim()) + " but path has d=" +
                             std::to_string(path.dim()));
        }
        return basis.project(tensor_log(signature(path, basis.level(), first, last)));
    }

    LieElement log_signature(const Path& path, const LyndonBasis& basis) {
        return log_signature(path, basis, 0, path.length() - 1);
    }

}  // namespace sigres
