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


#ifndef SIGRES_SIGNATURE_HPP
#define SIGRES_SIGNATURE_HPP

#include "sigres/lyndon.hpp"
#include "sigres/path.hpp"
#include "sigres/tensor.hpp"

namespace sigres {

    /* Level-m signature of a piecewise-linear path: the Chen product of the segment exponentials. */
    TruncatedTensor signature(const Path& path, int level);

    /* Signature of samples first..last (inclusive) without copying the path. */
    TruncatedTensor signature(const Path& path, int level, std::size_t first, std::size_t last);

    /* log(signature) in Lyndon coordinates. `basis` must match (path.dim(), level). */
    LieElement log_signature(const Path& path, const LyndonBasis& basis);
    LieElement log_signature(const Path& path, const LyndonBasis& basis, std::size_t first, std::size_t last);

}  // namespace sigres

#endif  // SIGRES_SIGNATURE_HPP
