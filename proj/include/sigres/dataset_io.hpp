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
 // Text dataset format.
 //
 //   #dataset d=<int> classes=<int>
 //   sample label=<int> len=<int>
 //   <t> <v1> ... <vd>        (len rows)
 //   <blank line>
 //   sample label=...
 //
 // Values are written in shortest round-trip form, so save followed by load is bit exact.
 // The directory layout holds one such file per sample (any name ending in .txt, read in name order).


#ifndef SIGRES_DATASET_IO_HPP
#define SIGRES_DATASET_IO_HPP

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "sigres/path.hpp"

namespace sigres {

    enum class DatasetFormat {
        File,       // all samples in one file
        Directory,  // one file per sample
    };

    /* Throws DataError citing the offending line. */
    LabeledDataset read_dataset(std::istream& in, Split split = Split::Train);
    void write_dataset(std::ostream& out, const LabeledDataset& ds);

    LabeledDataset load_dataset(const std::filesystem::path& uri, DatasetFormat format = DatasetFormat::File,
                                Split split = Split::Train);
    void save_dataset(const std::filesystem::path& uri, const LabeledDataset& ds,
                      DatasetFormat format = DatasetFormat::File);

    /* Shortest decimal form that parses back to the same double. */
    std::string format_double(double x);

    /* Parses the whole token as a double; returns false on trailing garbage or overflow. */
    bool parse_double(std::string_view token, double& out);

}  // namespace sigres

#endif  // SIGRES_DATASET_IO_HPP
