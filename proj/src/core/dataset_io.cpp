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

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>
#include <vector>

#include "sigres/dataset_io.hpp"
#include "sigres/errors.hpp"

namespace sigres {

    namespace fs = std::filesystem;

    std::string format_double(double x) {
        char buf[64];
        const auto res = std::to_chars(buf, buf + sizeof(buf), x);
        return std::string(buf, res.ptr);
    }

    bool parse_double(std::string_view token, double& out) {
        if (!token.empty() && token.front() == '+') token.remove_prefix(1);
        const auto res = std::from_chars(token.data(), token.data() + token.size(), out);
        return res.ec == std::errc() && res.ptr == token.data() + token.size();
    }

    namespace {

        std::vector<std::string_view> split_ws(std::string_view line) {
            std::vector<std::string_view> out;
            std::size_t i = 0;
            while (i < line.size()) {
                while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
                std::size_t j = i;
                while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
                if (j > i) out.push_back(line.substr(i, j - i));
                i = j;
            }
            return out;
        }

        bool is_blank(std::string_view line) {
            return std::all_of(line.begin(), line.end(), [](char c) { return c == ' ' || c == '\t' || c == '\r'; });
        }

        /* Parses "key=<int>"; returns false if the key differs or the value is not a whole integer. */
        bool parse_kv(std::string_view token, std::string_view key, long long& value) {
            if (token.size() <= key.size() + 1 || token.substr(0, key.size()) != key || token[key.size()] != '=') {
                return false;
            }
            const char* first = token.data() + key.size() + 1;
            const char* last = token.data() + token.size();
            const auto res = std::from_chars(first, last, value);
            return res.ec == std::errc() && res.ptr == last;
        }

        struct Reader {
            std::istream& in;
            std::size_t line_no = 0;
            std::string line;

            bool next() {
                if (!std::getline(in, line)) return false;
                ++line_no;
                return true;
            }
        };

    }  // namespace

    LabeledDataset read_dataset(std::istream& in, Split split) {
        Reader r{in, 0, {}};
        bool have_header = false;
        while (r.next()) {
            if (!is_blank(r.line)) {
                have_header = true;
                break;
            }
        }
        if (!have_header) throw DataError("no samples");

        const auto head = split_ws(r.line);
        long long d = 0;
        long long classes = 0;
        if (head.size() != 3 || head[0] != "#dataset" || !parse_kv(head[1], "d", d) ||
            !parse_kv(head[2], "classes", classes)) {
            throw DataError("malformed header, expected '#dataset d=<int> classes=<int>'", r.line_no);
        }
        if (d < 1) throw DataError("header: d must be >= 1", r.line_no);
        if (classes < 2) throw DataError("header: classes must be >= 2", r.line_no);

        LabeledDataset ds;
        ds.num_classes = static_cast<int>(classes);
        ds.split = split;
        const auto width = static_cast<std::size_t>(d) + 1;

        while (r.next()) {
            if (is_blank(r.line)) continue;
            const auto tok = split_ws(r.line);
            long long label = 0;
            long long len = 0;
            if (tok.size() != 3 || tok[0] != "sample" || !parse_kv(tok[1], "label", label) ||
                !parse_kv(tok[2], "len", len)) {
                throw DataError("malformed sample header, expected 'sample label=<int> len=<int>'", r.line_no);
            }
            const std::size_t sample_line = r.line_no;
            if (label < 0 || label >= classes) {
                throw DataError("unknown label " + std::to_string(label) + " (classes=" + std::to_string(classes) + ")",
                                sample_line);
            }
            if (len < 2) throw DataError("sample needs len >= 2, got " + std::to_string(len), sample_line);

            std::vector<double> times(static_cast<std::size_t>(len));
            Eigen::MatrixXd values(len, d);
            for (long long i = 0; i < len; ++i) {
                if (!r.next() || is_blank(r.line)) {
                    throw DataError("sample declares len=" + std::to_string(len) + " but has only " + std::to_string(i) +
                                        " rows",
                                    r.line_no);
                }
                const auto cells = split_ws(r.line);
                if (cells.size() != width) {
                    throw DataError("ragged row: expected " + std::to_string(width) + " columns, got " +
                                        std::to_string(cells.size()),
                                    r.line_no);
                }
                double v = 0.0;
                for (std::size_t c = 0; c < width; ++c) {
                    if (!parse_double(cells[c], v)) {
                        throw DataError("cannot parse number '" + std::string(cells[c]) + "'", r.line_no);
                    }
                    if (!std::isfinite(v)) throw DataError("non-finite value", r.line_no);
                    if (c == 0) {
                        times[static_cast<std::size_t>(i)] = v;
                    } else {
                        values(i, static_cast<Eigen::Index>(c - 1)) = v;
                    }
                }
                if (i > 0 && !(times[static_cast<std::size_t>(i)] > times[static_cast<std::size_t>(i - 1)])) {
                    throw DataError("non-increasing time at row " + std::to_string(i), r.line_no);
                }
            }
            ds.paths.emplace_back(std::move(times), std::move(values));
            ds.labels.push_back(static_cast<int>(label));
        }
        if (ds.paths.empty()) throw DataError("no samples");
        return ds;
    }

    namespace {

        void write_header(std::ostream& out, std::size_t d, int classes) {
            out << "#dataset d=" << d << " classes=" << classes << '\n';
        }

        void write_sample(std::ostream& out, const Path& p, int label) {
            out << "sample label=" << label << " len=" << p.length() << '\n';
            std::string row;
            for (std::size_t i = 0; i < p.length(); ++i) {
                row = format_double(p.times()[i]);
                for (Eigen::Index c = 0; c < p.values().cols(); ++c) {
                    row += ' ';
                    row += format_double(p.values()(static_cast<Eigen::Index>(i), c));
                }
                row += '\n';
                out << row;
            }
        }

    }  // namespace

    void write_dataset(std::ostream& out, const LabeledDataset& ds) {
        ds.validate();
        write_header(out, ds.dim(), ds.num_classes);
        for (std::size_t i = 0; i < ds.size(); ++i) {
            if (i > 0) out << '\n';
            write_sample(out, ds.paths[i], ds.labels[i]);
        }
    }

    LabeledDataset load_dataset(const fs::path& uri, DatasetFormat format, Split split) {
        if (format == DatasetFormat::File) {
            std::ifstream in(uri);
            if (!in) throw DataError("cannot open dataset file " + uri.string());
            try {
                return read_dataset(in, split);
            } catch (const DataError& e) {
                throw DataError(uri.string() + ": " + e.what());
            }
        }

        if (!fs::is_directory(uri)) throw DataError("dataset directory " + uri.string() + " does not exist");
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(uri)) {
            if (entry.is_regular_file() && entry.path().extension() == ".txt") files.push_back(entry.path());
        }
        std::sort(files.begin(), files.end());
        if (files.empty()) throw DataError("no samples");

        LabeledDataset ds;
        ds.split = split;
        for (const auto& f : files) {
            std::ifstream in(f);
            if (!in) throw DataError("cannot open " + f.string());
            LabeledDataset part;
            try {
                part = read_dataset(in, split);
            } catch (const DataError& e) {
                throw DataError(f.string() + ": " + e.what());
            }
            if (ds.paths.empty()) {
                ds.num_classes = part.num_classes;
            } else if (part.num_classes != ds.num_classes || part.dim() != ds.dim()) {
                throw DataError(f.string() + ": header disagrees with earlier files", 1);
            }
            for (std::size_t i = 0; i < part.size(); ++i) {
                ds.paths.push_back(std::move(part.paths[i]));
                ds.labels.push_back(part.labels[i]);
            }
        }
        ds.validate();
        return ds;
    }

    void save_dataset(const fs::path& uri, const LabeledDataset& ds, DatasetFormat format) {
        ds.validate();
        if (format == DatasetFormat::File) {
            std::ofstream out(uri);
            if (!out) throw DataError("cannot write " + uri.string());
            write_dataset(out, ds);
            if (!out) throw DataError("write failed for " + uri.string());
            return;
        }
        fs::create_directories(uri);
        const int digits = static_cast<int>(std::to_string(ds.size()).size());
        for (std::size_t i = 0; i < ds.size(); ++i) {
            std::string name = std::to_string(i);
            name.insert(0, static_cast<std::size_t>(std::max(0, digits - static_cast<int>(name.size()))), '0');
            const fs::path file = uri / ("sample_" + name + ".txt");
            std::ofstream out(file);
            if (!out) throw DataError("cannot write " + file.string());
            write_header(out, ds.dim(), ds.num_classes);
            write_sample(out, ds.paths[i], ds.labels[i]);
        }
    }

}  // namespace sigres
