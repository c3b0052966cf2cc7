// Copyright 2026 The timesym Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>
#include <system_error>
#include <type_traits>
#include <vector>

namespace timesym::io {

/// Shortest round-trip decimal representation of a double.
inline std::string format_double(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

/// Quotes a field per RFC 4180 when it contains a comma, quote or newline.
inline std::string csv_escape(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
        return std::string(field);
    }
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    out += '"';
    return out;
}

/// Minimal RFC 4180 writer: CRLF-free, one record per `row()` call.
class CsvWriter {
  public:
    explicit CsvWriter(std::ostream &out) : out_(out) {}

    CsvWriter &header(std::initializer_list<std::string_view> names) {
        for (auto name : names) {
            field(name);
        }
        return end_row();
    }

    CsvWriter &field(std::string_view text) {
        separator();
        out_ << csv_escape(text);
        return *this;
    }
    CsvWriter &field(double v) {
        separator();
        out_ << format_double(v);
        return *this;
    }
    template <class Int>
        requires std::is_integral_v<Int>
    CsvWriter &field(Int v) {
        separator();
        out_ << +v;
        return *this;
    }
    CsvWriter &empty() {
        separator();
        return *this;
    }

    CsvWriter &end_row() {
        out_ << '\n';
        first_ = true;
        return *this;
    }

  private:
    void separator() {
        if (!first_) {
            out_ << ',';
        }
        first_ = false;
    }

    std::ostream &out_;
    bool first_ = true;
};

/// Splits one CSV line into fields, honouring RFC 4180 quoting.
inline std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> fields(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                fields.back() += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                fields.back() += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.emplace_back();
        } else if (c != '\r') {
            fields.back() += c;
        }
    }
    return fields;
}

} // namespace timesym::io
