// Copyright 2026 The phaselock Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


/**
 * @file
 * CSV text helpers. Numbers use 17 significant digits so every double
 * round-trips exactly through its decimal form.
 */

#pragma once

#include <cstdio>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace phaselock {

inline std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string format_number(long long v) { return std::to_string(v); }
inline std::string format_number(int v) { return std::to_string(v); }
inline std::string format_number(std::size_t v) { return std::to_string(v); }

/// Accumulates comment lines, a header and comma-separated rows.
class CsvBuilder {
  public:
    CsvBuilder &comment(std::string_view text) {
        text_ += "# ";
        text_ += text;
        text_ += '\n';
        return *this;
    }

    CsvBuilder &header(std::initializer_list<std::string_view> names) {
        return row(std::vector<std::string>(names.begin(), names.end()));
    }

    CsvBuilder &row(const std::vector<std::string> &cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i > 0) {
                text_ += ',';
            }
            text_ += cells[i];
        }
        text_ += '\n';
        return *this;
    }

    template <class... T> CsvBuilder &values(const T &...cells) {
        return row({format_cell(cells)...});
    }

    [[nodiscard]] const std::string &str() const noexcept { return text_; }

  private:
    static std::string format_cell(const std::string &s) { return s; }
    static std::string format_cell(const char *s) { return s; }
    template <class N> static std::string format_cell(N v) { return format_number(v); }

    std::string text_;
};

} // namespace phaselock
