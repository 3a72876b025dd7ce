// Copyright 2026 The qcoop Authors
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

#ifndef QCOOP_TABLE_HPP_
#define QCOOP_TABLE_HPP_

#include <charconv>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <variant>
#include <vector>

#include <json.hpp>

namespace qcoop {

using Cell = std::variant<std::int64_t, double, std::string, bool>;

/// Flat result rows with named columns; the unit of CSV/JSON emission.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add_row(std::vector<Cell> row) {
        if (row.size() != columns.size())
            throw std::invalid_argument("row has " + std::to_string(row.size()) + " cells, table has " +
                                        std::to_string(columns.size()) + " columns");
        rows.push_back(std::move(row));
    }
};

/// Shortest representation that parses back to the same double.
inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view text) {
    double v = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
        throw std::invalid_argument("not a number: '" + std::string(text) + "'");
    return v;
}

inline std::string format_cell(const Cell& c) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) return format_double(v);
            else if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
            else if constexpr (std::is_same_v<T, std::string>) return v;
            else return std::to_string(v);
        },
        c);
}

namespace detail {

inline void write_csv_field(std::ostream& os, std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
        os << field;
        return;
    }
    os << '"';
    for (char ch : field) {
        if (ch == '"') os << '"';
        os << ch;
    }
    os << '"';
}

}  // namespace detail

/// RFC 4180: CRLF record separator, fields quoted when they contain a comma,
/// quote, CR or LF.
inline void write_csv(std::ostream& os, const Table& t) {
    auto write_record = [&os](const auto& fields, auto&& to_text) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) os << ',';
            detail::write_csv_field(os, to_text(fields[i]));
        }
        os << "\r\n";
    };
    write_record(t.columns, [](const std::string& s) { return s; });
    for (const auto& row : t.rows) write_record(row, [](const Cell& c) { return format_cell(c); });
}

inline std::string to_csv(const Table& t) {
    std::ostringstream os;
    write_csv(os, t);
    return os.str();
}

/// Parses RFC 4180 text into records of raw fields (header included).
inline std::vector<std::vector<std::string>> read_csv(std::string_view text) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    bool quoted = false;
    bool field_started = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char ch = text[i];
        if (quoted) {
            if (ch == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += ch;
            }
            continue;
        }
        switch (ch) {
            case '"':
                quoted = true;
                field_started = true;
                break;
            case ',':
                record.push_back(std::move(field));
                field.clear();
                field_started = true;
                break;
            case '\r':
                break;
            case '\n':
                record.push_back(std::move(field));
                field.clear();
                records.push_back(std::move(record));
                record.clear();
                field_started = false;
                break;
            default:
                field += ch;
                field_started = true;
        }
    }
    if (quoted) throw std::invalid_argument("unterminated quoted CSV field");
    if (field_started || !field.empty() || !record.empty()) {
        record.push_back(std::move(field));
        records.push_back(std::move(record));
    }
    return records;
}

inline nlohmann::json to_json(const Table& t) {
    auto out = nlohmann::json::array();
    for (const auto& row : t.rows) {
        nlohmann::json obj = nlohmann::json::object();
        for (std::size_t i = 0; i < t.columns.size(); ++i)
            std::visit([&](const auto& v) { obj[t.columns[i]] = v; }, row[i]);
        out.push_back(std::move(obj));
    }
    return out;
}

enum class OutputFormat { Csv, Json };

inline OutputFormat parse_format(std::string_view text) {
    if (text == "csv") return OutputFormat::Csv;
    if (text == "json") return OutputFormat::Json;
    throw std::invalid_argument("unknown output format '" + std::string(text) + "'");
}

inline void write_table(std::ostream& os, const Table& t, OutputFormat format) {
    if (format == OutputFormat::Csv) write_csv(os, t);
    else os << to_json(t).dump(2) << '\n';
}

/// Writes `t` to `destination`; "-" means stdout.
inline void emit_results(const Table& t, OutputFormat format, const std::string& destination) {
    if (destination == "-") {
        write_table(std::cout, t, format);
        return;
    }
    std::ofstream out(destination, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + destination + "' for writing");
    write_table(out, t, format);
    out.flush();
    if (!out) throw std::runtime_error("write to '" + destination + "' failed");
}

}  // namespace qcoop

#endif  // QCOOP_TABLE_HPP_
