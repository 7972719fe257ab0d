/**
 * recaudit -- black-box recommendation-audit toolkit
 *
 * Minimal CSV read/write helpers. All artifact CSVs are UTF-8, comma
 * separated, header mandatory. Doubles are written in shortest
 * round-trip form so re-runs are byte-identical.
 *
 * This code is released under the
 * Apache License Version 2.0 http://www.apache.org/licenses/.
 */
#pragma once

#include <charconv>
#include <cstdio>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "recaudit/errors.hpp"

namespace recaudit {

/// Shortest decimal form that parses back to the same double.
inline std::string fmt_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc()) return "nan";
    return std::string(buf, ptr);
}

namespace csv {

inline bool needs_quoting(std::string_view field) {
    return field.find_first_of(",\"\n\r") != std::string_view::npos;
}

inline std::string escape(std::string_view field) {
    if (!needs_quoting(field)) return std::string(field);
    std::string out;
    out.reserve(field.size() + 2);
    out.push_back('"');
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

inline void write_row(std::ostream& os, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) os << ',';
        os << escape(fields[i]);
    }
    os << '\n';
}

/// Splits one CSV record. Handles quoted fields with doubled quotes; does
/// not handle embedded newlines (none of our formats produce them).
inline std::vector<std::string> split_row(std::string_view line, std::int64_t lineno = -1) {
    std::vector<std::string> fields;
    std::string cur;
    bool in_quotes = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                cur.push_back(c);
            }
        } else if (c == '"') {
            if (!cur.empty()) throw ParseError("unexpected quote inside unquoted field", lineno);
            in_quotes = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else if (c == '\r') {
            // tolerate CRLF
        } else {
            cur.push_back(c);
        }
    }
    if (in_quotes) throw ParseError("unterminated quoted field", lineno);
    fields.push_back(std::move(cur));
    return fields;
}

} // namespace csv
} // namespace recaudit
