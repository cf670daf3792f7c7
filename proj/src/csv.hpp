#pragma once

// Minimal RFC 4180 reader/writer helpers for the exported tables.

#include <initializer_list>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace retrocarbon::csv {

inline std::string quote(std::string_view field) {
    if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

class Reader {
public:
    explicit Reader(std::istream& in) : in_(in) {}

    // Reads one record; returns false at end of input. Blank lines are skipped.
    bool next(std::vector<std::string>& row) {
        row.clear();
        std::string field;
        bool quoted = false;
        bool any = false;
        char c = 0;
        while (in_.get(c)) {
            any = true;
            if (quoted) {
                if (c == '"') {
                    if (in_.peek() == '"') {
                        in_.get(c);
                        field += '"';
                    } else {
                        quoted = false;
                    }
                } else {
                    field += c;
                }
                continue;
            }
            if (c == '"') {
                quoted = true;
            } else if (c == ',') {
                row.push_back(std::move(field));
                field.clear();
            } else if (c == '\n') {
                if (row.empty() && field.empty()) {
                    any = false;
                    continue;
                }
                row.push_back(std::move(field));
                return true;
            } else if (c != '\r') {
                field += c;
            }
        }
        if (!any) return false;
        row.push_back(std::move(field));
        return true;
    }

    bool expect_header(std::initializer_list<std::string_view> names) {
        std::vector<std::string> row;
        if (!next(row) || row.size() != names.size()) return false;
        std::size_t i = 0;
        for (auto n : names) {
            if (row[i++] != n) return false;
        }
        return true;
    }

private:
    std::istream& in_;
};

}  // namespace retrocarbon::csv
