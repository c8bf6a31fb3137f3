#include "csv.hpp"

#include "convmine/error.hpp"

namespace convmine::csv {

std::vector<Row> read(std::istream& in) {
    std::vector<Row> rows;
    std::string field;
    Row row;
    row.line = 1;
    std::size_t line = 1;
    bool quoted = false;
    bool row_started = false;

    auto end_field = [&] {
        row.fields.push_back(field);
        field.clear();
    };
    auto end_row = [&](std::size_t next_line) {
        if (row_started) {
            end_field();
            rows.push_back(row);
        }
        row.fields.clear();
        row.line = next_line;
        row_started = false;
    };

    char c;
    while (in.get(c)) {
        if (quoted) {
            if (c == '"') {
                if (in.peek() == '"') {
                    in.get(c);
                    field += '"';
                } else {
                    quoted = false;
                }
            } else {
                if (c == '\n') ++line;
                field += c;
            }
            continue;
        }
        switch (c) {
            case '"':
                quoted = true;
                row_started = true;
                break;
            case ',':
                end_field();
                row_started = true;
                break;
            case '\r':
                break;
            case '\n':
                ++line;
                end_row(line);
                break;
            default:
                field += c;
                row_started = true;
                break;
        }
    }
    if (quoted) {
        throw Error(ErrorKind::Data,
                    "unterminated quoted field starting near line " + std::to_string(row.line));
    }
    end_row(line);
    return rows;
}

std::string escape(const std::string& field) {
    bool needs_quotes = field.find_first_of(",\"\n\r") != std::string::npos;
    if (!needs_quotes) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

} // namespace convmine::csv
