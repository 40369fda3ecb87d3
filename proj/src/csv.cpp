#include "oriq/csv.hpp"

#include <charconv>
#include <fstream>
#include <system_error>

#include "oriq/error.hpp"

namespace oriq {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

}  // namespace

std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    bool was_quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
            was_quoted = true;
        } else if (c == ',') {
            out.push_back(was_quoted ? cur : std::string(trim(cur)));
            cur.clear();
            was_quoted = false;
        } else {
            cur.push_back(c);
        }
    }
    if (quoted) throw FormatError("unterminated quoted CSV field");
    out.push_back(was_quoted ? cur : std::string(trim(cur)));
    return out;
}

CsvTable parse_csv(std::istream& in, std::string source) {
    CsvTable t;
    t.source = std::move(source);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto s = trim(line);
        if (s.empty() || s.front() == '#') continue;
        auto fields = split_csv_line(s);
        if (t.header.empty()) {
            t.header = std::move(fields);
            continue;
        }
        if (fields.size() != t.header.size()) {
            throw FormatError(t.source + ":" + std::to_string(lineno) + ": expected " +
                              std::to_string(t.header.size()) + " fields, got " + std::to_string(fields.size()));
        }
        t.rows.push_back(std::move(fields));
    }
    if (t.header.empty()) throw FormatError(t.source + ": missing CSV header");
    return t;
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    return parse_csv(in, path.string());
}

std::size_t CsvTable::column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return i;
    }
    throw FormatError(source + ": missing column '" + std::string(name) + "'");
}

double parse_double(std::string_view text, std::string_view what) {
    double v = 0.0;
    const auto* b = text.data();
    const auto* e = text.data() + text.size();
    if (!text.empty() && *b == '+') ++b;
    const auto r = std::from_chars(b, e, v);
    if (r.ec != std::errc{} || r.ptr != e || text.empty()) {
        throw FormatError("cannot parse " + std::string(what) + " '" + std::string(text) + "' as a number");
    }
    return v;
}

std::string csv_escape(std::string_view field) {
    if (field.find_first_of(",\"\n") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out += '"';
    return out;
}

}  // namespace oriq
