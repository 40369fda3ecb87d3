// Factor definitions for the design generator. The TOML reader covers the
// subset the factor files use: comments, [[factor]] array-of-tables headers,
// and `key = value` lines whose values are strings, numbers or flat arrays.

#include <algorithm>
#include <cctype>
#include <fstream>

#include "oriq/csv.hpp"
#include "oriq/doe.hpp"
#include "oriq/error.hpp"

namespace oriq {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

// Drops a trailing comment that is not inside a string.
std::string_view strip_comment(std::string_view s) {
    char quote = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const char c = s[i];
        if (quote) {
            if (c == '\\' && quote == '"') ++i;
            else if (c == quote) quote = 0;
        } else if (c == '"' || c == '\'') {
            quote = c;
        } else if (c == '#') {
            return s.substr(0, i);
        }
    }
    return s;
}

struct Cursor {
    std::string_view text;
    std::size_t pos = 0;
    const std::string& where;

    [[noreturn]] void fail(const std::string& msg) const { throw FormatError(where + ": " + msg); }

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    std::string scalar() {
        skip_ws();
        if (pos >= text.size()) fail("missing value");
        const char c = text[pos];
        if (c == '"' || c == '\'') {
            ++pos;
            std::string out;
            while (pos < text.size() && text[pos] != c) {
                if (c == '"' && text[pos] == '\\' && pos + 1 < text.size()) ++pos;
                out.push_back(text[pos++]);
            }
            if (pos >= text.size()) fail("unterminated string");
            ++pos;
            return out;
        }
        const std::size_t start = pos;
        while (pos < text.size() && text[pos] != ',' && text[pos] != ']' &&
               !std::isspace(static_cast<unsigned char>(text[pos]))) {
            ++pos;
        }
        if (pos == start) fail("empty value");
        return std::string(text.substr(start, pos - start));
    }

    std::vector<std::string> array() {
        skip_ws();
        if (pos >= text.size() || text[pos] != '[') fail("expected '['");
        ++pos;
        std::vector<std::string> out;
        for (;;) {
            skip_ws();
            if (pos < text.size() && text[pos] == ']') {
                ++pos;
                return out;
            }
            out.push_back(scalar());
            skip_ws();
            if (pos < text.size() && text[pos] == ',') {
                ++pos;
                continue;
            }
            if (pos < text.size() && text[pos] == ']') {
                ++pos;
                return out;
            }
            fail("expected ',' or ']' in array");
        }
    }
};

Coding parse_coding(std::string_view s, const std::string& where) {
    if (s == "categorical" || s == "categorical-effects" || s == "effects") return Coding::Categorical;
    if (s == "numeric" || s == "numeric-scaled" || s == "continuous") return Coding::Numeric;
    throw FormatError(where + ": unknown coding '" + std::string(s) + "'");
}

void finish(std::vector<Factor>& fs, const std::string& source) {
    if (fs.empty()) throw FormatError(source + ": no factors defined");
    for (const auto& f : fs) {
        try {
            f.validate();
        } catch (const InvalidArgument& e) {
            throw FormatError(source + ": " + e.what());
        }
    }
}

}  // namespace

std::vector<Factor> parse_factors_toml(std::istream& in, const std::string& source) {
    std::vector<Factor> out;
    std::string line;
    std::size_t lineno = 0;
    std::string pending;  // multi-line arrays are joined before parsing
    std::string key;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string where = source + ":" + std::to_string(lineno);
        auto s = trim(strip_comment(line));
        if (!pending.empty()) {
            pending += " ";
            pending += s;
            if (std::count(pending.begin(), pending.end(), '[') > std::count(pending.begin(), pending.end(), ']')) continue;
            s = pending;
        } else {
            if (s.empty()) continue;
            if (s == "[[factor]]" || s == "[[factors]]") {
                out.emplace_back();
                continue;
            }
            if (s.front() == '[') throw FormatError(where + ": unsupported table header '" + std::string(s) + "'");
            const auto eq = s.find('=');
            if (eq == std::string_view::npos) throw FormatError(where + ": expected key = value");
            key = std::string(trim(s.substr(0, eq)));
            const auto value = trim(s.substr(eq + 1));
            if (!value.empty() && value.front() == '[' &&
                std::count(value.begin(), value.end(), '[') > std::count(value.begin(), value.end(), ']')) {
                pending = std::string(value);
                continue;
            }
            s = value;
        }
        const std::string value(s);
        pending.clear();
        if (out.empty()) throw FormatError(where + ": key '" + key + "' outside a [[factor]] table");
        Cursor cur{value, 0, where};
        auto& f = out.back();
        if (key == "name") {
            f.name = cur.scalar();
        } else if (key == "levels") {
            f.levels = cur.array();
        } else if (key == "coding") {
            f.coding = parse_coding(cur.scalar(), where);
        } else {
            throw FormatError(where + ": unknown key '" + key + "'");
        }
        cur.skip_ws();
        if (cur.pos != value.size()) throw FormatError(where + ": trailing characters after value");
    }
    if (!pending.empty()) throw FormatError(source + ": unterminated array");
    finish(out, source);
    return out;
}

std::vector<Factor> parse_factors_csv(std::istream& in, const std::string& source) {
    const auto t = parse_csv(in, source);
    const auto in_name = t.column("name");
    const auto in_levels = t.column("levels");
    std::size_t in_coding = t.header.size();
    for (std::size_t i = 0; i < t.header.size(); ++i) {
        if (t.header[i] == "coding") in_coding = i;
    }
    std::vector<Factor> out;
    for (const auto& r : t.rows) {
        Factor f;
        f.name = r[in_name];
        std::string_view lv = r[in_levels];
        while (!lv.empty()) {
            const auto sep = lv.find(';');
            f.levels.emplace_back(trim(lv.substr(0, sep)));
            if (sep == std::string_view::npos) break;
            lv.remove_prefix(sep + 1);
        }
        if (in_coding < r.size() && !r[in_coding].empty()) f.coding = parse_coding(r[in_coding], source);
        out.push_back(std::move(f));
    }
    finish(out, source);
    return out;
}

std::vector<Factor> read_factors(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    if (path.extension() == ".csv") return parse_factors_csv(in, path.string());
    return parse_factors_toml(in, path.string());
}

}  // namespace oriq
