#include "tailbound/toml.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace tailbound {
namespace toml {

namespace {

void fail(int line, const std::string& msg) {
    raise(errc::syntax_error, "line " + std::to_string(line) + ": " + msg);
}

std::string trim(const std::string& s) {
    size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

// strips a trailing comment that is not inside a string
std::string strip_comment(const std::string& s) {
    bool in_str = false;
    for (size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"') in_str = !in_str;
        if (s[i] == '#' && !in_str) return s.substr(0, i);
    }
    return s;
}

value parse_value(const std::string& raw, int line);

value parse_inline_table(const std::string& body, int line) {
    value v;
    v.k = value::TABLE;
    std::string cur;
    int depth = 0;
    bool in_str = false;
    std::vector<std::string> parts;
    for (char c : body) {
        if (c == '"') in_str = !in_str;
        if (!in_str) {
            if (c == '{' || c == '[') ++depth;
            if (c == '}' || c == ']') --depth;
            if (c == ',' && depth == 0) {
                parts.push_back(cur);
                cur.clear();
                continue;
            }
        }
        cur.push_back(c);
    }
    if (!trim(cur).empty()) parts.push_back(cur);
    for (const auto& p : parts) {
        auto eq = p.find('=');
        if (eq == std::string::npos) fail(line, "expected key = value in inline table");
        std::string key = trim(p.substr(0, eq));
        if (key.empty()) fail(line, "empty key in inline table");
        v.table[key] = parse_value(trim(p.substr(eq + 1)), line);
    }
    return v;
}

value parse_value(const std::string& raw, int line) {
    value v;
    if (raw.empty()) fail(line, "empty value");
    if (raw.front() == '"') {
        if (raw.size() < 2 || raw.back() != '"') fail(line, "unterminated string");
        v.k = value::STRING;
        v.str = raw.substr(1, raw.size() - 2);
        return v;
    }
    if (raw.front() == '[') {
        if (raw.back() != ']') fail(line, "unterminated list");
        v.k = value::LIST;
        std::string body = raw.substr(1, raw.size() - 2);
        std::string cur;
        int depth = 0;
        bool in_str = false;
        std::vector<std::string> parts;
        for (char c : body) {
            if (c == '"') in_str = !in_str;
            if (!in_str) {
                if (c == '[' || c == '{') ++depth;
                if (c == ']' || c == '}') --depth;
                if (c == ',' && depth == 0) {
                    parts.push_back(cur);
                    cur.clear();
                    continue;
                }
            }
            cur.push_back(c);
        }
        if (!trim(cur).empty()) parts.push_back(cur);
        for (const auto& p : parts) v.list.push_back(parse_value(trim(p), line));
        return v;
    }
    if (raw.front() == '{') {
        if (raw.back() != '}') fail(line, "unterminated inline table");
        return parse_inline_table(raw.substr(1, raw.size() - 2), line);
    }
    v.k = value::SCALAR;
    v.str = raw;
    return v;
}

} // namespace

const value& table::at(const std::string& key) const {
    auto it = entries.find(key);
    if (it == entries.end())
        raise(errc::syntax_error, "line " + std::to_string(line) + ": missing key '" + key + "'");
    return it->second;
}

std::string table::get_string(const std::string& key) const {
    const value& v = at(key);
    return v.str;
}

std::string table::get_string_or(const std::string& key, const std::string& dflt) const {
    if (!has(key)) return dflt;
    return entries.at(key).str;
}

long long table::get_int(const std::string& key, long long dflt) const {
    if (!has(key)) return dflt;
    const value& v = entries.at(key);
    char* end = nullptr;
    long long r = std::strtoll(v.str.c_str(), &end, 10);
    if (end == v.str.c_str() || *end != '\0')
        raise(errc::syntax_error, "key '" + key + "' is not an integer: " + v.str);
    return r;
}

const table* document::find(const std::string& name) const {
    for (const auto& s : sections)
        if (s.name == name) return &s.tbl;
    return nullptr;
}

document parse(const std::string& text) {
    document doc;
    table* cur = nullptr;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = trim(strip_comment(raw));
        if (line.empty()) continue;
        if (line.front() == '[') {
            section sec;
            if (line.size() > 1 && line[1] == '[') {
                auto close = line.find("]]");
                if (close == std::string::npos) fail(lineno, "bad table header");
                sec.name = trim(line.substr(2, close - 2));
                sec.is_array = true;
            } else {
                auto close = line.find(']');
                if (close == std::string::npos) fail(lineno, "bad table header");
                sec.name = trim(line.substr(1, close - 1));
            }
            if (sec.name.empty()) fail(lineno, "empty table name");
            sec.tbl.line = lineno;
            doc.sections.push_back(std::move(sec));
            cur = &doc.sections.back().tbl;
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) fail(lineno, "expected key = value");
        if (!cur) fail(lineno, "key outside any [table]");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key.empty()) fail(lineno, "empty key");
        cur->entries[key] = parse_value(val, lineno);
    }
    return doc;
}

document parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(errc::io_error, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

} // namespace toml
} // namespace tailbound
