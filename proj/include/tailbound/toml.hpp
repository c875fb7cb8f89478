#pragma once

#include <map>
#include <string>
#include <vector>

#include "tailbound/error.hpp"

namespace tailbound {
namespace toml {

// Line-oriented TOML-compatible subset: [table] and [[array-of-tables]]
// headers, key = value with string / number / list / inline-table values,
// and # comments. Enough for the spec-file formats; not a general parser.
struct value {
    enum kind { STRING, SCALAR, LIST, TABLE } k = SCALAR;
    std::string str;                        // STRING, or SCALAR text (numbers kept verbatim)
    std::vector<value> list;                // LIST
    std::map<std::string, value> table;     // TABLE (inline)
};

struct table {
    std::map<std::string, value> entries;
    int line = 0;

    bool has(const std::string& key) const { return entries.count(key) > 0; }
    const value& at(const std::string& key) const;
    std::string get_string(const std::string& key) const;
    std::string get_string_or(const std::string& key, const std::string& dflt) const;
    long long get_int(const std::string& key, long long dflt) const;
};

struct section {
    std::string name; // e.g. "prr", "branch", "branch.step"
    bool is_array = false;
    table tbl;
};

struct document {
    // sections in file order; nesting like [[branch.step]] is resolved by
    // the consumer walking the ordered list
    std::vector<section> sections;

    const table* find(const std::string& name) const;
};

document parse(const std::string& text);
document parse_file(const std::string& path);

} // namespace toml
} // namespace tailbound
