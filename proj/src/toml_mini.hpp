#pragma once

#include <string>
#include <utility>
#include <vector>

namespace polyfract::toml {

/// Minimal TOML-subset value model: integers, booleans, strings, arrays,
/// tables (ordered). Covers exactly what system description files use:
/// top-level scalars, [table] sections, [[array-of-table]] sections, inline
/// tables and arrays, and # comments.
struct Value {
    enum class Kind { Integer, Boolean, String, Array, Table };

    Kind kind = Kind::Table;
    long long integer = 0;
    bool boolean = false;
    std::string string;
    std::vector<Value> array;
    std::vector<std::pair<std::string, Value>> table;

    const Value* find(const std::string& key) const;
    /// Lookup that throws SyntaxError when missing.
    const Value& at(const std::string& key) const;
    long long as_integer() const;
    bool as_boolean() const;
    const std::string& as_string() const;
};

/// Parse a document into its root table. Throws SyntaxError with a byte
/// offset on malformed input.
Value parse(const std::string& text);

}  // namespace polyfract::toml
