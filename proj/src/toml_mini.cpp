#include "toml_mini.hpp"

#include <cctype>
#include <sstream>

#include "polyfract/errors.hpp"

namespace polyfract::toml {

const Value* Value::find(const std::string& key) const {
    for (const auto& [k, v] : table) {
        if (k == key) return &v;
    }
    return nullptr;
}

const Value& Value::at(const std::string& key) const {
    const Value* v = find(key);
    if (!v) throw SyntaxError("missing required key '" + key + "'");
    return *v;
}

long long Value::as_integer() const {
    if (kind != Kind::Integer) throw SyntaxError("expected an integer value");
    return integer;
}

bool Value::as_boolean() const {
    if (kind != Kind::Boolean) throw SyntaxError("expected a boolean value");
    return boolean;
}

const std::string& Value::as_string() const {
    if (kind != Kind::String) throw SyntaxError("expected a string value");
    return string;
}

namespace {

struct Parser {
    const std::string& text;
    size_t pos = 0;

    [[noreturn]] void fail(const std::string& what) const {
        std::ostringstream os;
        os << what << " at byte offset " << pos;
        throw SyntaxError(os.str());
    }

    bool done() const { return pos >= text.size(); }
    char peek() const { return done() ? '\0' : text[pos]; }

    void skip_inline_ws() {
        while (!done() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
    }

    void skip_ws_and_comments() {
        while (!done()) {
            char c = text[pos];
            if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
                ++pos;
            } else if (c == '#') {
                while (!done() && text[pos] != '\n') ++pos;
            } else {
                break;
            }
        }
    }

    void expect(char c) {
        if (peek() != c) fail(std::string("expected '") + c + "'");
        ++pos;
    }

    std::string parse_key() {
        skip_inline_ws();
        size_t start = pos;
        while (!done() && (std::isalnum(static_cast<unsigned char>(text[pos])) ||
                           text[pos] == '_' || text[pos] == '-')) {
            ++pos;
        }
        if (pos == start) fail("expected a key");
        return text.substr(start, pos - start);
    }

    Value parse_value() {
        skip_inline_ws();
        char c = peek();
        if (c == '"') return parse_string();
        if (c == '[') return parse_array();
        if (c == '{') return parse_inline_table();
        if (c == 't' || c == 'f') return parse_boolean();
        if (c == '-' || c == '+' || std::isdigit(static_cast<unsigned char>(c))) {
            return parse_integer();
        }
        fail("expected a value");
    }

    Value parse_string() {
        expect('"');
        Value v;
        v.kind = Value::Kind::String;
        while (!done() && text[pos] != '"') {
            if (text[pos] == '\\') {
                ++pos;
                if (done()) fail("unterminated escape");
                char e = text[pos];
                if (e == '"' || e == '\\') {
                    v.string.push_back(e);
                } else if (e == 'n') {
                    v.string.push_back('\n');
                } else if (e == 't') {
                    v.string.push_back('\t');
                } else {
                    fail("unsupported escape sequence");
                }
                ++pos;
            } else if (text[pos] == '\n') {
                fail("unterminated string");
            } else {
                v.string.push_back(text[pos]);
                ++pos;
            }
        }
        expect('"');
        return v;
    }

    Value parse_boolean() {
        Value v;
        v.kind = Value::Kind::Boolean;
        if (text.compare(pos, 4, "true") == 0) {
            v.boolean = true;
            pos += 4;
        } else if (text.compare(pos, 5, "false") == 0) {
            v.boolean = false;
            pos += 5;
        } else {
            fail("expected 'true' or 'false'");
        }
        return v;
    }

    Value parse_integer() {
        Value v;
        v.kind = Value::Kind::Integer;
        size_t start = pos;
        if (peek() == '-' || peek() == '+') ++pos;
        while (!done() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos == start) fail("expected an integer");
        v.integer = std::stoll(text.substr(start, pos - start));
        return v;
    }

    Value parse_array() {
        expect('[');
        Value v;
        v.kind = Value::Kind::Array;
        skip_ws_and_comments();
        while (peek() != ']') {
            v.array.push_back(parse_value());
            skip_ws_and_comments();
            if (peek() == ',') {
                ++pos;
                skip_ws_and_comments();
            } else {
                break;
            }
        }
        skip_ws_and_comments();
        expect(']');
        return v;
    }

    Value parse_inline_table() {
        expect('{');
        Value v;
        v.kind = Value::Kind::Table;
        skip_inline_ws();
        while (peek() != '}') {
            std::string key = parse_key();
            skip_inline_ws();
            expect('=');
            Value val = parse_value();
            set_unique(v, key, std::move(val));
            skip_inline_ws();
            if (peek() == ',') {
                ++pos;
                skip_inline_ws();
            } else {
                break;
            }
        }
        skip_inline_ws();
        expect('}');
        return v;
    }

    void set_unique(Value& table, const std::string& key, Value val) {
        if (table.find(key)) fail("duplicate key '" + key + "'");
        table.table.emplace_back(key, std::move(val));
    }

    Value parse_document() {
        Value root;
        root.kind = Value::Kind::Table;
        Value* current = &root;
        skip_ws_and_comments();
        while (!done()) {
            if (peek() == '[') {
                ++pos;
                bool array_of_tables = peek() == '[';
                if (array_of_tables) ++pos;
                std::string name = parse_key();
                skip_inline_ws();
                expect(']');
                if (array_of_tables) expect(']');
                if (array_of_tables) {
                    Value* arr = nullptr;
                    for (auto& [k, v] : root.table) {
                        if (k == name) arr = &v;
                    }
                    if (!arr) {
                        Value a;
                        a.kind = Value::Kind::Array;
                        root.table.emplace_back(name, std::move(a));
                        arr = &root.table.back().second;
                    } else if (arr->kind != Value::Kind::Array) {
                        fail("section '" + name + "' conflicts with an existing key");
                    }
                    Value t;
                    t.kind = Value::Kind::Table;
                    arr->array.push_back(std::move(t));
                    current = &arr->array.back();
                } else {
                    if (root.find(name)) fail("duplicate section '" + name + "'");
                    Value t;
                    t.kind = Value::Kind::Table;
                    root.table.emplace_back(name, std::move(t));
                    current = &root.table.back().second;
                }
            } else {
                std::string key = parse_key();
                skip_inline_ws();
                expect('=');
                Value val = parse_value();
                set_unique(*current, key, std::move(val));
            }
            skip_inline_ws();
            if (!done() && peek() == '#') {
                while (!done() && text[pos] != '\n') ++pos;
            }
            if (!done() && text[pos] != '\n') {
                if (done()) break;
                fail("expected end of line");
            }
            skip_ws_and_comments();
        }
        return root;
    }
};

}  // namespace

Value parse(const std::string& text) {
    Parser p{text};
    return p.parse_document();
}

}  // namespace polyfract::toml
