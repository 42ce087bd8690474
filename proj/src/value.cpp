#include "value.hpp"

#include <stdexcept>

#include "errors.hpp"
#include "util.hpp"

namespace dmnkit {

Value Value::list(std::vector<Value> items) {
    for (const Value& v : items) {
        if (v.kind() == Kind::List)
            throw std::invalid_argument("lists may not contain lists");
    }
    return Value(Storage(std::move(items)));
}

Value::Kind Value::kind() const {
    switch (v_.index()) {
        case 0: return Kind::Null;
        case 1: return Kind::Boolean;
        case 2: return Kind::Number;
        case 3: return Kind::Text;
        default: return Kind::List;
    }
}

bool Value::operator==(const Value& other) const {
    if (kind() != other.kind()) return false;
    switch (kind()) {
        case Kind::Null: return true;
        case Kind::Boolean: return as_bool() == other.as_bool();
        case Kind::Number: return as_number() == other.as_number();
        case Kind::Text: return as_text() == other.as_text();
        case Kind::List: {
            const auto& a = as_list();
            const auto& b = other.as_list();
            if (a.size() != b.size()) return false;
            for (size_t i = 0; i < a.size(); ++i)
                if (a[i] != b[i]) return false;
            return true;
        }
    }
    return false;
}

std::string quote_text(std::string_view s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::string Value::repr() const {
    switch (kind()) {
        case Kind::Null: return "null";
        case Kind::Boolean: return as_bool() ? "true" : "false";
        case Kind::Number: return as_number().str();
        case Kind::Text: return quote_text(as_text());
        case Kind::List: {
            std::string out = "[";
            bool first = true;
            for (const Value& v : as_list()) {
                if (!first) out += ", ";
                out += v.repr();
                first = false;
            }
            return out + "]";
        }
    }
    return "null";
}

const char* to_string(Value::Kind k) {
    switch (k) {
        case Value::Kind::Null: return "null";
        case Value::Kind::Boolean: return "boolean";
        case Value::Kind::Number: return "number";
        case Value::Kind::Text: return "text";
        case Value::Kind::List: return "list";
    }
    return "?";
}

namespace {

// Parses "..."-quoted text starting at s[pos] (the opening quote).
// On success returns the decoded string and sets `end` past the close quote.
bool parse_quoted(std::string_view s, size_t pos, std::string& out, size_t& end) {
    if (pos >= s.size() || s[pos] != '"') return false;
    out.clear();
    size_t i = pos + 1;
    while (i < s.size()) {
        char c = s[i];
        if (c == '\\') {
            if (i + 1 >= s.size()) return false;
            char esc = s[i + 1];
            if (esc != '"' && esc != '\\') return false;
            out.push_back(esc);
            i += 2;
            continue;
        }
        if (c == '"') {
            end = i + 1;
            return true;
        }
        out.push_back(c);
        ++i;
    }
    return false;
}

}  // namespace

Value parse_literal(std::string_view text) {
    std::string t = trim(text);
    size_t lead = text.find_first_not_of(" \t\r\n");
    if (t.empty()) throw ParseError("empty literal", 0);
    if (t == "null") return Value::null();
    if (t == "true") return Value::boolean(true);
    if (t == "false") return Value::boolean(false);
    if (t[0] == '"') {
        std::string decoded;
        size_t end = 0;
        if (parse_quoted(t, 0, decoded, end) && end == t.size()) return Value::text(std::move(decoded));
        throw ParseError("malformed string literal", lead);
    }
    Decimal d;
    if (Decimal::try_parse(t, d)) return Value::number(d);
    throw ParseError("unrecognized literal: '" + t + "'", lead == std::string_view::npos ? 0 : lead);
}

}  // namespace dmnkit
