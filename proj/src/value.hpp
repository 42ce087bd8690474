#ifndef DMNKIT_VALUE_HPP
#define DMNKIT_VALUE_HPP

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "decimal.hpp"

namespace dmnkit {

// Runtime value flowing through a decision graph: Null, Boolean, exact
// decimal Number, Text, or a flat List of scalars (lists never nest).
class Value {
public:
    enum class Kind { Null, Boolean, Number, Text, List };

    Value() : v_(std::monostate{}) {}

    static Value null() { return Value(); }
    static Value boolean(bool b) { return Value(Storage(b)); }
    static Value number(Decimal d) { return Value(Storage(d)); }
    static Value number(long long i) { return Value(Storage(Decimal::from_int(i))); }
    static Value text(std::string s) { return Value(Storage(std::move(s))); }
    static Value list(std::vector<Value> items);  // throws std::invalid_argument on nested list

    Kind kind() const;
    bool is_null() const { return kind() == Kind::Null; }

    bool as_bool() const { return std::get<bool>(v_); }
    const Decimal& as_number() const { return std::get<Decimal>(v_); }
    const std::string& as_text() const { return std::get<std::string>(v_); }
    const std::vector<Value>& as_list() const { return std::get<std::vector<Value>>(v_); }

    bool operator==(const Value& other) const;
    bool operator!=(const Value& other) const { return !(*this == other); }

    // Canonical literal rendering used by the compact schema: null, true,
    // 600.5, "text" (escaped). Lists render as [a, b] for diagnostics only.
    std::string repr() const;

private:
    using Storage = std::variant<std::monostate, bool, Decimal, std::string, std::vector<Value>>;
    explicit Value(Storage v) : v_(std::move(v)) {}
    Storage v_;
};

std::string quote_text(std::string_view s);

// Parses a scalar literal: null | true | false | decimal | "text".
// Throws ParseError with the byte offset of the problem.
Value parse_literal(std::string_view text);

const char* to_string(Value::Kind k);

}  // namespace dmnkit

#endif
