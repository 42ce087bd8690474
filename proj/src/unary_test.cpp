#include "unary_test.hpp"

#include <cctype>
#include <stdexcept>

#include "errors.hpp"
#include "util.hpp"

namespace dmnkit {

UnaryTest UnaryTest::irrelevant() { return UnaryTest(); }

UnaryTest UnaryTest::equals_literal(Value v) {
    if (v.kind() == Value::Kind::List)
        throw std::invalid_argument("equality test cannot hold a list literal");
    UnaryTest t;
    t.kind_ = Kind::EqualsLiteral;
    t.literal_ = std::move(v);
    return t;
}

UnaryTest UnaryTest::is_null() {
    UnaryTest t;
    t.kind_ = Kind::IsNull;
    return t;
}

UnaryTest UnaryTest::not_null() {
    UnaryTest t;
    t.kind_ = Kind::NotNull;
    return t;
}

UnaryTest UnaryTest::compare(CompareOp op, Decimal bound) {
    UnaryTest t;
    t.kind_ = Kind::Compare;
    t.op_ = op;
    t.bound_ = bound;
    return t;
}

UnaryTest UnaryTest::contains(std::string needle) {
    UnaryTest t;
    t.kind_ = Kind::Contains;
    t.needle_ = std::move(needle);
    return t;
}

UnaryTest UnaryTest::negation(UnaryTest inner) {
    if (inner.kind() == Kind::Irrelevant)
        throw std::invalid_argument("not(-) is not a valid test");
    if (inner.kind() == Kind::IsNull) return not_null();
    UnaryTest t;
    t.kind_ = Kind::Not;
    t.inner_ = std::make_shared<const UnaryTest>(std::move(inner));
    return t;
}

bool UnaryTest::operator==(const UnaryTest& other) const {
    if (kind_ != other.kind_) return false;
    switch (kind_) {
        case Kind::Irrelevant:
        case Kind::IsNull:
        case Kind::NotNull: return true;
        case Kind::EqualsLiteral: return literal_ == other.literal_;
        case Kind::Compare: return op_ == other.op_ && bound_ == other.bound_;
        case Kind::Contains: return needle_ == other.needle_;
        case Kind::Not: return *inner_ == *other.inner_;
    }
    return false;
}

namespace {

struct Cursor {
    std::string_view text;
    size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }
    bool at_end() {
        skip_ws();
        return pos >= text.size();
    }
    bool consume(std::string_view token) {
        skip_ws();
        if (text.substr(pos, token.size()) == token) {
            pos += token.size();
            return true;
        }
        return false;
    }
    [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, pos); }
};

std::string parse_quoted_at(Cursor& c) {
    c.skip_ws();
    if (c.pos >= c.text.size() || c.text[c.pos] != '"') c.fail("expected '\"'");
    std::string out;
    size_t i = c.pos + 1;
    while (i < c.text.size()) {
        char ch = c.text[i];
        if (ch == '\\') {
            if (i + 1 >= c.text.size()) {
                c.pos = i;
                c.fail("dangling escape");
            }
            char esc = c.text[i + 1];
            if (esc != '"' && esc != '\\') {
                c.pos = i;
                c.fail("unsupported escape");
            }
            out.push_back(esc);
            i += 2;
            continue;
        }
        if (ch == '"') {
            c.pos = i + 1;
            return out;
        }
        out.push_back(ch);
        ++i;
    }
    c.fail("unterminated string");
}

Decimal parse_number_at(Cursor& c) {
    c.skip_ws();
    size_t start = c.pos;
    size_t i = c.pos;
    if (i < c.text.size() && (c.text[i] == '+' || c.text[i] == '-')) ++i;
    while (i < c.text.size() &&
           (std::isdigit(static_cast<unsigned char>(c.text[i])) || c.text[i] == '.'))
        ++i;
    Decimal d;
    if (i == start || !Decimal::try_parse(c.text.substr(start, i - start), d))
        c.fail("expected a number");
    c.pos = i;
    return d;
}

UnaryTest parse_test(Cursor& c);

UnaryTest parse_not(Cursor& c) {
    // "not" already consumed.
    if (!c.consume("(")) c.fail("expected '(' after not");
    c.skip_ws();
    if (c.consume("null")) {
        if (!c.consume(")")) c.fail("expected ')'");
        return UnaryTest::not_null();
    }
    UnaryTest inner = parse_test(c);
    if (!c.consume(")")) c.fail("expected ')'");
    if (inner.kind() == UnaryTest::Kind::Irrelevant) c.fail("not(-) is not a valid test");
    return UnaryTest::negation(std::move(inner));
}

UnaryTest parse_test(Cursor& c) {
    c.skip_ws();
    if (c.pos >= c.text.size()) c.fail("empty test");
    char ch = c.text[c.pos];

    if (ch == '-') {
        // Lone '-' is the wildcard; '-3' starts a number.
        size_t next = c.pos + 1;
        bool digit_follows = next < c.text.size() &&
                             (std::isdigit(static_cast<unsigned char>(c.text[next])) ||
                              c.text[next] == '.');
        if (!digit_follows) {
            ++c.pos;
            return UnaryTest::irrelevant();
        }
        return UnaryTest::equals_literal(Value::number(parse_number_at(c)));
    }
    if (ch == '"') return UnaryTest::equals_literal(Value::text(parse_quoted_at(c)));
    if (ch == '<' || ch == '>') {
        ++c.pos;
        bool eq = c.pos < c.text.size() && c.text[c.pos] == '=';
        if (eq) ++c.pos;
        UnaryTest::CompareOp op = ch == '<'
                                      ? (eq ? UnaryTest::CompareOp::LessEq : UnaryTest::CompareOp::Less)
                                      : (eq ? UnaryTest::CompareOp::GreaterEq
                                            : UnaryTest::CompareOp::Greater);
        return UnaryTest::compare(op, parse_number_at(c));
    }
    if (c.consume("contains")) {
        if (!c.consume("(")) c.fail("expected '(' after contains");
        std::string needle = parse_quoted_at(c);
        if (!c.consume(")")) c.fail("expected ')'");
        return UnaryTest::contains(std::move(needle));
    }
    if (c.consume("not")) return parse_not(c);
    if (c.consume("null")) return UnaryTest::is_null();
    if (c.consume("true")) return UnaryTest::equals_literal(Value::boolean(true));
    if (c.consume("false")) return UnaryTest::equals_literal(Value::boolean(false));
    if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '+' || ch == '.')
        return UnaryTest::equals_literal(Value::number(parse_number_at(c)));
    c.fail("unrecognized test");
}

}  // namespace

UnaryTest parse_unary_test(std::string_view text) {
    Cursor c{text};
    if (c.at_end()) throw ParseError("empty test", 0);
    UnaryTest t = parse_test(c);
    if (!c.at_end()) c.fail("trailing input after test");
    return t;
}

bool eval_unary_test(const UnaryTest& test, const Value& value) {
    switch (test.kind()) {
        case UnaryTest::Kind::Irrelevant:
            return true;
        case UnaryTest::Kind::IsNull:
            return value.is_null();
        case UnaryTest::Kind::NotNull:
            return !value.is_null();
        case UnaryTest::Kind::EqualsLiteral:
            if (value.kind() == Value::Kind::List) {
                for (const Value& item : value.as_list())
                    if (item == test.literal()) return true;
                return false;
            }
            return value == test.literal();
        case UnaryTest::Kind::Contains: {
            auto hit = [&](const Value& v) {
                return v.kind() == Value::Kind::Text &&
                       v.as_text().find(test.needle()) != std::string::npos;
            };
            if (value.kind() == Value::Kind::List) {
                for (const Value& item : value.as_list())
                    if (hit(item)) return true;
                return false;
            }
            return hit(value);
        }
        case UnaryTest::Kind::Compare: {
            if (value.kind() != Value::Kind::Number) return false;
            int c = value.as_number().compare(test.bound());
            switch (test.compare_op()) {
                case UnaryTest::CompareOp::Less: return c < 0;
                case UnaryTest::CompareOp::LessEq: return c <= 0;
                case UnaryTest::CompareOp::Greater: return c > 0;
                case UnaryTest::CompareOp::GreaterEq: return c >= 0;
            }
            return false;
        }
        case UnaryTest::Kind::Not:
            return !eval_unary_test(test.inner(), value);
    }
    return false;
}

const char* to_string(UnaryTest::CompareOp op) {
    switch (op) {
        case UnaryTest::CompareOp::Less: return "<";
        case UnaryTest::CompareOp::LessEq: return "<=";
        case UnaryTest::CompareOp::Greater: return ">";
        case UnaryTest::CompareOp::GreaterEq: return ">=";
    }
    return "?";
}

std::string render_unary_test(const UnaryTest& test) {
    switch (test.kind()) {
        case UnaryTest::Kind::Irrelevant: return "-";
        case UnaryTest::Kind::IsNull: return "null";
        case UnaryTest::Kind::NotNull: return "not(null)";
        case UnaryTest::Kind::EqualsLiteral: return test.literal().repr();
        case UnaryTest::Kind::Compare:
            return std::string(to_string(test.compare_op())) + " " + test.bound().str();
        case UnaryTest::Kind::Contains: return "contains(" + quote_text(test.needle()) + ")";
        case UnaryTest::Kind::Not: return "not(" + render_unary_test(test.inner()) + ")";
    }
    return "-";
}

}  // namespace dmnkit
