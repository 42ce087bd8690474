#ifndef DMNKIT_UNARY_TEST_HPP
#define DMNKIT_UNARY_TEST_HPP

#include <memory>
#include <string>
#include <string_view>

#include "value.hpp"

namespace dmnkit {

// Single-cell test of a decision-table rule. The grammar:
//   -                     wildcard (always true)
//   true | false          boolean equality
//   600.5                 exact decimal equality
//   "text"                string equality
//   null                  null check
//   not(null)             non-null check
//   < n  <= n  > n  >= n  numeric comparison
//   contains("s")         substring containment
//   not(<test>)           negation
class UnaryTest {
public:
    enum class Kind { Irrelevant, EqualsLiteral, IsNull, NotNull, Compare, Contains, Not };
    enum class CompareOp { Less, LessEq, Greater, GreaterEq };

    UnaryTest() : kind_(Kind::Irrelevant) {}

    static UnaryTest irrelevant();
    static UnaryTest equals_literal(Value v);  // throws std::invalid_argument on List
    static UnaryTest is_null();
    static UnaryTest not_null();
    static UnaryTest compare(CompareOp op, Decimal bound);
    static UnaryTest contains(std::string needle);
    // not(null) collapses to NotNull; not(-) is rejected.
    static UnaryTest negation(UnaryTest inner);

    Kind kind() const { return kind_; }
    const Value& literal() const { return literal_; }
    CompareOp compare_op() const { return op_; }
    const Decimal& bound() const { return bound_; }
    const std::string& needle() const { return needle_; }
    const UnaryTest& inner() const { return *inner_; }

    bool operator==(const UnaryTest& other) const;

private:
    Kind kind_;
    Value literal_;
    CompareOp op_ = CompareOp::Less;
    Decimal bound_;
    std::string needle_;
    std::shared_ptr<const UnaryTest> inner_;
};

// Throws ParseError with the byte offset of the first unrecognized character.
UnaryTest parse_unary_test(std::string_view text);

// Total over all values; see the per-kind semantics in the implementation.
bool eval_unary_test(const UnaryTest& test, const Value& value);

// Canonical text form; parse_unary_test(render_unary_test(t)) == t.
std::string render_unary_test(const UnaryTest& test);

const char* to_string(UnaryTest::CompareOp op);

}  // namespace dmnkit

#endif
