#ifndef DMNKIT_DECIMAL_HPP
#define DMNKIT_DECIMAL_HPP

#include <cstdint>
#include <string>
#include <string_view>

namespace dmnkit {

// Exact decimal number: coefficient * 10^exponent with the coefficient
// normalized to carry no trailing zeros (zero is {0, 0}). Comparisons are
// exact on the decimal representation; no binary-float drift.
class Decimal {
public:
    Decimal() = default;

    static Decimal from_int(long long v);
    static Decimal parse(std::string_view text);  // throws std::invalid_argument
    static bool try_parse(std::string_view text, Decimal& out);

    long long coefficient() const { return coeff_; }
    int exponent() const { return exp_; }

    // Canonical rendering: "600", "600.5", "-0.25". parse(str()) == *this.
    std::string str() const;

    int compare(const Decimal& other) const;  // <0, 0, >0
    bool operator==(const Decimal& o) const { return coeff_ == o.coeff_ && exp_ == o.exp_; }
    bool operator!=(const Decimal& o) const { return !(*this == o); }
    bool operator<(const Decimal& o) const { return compare(o) < 0; }
    bool operator<=(const Decimal& o) const { return compare(o) <= 0; }
    bool operator>(const Decimal& o) const { return compare(o) > 0; }
    bool operator>=(const Decimal& o) const { return compare(o) >= 0; }

    double to_double() const;

private:
    Decimal(long long coeff, int exp) : coeff_(coeff), exp_(exp) { normalize(); }
    void normalize();

    long long coeff_ = 0;
    int exp_ = 0;
};

}  // namespace dmnkit

#endif
