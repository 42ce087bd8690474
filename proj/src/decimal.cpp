#include "decimal.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace dmnkit {

namespace {
constexpr int kMaxDigits = 18;  // fits in int64 with headroom

int digit_count(long long v) {
    if (v < 0) v = -v;
    int n = 1;
    while (v >= 10) {
        v /= 10;
        ++n;
    }
    return n;
}
}  // namespace

void Decimal::normalize() {
    if (coeff_ == 0) {
        exp_ = 0;
        return;
    }
    while (coeff_ % 10 == 0) {
        coeff_ /= 10;
        ++exp_;
    }
}

Decimal Decimal::from_int(long long v) { return Decimal(v, 0); }

bool Decimal::try_parse(std::string_view text, Decimal& out) {
    size_t i = 0;
    bool negative = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
        negative = text[i] == '-';
        ++i;
    }
    long long coeff = 0;
    int digits = 0;
    int frac_digits = 0;
    bool seen_point = false;
    bool seen_digit = false;
    for (; i < text.size(); ++i) {
        char c = text[i];
        if (c == '.') {
            if (seen_point) return false;
            seen_point = true;
            continue;
        }
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
        seen_digit = true;
        if (coeff == 0 && c == '0' && !seen_point && digits == 0) continue;  // leading zeros
        if (digits >= kMaxDigits) return false;
        coeff = coeff * 10 + (c - '0');
        ++digits;
        if (seen_point) ++frac_digits;
    }
    if (!seen_digit) return false;
    if (negative) coeff = -coeff;
    out = Decimal(coeff, -frac_digits);
    return true;
}

Decimal Decimal::parse(std::string_view text) {
    Decimal d;
    if (!try_parse(text, d))
        throw std::invalid_argument("not a decimal literal: '" + std::string(text) + "'");
    return d;
}

std::string Decimal::str() const {
    if (coeff_ == 0) return "0";
    long long c = coeff_;
    bool negative = c < 0;
    if (negative) c = -c;
    std::string digits = std::to_string(c);
    std::string out;
    if (exp_ >= 0) {
        out = digits + std::string(static_cast<size_t>(exp_), '0');
    } else {
        int frac = -exp_;
        if (static_cast<int>(digits.size()) > frac) {
            out = digits.substr(0, digits.size() - frac) + "." + digits.substr(digits.size() - frac);
        } else {
            out = "0." + std::string(static_cast<size_t>(frac - digits.size()), '0') + digits;
        }
    }
    return negative ? "-" + out : out;
}

int Decimal::compare(const Decimal& other) const {
    if (coeff_ == 0 && other.coeff_ == 0) return 0;
    int sa = coeff_ < 0 ? -1 : (coeff_ > 0 ? 1 : 0);
    int sb = other.coeff_ < 0 ? -1 : (other.coeff_ > 0 ? 1 : 0);
    if (sa != sb) return sa < sb ? -1 : 1;
    // Same sign, both nonzero. Compare order of magnitude first.
    int mag_a = digit_count(coeff_) + exp_;
    int mag_b = digit_count(other.coeff_) + other.exp_;
    if (mag_a != mag_b) {
        int bymag = mag_a < mag_b ? -1 : 1;
        return sa > 0 ? bymag : -bymag;
    }
    // Same magnitude: exponent gap is bounded by the digit counts, so the
    // scaled coefficients fit in 128 bits.
    int shift_a = exp_ - std::min(exp_, other.exp_);
    int shift_b = other.exp_ - std::min(exp_, other.exp_);
    __int128 a = coeff_;
    __int128 b = other.coeff_;
    for (int i = 0; i < shift_a; ++i) a *= 10;
    for (int i = 0; i < shift_b; ++i) b *= 10;
    if (a == b) return 0;
    return a < b ? -1 : 1;
}

double Decimal::to_double() const {
    return static_cast<double>(coeff_) * std::pow(10.0, exp_);
}

}  // namespace dmnkit
