#ifndef UNICAL_NUMERIC_HPP
#define UNICAL_NUMERIC_HPP

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace unical {

using BigInt = boost::multiprecision::cpp_int;

/// Exact positive rational, the multiplicative group of conversion ratios.
///
/// Always held in lowest terms with both components >= 1, so two ratios are
/// equal exactly when their numerators and denominators are.  There is no
/// addition: ratios only ever multiply, invert and exponentiate.
class Ratio {
public:
    /// The neutral element 1/1.
    Ratio() : num_(1), den_(1) {}

    /// Throws InvalidRatio unless num >= 1 and den >= 1.
    Ratio(BigInt num, BigInt den);

    static Ratio integer(BigInt n) { return Ratio(std::move(n), 1); }

    /// base^exponent for an integer base >= 1.
    static Ratio power_of(const BigInt &base, std::int64_t exponent);

    const BigInt &numerator() const noexcept { return num_; }
    const BigInt &denominator() const noexcept { return den_; }

    bool is_one() const noexcept { return num_ == 1 && den_ == 1; }

    Ratio inverse() const;
    Ratio pow(std::int64_t z) const;

    Ratio &operator*=(const Ratio &other);
    friend Ratio operator*(Ratio a, const Ratio &b) { return a *= b; }
    friend Ratio operator/(const Ratio &a, const Ratio &b) { return a * b.inverse(); }

    friend bool operator==(const Ratio &a, const Ratio &b) = default;
    /// Ordered by numeric value.
    friend std::strong_ordering operator<=>(const Ratio &a, const Ratio &b);

    /// "p/q", or "n" when the denominator is 1.
    std::string to_string() const;

private:
    struct Reduced {};
    Ratio(BigInt num, BigInt den, Reduced) : num_(std::move(num)), den_(std::move(den)) {}

    BigInt num_;
    BigInt den_;
};

std::ostream &operator<<(std::ostream &os, const Ratio &r);

/// Decimal expansion of a ratio.
struct DecimalText {
    std::string text;
    /// True when the expansion terminates within the requested digits.
    bool exact = false;
};

inline constexpr std::size_t max_decimal_digits = 50;

/// Renders `r` with at most `digits` fractional places.
///
/// Exact expansions are printed without trailing zeros ("4.4482216152605",
/// "1").  Otherwise the value is rounded half-to-even at exactly `digits`
/// places and `exact` is false.  Throws InvalidRatio if digits exceeds
/// max_decimal_digits.
DecimalText to_decimal(const Ratio &r, std::size_t digits);

/// Parses the textual ratio forms: "p/q", "n", "B^E" (B >= 2, E signed) and
/// plain decimals "d.ddd".  Throws InvalidRatio on anything else, including
/// values that are not strictly positive.
Ratio parse_ratio(std::string_view text);

} // namespace unical

template <>
struct std::hash<unical::Ratio> {
    std::size_t operator()(const unical::Ratio &r) const noexcept;
};

#endif
