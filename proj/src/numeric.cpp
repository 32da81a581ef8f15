#include "unical/numeric.hpp"

#include <charconv>
#include <ostream>

#include <boost/functional/hash.hpp>
#include <boost/integer/common_factor_rt.hpp>

#include "unical/error.hpp"

namespace unical {

namespace {

BigInt ipow(const BigInt &base, std::uint64_t exponent)
{
    BigInt result = 1;
    BigInt b = base;
    while (exponent != 0) {
        if (exponent & 1u)
            result *= b;
        exponent >>= 1u;
        if (exponent != 0)
            b *= b;
    }
    return result;
}

std::uint64_t magnitude(std::int64_t z)
{
    return z < 0 ? std::uint64_t(0) - std::uint64_t(z) : std::uint64_t(z);
}

bool all_digits(std::string_view s)
{
    if (s.empty())
        return false;
    for (char c : s)
        if (c < '0' || c > '9')
            return false;
    return true;
}

BigInt parse_natural(std::string_view s, std::string_view whole)
{
    if (!all_digits(s))
        throw InvalidRatio("malformed ratio literal '" + std::string(whole) + "'");
    return BigInt(std::string(s));
}

} // namespace

Ratio::Ratio(BigInt num, BigInt den)
{
    if (num < 1 || den < 1)
        throw InvalidRatio("ratio components must be positive, got " + num.str() + "/" + den.str());
    BigInt g = boost::multiprecision::gcd(num, den);
    num_ = num / g;
    den_ = den / g;
}

Ratio Ratio::power_of(const BigInt &base, std::int64_t exponent)
{
    if (base < 1)
        throw InvalidRatio("power base must be positive, got " + base.str());
    BigInt p = ipow(base, magnitude(exponent));
    return exponent >= 0 ? Ratio(std::move(p), BigInt(1), Reduced{}) : Ratio(BigInt(1), std::move(p), Reduced{});
}

Ratio Ratio::inverse() const { return Ratio(den_, num_, Reduced{}); }

Ratio Ratio::pow(std::int64_t z) const
{
    // Powers of a reduced fraction stay reduced.
    std::uint64_t m = magnitude(z);
    BigInt n = ipow(num_, m);
    BigInt d = ipow(den_, m);
    if (z >= 0)
        return Ratio(std::move(n), std::move(d), Reduced{});
    return Ratio(std::move(d), std::move(n), Reduced{});
}

Ratio &Ratio::operator*=(const Ratio &other)
{
    // Cross-cancel first so the products are already reduced.
    BigInt g1 = boost::multiprecision::gcd(num_, other.den_);
    BigInt g2 = boost::multiprecision::gcd(other.num_, den_);
    BigInt n = (num_ / g1) * (other.num_ / g2);
    BigInt d = (den_ / g2) * (other.den_ / g1);
    num_ = std::move(n);
    den_ = std::move(d);
    return *this;
}

std::strong_ordering operator<=>(const Ratio &a, const Ratio &b)
{
    BigInt lhs = a.num_ * b.den_;
    BigInt rhs = b.num_ * a.den_;
    if (lhs < rhs)
        return std::strong_ordering::less;
    if (rhs < lhs)
        return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

std::string Ratio::to_string() const
{
    if (den_ == 1)
        return num_.str();
    return num_.str() + "/" + den_.str();
}

std::ostream &operator<<(std::ostream &os, const Ratio &r) { return os << r.to_string(); }

DecimalText to_decimal(const Ratio &r, std::size_t digits)
{
    if (digits > max_decimal_digits)
        throw InvalidRatio("at most " + std::to_string(max_decimal_digits) + " decimal digits supported");

    BigInt scale = ipow(BigInt(10), digits);
    BigInt scaled = r.numerator() * scale;
    BigInt q = scaled / r.denominator();
    BigInt rem = scaled % r.denominator();
    bool exact = rem == 0;
    if (!exact) {
        BigInt twice = rem * 2;
        if (twice > r.denominator() || (twice == r.denominator() && (q & 1) != 0))
            ++q;
    }

    std::string all = q.str();
    if (all.size() <= digits)
        all.insert(0, digits + 1 - all.size(), '0');
    std::string int_part = all.substr(0, all.size() - digits);
    std::string frac_part = all.substr(all.size() - digits);
    if (exact) {
        while (!frac_part.empty() && frac_part.back() == '0')
            frac_part.pop_back();
    }
    DecimalText out;
    out.exact = exact;
    out.text = frac_part.empty() ? int_part : int_part + "." + frac_part;
    return out;
}

Ratio parse_ratio(std::string_view text)
{
    if (auto slash = text.find('/'); slash != std::string_view::npos)
        return Ratio(parse_natural(text.substr(0, slash), text), parse_natural(text.substr(slash + 1), text));

    if (auto caret = text.find('^'); caret != std::string_view::npos) {
        BigInt base = parse_natural(text.substr(0, caret), text);
        if (base < 2)
            throw InvalidRatio("power base must be at least 2 in '" + std::string(text) + "'");
        std::string_view exp_text = text.substr(caret + 1);
        if (!exp_text.empty() && exp_text.front() == '+')
            exp_text.remove_prefix(1);
        std::int64_t exponent = 0;
        auto [ptr, ec] = std::from_chars(exp_text.data(), exp_text.data() + exp_text.size(), exponent);
        if (exp_text.empty() || ec != std::errc() || ptr != exp_text.data() + exp_text.size())
            throw InvalidRatio("malformed exponent in '" + std::string(text) + "'");
        return Ratio::power_of(base, exponent);
    }

    if (auto dot = text.find('.'); dot != std::string_view::npos) {
        std::string_view int_part = text.substr(0, dot);
        std::string_view frac_part = text.substr(dot + 1);
        if ((!int_part.empty() && !all_digits(int_part)) || !all_digits(frac_part))
            throw InvalidRatio("malformed decimal literal '" + std::string(text) + "'");
        BigInt n(std::string(int_part) + std::string(frac_part));
        return Ratio(std::move(n), ipow(BigInt(10), frac_part.size()));
    }

    return Ratio(parse_natural(text, text), BigInt(1));
}

} // namespace unical

std::size_t std::hash<unical::Ratio>::operator()(const unical::Ratio &r) const noexcept
{
    std::size_t seed = 0;
    boost::hash_combine(seed, boost::multiprecision::hash_value(r.numerator()));
    boost::hash_combine(seed, boost::multiprecision::hash_value(r.denominator()));
    return seed;
}
