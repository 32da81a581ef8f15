#ifndef UNICAL_ABELIAN_HPP
#define UNICAL_ABELIAN_HPP

// Free abelian groups as canonical exponent maps, plus the pairing monad and
// the distributive law that lets prefixes/ratios be pulled out of a word.

#include <algorithm>
#include <compare>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <type_traits>
#include <utility>
#include <vector>

#include <boost/functional/hash.hpp>

namespace unical {

using Exponent = std::int64_t;

/// Element of the free abelian group over a totally ordered alphabet G.
///
/// Stored as a vector of (generator, exponent) sorted by generator with no
/// zero exponents, so structural equality is group equality and iteration
/// order is deterministic.  Written multiplicatively: operator* adds
/// exponents pointwise.
template <std::totally_ordered G>
class ExponentMap {
public:
    using generator_type = G;
    using Entry = std::pair<G, Exponent>;

    ExponentMap() = default;

    /// Builds from arbitrary entries; duplicates are summed and zeros dropped.
    explicit ExponentMap(std::vector<Entry> entries) : entries_(std::move(entries)) { canonicalize(); }

    ExponentMap(std::initializer_list<Entry> entries) : ExponentMap(std::vector<Entry>(entries)) {}

    /// The literal {x -> 1}.
    static ExponentMap delta(G x)
    {
        ExponentMap m;
        m.entries_.emplace_back(std::move(x), 1);
        return m;
    }

    std::span<const Entry> entries() const noexcept { return entries_; }
    bool empty() const noexcept { return entries_.empty(); }
    std::size_t size() const noexcept { return entries_.size(); }

    /// Exponent of x; zero outside the support.
    Exponent operator[](const G &x) const
    {
        auto it = std::lower_bound(entries_.begin(), entries_.end(), x,
                                   [](const Entry &e, const G &key) { return e.first < key; });
        return it != entries_.end() && it->first == x ? it->second : 0;
    }

    std::vector<G> support() const
    {
        std::vector<G> s;
        s.reserve(entries_.size());
        for (const auto &[g, z] : entries_)
            s.push_back(g);
        return s;
    }

    /// Sum of absolute exponents.
    Exponent word_size() const noexcept
    {
        Exponent n = 0;
        for (const auto &e : entries_)
            n += e.second < 0 ? -e.second : e.second;
        return n;
    }

    ExponentMap inverse() const
    {
        ExponentMap m = *this;
        for (auto &e : m.entries_)
            e.second = -e.second;
        return m;
    }

    ExponentMap pow(Exponent z) const
    {
        if (z == 0)
            return {};
        ExponentMap m = *this;
        for (auto &e : m.entries_)
            e.second *= z;
        return m;
    }

    friend ExponentMap operator*(const ExponentMap &a, const ExponentMap &b)
    {
        ExponentMap out;
        out.entries_.reserve(a.entries_.size() + b.entries_.size());
        auto i = a.entries_.begin();
        auto j = b.entries_.begin();
        while (i != a.entries_.end() && j != b.entries_.end()) {
            if (i->first < j->first) {
                out.entries_.push_back(*i++);
            } else if (j->first < i->first) {
                out.entries_.push_back(*j++);
            } else {
                if (Exponent z = i->second + j->second; z != 0)
                    out.entries_.emplace_back(i->first, z);
                ++i;
                ++j;
            }
        }
        out.entries_.insert(out.entries_.end(), i, a.entries_.end());
        out.entries_.insert(out.entries_.end(), j, b.entries_.end());
        return out;
    }

    ExponentMap &operator*=(const ExponentMap &other) { return *this = *this * other; }

    friend bool operator==(const ExponentMap &, const ExponentMap &) = default;

    /// Lexicographic on the sorted entry list; makes nested exponent maps
    /// usable as generators themselves.
    friend auto operator<=>(const ExponentMap &a, const ExponentMap &b)
    {
        return std::lexicographical_compare_three_way(
            a.entries_.begin(), a.entries_.end(), b.entries_.begin(), b.entries_.end(),
            [](const Entry &x, const Entry &y) -> std::weak_ordering {
                if (x.first < y.first)
                    return std::weak_ordering::less;
                if (y.first < x.first)
                    return std::weak_ordering::greater;
                return x.second <=> y.second;
            });
    }

private:
    void canonicalize()
    {
        std::stable_sort(entries_.begin(), entries_.end(),
                         [](const Entry &x, const Entry &y) { return x.first < y.first; });
        std::vector<Entry> merged;
        merged.reserve(entries_.size());
        for (auto &e : entries_) {
            if (!merged.empty() && merged.back().first == e.first)
                merged.back().second += e.second;
            else
                merged.push_back(std::move(e));
        }
        std::erase_if(merged, [](const Entry &e) { return e.second == 0; });
        entries_ = std::move(merged);
    }

    std::vector<Entry> entries_;
};

template <class G>
ExponentMap<G> delta(G x)
{
    return ExponentMap<G>::delta(std::move(x));
}

template <class G>
ExponentMap<G> inverse(const ExponentMap<G> &f)
{
    return f.inverse();
}

template <class G>
ExponentMap<G> power(const ExponentMap<G> &f, Exponent z)
{
    return f.pow(z);
}

/// Functorial action: exponents of generators identified by `fn` are summed.
template <class G, class Fn>
auto map(Fn &&fn, const ExponentMap<G> &f)
{
    using H = std::remove_cvref_t<std::invoke_result_t<Fn &, const G &>>;
    std::vector<typename ExponentMap<H>::Entry> out;
    out.reserve(f.size());
    for (const auto &[x, z] : f.entries())
        out.emplace_back(std::invoke(fn, x), z);
    return ExponentMap<H>(std::move(out));
}

/// Monad multiplication: distributes outer exponents into the inner maps and
/// multiplies everything out.
template <class G>
ExponentMap<G> flatten(const ExponentMap<ExponentMap<G>> &nested)
{
    std::vector<typename ExponentMap<G>::Entry> out;
    for (const auto &[inner, z] : nested.entries())
        for (const auto &[x, w] : inner.entries())
            out.emplace_back(x, w * z);
    return ExponentMap<G>(std::move(out));
}

/// Product-of-powers factorization in generator order.
template <class G>
std::vector<std::pair<G, Exponent>> factors(const ExponentMap<G> &f)
{
    return {f.entries().begin(), f.entries().end()};
}

/// An abelian group given by its operations.  The laws are the caller's
/// responsibility.
template <class T>
struct GroupInterface {
    std::function<T(const T &, const T &)> combine;
    std::function<T(const T &)> invert;
    T neutral;

    /// x^(z) by repeated squaring.
    T power(const T &x, Exponent z) const
    {
        T base = z < 0 ? invert(x) : x;
        std::uint64_t n = z < 0 ? std::uint64_t(0) - std::uint64_t(z) : std::uint64_t(z);
        T result = neutral;
        while (n != 0) {
            if (n & 1u)
                result = combine(result, base);
            n >>= 1u;
            if (n != 0)
                base = combine(base, base);
        }
        return result;
    }
};

/// The group of exponent maps over G itself.
template <class G>
GroupInterface<ExponentMap<G>> free_group()
{
    return {[](const ExponentMap<G> &a, const ExponentMap<G> &b) { return a * b; },
            [](const ExponentMap<G> &a) { return a.inverse(); }, ExponentMap<G>{}};
}

/// Counit: interprets a word over target-group elements by multiplying it out.
template <class T>
T evaluate(const GroupInterface<T> &group, const ExponentMap<T> &f)
{
    T acc = group.neutral;
    for (const auto &[x, z] : f.entries())
        acc = group.combine(acc, group.power(x, z));
    return acc;
}

/// evaluate(group, map(fn, f)) without materializing the mapped word.  The
/// unique homomorphic extension of `fn` to the free group.
template <class T, class G, class Fn>
T evaluate_with(const GroupInterface<T> &group, const ExponentMap<G> &f, Fn &&fn)
{
    T acc = group.neutral;
    for (const auto &[x, z] : f.entries())
        acc = group.combine(acc, group.power(std::invoke(fn, x), z));
    return acc;
}

// Pairing with a fixed group A: Pair_A(X) = A x X.

template <class A, class X>
using Paired = std::pair<A, X>;

template <class A, class X>
Paired<A, X> pair_unit(const GroupInterface<A> &group, X x)
{
    return {group.neutral, std::move(x)};
}

template <class A, class X>
Paired<A, X> pair_join(const GroupInterface<A> &group, const Paired<A, Paired<A, X>> &p)
{
    return {group.combine(p.first, p.second.first), p.second.second};
}

template <class A, class X, class Fn>
auto pair_map(Fn &&fn, const Paired<A, X> &p)
{
    return std::pair{p.first, std::invoke(fn, p.second)};
}

/// Distributive law: splits a word over pairs into the evaluated product of
/// first components and the word over second components.
template <class A, class X>
Paired<A, ExponentMap<X>> distribute(const GroupInterface<A> &group, const ExponentMap<Paired<A, X>> &f)
{
    A a = evaluate_with(group, f, [](const Paired<A, X> &p) -> const A & { return p.first; });
    return {std::move(a), map([](const Paired<A, X> &p) -> const X & { return p.second; }, f)};
}

/// Unit of the composite monad Pair_A . FinSupp.
template <class A, class X>
Paired<A, ExponentMap<X>> composite_unit(const GroupInterface<A> &group, X x)
{
    return {group.neutral, delta(std::move(x))};
}

/// Multiplication of the composite monad: distribute the inner layer, then
/// join the pair and flatten the words.
template <class A, class X>
Paired<A, ExponentMap<X>> composite_join(const GroupInterface<A> &group,
                                         const Paired<A, ExponentMap<Paired<A, ExponentMap<X>>>> &nested)
{
    auto inner = distribute(group, nested.second);
    return {group.combine(nested.first, inner.first), flatten(inner.second)};
}

} // namespace unical

template <class G>
struct std::hash<unical::ExponentMap<G>> {
    std::size_t operator()(const unical::ExponentMap<G> &m) const noexcept
    {
        std::size_t seed = m.size();
        for (const auto &[g, z] : m.entries()) {
            boost::hash_combine(seed, std::hash<G>{}(g));
            boost::hash_combine(seed, z);
        }
        return seed;
    }
};

#endif
