#ifndef UNICAL_MODEL_HPP
#define UNICAL_MODEL_HPP

#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "unical/abelian.hpp"
#include "unical/numeric.hpp"

namespace unical {

/// A symbol of one kind (dimension, prefix or unit).  The tag keeps the three
/// alphabets apart at compile time; the same spelling may occur in several.
template <class Tag>
struct Symbol {
    std::string name;

    Symbol() = default;
    Symbol(std::string n) : name(std::move(n)) {}
    Symbol(const char *n) : name(n) {}

    friend bool operator==(const Symbol &, const Symbol &) = default;
    friend auto operator<=>(const Symbol &, const Symbol &) = default;
};

struct DimensionTag {};
struct PrefixTag {};
struct UnitTag {};

using DimensionSymbol = Symbol<DimensionTag>;
using PrefixSymbol = Symbol<PrefixTag>;
using UnitSymbol = Symbol<UnitTag>;

using Dimension = ExponentMap<DimensionSymbol>;
using Prefix = ExponentMap<PrefixSymbol>;
using RootUnit = ExponentMap<UnitSymbol>;

/// A prefix attached to a base unit, e.g. kilogram = ({k -> 1}, g).
struct PreUnit {
    Prefix prefix;
    UnitSymbol base;

    friend bool operator==(const PreUnit &, const PreUnit &) = default;
    /// Base symbol first, then prefix.
    friend auto operator<=>(const PreUnit &a, const PreUnit &b)
    {
        if (auto c = a.base <=> b.base; c != 0)
            return std::weak_ordering(c);
        return a.prefix <=> b.prefix;
    }
};

using Unit = ExponentMap<PreUnit>;

/// Prefix and root unit held apart; prefixes of the factors multiplied out.
struct NormalizedUnit {
    Prefix prefix;
    RootUnit root;

    friend bool operator==(const NormalizedUnit &, const NormalizedUnit &) = default;
    friend auto operator<=>(const NormalizedUnit &, const NormalizedUnit &) = default;

    friend NormalizedUnit operator*(const NormalizedUnit &a, const NormalizedUnit &b)
    {
        return {a.prefix * b.prefix, a.root * b.root};
    }
    NormalizedUnit inverse() const { return {prefix.inverse(), root.inverse()}; }
};

/// Numeric prefix value and root unit.
struct EvaluatedUnit {
    Ratio factor;
    RootUnit root;

    friend bool operator==(const EvaluatedUnit &, const EvaluatedUnit &) = default;
    friend auto operator<=>(const EvaluatedUnit &, const EvaluatedUnit &) = default;

    friend EvaluatedUnit operator*(const EvaluatedUnit &a, const EvaluatedUnit &b)
    {
        return {a.factor * b.factor, a.root * b.root};
    }
    EvaluatedUnit inverse() const { return {factor.inverse(), root.inverse()}; }
};

/// Numeric prefix value and dimension.
///
/// Too coarse for deciding conversions: codimensional units such as the
/// gray and the sievert, or the joule and the newton-metre, collapse to the
/// same abstract unit.  Nothing in the conversion machinery consults it.
struct AbstractUnit {
    Ratio factor;
    Dimension dimension;

    friend bool operator==(const AbstractUnit &, const AbstractUnit &) = default;
};

/// Immutable registry of base dimensions, base prefixes with their values and
/// base units with their dimensions.  Declaration order is kept for listing
/// and printing.
class UnitSystem {
public:
    UnitSystem() = default;

    /// Throws ValidationError on duplicate symbols within a kind or on a unit
    /// whose dimension mentions an unregistered base dimension.
    UnitSystem(std::vector<DimensionSymbol> dimensions, std::vector<std::pair<PrefixSymbol, Ratio>> prefixes,
               std::vector<std::pair<UnitSymbol, Dimension>> units);

    bool has_dimension(const DimensionSymbol &d) const;
    bool has_prefix(const PrefixSymbol &p) const { return prefix_values_.contains(p); }
    bool has_unit(const UnitSymbol &u) const { return unit_dimensions_.contains(u); }

    /// Throws UnknownSymbol.
    const Ratio &prefix_value(const PrefixSymbol &p) const;
    /// Throws UnknownSymbol.
    const Dimension &unit_dimension(const UnitSymbol &u) const;

    const std::vector<DimensionSymbol> &dimensions() const noexcept { return dimensions_; }
    const std::vector<PrefixSymbol> &prefixes() const noexcept { return prefix_order_; }
    const std::vector<UnitSymbol> &units() const noexcept { return unit_order_; }

    friend bool operator==(const UnitSystem &a, const UnitSystem &b)
    {
        return a.dimensions_ == b.dimensions_ && a.prefix_order_ == b.prefix_order_ &&
               a.unit_order_ == b.unit_order_ && a.prefix_values_ == b.prefix_values_ &&
               a.unit_dimensions_ == b.unit_dimensions_;
    }

private:
    std::vector<DimensionSymbol> dimensions_;
    std::vector<PrefixSymbol> prefix_order_;
    std::vector<UnitSymbol> unit_order_;
    std::map<PrefixSymbol, Ratio> prefix_values_;
    std::map<UnitSymbol, Dimension> unit_dimensions_;
};

GroupInterface<Ratio> ratio_group();

/// ⌊u0⌋: the base unit with the empty prefix as a unit literal.
Unit unit_literal(const UnitSymbol &base);
/// The single preunit (prefix, base) as a unit literal.
Unit unit_literal(const Prefix &prefix, const UnitSymbol &base);

/// Throws UnknownSymbol if any prefix or base unit in `u` is unregistered.
void require_well_formed(const UnitSystem &sys, const Unit &u);

Prefix pref(const Unit &u);
RootUnit root(const Unit &u);
Unit unroot(const RootUnit &r);
/// unroot . root: drops every prefix.
Unit strip(const Unit &u);

NormalizedUnit norm(const Unit &u);
/// Attaches a further prefix to a whole normalized unit.
NormalizedUnit prefix_apply(const Prefix &p, const NormalizedUnit &n);

Ratio val(const UnitSystem &sys, const Prefix &p);
Ratio pval(const UnitSystem &sys, const Unit &u);

Dimension dim_root(const UnitSystem &sys, const RootUnit &r);
Dimension dim(const UnitSystem &sys, const Unit &u);

EvaluatedUnit eval(const UnitSystem &sys, const Unit &u);
EvaluatedUnit eval_norm(const UnitSystem &sys, const NormalizedUnit &n);

AbstractUnit abstraction(const UnitSystem &sys, const Unit &u);
AbstractUnit abstraction_eval(const UnitSystem &sys, const EvaluatedUnit &e);

enum class EquivalenceLevel { normal, numerical, root, dimension };

/// Kernel test of norm / eval / root / dim respectively.
bool equivalent(const UnitSystem &sys, const Unit &u, const Unit &v, EquivalenceLevel level);

} // namespace unical

template <class Tag>
struct std::hash<unical::Symbol<Tag>> {
    std::size_t operator()(const unical::Symbol<Tag> &s) const noexcept { return std::hash<std::string>{}(s.name); }
};

template <>
struct std::hash<unical::PreUnit> {
    std::size_t operator()(const unical::PreUnit &p) const noexcept
    {
        std::size_t seed = std::hash<unical::UnitSymbol>{}(p.base);
        boost::hash_combine(seed, std::hash<unical::Prefix>{}(p.prefix));
        return seed;
    }
};

#endif
