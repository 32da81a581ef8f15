#include "unical/model.hpp"

#include <algorithm>
#include <set>

#include "unical/error.hpp"

namespace unical {

UnitSystem::UnitSystem(std::vector<DimensionSymbol> dimensions, std::vector<std::pair<PrefixSymbol, Ratio>> prefixes,
                       std::vector<std::pair<UnitSymbol, Dimension>> units)
    : dimensions_(std::move(dimensions))
{
    std::set<DimensionSymbol> seen(dimensions_.begin(), dimensions_.end());
    if (seen.size() != dimensions_.size())
        throw ValidationError("duplicate base dimension");

    for (auto &[symbol, value] : prefixes) {
        if (!prefix_values_.emplace(symbol, value).second)
            throw ValidationError("duplicate prefix '" + symbol.name + "'");
        prefix_order_.push_back(std::move(symbol));
    }

    for (auto &[symbol, dimension] : units) {
        for (const auto &[d, z] : dimension.entries())
            if (!seen.contains(d))
                throw ValidationError("unit '" + symbol.name + "' uses unknown dimension '" + d.name + "'");
        if (!unit_dimensions_.emplace(symbol, dimension).second)
            throw ValidationError("duplicate unit '" + symbol.name + "'");
        unit_order_.push_back(std::move(symbol));
    }
}

bool UnitSystem::has_dimension(const DimensionSymbol &d) const
{
    return std::find(dimensions_.begin(), dimensions_.end(), d) != dimensions_.end();
}

const Ratio &UnitSystem::prefix_value(const PrefixSymbol &p) const
{
    auto it = prefix_values_.find(p);
    if (it == prefix_values_.end())
        throw UnknownSymbol("prefix", p.name);
    return it->second;
}

const Dimension &UnitSystem::unit_dimension(const UnitSymbol &u) const
{
    auto it = unit_dimensions_.find(u);
    if (it == unit_dimensions_.end())
        throw UnknownSymbol("unit", u.name);
    return it->second;
}

GroupInterface<Ratio> ratio_group()
{
    return {[](const Ratio &a, const Ratio &b) { return a * b; }, [](const Ratio &a) { return a.inverse(); },
            Ratio{}};
}

Unit unit_literal(const UnitSymbol &base) { return delta(PreUnit{{}, base}); }

Unit unit_literal(const Prefix &prefix, const UnitSymbol &base) { return delta(PreUnit{prefix, base}); }

void require_well_formed(const UnitSystem &sys, const Unit &u)
{
    for (const auto &[p, z] : u.entries()) {
        if (!sys.has_unit(p.base))
            throw UnknownSymbol("unit", p.base.name);
        for (const auto &[s, w] : p.prefix.entries())
            if (!sys.has_prefix(s))
                throw UnknownSymbol("prefix", s.name);
    }
}

Prefix pref(const Unit &u)
{
    return evaluate_with(free_group<PrefixSymbol>(), u, [](const PreUnit &p) -> const Prefix & { return p.prefix; });
}

RootUnit root(const Unit &u)
{
    return map([](const PreUnit &p) -> const UnitSymbol & { return p.base; }, u);
}

Unit unroot(const RootUnit &r)
{
    return map([](const UnitSymbol &s) { return PreUnit{{}, s}; }, r);
}

Unit strip(const Unit &u) { return unroot(root(u)); }

NormalizedUnit norm(const Unit &u)
{
    // The distributive law at the prefix group.
    auto as_pairs = map([](const PreUnit &p) { return Paired<Prefix, UnitSymbol>{p.prefix, p.base}; }, u);
    auto [prefix, r] = distribute(free_group<PrefixSymbol>(), as_pairs);
    return {std::move(prefix), std::move(r)};
}

NormalizedUnit prefix_apply(const Prefix &p, const NormalizedUnit &n)
{
    auto joined = pair_join(free_group<PrefixSymbol>(), Paired<Prefix, Paired<Prefix, RootUnit>>{p, {n.prefix, n.root}});
    return {std::move(joined.first), std::move(joined.second)};
}

Ratio val(const UnitSystem &sys, const Prefix &p)
{
    return evaluate_with(ratio_group(), p, [&](const PrefixSymbol &s) -> const Ratio & { return sys.prefix_value(s); });
}

Ratio pval(const UnitSystem &sys, const Unit &u)
{
    return evaluate_with(ratio_group(), u, [&](const PreUnit &p) { return val(sys, p.prefix); });
}

Dimension dim_root(const UnitSystem &sys, const RootUnit &r)
{
    return evaluate_with(free_group<DimensionSymbol>(), r,
                         [&](const UnitSymbol &s) -> const Dimension & { return sys.unit_dimension(s); });
}

Dimension dim(const UnitSystem &sys, const Unit &u)
{
    return evaluate_with(free_group<DimensionSymbol>(), u,
                         [&](const PreUnit &p) -> const Dimension & { return sys.unit_dimension(p.base); });
}

EvaluatedUnit eval(const UnitSystem &sys, const Unit &u) { return {pval(sys, u), root(u)}; }

EvaluatedUnit eval_norm(const UnitSystem &sys, const NormalizedUnit &n) { return {val(sys, n.prefix), n.root}; }

AbstractUnit abstraction(const UnitSystem &sys, const Unit &u) { return {pval(sys, u), dim(sys, u)}; }

AbstractUnit abstraction_eval(const UnitSystem &sys, const EvaluatedUnit &e) { return {e.factor, dim_root(sys, e.root)}; }

bool equivalent(const UnitSystem &sys, const Unit &u, const Unit &v, EquivalenceLevel level)
{
    require_well_formed(sys, u);
    require_well_formed(sys, v);
    switch (level) {
    case EquivalenceLevel::normal:
        return norm(u) == norm(v);
    case EquivalenceLevel::numerical:
        return eval(sys, u) == eval(sys, v);
    case EquivalenceLevel::root:
        return root(u) == root(v);
    case EquivalenceLevel::dimension:
        return dim(sys, u) == dim(sys, v);
    }
    return false;
}

} // namespace unical
