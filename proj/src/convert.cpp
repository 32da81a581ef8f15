#include "unical/convert.hpp"

#include <algorithm>
#include <functional>

#include "unical/error.hpp"

namespace unical {

std::optional<TripleViolation> check_triples(const UnitSystem &sys, std::span<const ConvTriple> triples)
{
    std::map<std::pair<Unit, Unit>, const ConvTriple *> seen;
    for (const auto &t : triples) {
        require_well_formed(sys, t.source);
        require_well_formed(sys, t.target);
        if (dim(sys, t.source) != dim(sys, t.target))
            return TripleViolation{TripleViolation::Kind::dimension_mismatch, t, std::nullopt};
        auto [it, inserted] = seen.emplace(std::pair{t.source, t.target}, &t);
        if (!inserted && it->second->ratio != t.ratio)
            return TripleViolation{TripleViolation::Kind::ratio_conflict, *it->second, t};
    }
    return std::nullopt;
}

DefiningConversion::DefiningConversion(const UnitSystem &sys, std::map<UnitSymbol, Rule> rules)
    : rules_(std::move(rules))
{
    for (const auto &[base, rule] : rules_) {
        if (!sys.has_unit(base))
            throw ValidationError("rule for unknown base unit '" + base.name + "'");
        try {
            require_well_formed(sys, rule.replacement);
        } catch (const UnknownSymbol &e) {
            throw ValidationError("rule for '" + base.name + "': " + e.what());
        }
        if (sys.unit_dimension(base) != dim(sys, rule.replacement))
            throw ValidationError("rule for '" + base.name + "' changes dimension");
    }
}

const Rule *DefiningConversion::find(const UnitSymbol &base) const
{
    auto it = rules_.find(base);
    return it == rules_.end() ? nullptr : &it->second;
}

std::vector<ConvTriple> DefiningConversion::triples() const
{
    std::vector<ConvTriple> out;
    out.reserve(rules_.size());
    for (const auto &[base, rule] : rules_)
        out.push_back({unit_literal(base), rule.ratio, rule.replacement});
    return out;
}

DefiningConversion DefiningConversion::without(const UnitSymbol &base) const
{
    DefiningConversion c = *this;
    c.rules_.erase(base);
    return c;
}

DefiningConversion DefiningConversion::without_pathological() const
{
    DefiningConversion c = *this;
    std::erase_if(c.rules_, [](const auto &kv) { return kv.second.pathological; });
    return c;
}

bool DependencyReport::depends_on(const UnitSymbol &a, const UnitSymbol &b) const
{
    auto it = order.find(a);
    return it != order.end() && it->second.contains(b);
}

std::size_t DependencyReport::base_depth(const UnitSymbol &u) const
{
    auto it = depth.find(u);
    return it == depth.end() ? 0 : it->second;
}

std::size_t DependencyReport::root_depth(const RootUnit &r) const
{
    std::size_t d = 0;
    for (const auto &[u, z] : r.entries())
        d = std::max(d, base_depth(u));
    return d;
}

DependencyReport analyze(const UnitSystem &sys, const DefiningConversion &c)
{
    DependencyReport report;
    for (const auto &[base, rule] : c.rules()) {
        auto &deps = report.direct[base];
        RootUnit r = root(rule.replacement);
        for (const auto &[u, z] : r.entries())
            deps.insert(u);
    }

    // Cycle search: depth-first, visiting rule bases in symbol order.
    enum class Mark { fresh, active, done };
    std::map<UnitSymbol, Mark> mark;
    std::vector<UnitSymbol> stack;
    std::function<bool(const UnitSymbol &)> visit = [&](const UnitSymbol &u) {
        mark[u] = Mark::active;
        stack.push_back(u);
        if (auto it = report.direct.find(u); it != report.direct.end()) {
            for (const auto &v : it->second) {
                Mark m = mark.contains(v) ? mark[v] : Mark::fresh;
                if (m == Mark::active) {
                    auto start = std::find(stack.begin(), stack.end(), v);
                    report.cycle_witness = std::vector<UnitSymbol>(start, stack.end());
                    return true;
                }
                if (m == Mark::fresh && visit(v))
                    return true;
            }
        }
        stack.pop_back();
        mark[u] = Mark::done;
        return false;
    };
    for (const auto &[base, deps] : report.direct) {
        if (mark.contains(base))
            continue;
        if (visit(base))
            break;
    }
    report.well_founded = !report.cycle_witness.has_value();

    // Transitive closure; terminates on cyclic input as well.
    for (const auto &[base, deps] : report.direct) {
        auto &reach = report.order[base];
        std::vector<UnitSymbol> todo(deps.begin(), deps.end());
        while (!todo.empty()) {
            UnitSymbol v = std::move(todo.back());
            todo.pop_back();
            if (!reach.insert(v).second)
                continue;
            if (auto it = report.direct.find(v); it != report.direct.end())
                todo.insert(todo.end(), it->second.begin(), it->second.end());
        }
    }

    if (!report.well_founded)
        return report;

    std::function<std::size_t(const UnitSymbol &)> depth_of = [&](const UnitSymbol &u) -> std::size_t {
        if (auto it = report.depth.find(u); it != report.depth.end())
            return it->second;
        std::size_t d = 0;
        if (auto it = report.direct.find(u); it != report.direct.end()) {
            std::size_t below = 0;
            for (const auto &v : it->second)
                below = std::max(below, depth_of(v));
            d = below + 1;
        }
        report.depth.emplace(u, d);
        return d;
    };
    for (const auto &u : sys.units())
        report.iteration_bound = std::max(report.iteration_bound, depth_of(u));
    for (const auto &[base, deps] : report.direct)
        report.iteration_bound = std::max(report.iteration_bound, depth_of(base));
    return report;
}

std::pair<Ratio, Unit> expand_definition(const DefiningConversion &c, const UnitSymbol &u0)
{
    if (const Rule *rule = c.find(u0))
        return {rule->ratio, rule->replacement};
    return {Ratio{}, unit_literal(u0)};
}

EvaluatedUnit rewrite_base(const UnitSystem &sys, const DefiningConversion &c, const UnitSymbol &u0)
{
    auto [r, v] = expand_definition(c, u0);
    EvaluatedUnit e = eval(sys, v);
    auto joined = pair_join(ratio_group(), Paired<Ratio, Paired<Ratio, RootUnit>>{r, {e.factor, e.root}});
    return {std::move(joined.first), std::move(joined.second)};
}

namespace {

template <class BaseRewrite>
EvaluatedUnit step_with(const EvaluatedUnit &e, BaseRewrite &&rewrite)
{
    auto expanded = map(
        [&](const UnitSymbol &u) {
            EvaluatedUnit b = rewrite(u);
            return Paired<Ratio, RootUnit>{std::move(b.factor), std::move(b.root)};
        },
        e.root);
    auto joined = composite_join(ratio_group(), Paired<Ratio, decltype(expanded)>{e.factor, std::move(expanded)});
    return {std::move(joined.first), std::move(joined.second)};
}

} // namespace

EvaluatedUnit rewrite_step(const UnitSystem &sys, const DefiningConversion &c, const EvaluatedUnit &e)
{
    return step_with(e, [&](const UnitSymbol &u) { return rewrite_base(sys, c, u); });
}

Converter::Converter(const UnitSystem &sys, const DefiningConversion &c)
    : sys_(&sys), conv_(&c), report_(analyze(sys, c))
{
    if (!report_.well_founded) {
        std::string cycle;
        for (const auto &u : *report_.cycle_witness)
            cycle += u.name + " -> ";
        cycle += report_.cycle_witness->front().name;
        throw NotWellDefining("dependency cycle " + cycle);
    }
    for (const auto &[base, rule] : c.rules())
        base_cache_.emplace(base, rewrite_base(sys, c, base));
}

EvaluatedUnit Converter::base_rewrite(const UnitSymbol &u0) const
{
    if (auto it = base_cache_.find(u0); it != base_cache_.end())
        return it->second;
    return {Ratio{}, delta(u0)};
}

EvaluatedUnit Converter::step(const EvaluatedUnit &e) const
{
    return step_with(e, [&](const UnitSymbol &u) { return base_rewrite(u); });
}

EvaluatedUnit Converter::rewrite(const Unit &u) const
{
    EvaluatedUnit e = eval(*sys_, u);
    for (std::size_t i = 0; i < report_.iteration_bound; ++i)
        e = step(e);
    return e;
}

std::vector<EvaluatedUnit> Converter::trace(const Unit &u) const
{
    std::vector<EvaluatedUnit> out{eval(*sys_, u)};
    for (std::size_t i = 0; i < report_.iteration_bound; ++i) {
        EvaluatedUnit next = step(out.back());
        if (next == out.back())
            break;
        out.push_back(std::move(next));
    }
    return out;
}

ExpandedUnit Converter::expand(const Unit &u) const
{
    require_well_formed(*sys_, u);
    ExpandedUnit cur{Ratio{}, norm(u)};
    for (std::size_t i = 0; i < report_.iteration_bound; ++i) {
        ExpandedUnit next{cur.factor, {cur.normal.prefix, {}}};
        for (const auto &[base, z] : cur.normal.root.entries()) {
            auto [r, v] = expand_definition(*conv_, base);
            NormalizedUnit n = norm(v);
            next.factor *= r.pow(z);
            next.normal.prefix *= n.prefix.pow(z);
            next.normal.root *= n.root.pow(z);
        }
        if (next == cur)
            break;
        cur = std::move(next);
    }
    return cur;
}

std::optional<Ratio> Converter::convert(const Unit &u, const Unit &v) const
{
    EvaluatedUnit a = rewrite(u);
    EvaluatedUnit b = rewrite(v);
    if (a.root != b.root)
        return std::nullopt;
    return a.factor / b.factor;
}

bool Converter::coherent(const Unit &u, const Unit &v) const
{
    auto r = convert(u, v);
    return r && r->is_one();
}

EvaluatedUnit rwr_star(const UnitSystem &sys, const DefiningConversion &c, const Unit &u)
{
    return Converter(sys, c).rewrite(u);
}

std::optional<Ratio> convert(const UnitSystem &sys, const DefiningConversion &c, const Unit &u, const Unit &v)
{
    return Converter(sys, c).convert(u, v);
}

bool coherent(const UnitSystem &sys, const DefiningConversion &c, const Unit &u, const Unit &v)
{
    return Converter(sys, c).coherent(u, v);
}

std::set<Ratio> Exploration::ratios_between(const Unit &u, const Unit &v) const
{
    std::set<Ratio> out;
    for (const auto &t : triples)
        if (t.source == u && t.target == v)
            out.insert(t.ratio);
    return out;
}

namespace {

void add_strip_generators(const UnitSystem &sys, const PreUnit &p, std::set<ConvTriple> &gens)
{
    Unit u = delta(p);
    Ratio r = val(sys, p.prefix);
    Unit s = unit_literal(p.base);
    ConvTriple down{u, r, s};
    ConvTriple up{s, r.inverse(), u};
    gens.insert(down.inverse());
    gens.insert(up.inverse());
    gens.insert(std::move(down));
    gens.insert(std::move(up));
}

/// ⟨1, r, 1⟩ with r != 1, either present directly (the least such r > 1) or
/// as the quotient of two ratios on the same unit pair.  Normalized to r > 1;
/// the closure holds both.
std::optional<ConvTriple> find_witness(const std::set<ConvTriple> &triples)
{
    auto normalized = [](Ratio r) { return ConvTriple{{}, Ratio{} < r ? r : r.inverse(), {}}; };
    std::optional<ConvTriple> direct;
    for (const auto &t : triples) {
        if (!t.source.empty())
            break;
        if (t.target.empty() && !t.ratio.is_one()) {
            ConvTriple w = normalized(t.ratio);
            if (!direct || w.ratio < direct->ratio)
                direct = std::move(w);
        }
    }
    if (direct)
        return direct;
    std::map<std::pair<Unit, Unit>, const Ratio *> seen;
    for (const auto &t : triples) {
        auto [it, inserted] = seen.emplace(std::pair{t.source, t.target}, &t.ratio);
        if (!inserted && *it->second != t.ratio)
            return normalized(t.ratio / *it->second);
    }
    return std::nullopt;
}

} // namespace

Exploration explore_closure(const UnitSystem &sys, std::span<const ConvTriple> triples, ExplorationLimits limits,
                            std::span<const Unit> seeds)
{
    std::set<PreUnit> universe;
    auto collect = [&](const Unit &u) {
        require_well_formed(sys, u);
        for (const auto &[p, z] : u.entries()) {
            universe.insert(p);
            universe.insert(PreUnit{{}, p.base});
        }
    };
    for (const auto &t : triples) {
        collect(t.source);
        collect(t.target);
    }
    for (const auto &u : seeds)
        collect(u);

    std::set<ConvTriple> gens;
    for (const auto &t : triples) {
        gens.insert(t);
        gens.insert(t.inverse());
    }
    for (const auto &p : universe)
        add_strip_generators(sys, p, gens);

    Exploration out;
    out.generators.assign(gens.begin(), gens.end());

    ConvTriple identity{{}, Ratio{}, {}};
    out.triples.insert(identity);
    std::vector<ConvTriple> frontier{identity};

    while (out.steps < limits.max_steps && !frontier.empty()) {
        std::vector<ConvTriple> next;
        for (const auto &s : frontier) {
            for (const auto &g : out.generators) {
                ConvTriple t = s * g;
                if (t.word_size() > limits.max_word) {
                    out.truncated = true;
                    continue;
                }
                if (out.triples.insert(t).second)
                    next.push_back(std::move(t));
            }
        }
        frontier = std::move(next);
        ++out.steps;
    }
    if (!frontier.empty())
        out.truncated = true;
    out.witness = find_witness(out.triples);
    return out;
}

namespace {

bool is_base_literal(const Unit &u)
{
    return u.size() == 1 && u.entries()[0].second == 1 && u.entries()[0].first.prefix.empty();
}

} // namespace

ClassificationReport classify(const UnitSystem &sys, std::span<const ConvTriple> rules, ExplorationLimits limits)
{
    ClassificationReport report;
    report.violation = check_triples(sys, rules);
    report.is_regular = rules.empty();

    bool defining = !report.violation.has_value();
    std::map<UnitSymbol, Rule> by_base;
    for (const auto &t : rules) {
        if (!defining)
            break;
        if (!is_base_literal(t.source)) {
            defining = false;
            break;
        }
        const UnitSymbol &base = t.source.entries()[0].first.base;
        auto [it, inserted] = by_base.emplace(base, Rule{t.ratio, t.target, false});
        if (!inserted && it->second.replacement != t.target)
            defining = false;
    }

    if (defining) {
        DefiningConversion c(sys, std::move(by_base));
        report.dependencies = analyze(sys, c);
        report.is_defining = true;
        report.is_well_defining = report.dependencies->well_founded;
    }

    if (report.is_well_defining) {
        report.consistency = Consistency::guaranteed;
        return report;
    }

    Exploration e = explore_closure(sys, rules, limits);
    report.exploration_truncated = e.truncated;
    if (e.witness) {
        report.consistency = Consistency::witness_found;
        report.witness = e.witness;
    }
    return report;
}

ClassificationReport classify(const UnitSystem &sys, const DefiningConversion &c, ExplorationLimits limits)
{
    auto triples = c.triples();
    return classify(sys, triples, limits);
}

} // namespace unical
