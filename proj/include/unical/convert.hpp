#ifndef UNICAL_CONVERT_HPP
#define UNICAL_CONVERT_HPP

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "unical/model.hpp"

namespace unical {

/// ⟨source, ratio, target⟩: one `source` is `ratio` `target`s.
struct ConvTriple {
    Unit source;
    Ratio ratio;
    Unit target;

    friend bool operator==(const ConvTriple &, const ConvTriple &) = default;
    friend auto operator<=>(const ConvTriple &, const ConvTriple &) = default;

    /// Component-wise group product.
    friend ConvTriple operator*(const ConvTriple &a, const ConvTriple &b)
    {
        return {a.source * b.source, a.ratio * b.ratio, a.target * b.target};
    }
    ConvTriple inverse() const { return {source.inverse(), ratio.inverse(), target.inverse()}; }

    /// Total absolute exponent over both unit components.
    Exponent word_size() const noexcept { return source.word_size() + target.word_size(); }
};

struct TripleViolation {
    enum class Kind { dimension_mismatch, ratio_conflict };

    Kind kind;
    ConvTriple first;
    /// The conflicting partner for ratio conflicts.
    std::optional<ConvTriple> second;
};

/// Checks that a relation is a unit conversion: each triple relates
/// codimensional units, and no unit pair carries two ratios.  Returns the
/// first violation in input order.  Throws UnknownSymbol for ill-formed units.
std::optional<TripleViolation> check_triples(const UnitSystem &sys, std::span<const ConvTriple> triples);

/// One defining rule ⌊base⌋ = ratio · replacement.
struct Rule {
    Ratio ratio;
    Unit replacement;
    /// Marks rules that equate a unit with a unitless quantity (rad, sr).
    bool pathological = false;

    friend bool operator==(const Rule &, const Rule &) = default;
};

/// At most one rule per base unit, each rewriting a bare base-unit literal
/// into a codimensional unit.
class DefiningConversion {
public:
    DefiningConversion() = default;

    /// Throws ValidationError if a rule's base or replacement mentions
    /// unregistered symbols or the two sides differ in dimension.
    DefiningConversion(const UnitSystem &sys, std::map<UnitSymbol, Rule> rules);

    const Rule *find(const UnitSymbol &base) const;
    const std::map<UnitSymbol, Rule> &rules() const noexcept { return rules_; }
    bool empty() const noexcept { return rules_.empty(); }
    std::size_t size() const noexcept { return rules_.size(); }

    std::vector<ConvTriple> triples() const;

    DefiningConversion without(const UnitSymbol &base) const;
    DefiningConversion without_pathological() const;

    friend bool operator==(const DefiningConversion &, const DefiningConversion &) = default;

private:
    std::map<UnitSymbol, Rule> rules_;
};

/// Dependency structure of a defining conversion.
struct DependencyReport {
    /// Direct dependencies: base -> units in the support of its replacement's root.
    std::map<UnitSymbol, std::set<UnitSymbol>> direct;
    /// Transitive closure of `direct`.
    std::map<UnitSymbol, std::set<UnitSymbol>> order;
    bool well_founded = true;
    /// A dependency cycle in traversal order, when not well founded.
    std::optional<std::vector<UnitSymbol>> cycle_witness;
    /// Depth of every registered base unit; empty unless well founded.
    std::map<UnitSymbol, std::size_t> depth;
    /// Maximal depth; the number of rewriting steps that always suffices.
    std::size_t iteration_bound = 0;

    bool depends_on(const UnitSymbol &a, const UnitSymbol &b) const;
    /// Zero for units without a rule or unknown to the report.
    std::size_t base_depth(const UnitSymbol &u) const;
    std::size_t root_depth(const RootUnit &r) const;
};

DependencyReport analyze(const UnitSystem &sys, const DefiningConversion &c);

/// Totalized rule lookup: the rule's (ratio, replacement), or (1, ⌊u0⌋).
std::pair<Ratio, Unit> expand_definition(const DefiningConversion &c, const UnitSymbol &u0);

/// One expansion of a base unit, evaluated.
EvaluatedUnit rewrite_base(const UnitSystem &sys, const DefiningConversion &c, const UnitSymbol &u0);

/// Expands every base unit of `e` once, simultaneously.
EvaluatedUnit rewrite_step(const UnitSystem &sys, const DefiningConversion &c, const EvaluatedUnit &e);

/// Rule ratios accumulated separately from a still-symbolic prefix.
struct ExpandedUnit {
    Ratio factor;
    NormalizedUnit normal;

    friend bool operator==(const ExpandedUnit &, const ExpandedUnit &) = default;
};

/// Exhaustive rewriting and the conversion decision for one well-defining
/// rule set.  Keeps references to `sys` and `c`; both must outlive it.
class Converter {
public:
    /// Throws NotWellDefining if the dependency order has a cycle.
    Converter(const UnitSystem &sys, const DefiningConversion &c);

    const DependencyReport &dependencies() const noexcept { return report_; }
    const UnitSystem &system() const noexcept { return *sys_; }
    const DefiningConversion &conversion() const noexcept { return *conv_; }

    EvaluatedUnit step(const EvaluatedUnit &e) const;

    /// Evaluation followed by iteration_bound rewriting steps.
    EvaluatedUnit rewrite(const Unit &u) const;

    /// eval(u) and every subsequent step up to and including the fixpoint.
    std::vector<EvaluatedUnit> trace(const Unit &u) const;

    /// Prefix-preserving variant of rewrite: replacements are normalized
    /// rather than evaluated, so prefixes stay symbolic.
    ExpandedUnit expand(const Unit &u) const;

    /// The factor r with ⟨u, r, v⟩ in the closure, if any.
    std::optional<Ratio> convert(const Unit &u, const Unit &v) const;
    bool coherent(const Unit &u, const Unit &v) const;

private:
    EvaluatedUnit base_rewrite(const UnitSymbol &u0) const;

    const UnitSystem *sys_;
    const DefiningConversion *conv_;
    DependencyReport report_;
    std::map<UnitSymbol, EvaluatedUnit> base_cache_;
};

EvaluatedUnit rwr_star(const UnitSystem &sys, const DefiningConversion &c, const Unit &u);
std::optional<Ratio> convert(const UnitSystem &sys, const DefiningConversion &c, const Unit &u, const Unit &v);
bool coherent(const UnitSystem &sys, const DefiningConversion &c, const Unit &u, const Unit &v);

struct ExplorationLimits {
    /// Generator multiplications applied to the identity triple.
    std::size_t max_steps = 4;
    /// Bound on ConvTriple::word_size for every retained triple.
    Exponent max_word = 12;
};

/// Bounded fragment of a conversion closure.
struct Exploration {
    std::set<ConvTriple> triples;
    /// Input triples, prefix-stripping triples for every relevant preunit,
    /// and the inverses of both.
    std::vector<ConvTriple> generators;
    /// Some ⟨1, r, 1⟩ with r > 1 in the closure.
    std::optional<ConvTriple> witness;
    /// Some product was dropped by the word bound or the step bound cut the search short.
    bool truncated = false;
    std::size_t steps = 0;

    bool contains(const ConvTriple &t) const { return triples.contains(t); }
    std::set<Ratio> ratios_between(const Unit &u, const Unit &v) const;
};

/// Breadth-first saturation of the closure of `triples` under products,
/// inverses and prefix stripping.  Prefix-stripping triples are only
/// instantiated for preunits occurring in `triples` or `seeds`.  Every
/// retained triple is a product of at most max_steps generators whose
/// partial products all respect max_word.
Exploration explore_closure(const UnitSystem &sys, std::span<const ConvTriple> triples, ExplorationLimits limits = {},
                            std::span<const Unit> seeds = {});

enum class Consistency { guaranteed, witness_found, unknown };

struct ClassificationReport {
    /// Set when the triples do not even form a unit conversion.
    std::optional<TripleViolation> violation;
    bool is_defining = false;
    bool is_well_defining = false;
    bool is_regular = false;
    Consistency consistency = Consistency::unknown;
    std::optional<ConvTriple> witness;
    std::optional<DependencyReport> dependencies;
    bool exploration_truncated = false;
};

ClassificationReport classify(const UnitSystem &sys, std::span<const ConvTriple> rules, ExplorationLimits limits = {});
ClassificationReport classify(const UnitSystem &sys, const DefiningConversion &c, ExplorationLimits limits = {});

} // namespace unical

#endif
