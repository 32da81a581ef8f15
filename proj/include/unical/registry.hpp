#ifndef UNICAL_REGISTRY_HPP
#define UNICAL_REGISTRY_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "unical/convert.hpp"
#include "unical/model.hpp"

namespace unical {

/// Position of an entry in its source document (1-based).
struct SourceLocation {
    std::string document;
    std::size_t line = 0;
    std::size_t column = 0;

    std::string to_string() const;
};

/// Syntactic content of one registry document, before validation.
struct RegistryDocument {
    struct DimensionEntry {
        std::string symbol;
        SourceLocation where;
    };
    struct PrefixEntry {
        std::string symbol;
        std::string value;
        SourceLocation where;
    };
    struct UnitEntry {
        std::string symbol;
        std::vector<std::pair<std::string, Exponent>> dimension;
        SourceLocation where;
    };
    struct RuleEntry {
        std::string base;
        std::string ratio;
        std::string unit;
        bool pathological = false;
        SourceLocation where;
        /// Column of `unit` within its line, for relocating parse errors.
        std::size_t unit_column = 0;
    };

    std::vector<DimensionEntry> dimensions;
    std::vector<PrefixEntry> prefixes;
    std::vector<UnitEntry> units;
    std::vector<RuleEntry> rules;
};

/// Throws ParseError.  `name` only labels locations in later diagnostics.
RegistryDocument parse_registry(std::string_view text, std::string name = "<input>");

struct Registry {
    UnitSystem system;
    DefiningConversion conversion;
};

/// Merges documents in order and validates the result.
///
/// Dimensions, prefixes and units accumulate; repeating a symbol is allowed
/// only with an identical value or dimension.  A later rule for the same base
/// replaces the earlier one.  Throws ValidationError naming the offending
/// symbol and its location, or ParseError for malformed ratios and unit
/// expressions inside entries.
Registry load_registry(std::span<const RegistryDocument> documents);
Registry load_registry(std::string_view text);

/// Text of a registry shipped with the library ("si", "uk", "accepted").
std::optional<std::string_view> bundled_registry(std::string_view name);
std::vector<std::string> bundled_registry_names();

/// Parses a unit expression:
///
///     expr := term (('*' | '/') term)*
///     term := atom ('^' signed-integer)?
///     atom := identifier | '1' | '(' expr ')'
///
/// An identifier that names a base unit is that unit.  Otherwise the longest
/// base-unit suffix whose remainder splits into prefixes (longest prefix
/// first) is taken.  Underscores make the split explicit: `µ_k_g`,
/// `d^3_m`.  Throws ParseError or UnknownSymbol.
Unit parse_unit(const UnitSystem &sys, std::string_view text);

/// Dimension expressions use the same grammar over base dimension symbols.
Dimension parse_dimension(const UnitSystem &sys, std::string_view text);

std::string print_prefix(const Prefix &p);
std::string print_preunit(const UnitSystem &sys, const PreUnit &p);
/// Canonical text; parse_unit inverts it.
std::string print_unit(const UnitSystem &sys, const Unit &u);
std::string print_root(const RootUnit &r);
/// "(d^3, m)"
std::string print_normalized(const NormalizedUnit &n);
/// "(1/1000, m)"
std::string print_evaluated(const EvaluatedUnit &e);
/// Nonzero base dimensions in declaration order: "L^1*T^-2*M^1".
std::string print_dimension(const UnitSystem &sys, const Dimension &d);

} // namespace unical

#endif
