#include "unical/registry.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <set>

#include "unical/error.hpp"

namespace unical {

namespace detail {
extern const std::string_view bundled_si;
extern const std::string_view bundled_uk;
extern const std::string_view bundled_accepted;
} // namespace detail

std::string SourceLocation::to_string() const
{
    return document + ":" + std::to_string(line) + ":" + std::to_string(column);
}

namespace {

constexpr std::string_view expression_delimiters = "*/^() \t\r\n";
constexpr std::string_view symbol_forbidden = "*/^()=:#[]! \t\r\n";

bool is_digit(char c) { return c >= '0' && c <= '9'; }

bool valid_symbol(std::string_view s)
{
    if (s.empty() || is_digit(s.front()) || s.front() == '-' || s.front() == '+')
        return false;
    return s.find_first_of(symbol_forbidden) == std::string_view::npos;
}

std::optional<Exponent> parse_exponent(std::string_view s)
{
    if (!s.empty() && s.front() == '+')
        s.remove_prefix(1);
    Exponent z = 0;
    auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), z);
    if (ec != std::errc{} || end != s.data() + s.size() || s.empty())
        return std::nullopt;
    return z;
}

/// Length of a signed integer at the start of `s`, or zero.
std::size_t integer_length(std::string_view s)
{
    std::size_t i = 0;
    if (i < s.size() && (s[i] == '-' || s[i] == '+'))
        ++i;
    std::size_t digits = i;
    while (i < s.size() && is_digit(s[i]))
        ++i;
    return i > digits ? i : 0;
}

/// Recursive-descent parser for the expression grammar, generic in how
/// identifiers are interpreted.
template <class G, class Resolve>
class ExpressionParser {
public:
    ExpressionParser(std::string_view text, Resolve resolve) : text_(text), resolve_(std::move(resolve)) {}

    ExponentMap<G> parse()
    {
        skip_space();
        if (at_end())
            fail("empty expression");
        ExponentMap<G> result = expr();
        skip_space();
        if (!at_end())
            fail(std::string("unexpected '") + text_[pos_] + "'");
        return result;
    }

private:
    ExponentMap<G> expr()
    {
        ExponentMap<G> acc = term();
        for (;;) {
            skip_space();
            if (accept('*'))
                acc *= term();
            else if (accept('/'))
                acc *= term().inverse();
            else
                return acc;
        }
    }

    ExponentMap<G> term()
    {
        ExponentMap<G> base = atom();
        skip_space();
        if (!accept('^'))
            return base;
        skip_space();
        std::size_t start = pos_;
        std::size_t n = integer_length(text_.substr(pos_));
        if (n == 0)
            fail("expected an integer exponent");
        pos_ += n;
        auto z = parse_exponent(text_.substr(start, n));
        if (!z)
            fail("exponent out of range", start);
        return base.pow(*z);
    }

    ExponentMap<G> atom()
    {
        skip_space();
        if (at_end())
            fail("unexpected end of expression");
        if (accept('(')) {
            ExponentMap<G> inner = expr();
            skip_space();
            if (!accept(')'))
                fail("expected ')'");
            return inner;
        }
        std::size_t start = pos_;
        std::string_view ident = identifier();
        if (ident.empty())
            fail(std::string("unexpected '") + text_[pos_] + "'");
        if (is_digit(ident.front())) {
            if (ident == "1")
                return {};
            fail("numeric factor '" + std::string(ident) + "' in expression", start);
        }
        return resolve_(ident);
    }

    /// A maximal run of non-delimiters.  `^int` stays inside the identifier
    /// when an underscore follows it, as in `d^3_m`.
    std::string_view identifier()
    {
        std::size_t start = pos_;
        while (!at_end()) {
            char c = text_[pos_];
            if (c == '^' && pos_ > start) {
                std::size_t n = integer_length(text_.substr(pos_ + 1));
                if (n != 0 && pos_ + 1 + n < text_.size() && text_[pos_ + 1 + n] == '_') {
                    pos_ += 2 + n;
                    continue;
                }
            }
            if (expression_delimiters.find(c) != std::string_view::npos)
                break;
            ++pos_;
        }
        return text_.substr(start, pos_ - start);
    }

    bool at_end() const { return pos_ >= text_.size(); }

    bool accept(char c)
    {
        if (!at_end() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void skip_space()
    {
        while (!at_end() && (text_[pos_] == ' ' || text_[pos_] == '\t'))
            ++pos_;
    }

    [[noreturn]] void fail(const std::string &message) const { fail(message, pos_); }
    [[noreturn]] void fail(const std::string &message, std::size_t at) const { throw ParseError(message, 1, at + 1); }

    std::string_view text_;
    std::size_t pos_ = 0;
    Resolve resolve_;
};

template <class G, class Resolve>
ExponentMap<G> parse_expression(std::string_view text, Resolve resolve)
{
    return ExpressionParser<G, Resolve>(text, std::move(resolve)).parse();
}

/// Splits `text` into prefix symbols, always taking the longest match.
std::optional<Prefix> split_prefixes(const UnitSystem &sys, std::string_view text)
{
    std::vector<std::pair<PrefixSymbol, Exponent>> out;
    while (!text.empty()) {
        const PrefixSymbol *best = nullptr;
        for (const auto &p : sys.prefixes())
            if (text.starts_with(p.name) && (!best || p.name.size() > best->name.size()))
                best = &p;
        if (!best)
            return std::nullopt;
        out.emplace_back(*best, 1);
        text.remove_prefix(best->name.size());
    }
    return Prefix(std::move(out));
}

std::string join(std::span<const std::string_view> parts, std::size_t from, std::size_t to)
{
    std::string s;
    for (std::size_t i = from; i < to; ++i) {
        if (i > from)
            s += '_';
        s += parts[i];
    }
    return s;
}

PreUnit resolve_underscored(const UnitSystem &sys, std::string_view ident)
{
    std::vector<std::string_view> parts;
    for (std::size_t start = 0;;) {
        std::size_t us = ident.find('_', start);
        parts.push_back(ident.substr(start, us == std::string_view::npos ? std::string_view::npos : us - start));
        if (us == std::string_view::npos)
            break;
        start = us + 1;
    }
    for (std::size_t k = 1; k < parts.size(); ++k) {
        std::string base = join(parts, k, parts.size());
        if (!sys.has_unit(base))
            continue;
        std::vector<std::pair<PrefixSymbol, Exponent>> prefix;
        for (std::size_t i = 0; i < k; ++i) {
            std::string_view part = parts[i];
            Exponent z = 1;
            if (auto caret = part.find('^'); caret != std::string_view::npos) {
                auto parsed = parse_exponent(part.substr(caret + 1));
                if (!parsed)
                    throw UnknownSymbol("prefix", std::string(part));
                z = *parsed;
                part = part.substr(0, caret);
            }
            if (!sys.has_prefix(std::string(part)))
                throw UnknownSymbol("prefix", std::string(part));
            prefix.emplace_back(std::string(part), z);
        }
        return {Prefix(std::move(prefix)), std::move(base)};
    }
    throw UnknownSymbol("unit", std::string(ident));
}

PreUnit resolve_preunit(const UnitSystem &sys, std::string_view ident)
{
    if (sys.has_unit(std::string(ident)))
        return {{}, std::string(ident)};
    if (ident.find('_') != std::string_view::npos)
        return resolve_underscored(sys, ident);

    std::vector<const UnitSymbol *> suffixes;
    for (const auto &u : sys.units())
        if (u.name.size() < ident.size() && ident.ends_with(u.name))
            suffixes.push_back(&u);
    std::stable_sort(suffixes.begin(), suffixes.end(),
                     [](const UnitSymbol *a, const UnitSymbol *b) { return a->name.size() > b->name.size(); });
    for (const UnitSymbol *u : suffixes)
        if (auto prefix = split_prefixes(sys, ident.substr(0, ident.size() - u->name.size())))
            return {std::move(*prefix), *u};
    throw UnknownSymbol("unit", std::string(ident));
}

template <class Map>
std::string print_word(const Map &m, auto &&name)
{
    if (m.empty())
        return "1";
    std::string s;
    for (const auto &[g, z] : m.entries()) {
        if (!s.empty())
            s += '*';
        s += name(g);
        if (z != 1)
            s += "^" + std::to_string(z);
    }
    return s;
}

// ---------------------------------------------------------------------------
// Registry documents

enum class Section { none, dimensions, prefixes, units, rules };

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

class DocumentParser {
public:
    DocumentParser(std::string_view text, std::string name) : text_(text), name_(std::move(name)) {}

    RegistryDocument parse()
    {
        std::size_t line_no = 0;
        for (std::size_t start = 0; start <= text_.size();) {
            std::size_t nl = text_.find('\n', start);
            std::string_view line = text_.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
            ++line_no;
            line_ = line_no;
            line_text_ = line;
            parse_line(line);
            if (nl == std::string_view::npos)
                break;
            start = nl + 1;
        }
        return std::move(doc_);
    }

private:
    void parse_line(std::string_view line)
    {
        if (auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            return;
        if (line.front() == '[') {
            if (line.back() != ']')
                fail("unterminated section header", line);
            std::string_view name = trim(line.substr(1, line.size() - 2));
            if (name == "dimensions")
                section_ = Section::dimensions;
            else if (name == "prefixes")
                section_ = Section::prefixes;
            else if (name == "units")
                section_ = Section::units;
            else if (name == "rules")
                section_ = Section::rules;
            else
                fail("unknown section '" + std::string(name) + "'", line);
            return;
        }
        switch (section_) {
        case Section::none:
            fail("entry outside of any section", line);
        case Section::dimensions:
            return dimensions(line);
        case Section::prefixes:
            return prefix(line);
        case Section::units:
            return unit(line);
        case Section::rules:
            return rule(line);
        }
    }

    void dimensions(std::string_view line)
    {
        while (!line.empty()) {
            std::size_t end = line.find_first_of(" \t");
            std::string_view sym = line.substr(0, end);
            require_symbol(sym);
            doc_.dimensions.push_back({std::string(sym), where(sym)});
            line = trim(end == std::string_view::npos ? std::string_view{} : line.substr(end));
        }
    }

    void prefix(std::string_view line)
    {
        auto [sym, value] = split(line, '=');
        require_symbol(sym);
        if (sym.find('_') != std::string_view::npos)
            fail("prefix symbols may not contain '_'", sym);
        if (value.empty() || value.find_first_of(" \t") != std::string_view::npos)
            fail("expected a single ratio after '='", value.empty() ? line : value);
        doc_.prefixes.push_back({std::string(sym), std::string(value), where(sym)});
    }

    void unit(std::string_view line)
    {
        auto [sym, expr] = split(line, ':');
        require_symbol(sym);
        if (expr.empty())
            fail("expected a dimension after ':'", line);
        Dimension d = relocated(expr, [&] {
            return parse_expression<DimensionSymbol>(expr, [](std::string_view id) { return delta(DimensionSymbol(std::string(id))); });
        });
        std::vector<std::pair<std::string, Exponent>> dim;
        for (const auto &[s, z] : d.entries())
            dim.emplace_back(s.name, z);
        doc_.units.push_back({std::string(sym), std::move(dim), where(sym)});
    }

    void rule(std::string_view line)
    {
        auto [base, rest] = split(line, '=');
        require_symbol(base);
        RegistryDocument::RuleEntry entry;
        entry.base = std::string(base);
        entry.where = where(base);
        if (rest.ends_with("!pathological")) {
            entry.pathological = true;
            rest = trim(rest.substr(0, rest.size() - std::string_view("!pathological").size()));
        }
        std::size_t gap = rest.find_first_of(" \t");
        if (rest.empty() || gap == std::string_view::npos)
            fail("expected 'base = ratio unit'", rest.empty() ? line : rest);
        std::string_view unit = trim(rest.substr(gap));
        entry.ratio = std::string(rest.substr(0, gap));
        entry.unit = std::string(unit);
        entry.unit_column = column(unit);
        // Syntax only; symbols are resolved once all documents are merged.
        relocated(unit, [&] {
            return parse_expression<std::string>(unit, [](std::string_view id) { return delta(std::string(id)); });
        });
        doc_.rules.push_back(std::move(entry));
    }

    std::pair<std::string_view, std::string_view> split(std::string_view line, char sep)
    {
        std::size_t at = line.find(sep);
        if (at == std::string_view::npos)
            fail(std::string("expected '") + sep + "'", line);
        return {trim(line.substr(0, at)), trim(line.substr(at + 1))};
    }

    void require_symbol(std::string_view sym)
    {
        if (!valid_symbol(sym))
            fail("invalid symbol '" + std::string(sym) + "'", sym);
    }

    template <class Fn>
    auto relocated(std::string_view part, Fn &&fn) -> decltype(fn())
    {
        try {
            return fn();
        } catch (const ParseError &e) {
            std::string message = e.what();
            message = message.substr(message.find(": ") + 2);
            throw ParseError(name_ + ": " + message, line_, column(part) + e.column() - 1);
        }
    }

    std::size_t column(std::string_view part) const { return std::size_t(part.data() - line_text_.data()) + 1; }

    SourceLocation where(std::string_view part) const { return {name_, line_, column(part)}; }

    [[noreturn]] void fail(const std::string &message, std::string_view part) const
    {
        throw ParseError(name_ + ": " + message, line_, column(part));
    }

    std::string_view text_;
    std::string name_;
    RegistryDocument doc_;
    Section section_ = Section::none;
    std::size_t line_ = 0;
    std::string_view line_text_;
};

[[noreturn]] void invalid(const SourceLocation &where, const std::string &message)
{
    throw ValidationError(where.to_string() + ": " + message);
}

} // namespace

RegistryDocument parse_registry(std::string_view text, std::string name)
{
    return DocumentParser(text, std::move(name)).parse();
}

Registry load_registry(std::span<const RegistryDocument> documents)
{
    std::vector<DimensionSymbol> dimensions;
    std::set<std::string> seen_dimensions;

    std::vector<std::pair<PrefixSymbol, Ratio>> prefixes;
    std::map<std::string, std::size_t> prefix_index;

    std::vector<const RegistryDocument::UnitEntry *> units;
    std::map<std::string, std::size_t> unit_index;

    std::map<std::string, const RegistryDocument::RuleEntry *> rules;

    for (const auto &doc : documents) {
        for (const auto &d : doc.dimensions)
            if (seen_dimensions.insert(d.symbol).second)
                dimensions.emplace_back(d.symbol);

        for (const auto &p : doc.prefixes) {
            Ratio value;
            try {
                value = parse_ratio(p.value);
            } catch (const InvalidRatio &e) {
                invalid(p.where, "prefix '" + p.symbol + "': " + e.what());
            }
            auto [it, inserted] = prefix_index.emplace(p.symbol, prefixes.size());
            if (inserted)
                prefixes.emplace_back(p.symbol, std::move(value));
            else if (prefixes[it->second].second != value)
                invalid(p.where, "prefix '" + p.symbol + "' redefined with a different value");
        }

        for (const auto &u : doc.units) {
            auto [it, inserted] = unit_index.emplace(u.symbol, units.size());
            if (inserted) {
                units.push_back(&u);
                continue;
            }
            Dimension before(std::vector<Dimension::Entry>(units[it->second]->dimension.begin(),
                                                           units[it->second]->dimension.end()));
            Dimension after(std::vector<Dimension::Entry>(u.dimension.begin(), u.dimension.end()));
            if (before != after)
                invalid(u.where, "unit '" + u.symbol + "' redefined with a different dimension");
        }

        std::set<std::string> bases_here;
        for (const auto &r : doc.rules) {
            if (!bases_here.insert(r.base).second)
                invalid(r.where, "second rule for '" + r.base + "'");
            rules[r.base] = &r;
        }
    }

    std::vector<std::pair<UnitSymbol, Dimension>> unit_dims;
    for (const auto *u : units) {
        std::vector<Dimension::Entry> entries;
        for (const auto &[s, z] : u->dimension) {
            if (!seen_dimensions.contains(s))
                invalid(u->where, "unit '" + u->symbol + "' uses unknown dimension '" + s + "'");
            entries.emplace_back(s, z);
        }
        unit_dims.emplace_back(u->symbol, Dimension(std::move(entries)));
    }

    UnitSystem sys(std::move(dimensions), std::move(prefixes), std::move(unit_dims));

    std::map<UnitSymbol, Rule> parsed;
    for (const auto &[base, r] : rules) {
        if (!sys.has_unit(base))
            invalid(r->where, "rule for unknown unit '" + base + "'");
        Rule rule;
        rule.pathological = r->pathological;
        try {
            rule.ratio = parse_ratio(r->ratio);
        } catch (const InvalidRatio &e) {
            invalid(r->where, "rule for '" + base + "': " + e.what());
        }
        try {
            rule.replacement = parse_unit(sys, r->unit);
        } catch (const UnknownSymbol &e) {
            invalid(r->where, "rule for '" + base + "': " + e.what());
        }
        Dimension lhs = sys.unit_dimension(base);
        Dimension rhs = dim(sys, rule.replacement);
        if (lhs != rhs)
            invalid(r->where, "rule for '" + base + "' relates " + print_dimension(sys, lhs) + " to " +
                                  print_dimension(sys, rhs));
        parsed.emplace(base, std::move(rule));
    }

    DefiningConversion conversion(sys, std::move(parsed));
    return {std::move(sys), std::move(conversion)};
}

Registry load_registry(std::string_view text)
{
    RegistryDocument doc = parse_registry(text);
    return load_registry(std::span<const RegistryDocument>(&doc, 1));
}

std::optional<std::string_view> bundled_registry(std::string_view name)
{
    if (name == "si")
        return detail::bundled_si;
    if (name == "uk")
        return detail::bundled_uk;
    if (name == "accepted")
        return detail::bundled_accepted;
    return std::nullopt;
}

std::vector<std::string> bundled_registry_names() { return {"si", "uk", "accepted"}; }

Unit parse_unit(const UnitSystem &sys, std::string_view text)
{
    return parse_expression<PreUnit>(text, [&](std::string_view ident) { return delta(resolve_preunit(sys, ident)); });
}

Dimension parse_dimension(const UnitSystem &sys, std::string_view text)
{
    return parse_expression<DimensionSymbol>(text, [&](std::string_view ident) {
        DimensionSymbol d{std::string(ident)};
        if (!sys.has_dimension(d))
            throw UnknownSymbol("dimension", d.name);
        return delta(std::move(d));
    });
}

std::string print_prefix(const Prefix &p)
{
    return print_word(p, [](const PrefixSymbol &s) -> const std::string & { return s.name; });
}

std::string print_preunit(const UnitSystem &sys, const PreUnit &p)
{
    if (p.prefix.empty())
        return p.base.name;
    if (p.prefix.size() == 1 && p.prefix.entries()[0].second == 1) {
        std::string joined = p.prefix.entries()[0].first.name + p.base.name;
        try {
            if (resolve_preunit(sys, joined) == p)
                return joined;
        } catch (const Error &) {
        }
    }
    std::string s;
    for (const auto &[sym, z] : p.prefix.entries()) {
        s += sym.name;
        if (z != 1)
            s += "^" + std::to_string(z);
        s += '_';
    }
    return s + p.base.name;
}

std::string print_unit(const UnitSystem &sys, const Unit &u)
{
    return print_word(u, [&](const PreUnit &p) { return print_preunit(sys, p); });
}

std::string print_root(const RootUnit &r)
{
    return print_word(r, [](const UnitSymbol &s) -> const std::string & { return s.name; });
}

std::string print_normalized(const NormalizedUnit &n)
{
    return "(" + print_prefix(n.prefix) + ", " + print_root(n.root) + ")";
}

std::string print_evaluated(const EvaluatedUnit &e)
{
    return "(" + e.factor.to_string() + ", " + print_root(e.root) + ")";
}

std::string print_dimension(const UnitSystem &sys, const Dimension &d)
{
    if (d.empty())
        return "1";
    std::string s;
    for (const auto &sym : sys.dimensions()) {
        Exponent z = d[sym];
        if (z == 0)
            continue;
        if (!s.empty())
            s += '*';
        s += sym.name + "^" + std::to_string(z);
    }
    return s;
}

} // namespace unical
