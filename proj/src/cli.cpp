#include "unical/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "unical/convert.hpp"
#include "unical/error.hpp"
#include "unical/registry.hpp"

namespace unical::cli {

namespace {

constexpr std::string_view schema = "unical-result/1";

enum class Format { plain, structured };

struct Config {
    std::vector<std::string> registries;
    Format format = Format::plain;
    std::size_t digits = 15;
    bool pathological_rules = true;
};

/// Flat key=value lines, opened by the schema and command name.
class Fields {
public:
    Fields(std::ostream &out, std::string_view command) : out_(out)
    {
        out_ << "schema=" << schema << '\n' << "command=" << command << '\n';
    }

    template <class T>
    Fields &operator()(std::string_view key, const T &value)
    {
        out_ << key << '=' << value << '\n';
        return *this;
    }

private:
    std::ostream &out_;
};

std::vector<std::string> split_list(const std::string &list)
{
    std::vector<std::string> out;
    std::stringstream ss(list);
    for (std::string item; std::getline(ss, item, ':');)
        if (!item.empty())
            out.push_back(item);
    return out;
}

RegistryDocument read_document(const std::string &spec)
{
    if (std::filesystem::is_regular_file(spec)) {
        std::ifstream in(spec, std::ios::binary);
        std::stringstream text;
        text << in.rdbuf();
        if (!in)
            throw ValidationError("cannot read registry '" + spec + "'");
        return parse_registry(text.str(), spec);
    }
    if (auto text = bundled_registry(spec))
        return parse_registry(*text, spec);
    throw ValidationError("no registry file or bundled registry named '" + spec + "'");
}

Registry load(const Config &config, const Environment &env)
{
    std::vector<std::string> specs = config.registries;
    if (specs.empty() && env.registry_list)
        specs = split_list(*env.registry_list);
    if (specs.empty())
        specs = {"si"};
    std::vector<RegistryDocument> docs;
    for (const auto &s : specs)
        docs.push_back(read_document(s));
    Registry reg = load_registry(docs);
    if (!config.pathological_rules)
        reg.conversion = reg.conversion.without_pathological();
    return reg;
}

std::string decimal(const Ratio &r, const Config &config)
{
    DecimalText d = to_decimal(r, config.digits);
    return d.exact ? d.text : d.text + "...";
}

void warn_pathological(const Converter &conv, const std::vector<Unit> &units, std::ostream &err)
{
    std::set<UnitSymbol> used;
    for (const auto &u : units) {
        RootUnit r = root(u);
        for (const auto &[base, z] : r.entries()) {
            used.insert(base);
            if (auto it = conv.dependencies().order.find(base); it != conv.dependencies().order.end())
                used.insert(it->second.begin(), it->second.end());
        }
    }
    for (const auto &[base, rule] : conv.conversion().rules())
        if (rule.pathological && used.contains(base))
            err << "warning: using the rule for '" << base.name << "', which equates it with "
                << "a unitless quantity\n";
}

int cmd_convert(const Registry &reg, const std::string &from, const std::string &to, const Config &config,
                std::ostream &out, std::ostream &err)
{
    Unit u = parse_unit(reg.system, from);
    Unit v = parse_unit(reg.system, to);
    Converter conv(reg.system, reg.conversion);
    warn_pathological(conv, {u, v}, err);
    EvaluatedUnit a = conv.rewrite(u);
    EvaluatedUnit b = conv.rewrite(v);
    if (a.root != b.root) {
        std::string diff = print_root(a.root * b.root.inverse());
        if (config.format == Format::structured) {
            Fields(out, "convert")("status", "not-convertible")("from_root", print_root(a.root))(
                "to_root", print_root(b.root))("root_diff", diff);
        } else {
            out << "not convertible\n"
                << "from: " << print_evaluated(a) << '\n'
                << "to:   " << print_evaluated(b) << '\n'
                << "root difference: " << diff << '\n';
        }
        return exit_not_convertible;
    }
    Ratio r = a.factor / b.factor;
    if (config.format == Format::structured) {
        Fields(out, "convert")("status", "converted")("ratio_num", r.numerator())("ratio_den", r.denominator())(
            "decimal", decimal(r, config))("root", print_root(a.root))("from_factor", a.factor)("to_factor",
                                                                                              b.factor);
    } else {
        out << "ratio: " << r << '\n'
            << "decimal: " << decimal(r, config) << '\n'
            << "from: " << print_evaluated(a) << '\n'
            << "to:   " << print_evaluated(b) << '\n';
    }
    return exit_ok;
}

int cmd_norm(const Registry &reg, const std::string &text, const Config &config, std::ostream &out)
{
    NormalizedUnit n = norm(parse_unit(reg.system, text));
    if (config.format == Format::structured)
        Fields(out, "norm")("prefix", print_prefix(n.prefix))("root", print_root(n.root));
    else
        out << print_normalized(n) << '\n';
    return exit_ok;
}

int cmd_eval(const Registry &reg, const std::string &text, const Config &config, std::ostream &out)
{
    Unit u = parse_unit(reg.system, text);
    EvaluatedUnit e = eval(reg.system, u);
    // Rewriting is shown as well when the rules allow it.
    std::optional<EvaluatedUnit> rewritten;
    if (analyze(reg.system, reg.conversion).well_founded)
        rewritten = Converter(reg.system, reg.conversion).rewrite(u);
    if (config.format == Format::structured) {
        Fields f(out, "eval");
        f("factor_num", e.factor.numerator())("factor_den", e.factor.denominator())(
            "decimal", decimal(e.factor, config))("root", print_root(e.root));
        if (rewritten)
            f("rewritten_factor", rewritten->factor)("rewritten_root", print_root(rewritten->root));
    } else {
        out << print_evaluated(e) << '\n';
        if (rewritten)
            out << "rewritten: " << print_evaluated(*rewritten) << '\n';
    }
    return exit_ok;
}

int cmd_dim(const Registry &reg, const std::string &text, const Config &config, std::ostream &out)
{
    std::string d = print_dimension(reg.system, dim(reg.system, parse_unit(reg.system, text)));
    if (config.format == Format::structured)
        Fields(out, "dim")("dimension", d);
    else
        out << d << '\n';
    return exit_ok;
}

int cmd_explain(const Registry &reg, const std::string &text, const Config &config, std::ostream &out,
                std::ostream &err)
{
    Unit u = parse_unit(reg.system, text);
    Converter conv(reg.system, reg.conversion);
    warn_pathological(conv, {u}, err);
    std::vector<EvaluatedUnit> steps = conv.trace(u);
    if (config.format == Format::structured) {
        Fields f(out, "explain");
        f("steps", steps.size() - 1);
        for (std::size_t i = 0; i < steps.size(); ++i) {
            std::string key = "step." + std::to_string(i);
            f(key + ".factor", steps[i].factor)(key + ".root", print_root(steps[i].root));
        }
    } else {
        for (std::size_t i = 0; i < steps.size(); ++i)
            out << i << ": " << print_evaluated(steps[i]) << '\n';
    }
    return exit_ok;
}

std::string cycle_text(const std::vector<UnitSymbol> &cycle)
{
    std::string s;
    for (const auto &u : cycle)
        s += u.name + " -> ";
    return s + cycle.front().name;
}

std::string_view consistency_name(Consistency c)
{
    switch (c) {
    case Consistency::guaranteed:
        return "guaranteed";
    case Consistency::witness_found:
        return "witness-found";
    case Consistency::unknown:
        break;
    }
    return "unknown";
}

int cmd_classify(const Registry &reg, const Config &config, std::ostream &out)
{
    ClassificationReport report = classify(reg.system, reg.conversion);
    const auto &deps = report.dependencies;
    auto yes_no = [](bool b) { return b ? "yes" : "no"; };

    if (config.format == Format::structured) {
        Fields f(out, "classify");
        f("rules", reg.conversion.size())("defining", yes_no(report.is_defining))(
            "well_defining", yes_no(report.is_well_defining))("regular", yes_no(report.is_regular))(
            "consistency", consistency_name(report.consistency));
        if (report.is_well_defining) {
            f("iteration_bound", deps->iteration_bound);
            for (const auto &u : reg.system.units())
                f("depth." + u.name, deps->base_depth(u));
        }
        if (deps && deps->cycle_witness)
            f("cycle", cycle_text(*deps->cycle_witness));
        if (report.witness)
            f("witness_ratio", report.witness->ratio);
        if (!report.is_well_defining)
            f("exploration_truncated", yes_no(report.exploration_truncated));
    } else {
        out << "rules: " << reg.conversion.size() << '\n'
            << "defining: " << yes_no(report.is_defining) << '\n'
            << "well-defining: " << yes_no(report.is_well_defining) << '\n'
            << "regular: " << yes_no(report.is_regular) << '\n';
        if (report.is_well_defining) {
            out << "iteration bound (N_C): " << deps->iteration_bound << '\n' << "depths:";
            for (const auto &u : reg.system.units())
                if (std::size_t d = deps->base_depth(u); d != 0)
                    out << ' ' << u.name << '=' << d;
            out << '\n';
        }
        if (deps && deps->cycle_witness)
            out << "cycle: " << cycle_text(*deps->cycle_witness) << '\n';
        out << "consistency: " << consistency_name(report.consistency) << '\n';
        if (report.witness)
            out << "witness: one = " << report.witness->ratio << '\n';
        if (!report.is_well_defining && report.exploration_truncated)
            out << "note: bounded search, consistency not established\n";
    }
    return report.is_well_defining ? exit_ok : exit_not_well_defining;
}

int cmd_list(const Registry &reg, const std::string &what, const Config &config, std::ostream &out)
{
    const UnitSystem &sys = reg.system;
    bool structured = config.format == Format::structured;
    std::optional<Fields> f;
    if (structured)
        f.emplace(out, "list");
    if (what == "dimensions") {
        for (const auto &d : sys.dimensions()) {
            if (structured)
                (*f)("dimension", d.name);
            else
                out << d.name << '\n';
        }
    } else if (what == "prefixes") {
        for (const auto &p : sys.prefixes()) {
            if (structured)
                (*f)("prefix." + p.name, sys.prefix_value(p));
            else
                out << p.name << '\t' << sys.prefix_value(p) << '\n';
        }
    } else {
        for (const auto &u : sys.units()) {
            std::string d = print_dimension(sys, sys.unit_dimension(u));
            std::string rule;
            if (const Rule *r = reg.conversion.find(u))
                rule = r->ratio.to_string() + " " + print_unit(sys, r->replacement);
            if (structured) {
                (*f)("unit." + u.name + ".dimension", d);
                if (!rule.empty())
                    (*f)("unit." + u.name + ".rule", rule);
            } else {
                out << u.name << '\t' << d;
                if (!rule.empty())
                    out << "\t= " << rule;
                out << '\n';
            }
        }
    }
    return exit_ok;
}

} // namespace

Environment environment_from_process()
{
    Environment env;
    if (const char *v = std::getenv("UNICAL_REGISTRY"))
        env.registry_list = v;
    return env;
}

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err, const Environment &env)
{
    CLI::App app{"Exact unit conversion over prefixed units"};
    app.name("unical");
    app.require_subcommand(1);
    app.fallthrough();

    Config config;
    app.add_option("--registry", config.registries,
                   "Registry file or bundled name (si, uk, accepted); repeatable, later ones extend earlier ones");
    std::string format = "plain";
    app.add_option("--format", format, "Output format: plain or structured")
        ->check(CLI::IsMember({"plain", "structured"}));
    app.add_option("--digits", config.digits, "Fractional digits of decimal renderings")
        ->check(CLI::Range(std::size_t(0), max_decimal_digits));
    bool no_pathological = false;
    app.add_flag("--no-pathological-rules", no_pathological, "Leave rad and sr without rules");

    std::string u, v, what;
    auto *convert_cmd = app.add_subcommand("convert", "Conversion ratio from U to V");
    convert_cmd->add_option("U", u)->required();
    convert_cmd->add_option("V", v)->required();
    auto *norm_cmd = app.add_subcommand("norm", "Normalized form (prefix, root)");
    norm_cmd->add_option("U", u)->required();
    auto *eval_cmd = app.add_subcommand("eval", "Evaluated form (factor, root)");
    eval_cmd->add_option("U", u)->required();
    auto *dim_cmd = app.add_subcommand("dim", "Dimension");
    dim_cmd->add_option("U", u)->required();
    auto *explain_cmd = app.add_subcommand("explain", "Rewriting steps up to the fixpoint");
    explain_cmd->add_option("U", u)->required();
    auto *classify_cmd = app.add_subcommand("classify", "Classify the loaded rule set");
    auto *list_cmd = app.add_subcommand("list", "List registered symbols");
    list_cmd->add_option("what", what)->required()->check(CLI::IsMember({"units", "prefixes", "dimensions"}));

    std::vector<const char *> argv{"unical"};
    for (const auto &a : args)
        argv.push_back(a.c_str());
    try {
        app.parse(int(argv.size()), argv.data());
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_input_error;
    }
    config.pathological_rules = !no_pathological;
    config.format = format == "structured" ? Format::structured : Format::plain;

    try {
        Registry reg = load(config, env);
        if (convert_cmd->parsed())
            return cmd_convert(reg, u, v, config, out, err);
        if (norm_cmd->parsed())
            return cmd_norm(reg, u, config, out);
        if (eval_cmd->parsed())
            return cmd_eval(reg, u, config, out);
        if (dim_cmd->parsed())
            return cmd_dim(reg, u, config, out);
        if (explain_cmd->parsed())
            return cmd_explain(reg, u, config, out, err);
        if (classify_cmd->parsed())
            return cmd_classify(reg, config, out);
        return cmd_list(reg, what, config, out);
    } catch (const NotWellDefining &e) {
        err << "error: " << e.what() << '\n';
        return exit_not_well_defining;
    } catch (const Error &e) {
        err << "error: " << e.what() << '\n';
        return exit_input_error;
    }
}

} // namespace unical::cli
