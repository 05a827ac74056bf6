#include "fibsys/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "fibsys/catalog.hpp"
#include "fibsys/dict_order.hpp"
#include "fibsys/perfection.hpp"
#include "fibsys/regex.hpp"
#include "fibsys/search.hpp"

namespace fibsys::cli {

namespace {

using nlohmann::json;

class UsageError : public Error {
public:
    using Error::Error;
};

struct RuleSource {
    std::string system;
    std::string rule;
    std::string dfa_file;
    std::string alphabet;
    std::string domain = "naturals";
    std::string anchor = "F2";
    std::string offsets = "0";
};

std::string default_format() {
    const char* env = std::getenv(kFormatEnv);
    if (!env || !*env) return "text";
    std::string f(env);
    if (f != "text" && f != "json" && f != "dot") throw UsageError(std::string(kFormatEnv) + " must be text, json or dot");
    return f;
}

void add_rule_source(CLI::App* sub, RuleSource& src) {
    auto* sys = sub->add_option("--system", src.system, "named catalog system");
    auto* rule = sub->add_option("--rule", src.rule, "rule regex over the digit alphabet");
    auto* file = sub->add_option("--dfa", src.dfa_file, "rule DFA in text format");
    sys->excludes(rule)->excludes(file);
    rule->excludes(file);
    sub->add_option("--alphabet", src.alphabet, "digit set of --rule, e.g. 0,1 or -1,0,1");
    sub->add_option("--domain", src.domain, "naturals or integers")
        ->check(CLI::IsMember({"naturals", "integers"}));
    sub->add_option("--anchor", src.anchor, "weight of the last digit: F2 or F1")->check(CLI::IsMember({"F2", "F1"}));
    sub->add_option("--offsets", src.offsets, "completeness offsets c (epsilon term -c), e.g. 0,1");
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stoi(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw UsageError("bad integer list '" + text + "'");
        }
    }
    if (out.empty()) throw UsageError("empty integer list");
    return out;
}

SystemSpec load_system(const RuleSource& src) {
    const int given = !src.system.empty() + !src.rule.empty() + !src.dfa_file.empty();
    if (given != 1) throw UsageError("give exactly one of --system, --rule, --dfa");
    if (!src.system.empty()) return get_system(src.system);

    std::optional<Dfa> rule;
    if (!src.rule.empty()) {
        const Alphabet alpha = src.alphabet.empty() ? Alphabet::binary() : Alphabet::parse(src.alphabet);
        rule = regex_dfa(src.rule, alpha);
    } else {
        std::ifstream in(src.dfa_file);
        if (!in) throw UsageError("cannot open DFA file " + src.dfa_file);
        rule = read_text(in);
        if (!src.alphabet.empty() && !(Alphabet::parse(src.alphabet) == rule->alphabet())) {
            throw AlphabetError("DFA alphabet " + rule->alphabet().to_string() + " differs from --alphabet");
        }
    }
    if (rule->alphabet().arity() != 1) throw AlphabetError("rule automata read a single digit track");
    ConverterSpec conv{rule->alphabet().coordinate(0), 1, src.anchor == "F1" ? Anchor::F1 : Anchor::F2};
    const Domain domain = src.domain == "integers" ? Domain::Integers : Domain::Naturals;
    const std::string name = src.rule.empty() ? src.dfa_file : src.rule;
    return SystemSpec(name, std::move(*rule), std::move(conv), domain, parse_int_list(src.offsets));
}

std::string rep_text(const RepString& r, bool human) { return human ? r.str(true) : r.str(); }

int emit_report(const PerfectionReport& r, const std::string& format, std::ostream& out) {
    if (format == "json") {
        out << report_to_json(r) << '\n';
    } else {
        out << report_to_text(r);
    }
    return r.perfect() ? kExitOk : kExitNotPerfect;
}

void require_not_dot(const std::string& format, const char* command) {
    if (format == "dot") throw UsageError(std::string(command) + " has no dot output");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Fibonacci numeration systems: perfection checks, representations, search"};
    app.require_subcommand(1);
    std::string format;
    try {
        format = default_format();
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    auto add_format = [&](CLI::App* sub) {
        sub->add_option("--format", format, "text, json or dot (default from " + std::string(kFormatEnv) + ")")
            ->check(CLI::IsMember({"text", "json", "dot"}));
    };

    RuleSource src;
    std::int64_t n = 0, from = 0, to = 11;
    std::string digits, s_text, t_text, fallback = "smallest", what = "rule", as = "dot", dedup = "pad";
    int rank = 1, sign = 1, offset = 0;
    bool full = false, heuristic = false, resume = false, variants = false;
    SearchConfig search_cfg;
    double budget = 0;

    auto* check = app.add_subcommand("check", "completeness and unambiguity of a system");
    add_rule_source(check, src);
    add_format(check);

    auto* rep = app.add_subcommand("rep", "representation of an integer");
    add_rule_source(rep, src);
    rep->add_option("--n", n, "value")->required();
    add_format(rep);

    auto* value = app.add_subcommand("value", "value of a digit string");
    value->add_option("--digits", digits, "digits, e.g. 10-11, 1,0,-1,1 or 10ī1")->required();
    value->add_option("--anchor", src.anchor, "weight of the last digit: F2 or F1")
        ->check(CLI::IsMember({"F2", "F1"}));
    add_format(value);

    auto* table = app.add_subcommand("table", "representations of a range of values");
    add_rule_source(table, src);
    table->add_option("--from", from, "first value");
    table->add_option("--to", to, "last value");
    add_format(table);

    auto* compare = app.add_subcommand("compare", "dictionary order of two binary strings");
    compare->add_option("--s", s_text, "first string")->required();
    compare->add_option("--t", t_text, "second string")->required();
    add_format(compare);

    auto* maxdict = app.add_subcommand("maxdict", "system of dictionary-largest representations");
    add_format(maxdict);

    auto* rankcmd = app.add_subcommand("rank", "system of t-th largest representations");
    rankcmd->add_option("--t", rank, "rank, 1..3")->required();
    rankcmd->add_option("--fallback", fallback, "choice when fewer than t representations exist")
        ->check(CLI::IsMember({"smallest", "largest"}));
    add_format(rankcmd);

    auto* search = app.add_subcommand("search", "exhaustive search for perfect systems given by small DFAs");
    search->add_option("--max-states", search_cfg.max_states, "largest DFA size")->required();
    search->add_flag("--heuristic", heuristic, "skip systems whose representation lengths are not monotone");
    search->add_option("--dedup", dedup, "pad (pad-closed language) or language")
        ->check(CLI::IsMember({"pad", "language"}));
    search->add_option("--workers", search_cfg.workers, "worker threads");
    search->add_option("--budget", budget, "time budget in seconds");
    search->add_option("--log", search_cfg.log_path, "JSONL log of results and checkpoints");
    search->add_flag("--resume", resume, "continue from the last checkpoint of --log");
    search->add_option("--prefilter-length", search_cfg.prefilter_length, "screening string length");
    add_format(search);

    auto* catalog = app.add_subcommand("catalog", "list the built-in systems");
    catalog->add_flag("--variants", variants, "include variants of the published systems");
    add_format(catalog);

    auto* dot = app.add_subcommand("export-dot", "export an automaton as DOT or text");
    add_rule_source(dot, src);
    dot->add_option("--what", what, "rule, language, converter, comparator or maxdict-relation")
        ->check(CLI::IsMember({"rule", "language", "converter", "comparator", "maxdict-relation"}));
    dot->add_option("--sign", sign, "converter sign, 1 or -1");
    dot->add_option("--offset", offset, "converter offset")->check(CLI::Range(-2, 2));
    dot->add_option("--as", as, "dot or text")->check(CLI::IsMember({"dot", "text"}));
    dot->add_flag("--full", full, "keep the dead state");

    try {
        app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    const bool human = format == "text";
    try {
        if (check->parsed()) {
            require_not_dot(format, "check");
            return emit_report(check_perfect(load_system(src)), format, out);
        }
        if (rep->parsed()) {
            require_not_dot(format, "rep");
            const SystemSpec sys = load_system(src);
            try {
                auto found = find_representation_traced(sys, n);
                if (format == "json") {
                    out << json{{"system", sys.name()},
                                {"n", n},
                                {"rep", found.rep.str()},
                                {"visited_states", found.visited_states}}
                               .dump(2)
                        << '\n';
                } else {
                    out << rep_text(found.rep, human) << '\n';
                }
                return kExitOk;
            } catch (const NoRepresentationError& e) {
                err << e.what() << '\n';
                return kExitNotPerfect;
            }
        }
        if (value->parsed()) {
            require_not_dot(format, "value");
            const RepString r = RepString::parse(digits);
            const std::int64_t v = eval_rep(r, src.anchor == "F1" ? Anchor::F1 : Anchor::F2);
            if (format == "json") {
                out << json{{"digits", r.str()}, {"anchor", src.anchor}, {"value", v}}.dump(2) << '\n';
            } else {
                out << v << '\n';
            }
            return kExitOk;
        }
        if (table->parsed()) {
            require_not_dot(format, "table");
            if (from > to) throw UsageError("--from must not exceed --to");
            const SystemSpec sys = load_system(src);
            json rows = json::array();
            int status = kExitOk;
            for (std::int64_t v = from; v <= to; ++v) {
                std::optional<RepString> r;
                try {
                    r = find_representation(sys, v);
                } catch (const NoRepresentationError&) {
                    status = kExitNotPerfect;
                }
                if (format == "json") {
                    rows.push_back({{"n", v}, {"rep", r ? json(r->str()) : json(nullptr)}});
                } else {
                    out << v << '\t' << (r ? rep_text(*r, human) : "-") << '\n';
                }
            }
            if (format == "json") out << json{{"system", sys.name()}, {"rows", rows}}.dump(2) << '\n';
            return status;
        }
        if (compare->parsed()) {
            require_not_dot(format, "compare");
            const RepString s = RepString::parse(s_text), t = RepString::parse(t_text);
            for (const auto* r : {&s, &t}) {
                for (Digit d : r->digits()) {
                    if (d != 0 && d != 1) throw UsageError("compare takes binary strings");
                }
            }
            const auto order = dictionary_compare(s, t);
            const char* sym = order < 0 ? "<" : order > 0 ? ">" : "=";
            const std::size_t ls = s.stripped().size(), lt = t.stripped().size();
            std::optional<bool> automaton;
            if ((ls > lt ? ls - lt : lt - ls) <= 1) automaton = comparator_accepts(build_comparator(), s, t);
            if (format == "json") {
                out << json{{"s", s.str()},
                            {"t", t.str()},
                            {"order", sym},
                            {"comparator_accepts", automaton ? json(*automaton) : json(nullptr)}}
                           .dump(2)
                    << '\n';
            } else {
                out << (s.stripped().empty() ? "ε" : s.stripped().str()) << ' ' << sym << ' '
                    << (t.stripped().empty() ? "ε" : t.stripped().str()) << '\n';
                if (!automaton) out << "(lengths differ by more than one; comparator not applicable)\n";
            }
            return kExitOk;
        }
        if (maxdict->parsed() || rankcmd->parsed()) {
            const bool is_max = maxdict->parsed();
            const Fallback fb = fallback == "largest" ? Fallback::Largest : Fallback::Smallest;
            const Dfa relation = is_max ? build_max_dict_relation() : build_rank_t_relation(rank, fb);
            const SystemSpec sys = is_max ? build_max_dict_system() : build_rank_t_system(rank, fb);
            if (format == "dot") {
                write_dot(out, sys.language(), sys.name());
                return kExitOk;
            }
            const PerfectionReport report = check_perfect(sys);
            const StateCounts rel = state_counts(relation);
            std::vector<RepString> first;
            for (std::int64_t v = 0; v < 12; ++v) first.push_back(find_representation(sys, v));
            if (format == "json") {
                json j = json::parse(report_to_json(report));
                j["relation_states"] = {{"trimmed", rel.trimmed}, {"complete", rel.complete}};
                json reps = json::array();
                for (const auto& r : first) reps.push_back(r.str());
                j["representations"] = reps;
                out << j.dump(2) << '\n';
            } else {
                out << report_to_text(report);
                out << "relation states: " << rel.trimmed << " trimmed, " << rel.complete << " complete\n";
                out << "representations of 0..11:";
                for (const auto& r : first) out << ' ' << r.str(true);
                out << '\n';
            }
            return report.perfect() ? kExitOk : kExitNotPerfect;
        }
        if (search->parsed()) {
            require_not_dot(format, "search");
            search_cfg.pruning = heuristic ? Pruning::Monotone : Pruning::Exact;
            search_cfg.dedup = dedup == "language" ? Dedup::ByLanguage : Dedup::ByPadClosedLanguage;
            search_cfg.resume = resume;
            if (resume && search_cfg.log_path.empty()) throw UsageError("--resume needs --log");
            if (budget > 0) search_cfg.time_budget_s = budget;
            const SearchOutcome o = search_perfect(search_cfg);
            if (format == "json") {
                json results = json::array();
                for (const auto& r : o.results) results.push_back(json::parse(result_to_json(r)));
                out << json{{"max_states", search_cfg.max_states},
                            {"pruning", to_string(search_cfg.pruning)},
                            {"exhaustive", o.exhaustive},
                            {"budget_exhausted", o.budget_exhausted},
                            {"shapes_done", o.shapes_done},
                            {"shapes_total", o.shapes_total},
                            {"candidates", o.candidates},
                            {"elapsed_ms", o.elapsed_ms},
                            {"results", results}}
                           .dump(2)
                    << '\n';
            } else {
                out << o.results.size() << " perfect systems from DFAs with at most " << search_cfg.max_states
                    << " states (" << o.shapes_done << "/" << o.shapes_total << " shapes, " << o.candidates
                    << " screened candidates)\n";
                if (!o.exhaustive) out << "monotone heuristic in use: the search may have missed systems\n";
                if (o.budget_exhausted) out << "time budget exhausted: results are partial\n";
                for (std::size_t i = 0; i < o.results.size(); ++i) {
                    const auto& r = o.results[i];
                    const StateCounts c = state_counts(r.dfa);
                    out << '#' << i + 1 << "  states " << c.trimmed << '/' << c.complete << "  shape " << r.shape_index
                        << ":";
                    for (const auto& [v, rs] : r.samples) out << ' ' << rs.str(true);
                    out << '\n';
                }
            }
            return o.budget_exhausted ? kExitNotPerfect : kExitOk;
        }
        if (catalog->parsed()) {
            require_not_dot(format, "catalog");
            json list = json::array();
            for (const auto& e : list_systems()) {
                if (!variants && !e.variant_of.empty()) continue;
                const SystemSpec& sys = get_system(e.name);
                const StateCounts c = state_counts(sys.language());
                if (format == "json") {
                    json offs(sys.completeness_offsets());
                    list.push_back({{"name", e.name},
                                    {"description", e.description},
                                    {"source", e.source},
                                    {"digits", sys.digits()},
                                    {"anchor", to_string(sys.anchor())},
                                    {"domain", to_string(sys.domain())},
                                    {"offsets", offs},
                                    {"states", {{"trimmed", c.trimmed}, {"complete", c.complete}}},
                                    {"published_states", e.expected_states ? json(*e.expected_states) : json(nullptr)},
                                    {"variant_of", e.variant_of.empty() ? json(nullptr) : json(e.variant_of)}});
                } else {
                    out << e.name << "  [" << to_string(sys.domain()) << ", " << to_string(sys.anchor()) << ", "
                        << c.trimmed << '/' << c.complete << " states]  " << e.description << '\n';
                }
            }
            if (format == "json") out << list.dump(2) << '\n';
            return kExitOk;
        }
        if (dot->parsed()) {
            std::optional<Dfa> a;
            std::string name = what;
            if (what == "comparator") {
                a = build_comparator();
            } else if (what == "maxdict-relation") {
                a = build_max_dict_relation();
            } else {
                const SystemSpec sys = load_system(src);
                name = sys.name();
                if (what == "rule") a = sys.rule();
                if (what == "language") a = sys.language();
                if (what == "converter") {
                    if (sign != 1 && sign != -1) throw UsageError("--sign must be 1 or -1");
                    a = sys.converter_dfa(sign, offset);
                }
            }
            if (as == "text") {
                write_text(out, *a);
            } else {
                write_dot(out, *a, name, !full);
            }
            return kExitOk;
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const RegexSyntaxError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}

}  // namespace fibsys::cli
