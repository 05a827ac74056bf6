#include "fibsys/perfection.hpp"

#include <algorithm>
#include <chrono>
#include <deque>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "fibsys/regex.hpp"

namespace fibsys {

using nlohmann::json;

std::string to_string(Domain d) { return d == Domain::Naturals ? "naturals" : "integers"; }
std::string to_string(Anchor a) { return a == Anchor::F2 ? "F2" : "F1"; }

// -------------------------------------------------------------- SystemSpec

SystemSpec::SystemSpec(std::string name, Dfa rule, ConverterSpec converter, Domain domain,
                       std::vector<int> completeness_offsets)
    : name_(std::move(name)),
      rule_(minimize(rule)),
      language_(pad_normalize(rule)),
      converter_(std::move(converter)),
      domain_(domain),
      offsets_(std::move(completeness_offsets)) {
    const auto& alpha = rule_.alphabet();
    if (alpha.arity() != 1) throw AlphabetError("rule must be a 1-track automaton");
    std::vector<Digit> digits = converter_.x_digits;
    std::sort(digits.begin(), digits.end());
    if (alpha.coordinate(0) != digits) {
        throw AlphabetError("rule alphabet " + alpha.to_string() + " does not match converter digits");
    }
    converter_.x_digits = digits;
    converter_.sign = 1;
    if (offsets_.empty()) throw Error("completeness offsets must not be empty");
    for (int c : offsets_) {
        if (c < -1 || c > 1) throw Error("completeness offsets must lie in {-1, 0, 1}");
    }
    if (has_epsilon_term() && converter_.anchor != Anchor::F2) {
        throw Error("epsilon-term systems use the F2 anchor for their core");
    }
}

const Dfa& SystemSpec::converter_dfa(int sign, int offset) const {
    return normalizer(ConverterSpec{converter_.x_digits, sign, converter_.anchor}, offset);
}

// ---------------------------------------------------------------- relations

Dfa equal_rel(const std::vector<Digit>& digits) {
    const Alphabet alpha(std::vector<std::vector<Digit>>{digits, digits});
    std::vector<State> delta(2 * alpha.size(), 1);
    for (SymbolId s = 0; s < alpha.size(); ++s) {
        if (alpha.digit(s, 0) == alpha.digit(s, 1)) delta[s] = 0;
    }
    return minimize(Dfa(alpha, 2, 0, std::move(delta), {true, false}));
}

Dfa zeckendorf_language() { return complement(regex_dfa(".*11.*", Alphabet::binary())); }

namespace {

RepString track_digits(const Alphabet& alpha, const Word& w, std::size_t coord) {
    std::vector<Digit> d;
    d.reserve(w.size());
    for (SymbolId s : w) d.push_back(alpha.digit(s, coord));
    return RepString(std::move(d));
}

}  // namespace

CompletenessResult check_completeness(const SystemSpec& sys, int sign) {
    if (sign != 1 && sign != -1) throw Error("sign must be +1 or -1");
    const Alphabet pair = converter_alphabet(sys.digits());
    const std::size_t at0[] = {0};
    const std::size_t keep_y[] = {1};
    const Dfa lifted = cylinder(sys.language(), pair, at0);

    Dfa covered = empty_dfa(Alphabet::binary());
    for (int c : sys.completeness_offsets()) {
        Dfa both = combine(BoolOp::And, lifted, sys.converter_dfa(sign, c));
        covered = combine(BoolOp::Or, covered, minimize(determinize(project(both, keep_y))));
    }
    if (sign == -1) {
        // zero is accounted for on the positive side
        covered = combine(BoolOp::Or, covered, regex_dfa("0*", Alphabet::binary()));
    }
    auto eq = equivalent(covered, zeckendorf_language());
    CompletenessResult out;
    if (!eq.equivalent) {
        out.complete = false;
        out.missing_zeckendorf = track_digits(Alphabet::binary(), *eq.counterexample, 0).stripped();
        out.missing = eval_rep(out.missing_zeckendorf);
        const Dfa positive = combine(BoolOp::And, zeckendorf_language(), regex_dfa(".*1.*", Alphabet::binary()));
        auto gap = is_empty(combine(BoolOp::Diff, positive, pad_normalize(covered)));
        if (!gap.empty) out.missing_positive = eval_rep(track_digits(Alphabet::binary(), *gap.witness, 0));
    }
    return out;
}

UnambiguityResult check_unambiguity(const SystemSpec& sys, int sign) {
    if (sign != 1 && sign != -1) throw Error("sign must be +1 or -1");
    const auto& digits = sys.digits();
    const Alphabet triple(std::vector<std::vector<Digit>>{digits, digits, {0, 1}});
    const Dfa& conv = sys.converter_dfa(sign, 0);
    auto lift = [&](const Dfa& a, std::vector<std::size_t> at) { return cylinder(a, triple, at); };

    Dfa r = combine(BoolOp::And, lift(sys.language(), {0}), lift(conv, {0, 2}));
    r = combine(BoolOp::And, r, lift(sys.language(), {1}));
    r = combine(BoolOp::And, r, lift(conv, {1, 2}));
    r = combine(BoolOp::Diff, r, lift(equal_rel(digits), {0, 1}));

    auto e = is_empty(r);
    UnambiguityResult out;
    if (!e.empty) {
        out.unambiguous = false;
        AmbiguityWitness w;
        w.first = track_digits(triple, *e.witness, 0).stripped();
        w.second = track_digits(triple, *e.witness, 1).stripped();
        w.value = eval_rep(w.first, sys.anchor());
        out.witness = std::move(w);
    }
    return out;
}

PerfectionReport check_perfect(const SystemSpec& sys) {
    const auto start = std::chrono::steady_clock::now();
    PerfectionReport r;
    r.system = sys.name();
    r.domain = sys.domain();
    r.rule_counts = state_counts(sys.language());
    r.complete_pos = check_completeness(sys, 1);
    r.unambiguous_pos = check_unambiguity(sys, 1);
    if (sys.domain() == Domain::Integers) {
        r.complete_neg = check_completeness(sys, -1);
        r.unambiguous_neg = check_unambiguity(sys, -1);
    }
    r.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return r;
}

// ------------------------------------------------------- finding a rep

RepresentationSearch find_representation_traced(const SystemSpec& sys, std::int64_t n) {
    if (n < 0 && sys.domain() != Domain::Integers) {
        throw NoRepresentationError("system " + sys.name() + " only represents natural numbers");
    }
    const int sign = n < 0 ? -1 : 1;
    const std::vector<Digit> z = zeckendorf_encode(n < 0 ? -n : n).digits();
    const auto zlen = static_cast<std::uint32_t>(z.size());
    const Dfa& rule = sys.language();
    const auto rule_live = rule.live_states();
    const Alphabet pair = converter_alphabet(sys.digits());
    const auto& digits = pair.coordinate(0);

    RepresentationSearch out;
    for (int c : sys.completeness_offsets()) {
        const Dfa& conv = sys.converter_dfa(sign, c);
        const auto conv_live = conv.live_states();

        struct Node {
            State r, q;
            std::uint32_t i;
        };
        auto key = [&](const Node& v) {
            return (static_cast<std::uint64_t>(v.r) * conv.num_states() + v.q) * (zlen + 1) + v.i;
        };
        std::unordered_map<std::uint64_t, std::pair<std::uint64_t, Digit>> parent;
        std::deque<Node> queue;
        const Node root{rule.initial(), conv.initial(), 0};
        parent.emplace(key(root), std::pair{key(root), 0});
        queue.push_back(root);
        std::optional<Node> goal;
        while (!queue.empty()) {
            const Node v = queue.front();
            queue.pop_front();
            ++out.visited_states;
            if (v.i == zlen && rule.accepting(v.r) && conv.accepting(v.q)) {
                goal = v;
                break;
            }
            for (Digit a : digits) {
                // y digit: padding zero before the first 1, then the digits of z
                for (int option = 0; option < 2; ++option) {
                    std::uint32_t ni;
                    Digit b;
                    if (option == 0) {
                        if (v.i != 0) continue;
                        b = 0;
                        ni = 0;
                    } else {
                        if (v.i >= zlen) continue;
                        b = z[v.i];
                        ni = v.i + 1;
                    }
                    const Digit tuple[] = {a, b};
                    const Node w{rule.next(v.r, rule.alphabet().index(std::span<const Digit>(&a, 1))),
                                 conv.next(v.q, pair.index(tuple)), ni};
                    if (!rule_live[w.r] || !conv_live[w.q]) continue;
                    auto [it, inserted] = parent.try_emplace(key(w), std::pair{key(v), a});
                    if (inserted) queue.push_back(w);
                }
            }
        }
        if (!goal) continue;
        std::vector<Digit> xs;
        for (std::uint64_t k = key(*goal), root_key = key(root); k != root_key;) {
            const auto& [p, a] = parent.at(k);
            xs.push_back(a);
            k = p;
        }
        std::reverse(xs.begin(), xs.end());
        RepString core = RepString(std::move(xs)).stripped();
        if (sys.has_epsilon_term()) {
            auto d = core.digits();
            d.push_back(-c);
            out.rep = RepString(std::move(d));
        } else {
            out.rep = std::move(core);
        }
        return out;
    }
    throw NoRepresentationError("no representation of " + std::to_string(n) + " in system " + sys.name());
}

RepString find_representation(const SystemSpec& sys, std::int64_t n) { return find_representation_traced(sys, n).rep; }

std::int64_t representation_value(const SystemSpec& sys, const RepString& rep) {
    return eval_rep(rep, sys.has_epsilon_term() ? Anchor::F1 : sys.anchor());
}

bool representation_valid(const SystemSpec& sys, const RepString& rep) {
    const Alphabet& alpha = sys.language().alphabet();
    auto digits = rep.digits();
    if (sys.has_epsilon_term()) {
        if (digits.empty()) return false;
        const auto& offs = sys.completeness_offsets();
        if (std::find(offs.begin(), offs.end(), -digits.back()) == offs.end()) return false;
        digits.pop_back();
    }
    Word w;
    for (Digit d : digits) {
        auto s = alpha.find(std::span<const Digit>(&d, 1));
        if (!s) return false;
        w.push_back(*s);
    }
    return sys.language().accepts(w);
}

std::vector<RepString> all_binary_representations(std::int64_t n) {
    if (n < 0) throw Error("binary representations need n >= 0");
    const Dfa& conv = normalizer(ConverterSpec{{0, 1}, 1, Anchor::F2}, 0);
    const auto live = conv.live_states();
    const auto& alpha = conv.alphabet();
    const std::vector<Digit> z = zeckendorf_encode(n).digits();
    const std::size_t len = z.size() + 1;  // lengths of representations differ by at most one
    std::vector<Digit> y(len - z.size(), 0);
    y.insert(y.end(), z.begin(), z.end());

    std::vector<RepString> out;
    std::vector<Digit> x;
    auto walk = [&](auto&& self, State q) -> void {
        if (!live[q]) return;
        if (x.size() == len) {
            if (conv.accepting(q)) out.push_back(RepString(x).stripped());
            return;
        }
        for (Digit a : {0, 1}) {
            const Digit tuple[] = {a, y[x.size()]};
            x.push_back(a);
            self(self, conv.next(q, alpha.index(tuple)));
            x.pop_back();
        }
    };
    walk(walk, conv.initial());
    std::sort(out.begin(), out.end());
    return out;
}

std::int64_t count_representations(std::int64_t n) {
    return static_cast<std::int64_t>(all_binary_representations(n).size());
}

// --------------------------------------------------------------- reports

namespace {

json completeness_json(const CompletenessResult& c) {
    json j{{"verdict", c.complete}, {"witness", nullptr}};
    if (!c.complete) {
        j["witness"] = {{"value", *c.missing},
                        {"zeckendorf", c.missing_zeckendorf.str()},
                        {"smallest_positive", c.missing_positive ? json(*c.missing_positive) : json(nullptr)}};
    }
    return j;
}

json unambiguity_json(const UnambiguityResult& u) {
    json j{{"verdict", u.unambiguous}, {"witness", nullptr}};
    if (u.witness) {
        j["witness"] = {{"value", u.witness->value}, {"first", u.witness->first.str()},
                        {"second", u.witness->second.str()}};
    }
    return j;
}

CompletenessResult completeness_from(const json& j) {
    CompletenessResult c;
    c.complete = j.at("verdict").get<bool>();
    if (!j.at("witness").is_null()) {
        c.missing = j["witness"].at("value").get<std::int64_t>();
        c.missing_zeckendorf = RepString::parse(j["witness"].at("zeckendorf").get<std::string>());
        const auto& pos = j["witness"].value("smallest_positive", json(nullptr));
        if (!pos.is_null()) c.missing_positive = pos.get<std::int64_t>();
    }
    return c;
}

UnambiguityResult unambiguity_from(const json& j) {
    UnambiguityResult u;
    u.unambiguous = j.at("verdict").get<bool>();
    if (!j.at("witness").is_null()) {
        AmbiguityWitness w;
        w.value = j["witness"].at("value").get<std::int64_t>();
        w.first = RepString::parse(j["witness"].at("first").get<std::string>());
        w.second = RepString::parse(j["witness"].at("second").get<std::string>());
        u.witness = std::move(w);
    }
    return u;
}

}  // namespace

std::string report_to_json(const PerfectionReport& r) {
    json j;
    j["system"] = r.system;
    j["domain"] = to_string(r.domain);
    j["perfect"] = r.perfect();
    j["complete"] = {{"positive", completeness_json(r.complete_pos)}};
    j["unambiguous"] = {{"positive", unambiguity_json(r.unambiguous_pos)}};
    if (r.complete_neg) j["complete"]["negative"] = completeness_json(*r.complete_neg);
    if (r.unambiguous_neg) j["unambiguous"]["negative"] = unambiguity_json(*r.unambiguous_neg);
    j["state_counts"] = {{"trimmed", r.rule_counts.trimmed}, {"complete", r.rule_counts.complete}};
    j["elapsed_ms"] = r.elapsed_ms;
    return j.dump(2);
}

PerfectionReport report_from_json(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw FormatError(std::string("bad report JSON: ") + e.what());
    }
    try {
        PerfectionReport r;
        r.system = j.at("system").get<std::string>();
        r.domain = j.at("domain").get<std::string>() == "integers" ? Domain::Integers : Domain::Naturals;
        r.complete_pos = completeness_from(j.at("complete").at("positive"));
        r.unambiguous_pos = unambiguity_from(j.at("unambiguous").at("positive"));
        if (j["complete"].contains("negative")) r.complete_neg = completeness_from(j["complete"]["negative"]);
        if (j["unambiguous"].contains("negative")) {
            r.unambiguous_neg = unambiguity_from(j["unambiguous"]["negative"]);
        }
        r.rule_counts.trimmed = j.at("state_counts").at("trimmed").get<std::size_t>();
        r.rule_counts.complete = j.at("state_counts").at("complete").get<std::size_t>();
        r.elapsed_ms = j.value("elapsed_ms", 0.0);
        return r;
    } catch (const json::exception& e) {
        throw FormatError(std::string("bad report JSON: ") + e.what());
    }
}

std::string report_to_text(const PerfectionReport& r) {
    std::ostringstream out;
    auto yes = [](bool b) { return b ? "yes" : "no"; };
    auto complete_line = [&](const char* label, const CompletenessResult& c) {
        out << label << yes(c.complete);
        if (!c.complete) {
            out << " (no representation for " << *c.missing << " = " << c.missing_zeckendorf.str(true);
            if (c.missing_positive && *c.missing_positive != *c.missing) {
                out << "; smallest positive value without one: " << *c.missing_positive;
            }
            out << ")";
        }
        out << '\n';
    };
    auto unamb_line = [&](const char* label, const UnambiguityResult& u) {
        out << label << yes(u.unambiguous);
        if (u.witness) {
            out << " (" << u.witness->value << " = " << u.witness->first.str(true) << " = "
                << u.witness->second.str(true) << ")";
        }
        out << '\n';
    };
    out << "system: " << r.system << " (" << to_string(r.domain) << ")\n";
    if (r.domain == Domain::Integers) {
        complete_line("complete+: ", r.complete_pos);
        complete_line("complete-: ", *r.complete_neg);
        unamb_line("unambiguous+: ", r.unambiguous_pos);
        unamb_line("unambiguous-: ", *r.unambiguous_neg);
    } else {
        complete_line("complete: ", r.complete_pos);
        unamb_line("unambiguous: ", r.unambiguous_pos);
    }
    out << "perfect: " << yes(r.perfect()) << '\n';
    out << "rule states: " << r.rule_counts.trimmed << " trimmed, " << r.rule_counts.complete << " complete\n";
    return out.str();
}

}  // namespace fibsys
