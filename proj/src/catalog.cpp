#include "fibsys/catalog.hpp"

#include <map>
#include <memory>
#include <mutex>

#include "fibsys/dict_order.hpp"
#include "fibsys/regex.hpp"

namespace fibsys {

namespace {

const std::vector<Digit> kSigned{-1, 0, 1};

Dfa bin(const char* re) { return regex_dfa(re, Alphabet::binary()); }
Dfa tern(const char* re) { return regex_dfa(re, Alphabet::signed_ternary()); }

Dfa all_of(std::initializer_list<Dfa> include, std::initializer_list<Dfa> exclude) {
    Dfa out = universal_dfa(include.size() ? include.begin()->alphabet() : exclude.begin()->alphabet());
    for (const auto& a : include) out = combine(BoolOp::And, out, a);
    for (const auto& a : exclude) out = combine(BoolOp::Diff, out, a);
    return out;
}

Dfa hajnal_odd_core() { return all_of({tern("(0*|0*10([-1]0|10|00)*)")}, {tern(".*[-1]0*[-1].*")}); }

// core followed by one digit e in {0, -1}
Dfa with_final_digit(const Dfa& core) {
    const Alphabet& t = core.alphabet();
    Nfa cat(t, core.num_states());
    cat.add_initial(core.initial());
    for (State q = 0; q < core.num_states(); ++q) {
        for (SymbolId s = 0; s < t.size(); ++s) cat.add_transition(q, s, core.next(q, s));
    }
    const State end = cat.add_state();
    cat.set_accepting(end);
    for (State q = 0; q < core.num_states(); ++q) {
        if (!core.accepting(q)) continue;
        for (Digit e : {0, -1}) cat.add_transition(q, t.index(std::span<const Digit>(&e, 1)), end);
    }
    return minimize(determinize(cat));
}

std::vector<Fixture> rows(std::int64_t first, std::initializer_list<const char*> reps) {
    std::vector<Fixture> out;
    for (const char* r : reps) out.push_back({first++, r});
    return out;
}

std::vector<CatalogEntry> make_catalog() {
    std::vector<CatalogEntry> c;
    c.push_back({"zeckendorf", "greedy representation: no block 11", "~(.*11.*)", 3, true, true,
                 rows(0, {"", "1", "10", "100", "101", "1000", "1001", "1010", "10000", "10001", "10010", "10100"}),
                 "", [] { return SystemSpec("zeckendorf", complement(bin(".*11.*")), ConverterSpec{}); }});
    c.push_back({"lazy", "lazy representation: no block 00 after the leading 1", "~(0*1(0|1)*00(0|1)*)", 4, true,
                 true, rows(0, {"", "1", "10", "11", "101", "110", "111", "1010", "1011", "1101", "1110", "1111"}),
                 "", [] { return SystemSpec("lazy", complement(bin("0*1(0|1)*00(0|1)*")), ConverterSpec{}); }});
    c.push_back({"hajnal_alt",
                 "signed digits: leading term positive, adjacent nonzero terms alternate in sign with a 0 between, "
                 "at least two 0s between the last two nonzero terms",
                 "(0*|0*1.*) & (0*|0*10*|.*(100+[-1]|[-1]00+1)0*) & ~(.*(10*1|[-1]0*[-1]).*) & ~(.*(1[-1]|[-1]1).*)",
                 12, true, true, {{9, "10-1001"}}, "", [] {
                     return SystemSpec("hajnal_alt",
                                       all_of({tern("(0*|0*1.*)"), tern("(0*|0*10*|.*(100+[-1]|[-1]00+1)0*)")},
                                              {tern(".*(10*1|[-1]0*[-1]).*"), tern(".*(1[-1]|[-1]1).*")}),
                                       ConverterSpec{kSigned});
                 }});
    c.push_back({"hajnal_even", "signed digits at even weights only, leading term positive, no two adjacent nonzero terms both -1",
                 "(0*|0*1(0[-1]|01|00)*) & ~(.*[-1]0*[-1].*)", 5, true, true, {{14, "10-10001"}}, "", [] {
                     return SystemSpec("hajnal_even",
                                       all_of({tern("(0*|0*1(0[-1]|01|00)*)")}, {tern(".*[-1]0*[-1].*")}),
                                       ConverterSpec{kSigned});
                 }});
    c.push_back({"hajnal_odd",
                 "signed digits on odd positions plus a final term e in {0,-1}; the rule describes the core",
                 "(0*|0*10([-1]0|10|00)*) & ~(.*[-1]0*[-1].*), e in {0,-1}", 5, true, true, {{14, "100010-1"}},
                 "", [] {
                     return SystemSpec("hajnal_odd", hajnal_odd_core(), ConverterSpec{kSigned}, Domain::Naturals,
                                       {0, 1});
                 }});
    c.push_back({"alpert", "far-difference representation over the integers",
                 "~(.*([-1][-1]|[-1]0[-1]|[-1]00[-1]|11|101|1001).*) & ~(.*([-1]1|1[-1]|10[-1]|[-1]01).*)", 7, true,
                 true, {{-38, "-1000-1001"}}, "", [] {
                     return SystemSpec(
                         "alpert",
                         all_of({}, {tern(".*([-1][-1]|[-1]0[-1]|[-1]00[-1]|11|101|1001).*"),
                                     tern(".*([-1]1|1[-1]|10[-1]|[-1]01).*")}),
                         ConverterSpec{kSigned}, Domain::Integers);
                 }});
    c.push_back({"bunder",
                 "negaFibonacci: last digit weighs F_1, positive digits at odd weights, negative at even, no two "
                 "adjacent nonzero digits",
                 "~(.*1.(..)*) & ~(.*[-1](..)*) & ~(.*((1[-1])|([-1]1)).*)", std::nullopt, true, true,
                 {{1, "1"}, {2, "100"}, {4, "100-10"}, {-1, "-10"}, {-2, "-1001"}}, "", [] {
                     return SystemSpec("bunder",
                                       all_of({}, {tern(".*1.(..)*"), tern(".*[-1](..)*"),
                                                   tern(".*((1[-1])|([-1]1)).*")}),
                                       ConverterSpec{kSigned, 1, Anchor::F1}, Domain::Integers);
                 }});
    c.push_back({"one0sq", "lazy-like: a block 00 is allowed only right after the leading 1",
                 "0*(()|1|10(()|0|1)1*(01+)*(()|0))", std::nullopt, true, true, {}, "", [] {
                     return SystemSpec("one0sq", bin("0*(()|1|10(()|0|1)1*(01+)*(()|0))"), ConverterSpec{});
                 }});
    c.push_back({"az",
                 "reconstruction: block 11 only at the end, strings end in 1, 11 or an odd run of 0s",
                 "0*(()|1(00*1)*(()|1|0(00)*))", 6, true, true, {}, "", [] {
                     return SystemSpec("az", bin("0*(()|1(00*1)*(()|1|0(00)*))"), ConverterSpec{});
                 }});
    c.push_back({"max_dict", "largest representation in dictionary order",
                 "fcanon(s,n) & At fcanon(t,n) => (s > t | s = t)", std::nullopt, true, true,
                 rows(1, {"1", "10", "11", "101", "110", "111", "1010", "1100", "1101", "1110", "1111"}), "",
                 [] { return build_max_dict_system(); }});

    c.push_back({"hajnal_odd_eps", "hajnal_odd written out in full: core then e, last digit weighs F_1",
                 "core (0|[-1])", std::nullopt, true, false, {{14, "100010-1"}}, "hajnal_odd",
                 [] { return SystemSpec("hajnal_odd_eps", with_final_digit(hajnal_odd_core()), ConverterSpec{kSigned, 1, Anchor::F1}); }});
    c.push_back({"hajnal_odd_strict", "hajnal_odd_eps with the -1 spacing condition also applied to e",
                 "core (0|[-1]) & ~(.*[-1]0*[-1])", std::nullopt, true, true, {{14, "100010-1"}}, "hajnal_odd", [] {
                     return SystemSpec("hajnal_odd_strict",
                                       combine(BoolOp::Diff, with_final_digit(hajnal_odd_core()), tern(".*[-1]0*[-1]")),
                                       ConverterSpec{kSigned, 1, Anchor::F1});
                 }});
    c.push_back({"hajnal_odd_plus", "hajnal_odd core with final term e in {0,+1}", "hajnal_odd core, e in {0,+1}",
                 std::nullopt, true, std::nullopt, {}, "hajnal_odd", [] {
                     return SystemSpec("hajnal_odd_plus", hajnal_odd_core(), ConverterSpec{kSigned},
                                       Domain::Naturals, {0, -1});
                 }});
    return c;
}

}  // namespace

const std::vector<CatalogEntry>& list_systems() {
    static const std::vector<CatalogEntry> catalog = make_catalog();
    return catalog;
}

const CatalogEntry& catalog_entry(const std::string& name) {
    for (const auto& e : list_systems()) {
        if (e.name == name) return e;
    }
    throw UnknownSystemError("unknown system '" + name + "'");
}

const SystemSpec& get_system(const std::string& name) {
    static std::mutex mutex;
    static std::map<std::string, std::unique_ptr<SystemSpec>> built;
    const CatalogEntry& entry = catalog_entry(name);
    std::lock_guard lock(mutex);
    auto& slot = built[name];
    if (!slot) slot = std::make_unique<SystemSpec>(entry.build());
    return *slot;
}

}  // namespace fibsys
