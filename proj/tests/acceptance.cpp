// Acceptance run: one PASS/FAIL line per criterion.
//
// Exit status is 0 when every criterion passes, except those named with
// --expect-fail, which must fail (an unexpected pass is reported too).

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <iomanip>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "fibsys/catalog.hpp"
#include "fibsys/dict_order.hpp"
#include "fibsys/search.hpp"
#include "oracles.hpp"
#include "search_oracle.hpp"

using namespace fibsys;
using oracle::Digits;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Verdict {
    bool pass = true;
    std::vector<std::string> notes;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            notes.push_back("FAILED " + what);
        }
    }
    void note(const std::string& s) { notes.push_back(s); }
};

template <class... T>
std::string cat(const T&... parts) {
    std::ostringstream s;
    (s << ... << parts);
    return s.str();
}

// 1. perfection verdicts
Verdict verdicts() {
    Verdict v;
    const auto start = Clock::now();
    for (const char* name : {"zeckendorf", "lazy", "hajnal_alt", "hajnal_even", "hajnal_odd", "alpert", "bunder",
                             "one0sq", "az"}) {
        const CatalogEntry& e = catalog_entry(name);
        SystemSpec sys = e.build();  // fresh build, so the timing includes construction
        PerfectionReport r = check_perfect(sys);
        const bool ints = std::string(name) == "alpert" || std::string(name) == "bunder";
        v.require(sys.domain() == (ints ? Domain::Integers : Domain::Naturals), cat(name, " domain"));
        v.require(r.perfect(), cat(name, " perfect"));
        if (ints) v.require(r.complete_neg.has_value() && r.unambiguous_neg.has_value(), cat(name, " both signs"));
    }
    if (get_system("hajnal_odd").completeness_offsets() != std::vector<int>{0, 1}) v.require(false, "odd offsets");
    const double s = seconds_since(start);
    v.require(s < 30, "runtime under 30 s");
    v.note(cat("9 systems in ", std::fixed, std::setprecision(2), s, " s"));
    return v;
}

// 2. tables
Verdict tables() {
    Verdict v;
    const char* greedy[] = {"", "1", "10", "100", "101", "1000", "1001", "1010", "10000", "10001", "10010", "10100"};
    const char* lazy[] = {"", "1", "10", "11", "101", "110", "111", "1010", "1011", "1101", "1110", "1111"};
    const char* maxd[] = {"1", "10", "11", "101", "110", "111", "1010", "1100", "1101", "1110", "1111"};
    int mismatches = 0;
    for (int n = 0; n <= 11; ++n) {
        mismatches += find_representation(get_system("zeckendorf"), n).stripped().str() != greedy[n];
        mismatches += find_representation(get_system("lazy"), n).stripped().str() != lazy[n];
        if (n >= 1) mismatches += find_representation(get_system("max_dict"), n).stripped().str() != maxd[n - 1];
    }
    v.require(mismatches == 0, cat(mismatches, " table cells differ"));
    v.note("greedy and lazy rows 0..11, max-dict 1..11");
    return v;
}

// 3. odd system with e in {0, +1}
Verdict odd_plus() {
    Verdict v;
    const SystemSpec& plus = get_system("hajnal_odd_plus");
    v.require(plus.completeness_offsets() == std::vector<int>{0, -1}, "offsets {0,-1}");
    v.require(check_completeness(plus).complete, "complete");
    v.note("offsets {0,-1} complete");
    return v;
}

// 4. state counts within one of the published values
Verdict state_counts_check() {
    Verdict v;
    auto within = [&](const std::string& what, std::size_t measured, std::size_t published) {
        const bool ok = measured + 1 >= published && measured <= published + 1;
        v.require(ok, what);
        v.note(cat(what, " ", measured, "/", published));
    };
    for (const char* name : {"zeckendorf", "lazy", "hajnal_alt", "hajnal_even", "hajnal_odd", "alpert", "az"}) {
        within(name, state_counts(get_system(name).rule()).trimmed, *catalog_entry(name).expected_states);
    }
    within("signed converter", state_counts(compose_signed_normalizer(1)).trimmed, 24);
    within("max-dict relation", state_counts(build_max_dict_relation()).trimmed, 7);
    within("comparator", state_counts(build_comparator()).trimmed, 8);
    v.note(cat("(direct signed converter ", state_counts(normalizer({{-1, 0, 1}})).trimmed, ")"));
    return v;
}

// 5. every converter against direct evaluation; (a, b) are the values with last
// digit weighing F_1 and F_2
Verdict normalizers() {
    Verdict v;
    const auto start = Clock::now();
    std::size_t specs = 0, pairs = 0, bad = 0;
    for (const std::vector<Digit>& xd : {std::vector<Digit>{0, 1}, std::vector<Digit>{-1, 0, 1}}) {
        for (int sign : {1, -1}) {
            for (Anchor anchor : {Anchor::F2, Anchor::F1}) {
                for (int offset : {-1, 0, 1}) {
                    const ConverterSpec spec{xd, sign, anchor};
                    const Dfa conv = build_normalizer(spec, offset);
                    const Alphabet& al = conv.alphabet();
                    const std::size_t max_len = (xd.size() == 2 && sign == 1 && anchor == Anchor::F2) ? 10 : 8;
                    ++specs;
                    std::function<void(State, std::size_t, std::int64_t, std::int64_t, std::int64_t, std::int64_t, bool, bool)> rec =
                        [&](State q, std::size_t len, std::int64_t xa, std::int64_t xb, std::int64_t y, std::int64_t yup,
                            bool y11, bool prev1) {
                            ++pairs;
                            const std::int64_t x = anchor == Anchor::F2 ? xb : xa;
                            const bool expect = !y11 && x == sign * y + offset;
                            if (conv.accepting(q) != expect) ++bad;
                            if (len == max_len) return;
                            for (Digit a : xd) {
                                for (Digit b : {0, 1}) {
                                    const Digit sym[] = {a, b};
                                    rec(conv.next(q, al.index(sym)), len + 1, xb + a, xa + xb + a, yup + b,
                                        yup + y + 2 * b, y11 || (prev1 && b == 1), b == 1);
                                }
                            }
                        };
                    rec(conv.initial(), 0, 0, 0, 0, 0, false, false);
                }
            }
        }
    }
    const double s = seconds_since(start);
    v.require(bad == 0, cat(bad, " disagreements"));
    v.require(s < 300, "runtime under 5 min");
    v.note(cat(specs, " converters, ", pairs, " pairs in ", std::fixed, std::setprecision(2), s, " s"));
    return v;
}

// 6. length lemma
Verdict lemma() {
    Verdict v;
    const std::int64_t max_n = 5000;
    auto reps = oracle::representations({0, 1}, 20, [](const Digits&) { return true; });
    std::size_t spread = 0;
    for (std::int64_t n = 0; n <= max_n; ++n) {
        std::size_t lo = SIZE_MAX, hi = 0;
        for (const auto& d : reps[n]) {
            lo = std::min(lo, d.size());
            hi = std::max(hi, d.size());
        }
        spread = std::max(spread, hi - lo);
    }
    v.require(spread <= 1, cat("spread ", spread));
    LengthLemmaResult lib = verify_length_lemma(max_n);
    v.require(lib.holds && lib.max_spread == spread, "library check agrees");
    v.note(cat("n <= ", max_n, ", max spread ", spread));
    return v;
}

// 7. brute-force uniqueness; the last digit of F1-anchored and epsilon-term
// strings weighs F_1, which costs one extra digit
Verdict uniqueness() {
    Verdict v;
    const auto start = Clock::now();
    const std::int64_t bound = 2000;
    for (const auto& e : list_systems()) {
        const SystemSpec& sys = get_system(e.name);
        if (!check_perfect(sys).perfect()) continue;
        const bool f1 = sys.anchor() == Anchor::F1 || sys.has_epsilon_term();
        auto cap = [&](std::int64_t n) { return zeckendorf_length(n < 0 ? -n : n) + 1 + (f1 ? 1 : 0); };
        auto strings = oracle::system_strings(sys, cap(bound));
        const std::int64_t lo = sys.domain() == Domain::Integers ? -bound : 0;
        std::size_t missing = 0, multiple = 0;
        std::string first;
        for (std::int64_t n = lo; n <= bound; ++n) {
            std::vector<std::string> found;
            for (const auto& d : strings[n]) {
                if (d.size() <= cap(n)) found.push_back(format_digits(d, true));
            }
            if (found.size() == 1) continue;
            (found.empty() ? missing : multiple)++;
            if (first.empty()) {
                first = cat(n, " ->");
                for (const auto& f : found) first += " " + f;
            }
        }
        const bool ok = missing == 0 && multiple == 0;
        v.require(ok, cat(e.name, ": ", missing, " values without and ", multiple, " with several representations, first ",
                          first));
        if (ok) v.note(cat(e.name, " ok"));
    }
    const double s = seconds_since(start);
    v.require(s < 120, "runtime under 2 min");
    v.note(cat(std::fixed, std::setprecision(2), s, " s"));
    return v;
}

// 8. find_representation on random values
Verdict representations() {
    Verdict v;
    std::mt19937_64 rng(20240607);
    for (const auto& e : list_systems()) {
        const SystemSpec& sys = get_system(e.name);
        const bool ints = sys.domain() == Domain::Integers;
        std::uniform_int_distribution<std::int64_t> pick(ints ? -1000000 : 0, 1000000);
        // visited states per position: rule x converter x offsets; positions: len_Z + 2 <= 3 len_Z
        const std::size_t c = 3 * state_counts(sys.rule()).trimmed * state_counts(sys.converter_dfa(1)).trimmed *
                              sys.completeness_offsets().size();
        std::size_t wrong = 0, slow = 0;
        double worst = 0;
        for (int i = 0; i < 1000; ++i) {
            const std::int64_t n = pick(rng);
            RepresentationSearch r = find_representation_traced(sys, n);
            if (!representation_valid(sys, r.rep) || representation_value(sys, r.rep) != n) ++wrong;
            const std::size_t len = std::max<std::size_t>(1, zeckendorf_length(n < 0 ? -n : n));
            if (r.visited_states > c * len) ++slow;
            worst = std::max(worst, static_cast<double>(r.visited_states) / len);
        }
        v.require(wrong == 0, cat(e.name, ": ", wrong, " wrong"));
        v.require(slow == 0, cat(e.name, ": ", slow, " above c*len_Z"));
        v.note(cat(e.name, " c=", c, " max visited/len_Z=", std::fixed, std::setprecision(1), worst));
    }
    return v;
}

// 9. search anchors
Verdict search() {
    Verdict v;
    SearchConfig four;
    four.max_states = 4;
    SearchOutcome o4 = search_perfect(four);
    auto has = [](const SearchOutcome& o, const Dfa& lang) {
        return std::any_of(o.results.begin(), o.results.end(),
                           [&](const SearchResult& r) { return equivalent(r.dfa, lang).equivalent; });
    };
    v.require(o4.results.size() == 2, cat("exact k=4 gives ", o4.results.size(), " systems"));
    v.require(has(o4, get_system("zeckendorf").language()) && has(o4, get_system("lazy").language()),
              "zeckendorf and lazy at k=4");
    std::set<std::string> exact;
    for (const auto& r : o4.results) exact.insert(oracle::text_of(r.dfa));
    v.require(exact == oracle::naive_perfect(4), "exact k=4 equals the naive oracle");

    SearchConfig six;
    six.max_states = 6;
    six.pruning = Pruning::Monotone;
    six.workers = std::max(1U, std::thread::hardware_concurrency());
    const auto start = Clock::now();
    SearchOutcome o6 = search_perfect(six);
    v.require(has(o6, get_system("one0sq").language()), "monotone k=6 finds the one0sq language");
    v.require(has(o6, get_system("az").language()), "monotone k=6 finds the az language");
    v.note(cat("k=4: ", o4.results.size(), "; monotone k=6: ", o6.results.size(), " systems in ", std::fixed,
               std::setprecision(1), seconds_since(start), " s"));
    return v;
}

// 10. rank-t
Verdict ranks() {
    Verdict v;
    v.require(equivalent(build_rank_t_system(1).language(), build_max_dict_system().language()).equivalent,
              "rank 1 equals max-dict");
    for (int t : {2, 3}) v.require(check_perfect(build_rank_t_system(t)).perfect(), cat("rank ", t, " perfect"));
    const std::string eight = find_representation(build_rank_t_system(2), 8).stripped().str();
    v.require(eight == "1011", "rank-2 of 8 is " + eight);
    v.note("rank-2 of 8 = " + eight);
    return v;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance criteria"};
    std::vector<int> expect_fail;
    app.add_option("--expect-fail", expect_fail, "criteria known to fail (documented deviations)");
    CLI11_PARSE(app, argc, argv);

    const std::vector<std::pair<const char*, Verdict (*)()>> criteria{
        {"perfection verdicts", verdicts},      {"representation tables", tables},
        {"odd system, e in {0,+1}", odd_plus},    {"state counts", state_counts_check},
        {"normalizer oracle", normalizers},     {"length lemma", lemma},
        {"uniqueness cross-check", uniqueness}, {"find_representation", representations},
        {"search anchors", search},             {"rank-t systems", ranks}};

    int unexpected = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        const auto start = Clock::now();
        Verdict v;
        try {
            v = criteria[i].second();
        } catch (const std::exception& ex) {
            v.require(false, std::string("exception: ") + ex.what());
        }
        const bool expected_failure = std::count(expect_fail.begin(), expect_fail.end(), id) > 0;
        std::cout << "criterion " << std::setw(2) << id << ": " << (v.pass ? "PASS" : "FAIL") << "  "
                  << criteria[i].first << " (" << std::fixed << std::setprecision(2) << seconds_since(start) << " s)"
                  << (expected_failure ? "  [expected failure]" : "") << '\n';
        for (const auto& n : v.notes) std::cout << "    " << n << '\n';
        if (v.pass == expected_failure) ++unexpected;
    }
    std::cout << (unexpected ? "acceptance: unexpected outcomes: " : "acceptance: all outcomes as expected: ")
              << unexpected << '\n';
    return unexpected ? 1 : 0;
}
