#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "fibsys/automata.hpp"
#include "fibsys/regex.hpp"
#include "oracles.hpp"

using namespace fibsys;
using oracle::Digits;

namespace {

Dfa bin(const char* re) { return regex_dfa(re, Alphabet::binary()); }

Dfa random_dfa(std::mt19937& rng, const Alphabet& alpha, std::size_t states) {
    std::uniform_int_distribution<State> to(0, static_cast<State>(states - 1));
    std::bernoulli_distribution acc(0.4);
    std::vector<State> delta(states * alpha.size());
    for (auto& t : delta) t = to(rng);
    std::vector<bool> a(states);
    for (std::size_t q = 0; q < states; ++q) a[q] = acc(rng);
    return Dfa(alpha, states, 0, std::move(delta), std::move(a));
}

Nfa random_nfa(std::mt19937& rng, const Alphabet& alpha, std::size_t states) {
    Nfa n(alpha, states);
    std::uniform_int_distribution<State> to(0, static_cast<State>(states - 1));
    std::bernoulli_distribution coin(0.3);
    n.add_initial(0);
    for (State q = 0; q < states; ++q) {
        if (coin(rng)) n.set_accepting(q);
        for (SymbolId s = 0; s < alpha.size(); ++s) {
            for (State r = 0; r < states; ++r) {
                if (coin(rng)) n.add_transition(q, s, r);
            }
        }
        if (coin(rng)) n.add_epsilon(q, to(rng));
    }
    return n;
}

}  // namespace

TEST_CASE("alphabet numbering follows tuple order") {
    Alphabet a = Alphabet::parse("-1,0,1;0,1");
    CHECK(a.arity() == 2);
    CHECK(a.size() == 6);
    CHECK(a.symbol(0) == Symbol{-1, 0});
    CHECK(a.symbol(5) == Symbol{1, 1});
    CHECK(a.zero() == a.index(Symbol{0, 0}));
    for (SymbolId s = 0; s + 1 < a.size(); ++s) CHECK(a.symbol(s) < a.symbol(s + 1));
    CHECK_FALSE(a.find(Symbol{2, 0}).has_value());
    CHECK_THROWS_AS(a.index(Symbol{2, 0}), AlphabetError);
    CHECK_THROWS_AS(Alphabet({{1, 2}}), AlphabetError);
    CHECK(Alphabet::parse(a.to_string()) == a);
}

TEST_CASE("determinize") {
    const Alphabet b = Alphabet::binary();
    SUBCASE("deterministic input keeps its language") {
        Dfa d = minimize(determinize(parse_compile("0*1", b)));
        oracle::each_string_upto({0, 1}, 6, [&](const Digits& w) {
            const bool expect = !w.empty() && w.back() == 1 && std::count(w.begin(), w.end(), 1) == 1;
            CHECK(oracle::accepts(d, w) == expect);
        });
    }
    SUBCASE("(0|01) has three live states and accepts exactly 0 and 01") {
        Dfa d = determinize(parse_compile("(0|01)", b));
        CHECK(state_counts(d).trimmed == 3);
        auto words = enumerate_strings(d, 5);
        REQUIRE(words.size() == 2);
        CHECK(split_word(b, words[0])[0] == Digits{0});
        CHECK(split_word(b, words[1])[0] == Digits{0, 1});
    }
    SUBCASE("unreachable acceptance gives the empty language") {
        Nfa n(b, 2);
        n.add_initial(0);
        n.add_transition(0, 0, 0);
        n.set_accepting(1);
        CHECK(is_empty(determinize(n)).empty);
    }
    SUBCASE("random NFAs agree with direct simulation") {
        std::mt19937 rng(7);
        for (int trial = 0; trial < 40; ++trial) {
            Nfa n = random_nfa(rng, b, 4);
            Dfa d = determinize(n);
            Dfa m = minimize(d);
            oracle::each_string_upto({0, 1}, 8, [&](const Digits& w) {
                Word u = oracle::word(b, w);
                const bool expect = n.accepts(u);
                CHECK(d.accepts(u) == expect);
                CHECK(m.accepts(u) == expect);
            });
        }
    }
}

TEST_CASE("minimize") {
    SUBCASE("no-11 rule has 3 complete states") {
        auto c = state_counts(complement(bin(".*11.*")));
        CHECK(c.complete == 3);
        CHECK(c.trimmed == 2);
    }
    SUBCASE("lazy rule: 4 complete states") {
        auto c = state_counts(complement(bin("0*1(0|1)*00(0|1)*")));
        CHECK(c.complete == 4);
        CHECK(c.trimmed == 3);
    }
    SUBCASE("idempotent and canonical") {
        std::mt19937 rng(11);
        const Alphabet t = Alphabet::signed_ternary();
        for (int trial = 0; trial < 50; ++trial) {
            Dfa a = random_dfa(rng, t, 5);
            Dfa m = minimize(a);
            CHECK(minimize(m) == m);
            // a renamed copy minimizes to the same table
            std::vector<State> perm{0, 4, 3, 2, 1};
            std::vector<State> delta(a.table().size());
            std::vector<bool> acc(5);
            for (State q = 0; q < 5; ++q) {
                acc[perm[q]] = a.accepting(q);
                for (SymbolId s = 0; s < t.size(); ++s) delta[perm[q] * t.size() + s] = perm[a.next(q, s)];
            }
            CHECK(minimize(Dfa(t, 5, perm[0], delta, acc)) == m);
            oracle::each_string_upto({-1, 0, 1}, 5, [&](const Digits& w) {
                CHECK(oracle::accepts(m, w) == oracle::accepts(a, w));
            });
        }
    }
}

TEST_CASE("boolean combinations match memberships") {
    const Alphabet b = Alphabet::binary();
    SUBCASE("and of no-11 and no-00") {
        Dfa both = combine(BoolOp::And, complement(bin(".*11.*")), complement(bin(".*00.*")));
        CHECK(oracle::accepts(both, {1, 0, 1}));
        CHECK_FALSE(oracle::accepts(both, {1, 0, 0, 1}));
        CHECK_FALSE(oracle::accepts(both, {1, 1, 0, 0, 1, 1}));
    }
    SUBCASE("and(A, A) is A; diff(all, A) is the complement") {
        Dfa a = bin("(01|1)*0?");
        CHECK(combine(BoolOp::And, a, a) == minimize(a));
        Dfa c = combine(BoolOp::Diff, universal_dfa(b), a);
        oracle::each_string_upto({0, 1}, 8, [&](const Digits& w) { CHECK(oracle::accepts(c, w) != oracle::accepts(a, w)); });
        CHECK(complement(complement(a)) == minimize(a));
        CHECK(complement(empty_dfa(b)) == universal_dfa(b));
    }
    SUBCASE("exhaustive on random automata") {
        std::mt19937 rng(3);
        for (const Alphabet& alpha : {Alphabet::binary(), Alphabet::signed_ternary()}) {
            const Digits digits = alpha.coordinate(0);
            const std::size_t len = alpha.size() == 2 ? 8 : 6;
            for (int trial = 0; trial < 10; ++trial) {
                Dfa x = random_dfa(rng, alpha, 4), y = random_dfa(rng, alpha, 3);
                Dfa a = combine(BoolOp::And, x, y), o = combine(BoolOp::Or, x, y);
                Dfa d = combine(BoolOp::Diff, x, y), e = combine(BoolOp::Xor, x, y), c = complement(x);
                oracle::each_string_upto(digits, len, [&](const Digits& w) {
                    const bool p = oracle::accepts(x, w), q = oracle::accepts(y, w);
                    CHECK(oracle::accepts(a, w) == (p && q));
                    CHECK(oracle::accepts(o, w) == (p || q));
                    CHECK(oracle::accepts(d, w) == (p && !q));
                    CHECK(oracle::accepts(e, w) == (p != q));
                    CHECK(oracle::accepts(c, w) == !p);
                });
            }
        }
    }
    SUBCASE("alphabet mismatch is an error") {
        CHECK_THROWS_AS(combine(BoolOp::And, bin("0*"), universal_dfa(Alphabet::signed_ternary())), AlphabetError);
    }
}

TEST_CASE("projection and cylinders") {
    const Alphabet pairs = Alphabet::binary(2);
    const std::size_t first[] = {0}, second[] = {1};
    SUBCASE("diagonal projects to everything") {
        Dfa diag = regex_dfa("([0,0]|[1,1])*", pairs);
        CHECK(equivalent(determinize(project(diag, second)), universal_dfa(Alphabet::binary())).equivalent);
    }
    SUBCASE("empty projects to empty") {
        CHECK(is_empty(determinize(project(empty_dfa(pairs), first))).empty);
    }
    SUBCASE("cylinder then project is the identity") {
        for (const char* re : {"0*1(0|1)*00(0|1)*", "(0*|0*10*)", "1*"}) {
            Dfa a = bin(re);
            for (std::size_t at : {0, 1}) {
                Dfa lifted = cylinder(a, 2, at, {{0, 1}, {0, 1}});
                const std::size_t keep[] = {at};
                CHECK(minimize(determinize(project(lifted, keep))) == minimize(a));
            }
        }
    }
    SUBCASE("cylinder reads the right coordinate") {
        Dfa a = bin("1(0|1)*");
        Dfa lifted = cylinder(a, 2, 1, {{-1, 0, 1}, {0, 1}});
        CHECK(lifted.accepts(make_word(lifted.alphabet(), {{-1, 1}, {1, 1}})));
        CHECK_FALSE(lifted.accepts(make_word(lifted.alphabet(), {{1, 0}, {0, 1}})));
        CHECK(minimize(cylinder(universal_dfa(Alphabet::binary()), 3, 2, {{0, 1}, {0, 1}, {0, 1}})) ==
              universal_dfa(Alphabet::binary(3)));
    }
    SUBCASE("permuted positions swap tracks") {
        Dfa lt = regex_dfa("[0,0]*[0,1].*", pairs);  // first difference has x=0, y=1
        const std::size_t swap[] = {1, 0};
        Dfa gt = cylinder(lt, pairs, swap);
        CHECK(gt.accepts(make_word(pairs, {{1, 0}, {0, 1}})));
        CHECK_FALSE(gt.accepts(make_word(pairs, {{0, 1}, {1, 0}})));
    }
    SUBCASE("bad coordinates throw") {
        const std::size_t bad[] = {3};
        CHECK_THROWS_AS(cylinder(bin("0*"), pairs, bad), AlphabetError);
    }
}

TEST_CASE("pad normalization") {
    const Alphabet b = Alphabet::binary();
    SUBCASE("{100} becomes 0*100") {
        Dfa p = pad_normalize(bin("100"));
        CHECK(minimize(p) == bin("0*100"));
    }
    SUBCASE("{eps} becomes 0*") { CHECK(pad_normalize(bin("()")) == bin("0*")); }
    SUBCASE("idempotent and closed under leading zeros") {
        std::mt19937 rng(5);
        for (int trial = 0; trial < 30; ++trial) {
            Dfa p = pad_normalize(random_dfa(rng, b, 4));
            CHECK(pad_normalize(p) == p);
            oracle::each_string_upto({0, 1}, 8, [&](const Digits& w) {
                Digits z = w;
                z.insert(z.begin(), 0);
                CHECK(oracle::accepts(p, w) == oracle::accepts(p, z));
            });
        }
    }
}

TEST_CASE("emptiness and equivalence") {
    SUBCASE("no-11 is nonempty with witness eps") {
        auto e = is_empty(complement(bin(".*11.*")));
        CHECK_FALSE(e.empty);
        CHECK(e.witness->empty());
    }
    SUBCASE("contradiction is empty") {
        CHECK(is_empty(combine(BoolOp::And, complement(bin(".*11.*")), bin(".*11.*"))).empty);
    }
    SUBCASE("witness is shortest then least") {
        auto e = is_empty(bin("(1|0)(1|0)1+"));
        REQUIRE(e.witness);
        CHECK(split_word(Alphabet::binary(), *e.witness)[0] == Digits{0, 0, 1});
    }
    SUBCASE("brown's regex equals the lazy rule") {
        CHECK(equivalent(complement(bin("0*1(0|1)*00(0|1)*")), bin("0*(()|1 1*(01+)*(()|0))")).equivalent);
    }
    SUBCASE("no-11 vs no-00 differ at 11") {
        auto r = equivalent(complement(bin(".*11.*")), complement(bin(".*00.*")));
        CHECK_FALSE(r.equivalent);
        REQUIRE(r.counterexample);
        CHECK(split_word(Alphabet::binary(), *r.counterexample)[0] == Digits{1, 1});
    }
    SUBCASE("counterexamples separate random pairs") {
        std::mt19937 rng(9);
        for (int trial = 0; trial < 40; ++trial) {
            Dfa a = random_dfa(rng, Alphabet::binary(), 3), b = random_dfa(rng, Alphabet::binary(), 3);
            auto r = equivalent(a, b);
            if (r.equivalent) continue;
            Dfa pa = pad_normalize(a), pb = pad_normalize(b);
            CHECK(pa.accepts(*r.counterexample) != pb.accepts(*r.counterexample));
        }
    }
}

TEST_CASE("enumerate strings") {
    auto words = enumerate_strings(complement(bin(".*11.*")), 3);
    std::vector<Digits> got;
    for (const auto& w : words) got.push_back(split_word(Alphabet::binary(), w)[0]);
    std::vector<Digits> want{{}, {0}, {1}, {0, 0}, {0, 1}, {1, 0}, {0, 0, 0}, {0, 0, 1}, {0, 1, 0}, {1, 0, 0}, {1, 0, 1}};
    CHECK(got == want);
    CHECK(enumerate_strings(empty_dfa(Alphabet::binary()), 4).empty());

    // lazy, deduplicated by leading zeros and sorted by value: the lazy row
    std::map<std::int64_t, Digits> lazy;
    for (const auto& w : enumerate_strings(complement(bin("0*1(0|1)*00(0|1)*")), 4)) {
        Digits s = oracle::strip(split_word(Alphabet::binary(), w)[0]);
        lazy[oracle::value(s)] = s;
    }
    const std::vector<Digits> row{{}, {1}, {1, 0}, {1, 1}, {1, 0, 1}, {1, 1, 0}, {1, 1, 1},
                                  {1, 0, 1, 0}, {1, 0, 1, 1}, {1, 1, 0, 1}, {1, 1, 1, 0}, {1, 1, 1, 1}};
    for (std::int64_t n = 0; n <= 11; ++n) CHECK(lazy.at(n) == row[n]);
}

TEST_CASE("relabel") {
    const Alphabet t = Alphabet::signed_ternary();
    const SymbolId neg[] = {2, 1, 0};
    const SymbolId id[] = {0, 1, 2};
    Dfa alpert = complement(combine(BoolOp::Or, regex_dfa(".*([-1][-1]|[-1]0[-1]|[-1]00[-1]|11|101|1001).*", t),
                                    regex_dfa(".*([-1]1|1[-1]|10[-1]|[-1]01).*", t)));
    CHECK(relabel(alpert, id) == alpert);
    CHECK(equivalent(relabel(alpert, neg), alpert).equivalent);
    Dfa skew = regex_dfa("1[-1]*", t);
    CHECK_FALSE(equivalent(relabel(skew, neg), skew).equivalent);
    CHECK(relabel(relabel(skew, neg), neg) == skew);
    const SymbolId bad[] = {0, 0, 1};
    CHECK_THROWS(relabel(skew, bad));
}

TEST_CASE("text format round trip and errors") {
    Dfa a = regex_dfa("([-1,1]|[1,0]|[0,0])*", Alphabet::parse("-1,0,1;0,1"));
    std::stringstream s;
    write_text(s, a);
    CHECK(read_text(s) == a);

    std::istringstream missing("alphabet: 0,1\ninitial: 0\naccepting: 0\n0 [0] -> 0\n");
    CHECK_THROWS_AS(read_text(missing), FormatError);
    std::istringstream garbage("alphabet: 0,1\ninitial: x\n");
    CHECK_THROWS_AS(read_text(garbage), FormatError);
    std::istringstream comments("# no-11\nalphabet: 0,1\ninitial: 0\naccepting: 0 1\n0 [0] -> 0\n0 [1] -> 1\n"
                                "1 [0] -> 0\n1 [1] -> 2\n2 [0] -> 2\n2 [1] -> 2\n");
    CHECK(minimize(read_text(comments)) == complement(bin(".*11.*")));
}

TEST_CASE("dot export") {
    std::ostringstream s;
    write_dot(s, complement(bin(".*11.*")), "Z");
    const std::string dot = s.str();
    CHECK(dot.find("digraph \"Z\"") != std::string::npos);
    CHECK(dot.find("doublecircle") != std::string::npos);
    CHECK(dot.find("2 ->") == std::string::npos);  // dead state hidden
}

TEST_CASE("formatting") {
    const Digits d{1, 0, -1, 1};
    CHECK(format_digits(d) == "10-11");
    CHECK(format_digits(d, true) == "10ī1");
    CHECK(format_digits(Digits{1, 0, 1}) == "101");
    Alphabet p = Alphabet::binary(2);
    CHECK(format_symbol(p, p.index(Symbol{1, 0})) == "[1,0]");
}
