#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fibsys/fib.hpp"
#include "oracles.hpp"

using namespace fibsys;
using oracle::Digits;

namespace {

const ConverterSpec kBinary{{0, 1}, 1, Anchor::F2};
const ConverterSpec kSigned{{-1, 0, 1}, 1, Anchor::F2};

std::vector<ConverterSpec> catalog_specs() {
    std::vector<ConverterSpec> out;
    for (int sign : {1, -1}) {
        out.push_back({{0, 1}, sign, Anchor::F2});
        out.push_back({{-1, 0, 1}, sign, Anchor::F2});
        out.push_back({{-1, 0, 1}, sign, Anchor::F1});
    }
    return out;
}

}  // namespace

TEST_CASE("fibonacci numbers") {
    CHECK(fib(0) == 0);
    CHECK(fib(1) == 1);
    CHECK(fib(2) == 1);
    CHECK(fib(3) == 2);
    CHECK(fib(10) == 55);
    CHECK(fib(92) == 7540113804746346429LL);
    for (int n = 0; n <= 92; ++n) CHECK(fib(n) == oracle::F(n));
    CHECK_THROWS(fib(93));
    CHECK_THROWS(fib(-1));
}

TEST_CASE("evaluation") {
    CHECK(eval_rep(RepString::parse("2101")) == 14);
    CHECK(eval_rep(RepString{}) == 0);
    CHECK(eval_rep(RepString::parse("ε")) == 0);
    CHECK(eval_rep(RepString::parse("100010ī"), Anchor::F1) == 14);
    CHECK(eval_rep(RepString::parse("100010-1"), Anchor::F1) == 14);
    CHECK(eval_rep(RepString::parse("1,0,-1,0,0,0,1")) == 14);
    CHECK(eval_rep(RepString::parse("10ī001")) == 9);
    CHECK(eval_rep(RepString::parse("1")) == 1);
    CHECK(eval_rep(RepString::parse("1"), Anchor::F1) == 1);
    CHECK(eval_rep(RepString::parse("10"), Anchor::F1) == 1);
    CHECK_THROWS(RepString::parse("1x0"));
    oracle::each_string_upto({-1, 0, 1}, 7, [](const Digits& d) {
        CHECK(eval_rep(RepString(d)) == oracle::value(d));
        CHECK(eval_rep(RepString(d), Anchor::F1) == oracle::value(d, 1));
    });
}

TEST_CASE("rep strings") {
    RepString r = RepString::parse("0010ī1");
    CHECK(r.stripped() == RepString::parse("10ī1"));
    CHECK(r.str(true) == "0010ī1");
    CHECK(r.str() == "0010-11");
    CHECK(RepString{}.str(true) == "ε");
    CHECK(RepString::parse(r.str()) == r);
    CHECK(RepString::parse("10") < RepString::parse("11"));
}

TEST_CASE("zeckendorf encoding") {
    CHECK(zeckendorf_encode(11).str() == "10100");
    CHECK(zeckendorf_encode(0).empty());
    CHECK(zeckendorf_encode(12).str() == "10101");
    CHECK(zeckendorf_length(12) == 5);
    CHECK(zeckendorf_length(0) == 0);
    for (std::int64_t n = 0; n <= 100000; ++n) {
        RepString z = zeckendorf_encode(n);
        const Digits& d = z.digits();
        if (oracle::has_11(d) || eval_rep(z) != n || (!d.empty() && d.front() != 1)) {
            FAIL("bad encoding of " << n << ": " << z.str());
        }
    }
    CHECK_THROWS(zeckendorf_encode(-1));
}

TEST_CASE("binary normalizer examples") {
    const Dfa& conv = normalizer(kBinary);
    CHECK(oracle::accepts_pair(conv, {0, 1, 1, 1, 0}, {1, 0, 0, 1, 0}));
    CHECK(oracle::accepts_pair(conv, {0, 1, 1}, {1, 0, 0}));
    CHECK_FALSE(oracle::accepts_pair(conv, {1, 0}, {0, 1}));
    CHECK_FALSE(oracle::accepts_pair(conv, {1, 1, 0}, {1, 1, 0}));  // y has 11
    CHECK(oracle::accepts_pair(conv, {}, {}));
    CHECK(conv.alphabet() == converter_alphabet({0, 1}));
}

TEST_CASE("normalizers agree with direct evaluation") {
    CHECK_FALSE(oracle_pair_check(kBinary, 0, 10).has_value());
    CHECK_FALSE(oracle_pair_check(kSigned, 0, 8).has_value());
    for (const auto& spec : catalog_specs()) {
        for (int c : {-1, 0, 1}) {
            auto bad = oracle_pair_check(spec, c, spec.x_digits.size() == 2 ? 8 : 7);
            CHECK_MESSAGE(!bad.has_value(), "sign " << spec.sign << " offset " << c << ": " << bad->x.str() << " / "
                                                    << bad->y.str());
        }
    }
}

TEST_CASE("independent pair oracle for the binary and signed normalizers") {
    for (const auto& spec : {kBinary, kSigned, ConverterSpec{{-1, 0, 1}, -1, Anchor::F1}}) {
        for (int c : {-1, 0, 1}) {
            const Dfa& conv = normalizer(spec, c);
            const std::size_t len = spec.x_digits.size() == 2 ? 7 : 5;
            oracle::each_string(spec.x_digits, len, [&](const Digits& x) {
                oracle::each_string({0, 1}, len, [&](const Digits& y) {
                    const int anchor = spec.anchor == Anchor::F2 ? 2 : 1;
                    const bool expect =
                        !oracle::has_11(y) && oracle::value(x, anchor) == spec.sign * oracle::value(y) + c;
                    CHECK(oracle::accepts_pair(conv, x, y) == expect);
                });
            });
        }
    }
}

TEST_CASE("bound fixpoint") {
    for (const auto& spec : catalog_specs()) {
        for (int c : {-1, 0, 1}) {
            CHECK(build_normalizer(spec, c, kDefaultNormalizerBound) ==
                  build_normalizer(spec, c, 2 * kDefaultNormalizerBound));
        }
    }
    CHECK(build_normalizer(kBinary, 0) == normalizer(kBinary));
    CHECK_THROWS_AS(build_normalizer(kBinary, 3), Error);
}

TEST_CASE("signed normalizer: direct and composed routes") {
    Dfa direct = normalizer(kSigned);
    auto d = state_counts(direct);
    CHECK(d.trimmed == 19);
    CHECK(d.complete == 20);
    for (int sign : {1, -1}) {
        Dfa composed = compose_signed_normalizer(sign);
        if (sign == 1) {
            auto c = state_counts(composed);
            CHECK(c.trimmed >= 23);
            CHECK(c.trimmed <= 25);
        }
        CHECK(pad_normalize(composed) == pad_normalize(normalizer({{-1, 0, 1}, sign, Anchor::F2})));
    }
}

TEST_CASE("shifter and F1 coherence") {
    const std::vector<Digit> digits{-1, 0, 1};
    Dfa shift = build_shifter(digits);
    oracle::each_string_upto(digits, 6, [&](const Digits& x) {
        Digits t(x.begin(), x.end() - (x.empty() ? 0 : 1));
        CHECK(oracle::accepts_pair(shift, x, t));
        if (!x.empty()) {
            Digits wrong = t;
            wrong.insert(wrong.begin(), 1);  // differs from the padded shift in its top digit
            CHECK_FALSE(oracle::accepts_pair(shift, x, wrong));
        }
    });
    oracle::each_string_upto(digits, 10, [&](const Digits& x) {
        if (x.empty()) return;
        Digits t(x.begin(), x.end() - 1);
        CHECK(eval_rep(RepString(x), Anchor::F1) == eval_rep(RepString(t)) + x.back());
    });
}

TEST_CASE("corrupted automaton is caught") {
    const Dfa& good = normalizer(kBinary);
    for (State q = 0; q < good.num_states(); ++q) {
        std::vector<bool> acc = good.accepting_states();
        acc[q] = !acc[q];
        Dfa bad(good.alphabet(), good.num_states(), good.initial(), good.table(), acc);
        auto hit = oracle_pair_check(bad, kBinary, 0, 8);
        // flipping a dead state's bit makes it accept some pair too
        REQUIRE(hit.has_value());
        CHECK(hit->automaton_accepts ==
              bad.accepts(make_word(good.alphabet(), {hit->x.digits(), hit->y.digits()})));
    }
}
