#include "fibsys/dict_order.hpp"

#include <algorithm>
#include <functional>

namespace fibsys {

namespace {

using CS = ComparatorState;

const Alphabet& pairs() {
    static const Alphabet a(std::vector<std::vector<Digit>>{{0, 1}, {0, 1}});
    return a;
}

const Alphabet& triples() {
    static const Alphabet a(std::vector<std::vector<Digit>>{{0, 1}, {0, 1}, {0, 1}});
    return a;
}

const Dfa& fcanon() { return normalizer(ConverterSpec{}, 0); }

Dfa lift(const Dfa& a, std::vector<std::size_t> at) { return cylinder(a, triples(), at); }

Dfa exists_middle(const Dfa& tri) {
    const std::size_t keep[] = {0, 2};
    return pad_normalize(determinize(project(tri, keep)));
}

Dfa first_track(const Dfa& rel) {
    const std::size_t keep[] = {0};
    return pad_normalize(determinize(project(rel, keep)));
}

CS pending_s(Digit d) { return d == 1 ? CS::SPending1 : CS::SPending0; }
CS pending_t(Digit d) { return d == 1 ? CS::TPending1 : CS::TPending0; }

CS step(CS q, Digit a, Digit b) {
    switch (q) {
        case CS::Start:
            if (a == b) return a == 0 ? CS::Start : CS::Tied;
            return a == 1 ? CS::SLeads : CS::TPending1;
        case CS::SLeads:
            return b == 1 ? pending_s(a) : CS::Less;
        case CS::SPending1:
            return b == 0 ? CS::Greater : pending_s(a);
        case CS::SPending0:
            return b == 1 ? CS::Less : pending_s(a);
        case CS::TPending1:
            return a == 0 ? CS::Less : pending_t(b);
        case CS::TPending0:
            return a == 1 ? CS::Greater : pending_t(b);
        case CS::Tied:
            if (a == b) return CS::Tied;
            return a > b ? CS::Greater : CS::Less;
        case CS::Greater: return CS::Greater;
        case CS::Less: return CS::Less;
    }
    return CS::Less;
}

bool accepting(CS q) {
    // t is exhausted while s still holds a digit, or s > t was decided
    return q == CS::SLeads || q == CS::SPending1 || q == CS::SPending0 || q == CS::Greater;
}

}  // namespace

std::string_view describe(ComparatorState q) {
    switch (q) {
        case CS::Start: return "no nonzero digit read yet";
        case CS::SLeads: return "|s| = |t| + 1, s has read its leading 1, t has not started";
        case CS::SPending1: return "|s| = |t| + 1, prefixes agree, next s digit to compare is 1";
        case CS::SPending0: return "|s| = |t| + 1, prefixes agree, next s digit to compare is 0";
        case CS::TPending1: return "|s| + 1 = |t|, prefixes agree, next t digit to compare is 1";
        case CS::TPending0: return "|s| + 1 = |t|, prefixes agree, next t digit to compare is 0";
        case CS::Tied: return "|s| = |t|, all digits equal so far";
        case CS::Greater: return "s > t";
        case CS::Less: return "s < t, or lengths differ by more than one";
    }
    return "?";
}

Dfa build_comparator() {
    const Alphabet& alpha = pairs();
    std::vector<State> delta(kComparatorStates * alpha.size());
    std::vector<bool> acc(kComparatorStates);
    for (State q = 0; q < kComparatorStates; ++q) {
        acc[q] = accepting(static_cast<CS>(q));
        for (SymbolId s = 0; s < alpha.size(); ++s) {
            delta[q * alpha.size() + s] =
                static_cast<State>(step(static_cast<CS>(q), alpha.digit(s, 0), alpha.digit(s, 1)));
        }
    }
    return Dfa(alpha, kComparatorStates, static_cast<State>(CS::Start), std::move(delta), std::move(acc));
}

std::strong_ordering dictionary_compare(const RepString& s, const RepString& t) {
    const RepString a0 = s.stripped(), b0 = t.stripped();
    const auto& a = a0.digits();
    const auto& b = b0.digits();
    return std::lexicographical_compare_three_way(a.begin(), a.end(), b.begin(), b.end());
}

bool comparator_accepts(const Dfa& comparator, const RepString& s, const RepString& t) {
    return comparator.accepts(make_word(comparator.alphabet(), {s.digits(), t.digits()}));
}

std::vector<std::vector<RepString>> brute_force_representations(std::int64_t max_n) {
    if (max_n < 0) throw Error("max_n must be non-negative");
    std::vector<std::vector<RepString>> out(static_cast<std::size_t>(max_n) + 1);
    out[0].emplace_back();
    std::vector<Digit> digits;
    // length m strings: first digit weighs F_{m+1}
    for (int m = 1; m + 1 <= 92 && fib(m + 1) <= max_n; ++m) {
        digits.assign(1, 1);
        std::function<void(std::int64_t)> walk = [&](std::int64_t value) {
            if (value > max_n) return;
            if (static_cast<int>(digits.size()) == m) {
                out[static_cast<std::size_t>(value)].emplace_back(digits);
                return;
            }
            const int weight = m + 1 - static_cast<int>(digits.size());
            for (Digit d : {0, 1}) {
                digits.push_back(d);
                walk(value + d * fib(weight));
                digits.pop_back();
            }
        };
        walk(fib(m + 1));
    }
    for (auto& reps : out) std::sort(reps.begin(), reps.end());
    return out;
}

LengthLemmaResult verify_length_lemma(std::int64_t max_n) {
    LengthLemmaResult r;
    const auto reps = brute_force_representations(max_n);
    for (std::size_t n = 0; n < reps.size(); ++n) {
        auto [lo, hi] = std::minmax_element(reps[n].begin(), reps[n].end(),
                                            [](const RepString& a, const RepString& b) { return a.size() < b.size(); });
        const std::size_t spread = hi->size() - lo->size();
        r.max_spread = std::max(r.max_spread, spread);
        if (spread > 1 && r.holds) {
            r.holds = false;
            r.counterexample = static_cast<std::int64_t>(n);
        }
    }
    return r;
}

Dfa build_max_dict_relation() {
    // (s, t, n): t is a representation of n that s does not dominate
    const Dfa above = combine(BoolOp::Or, lift(build_comparator(), {0, 1}), lift(equal_rel({0, 1}), {0, 1}));
    const Dfa beaten = combine(BoolOp::Diff, lift(fcanon(), {1, 2}), above);
    return combine(BoolOp::Diff, fcanon(), exists_middle(beaten));
}

SystemSpec build_max_dict_system() {
    return SystemSpec("max_dict", first_track(build_max_dict_relation()), ConverterSpec{});
}

std::string_view to_string(Fallback f) { return f == Fallback::Smallest ? "smallest" : "largest"; }

Dfa build_rank_t_relation(int t, Fallback fallback) {
    if (t < 1 || t > 3) throw Error("rank t must be between 1 and 3");
    const Dfa comparator = build_comparator();
    const Dfa& fc = fcanon();
    const Dfa fc_y = lift(fc, {1, 2});

    // above[k](x, n): at least k representations of n are larger than x
    std::vector<Dfa> above{universal_dfa(pairs())};
    for (int k = 1; k <= t; ++k) {
        Dfa chain = combine(BoolOp::And, fc_y, lift(comparator, {1, 0}));
        chain = combine(BoolOp::And, chain, lift(above.back(), {1, 2}));
        above.push_back(exists_middle(chain));
    }
    const Dfa ranked = combine(BoolOp::Diff, above[t - 1], above[t]);

    // at_least(x, n): n has at least t representations (x unconstrained)
    const Dfa witness = combine(BoolOp::And, fc_y, lift(above[t - 1], {1, 2}));
    const Dfa at_least = exists_middle(witness);

    Dfa extremal = fallback == Fallback::Largest
                       ? complement(above[1])
                       : complement(exists_middle(combine(BoolOp::And, fc_y, lift(comparator, {0, 1}))));
    const Dfa chosen = combine(BoolOp::Or, ranked, combine(BoolOp::Diff, extremal, at_least));
    return combine(BoolOp::And, fc, chosen);
}

SystemSpec build_rank_t_system(int t, Fallback fallback) {
    std::string name = "rank" + std::to_string(t);
    if (fallback == Fallback::Largest) name += "_largest";
    return SystemSpec(name, first_track(build_rank_t_relation(t, fallback)), ConverterSpec{});
}

}  // namespace fibsys
