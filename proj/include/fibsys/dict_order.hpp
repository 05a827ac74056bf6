#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "fibsys/automata.hpp"
#include "fibsys/fib.hpp"
#include "fibsys/perfection.hpp"

namespace fibsys {

/// States of the dictionary-order comparator on padded pairs (s, t). The
/// numbering is the state numbering of build_comparator().
enum class ComparatorState : State {
    Start,      // only leading zeros read so far
    SLeads,     // s started one symbol before t; its first digit (1) awaits t's first digit
    SPending1,  // |s| > |t|; the s digit to compare with t's next digit is 1
    SPending0,  // |s| > |t|; that digit is 0
    TPending1,  // |s| < |t|; the t digit to compare with s's next digit is 1
    TPending0,  // |s| < |t|; that digit is 0
    Tied,       // |s| = |t| and all digits agree so far
    Greater,    // s > t decided
    Less,       // s < t decided, or the input is outside the comparator's domain
};

inline constexpr std::size_t kComparatorStates = 9;

std::string_view describe(ComparatorState q);

/// Accepts padded binary pairs (s, t) with s > t in dictionary order after
/// stripping leading zeros. Only meaningful when the stripped lengths differ by
/// at most one; other pairs are rejected.
Dfa build_comparator();

/// Dictionary order of the stripped strings: first differing digit decides, a
/// proper prefix is smaller.
std::strong_ordering dictionary_compare(const RepString& s, const RepString& t);

/// Runs a comparator on (s, t) padded to a common length.
bool comparator_accepts(const Dfa& comparator, const RepString& s, const RepString& t);

/// All binary strings without leading zeros, indexed by value, for values <= max_n.
/// Each list is sorted ascending in dictionary order.
std::vector<std::vector<RepString>> brute_force_representations(std::int64_t max_n);

struct LengthLemmaResult {
    bool holds = true;
    std::optional<std::int64_t> counterexample;
    std::size_t max_spread = 0;
};

/// Checks that the lengths of all binary representations of each n <= max_n
/// differ by at most one.
LengthLemmaResult verify_length_lemma(std::int64_t max_n);

/// Relation (s, n): s is the dictionary-largest binary representation of the
/// value whose Zeckendorf representation is n.
Dfa build_max_dict_relation();
SystemSpec build_max_dict_system();

enum class Fallback { Smallest, Largest };

std::string_view to_string(Fallback f);

/// Relation (x, n): x is the t-th largest representation of n in dictionary
/// order if n has at least t representations, else the fallback-extremal one.
Dfa build_rank_t_relation(int t, Fallback fallback = Fallback::Smallest);
SystemSpec build_rank_t_system(int t, Fallback fallback = Fallback::Smallest);

}  // namespace fibsys
