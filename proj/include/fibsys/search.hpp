#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fibsys/automata.hpp"
#include "fibsys/perfection.hpp"

namespace fibsys {

/// Initially connected complete DFA over {0,1} without accepting states:
/// table[2q + d] is the successor of q on d, states in breadth-first order.
struct Shape {
    std::uint64_t index = 0;  // position in the global enumeration order
    std::size_t states = 0;
    std::vector<State> table;
};

/// Visits every shape with 1..max_states states exactly once, ordered by state
/// count, then lexicographically by table. Stops early when `visit` returns false.
void for_each_shape(std::size_t max_states, const std::function<bool(const Shape&)>& visit);

/// Number of shapes with exactly n states.
std::uint64_t count_shapes(std::size_t n);

/// Shape plus accepting set (bit q of `accepting` marks state q).
Dfa shape_dfa(const Shape& shape, std::uint64_t accepting);

/// Breadth-first renumbering of the reachable part, symbols in order.
Dfa canonical_form(const Dfa& a);

/// All initially connected complete binary DFAs with at most k states, up to
/// isomorphism, with every accepting set for each shape.
std::vector<Dfa> enumerate_canonical(std::size_t k);

enum class Pruning { Exact, Monotone };
enum class Dedup { ByLanguage, ByPadClosedLanguage };

std::string to_string(Pruning p);
std::string to_string(Dedup d);

struct SearchConfig {
    std::size_t max_states = 4;
    Pruning pruning = Pruning::Exact;
    Dedup dedup = Dedup::ByPadClosedLanguage;
    std::optional<double> time_budget_s;
    unsigned workers = 1;
    std::string log_path;        // JSONL; empty disables logging
    bool resume = false;         // continue from the last checkpoint in log_path
    std::size_t sample_count = 12;
    std::size_t prefilter_length = 14;  // strings up to this length are screened before exact checks
};

struct SearchResult {
    std::uint64_t shape_index = 0;
    std::uint64_t accepting = 0;
    Dfa dfa = empty_dfa(Alphabet::binary());  // minimal automaton of the pad-closed language, canonical numbering
    PerfectionReport report;
    std::vector<std::pair<std::int64_t, RepString>> samples;
};

struct SearchOutcome {
    std::vector<SearchResult> results;
    bool exhaustive = true;       // false when the monotone heuristic was used
    bool budget_exhausted = false;
    std::uint64_t shapes_total = 0;
    std::uint64_t shapes_done = 0;
    std::uint64_t candidates = 0;  // (shape, accepting set) pairs passing the prefilter
    double elapsed_ms = 0;
};

SearchOutcome search_perfect(const SearchConfig& cfg);

std::string result_to_json(const SearchResult& r);
SearchResult result_from_json(const std::string& line);

}  // namespace fibsys
