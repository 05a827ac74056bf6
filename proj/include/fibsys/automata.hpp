#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fibsys {

using Digit = int;
using State = std::uint32_t;
using SymbolId = std::uint32_t;

/// A digit tuple, one digit per coordinate (track).
using Symbol = std::vector<Digit>;

/// A string over an alphabet, most significant symbol first.
using Word = std::vector<SymbolId>;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class AlphabetError : public Error {
public:
    using Error::Error;
};

class FormatError : public Error {
public:
    using Error::Error;
};

/// Product of per-coordinate digit sets.
///
/// Symbols are numbered in lexicographic order of their digit tuples
/// (coordinate 0 most significant, digits ascending), so comparing symbol ids
/// compares tuples. Every coordinate contains 0; the all-zeros tuple is the
/// padding symbol.
class Alphabet {
public:
    Alphabet() = default;
    explicit Alphabet(std::vector<std::vector<Digit>> coordinates);

    static Alphabet binary(std::size_t arity = 1);
    static Alphabet signed_ternary(std::size_t arity = 1);

    /// Parses "0,1" or "-1,0,1;0,1" (coordinates separated by ';').
    static Alphabet parse(std::string_view text);

    std::size_t arity() const { return coords_.size(); }
    std::size_t size() const { return size_; }
    const std::vector<Digit>& coordinate(std::size_t i) const { return coords_.at(i); }
    const std::vector<std::vector<Digit>>& coordinates() const { return coords_; }

    Symbol symbol(SymbolId id) const;
    Digit digit(SymbolId id, std::size_t coord) const;
    std::optional<SymbolId> find(std::span<const Digit> tuple) const;
    SymbolId index(std::span<const Digit> tuple) const;
    SymbolId zero() const { return zero_; }

    /// Alphabet over the given coordinates only, in the given order.
    Alphabet restrict(std::span<const std::size_t> keep) const;

    std::string to_string() const;

    friend bool operator==(const Alphabet& a, const Alphabet& b) { return a.coords_ == b.coords_; }

private:
    std::vector<std::vector<Digit>> coords_;
    std::vector<std::size_t> strides_;
    std::size_t size_ = 0;
    SymbolId zero_ = 0;
};

/// Nondeterministic automaton with epsilon moves.
class Nfa {
public:
    explicit Nfa(Alphabet alphabet, std::size_t states = 0);

    const Alphabet& alphabet() const { return alphabet_; }
    std::size_t num_states() const { return accepting_.size(); }

    State add_state(bool accepting = false);
    void add_initial(State q);
    void set_accepting(State q, bool accepting = true);
    void add_transition(State from, SymbolId symbol, State to);
    void add_epsilon(State from, State to);

    const std::vector<State>& initial() const { return initial_; }
    bool accepting(State q) const { return accepting_[q]; }
    const std::vector<State>& targets(State q, SymbolId symbol) const;
    const std::vector<State>& epsilon(State q) const { return epsilon_[q]; }

    /// Sorted epsilon closure of a state set.
    std::vector<State> closure(std::vector<State> states) const;
    bool accepts(std::span<const SymbolId> word) const;

private:
    Alphabet alphabet_;
    std::vector<State> initial_;
    std::vector<bool> accepting_;
    std::vector<std::vector<State>> delta_;  // [state * |alphabet| + symbol]
    std::vector<std::vector<State>> epsilon_;
};

/// Complete deterministic automaton. Immutable once built.
class Dfa {
public:
    Dfa(Alphabet alphabet, std::size_t states, State initial, std::vector<State> delta,
        std::vector<bool> accepting);

    const Alphabet& alphabet() const { return alphabet_; }
    std::size_t num_states() const { return accepting_.size(); }
    State initial() const { return initial_; }
    State next(State q, SymbolId symbol) const { return delta_[q * alphabet_.size() + symbol]; }
    bool accepting(State q) const { return accepting_[q]; }
    const std::vector<State>& table() const { return delta_; }
    const std::vector<bool>& accepting_states() const { return accepting_; }

    State run(std::span<const SymbolId> word) const;
    bool accepts(std::span<const SymbolId> word) const { return accepting(run(word)); }

    /// States from which some accepting state is reachable.
    std::vector<bool> live_states() const;

    friend bool operator==(const Dfa&, const Dfa&) = default;

private:
    Alphabet alphabet_;
    State initial_;
    std::vector<State> delta_;
    std::vector<bool> accepting_;
};

enum class BoolOp { And, Or, Diff, Xor };

struct StateCounts {
    std::size_t trimmed = 0;   // dead and unreachable states removed
    std::size_t complete = 0;  // minimal complete automaton
};

struct EmptinessResult {
    bool empty = true;
    std::optional<Word> witness;  // shortest, then least under symbol order
};

struct EquivalenceResult {
    bool equivalent = true;
    std::optional<Word> counterexample;
};

Dfa determinize(const Nfa& a);

/// Minimal complete automaton, states numbered breadth-first from the initial
/// state with symbols taken in id order.
Dfa minimize(const Dfa& a);

Dfa combine(BoolOp op, const Dfa& a, const Dfa& b);
Dfa complement(const Dfa& a);

/// Existential projection onto the kept coordinates (ascending order).
Nfa project(const Dfa& a, std::span<const std::size_t> keep);

/// Lifts `a` into `target`: coordinate i of `a` is read from coordinate
/// positions[i] of the target; the remaining coordinates are unconstrained.
/// Target digits missing from a's coordinate lead to rejection.
Dfa cylinder(const Dfa& a, const Alphabet& target, std::span<const std::size_t> positions);

/// Single-coordinate form: places a 1-track automaton at coordinate `at`
/// of an alphabet of `target_arity` coordinates with digit sets `coords`.
Dfa cylinder(const Dfa& a, std::size_t target_arity, std::size_t at,
             const std::vector<std::vector<Digit>>& coords);

/// Closure under adding and removing leading padding symbols.
Dfa pad_normalize(const Dfa& a);

EmptinessResult is_empty(const Dfa& a);

/// Language equality after pad-normalizing both sides.
EquivalenceResult equivalent(const Dfa& a, const Dfa& b);

/// Accepted words of length <= max_len in length-then-lexicographic order.
std::vector<Word> enumerate_strings(const Dfa& a, std::size_t max_len);

/// Accepts map(u) iff `a` accepts u. `map` must be a bijection on symbol ids.
Dfa relabel(const Dfa& a, std::span<const SymbolId> map);

StateCounts state_counts(const Dfa& a);

Dfa universal_dfa(const Alphabet& alphabet);
Dfa empty_dfa(const Alphabet& alphabet);

/// Pads every track with leading zeros to a common length.
Word make_word(const Alphabet& alphabet, const std::vector<std::vector<Digit>>& tracks);
std::vector<std::vector<Digit>> split_word(const Alphabet& alphabet, std::span<const SymbolId> word);

/// Renders digits; -1 becomes "ī" when `human`, otherwise "-1".
std::string format_digits(std::span<const Digit> digits, bool human = false);
std::string format_symbol(const Alphabet& alphabet, SymbolId symbol);
std::string format_word(const Alphabet& alphabet, std::span<const SymbolId> word, bool human = false);

// Line-oriented text format:
//   alphabet: -1,0,1;0,1
//   initial: 0
//   accepting: 0 2
//   0 [1,0] -> 1
void write_text(std::ostream& out, const Dfa& a);
Dfa read_text(std::istream& in);
void write_dot(std::ostream& out, const Dfa& a, std::string_view name = "A", bool trim = true);

}  // namespace fibsys
