#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fibsys/automata.hpp"
#include "fibsys/fib.hpp"

namespace fibsys {

enum class Domain { Naturals, Integers };

std::string to_string(Domain d);
std::string to_string(Anchor a);

/// A numeration system: a rule language over the converter's digit set, the
/// anchor of its last digit and the domain it claims to cover.
///
/// Systems with an epsilon term (value = core + e, e a final digit) list the
/// admissible offsets -e in `completeness_offsets`; their rule describes the
/// core only. All checks run on the rule's closure under leading zeros.
class SystemSpec {
public:
    SystemSpec(std::string name, Dfa rule, ConverterSpec converter, Domain domain = Domain::Naturals,
               std::vector<int> completeness_offsets = {0});

    const std::string& name() const { return name_; }
    const Dfa& rule() const { return rule_; }
    /// Minimal pad-closed rule language.
    const Dfa& language() const { return language_; }
    const ConverterSpec& converter() const { return converter_; }
    const std::vector<Digit>& digits() const { return converter_.x_digits; }
    Anchor anchor() const { return converter_.anchor; }
    Domain domain() const { return domain_; }
    const std::vector<int>& completeness_offsets() const { return offsets_; }
    bool has_epsilon_term() const { return offsets_.size() != 1 || offsets_.front() != 0; }

    /// Converter for the given sign and offset.
    const Dfa& converter_dfa(int sign, int offset = 0) const;

private:
    std::string name_;
    Dfa rule_;
    Dfa language_;
    ConverterSpec converter_;
    Domain domain_;
    std::vector<int> offsets_;
};

struct CompletenessResult {
    bool complete = true;
    std::optional<std::int64_t> missing;  // smallest missing magnitude
    RepString missing_zeckendorf;
    std::optional<std::int64_t> missing_positive;  // smallest missing magnitude above 0
};

struct AmbiguityWitness {
    RepString first;
    RepString second;
    std::int64_t value = 0;
};

struct UnambiguityResult {
    bool unambiguous = true;
    std::optional<AmbiguityWitness> witness;
};

struct PerfectionReport {
    std::string system;
    Domain domain = Domain::Naturals;
    CompletenessResult complete_pos;
    std::optional<CompletenessResult> complete_neg;
    UnambiguityResult unambiguous_pos;
    std::optional<UnambiguityResult> unambiguous_neg;
    StateCounts rule_counts;
    double elapsed_ms = 0;

    bool complete() const { return complete_pos.complete && (!complete_neg || complete_neg->complete); }
    bool unambiguous() const {
        return unambiguous_pos.unambiguous && (!unambiguous_neg || unambiguous_neg->unambiguous);
    }
    bool perfect() const { return complete() && unambiguous(); }
};

class NoRepresentationError : public Error {
public:
    using Error::Error;
};

/// Pairs (x, y) over (digits ; digits) with x == y symbol by symbol.
Dfa equal_rel(const std::vector<Digit>& digits);

/// Binary strings without the block 11.
Dfa zeckendorf_language();

/// sign = -1 is only meaningful for integer-domain systems; 0 counts as covered
/// on the negative side.
CompletenessResult check_completeness(const SystemSpec& sys, int sign = 1);
UnambiguityResult check_unambiguity(const SystemSpec& sys, int sign = 1);
PerfectionReport check_perfect(const SystemSpec& sys);

struct RepresentationSearch {
    RepString rep;
    std::size_t visited_states = 0;
};

/// Breadth-first search in the product of the rule, the converter and the
/// fixed y track 0*(|n|)_F. For epsilon-term systems the returned string is
/// the core followed by the epsilon digit, so eval_rep(rep, F1) == n.
RepresentationSearch find_representation_traced(const SystemSpec& sys, std::int64_t n);
RepString find_representation(const SystemSpec& sys, std::int64_t n);

/// Value of a representation as returned by find_representation.
std::int64_t representation_value(const SystemSpec& sys, const RepString& rep);

/// Whether a representation (as returned by find_representation) obeys the rule.
bool representation_valid(const SystemSpec& sys, const RepString& rep);

/// All binary Fibonacci representations of n without leading zeros, sorted.
std::vector<RepString> all_binary_representations(std::int64_t n);
std::int64_t count_representations(std::int64_t n);

std::string report_to_json(const PerfectionReport& r);
PerfectionReport report_from_json(std::string_view text);
std::string report_to_text(const PerfectionReport& r);

}  // namespace fibsys
