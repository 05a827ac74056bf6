#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fibsys/automata.hpp"

namespace fibsys {

/// F_0 = 0, F_1 = 1, F_n = F_{n-1} + F_{n-2}; valid for 0 <= n <= 92.
std::int64_t fib(int n);

/// Place value of the last digit of a representation.
enum class Anchor { F2, F1 };

/// Digit string, most significant digit first.
class RepString {
public:
    RepString() = default;
    explicit RepString(std::vector<Digit> digits) : digits_(std::move(digits)) {}

    /// Accepts "10ī1", "10-11" and "1,0,-1,1"; "" and "ε" are empty.
    static RepString parse(std::string_view text);

    const std::vector<Digit>& digits() const { return digits_; }
    std::size_t size() const { return digits_.size(); }
    bool empty() const { return digits_.empty(); }

    /// Drops leading zeros.
    RepString stripped() const;

    /// Human form uses ī for -1 and ε for the empty string.
    std::string str(bool human = false) const;

    friend bool operator==(const RepString&, const RepString&) = default;
    friend auto operator<=>(const RepString&, const RepString&) = default;

private:
    std::vector<Digit> digits_;
};

/// F2 anchor: sum a_i F_{t+2-i}. F1 anchor: sum a_i F_{t+1-i}.
std::int64_t eval_rep(const RepString& x, Anchor anchor = Anchor::F2);

/// Greedy representation; 0 maps to the empty string.
RepString zeckendorf_encode(std::int64_t n);

/// Unpadded length of the greedy representation of n.
std::size_t zeckendorf_length(std::int64_t n);

struct ConverterSpec {
    std::vector<Digit> x_digits{0, 1};
    int sign = 1;  // +1 or -1
    Anchor anchor = Anchor::F2;

    friend bool operator==(const ConverterSpec&, const ConverterSpec&) = default;
};

/// Pair alphabet (x digits ; {0,1}) used by normalizers.
Alphabet converter_alphabet(const std::vector<Digit>& x_digits);

class ConvergenceError : public Error {
public:
    using Error::Error;
};

inline constexpr int kDefaultNormalizerBound = 16;

/// Minimal automaton over padded pairs (x, y) accepting iff y has no block 11
/// and eval_rep(x, anchor) == sign * eval_rep(y) + offset.
///
/// Explores states (V, W, last y digit[, delayed x digit]) where V is the
/// running difference at the current place value and W the same sum one
/// place lower; states with |V| or |W| above `bound` are discarded.
Dfa build_normalizer(const ConverterSpec& spec, int offset = 0, int bound = kDefaultNormalizerBound);

/// Shared, lazily built normalizer with the default bound. Thread-safe.
const Dfa& normalizer(const ConverterSpec& spec, int offset = 0);

/// Accepts padded binary tuples whose tracks are all free of the block 11 and
/// satisfy sum_j coefficients[j] * [track_j] == 0.
Dfa build_linear_relation(const std::vector<int>& coefficients, int bound = kDefaultNormalizerBound);

/// Signed-digit converter assembled from positive/negative digit selections,
/// two binary normalizers and a sum relation (z + w = s for sign +1, z + s = w
/// for sign -1). The intermediate tracks share the input length and the
/// projection is not closed under padding, so the result only accepts pairs
/// padded enough for the intermediate values; pad_normalize of it equals
/// build_normalizer({-1,0,1}, sign).
Dfa compose_signed_normalizer(int sign);

/// Relation (x, t) where t is x shifted right by one place (t = 0x minus its
/// last digit), over (x_digits ; x_digits).
Dfa build_shifter(const std::vector<Digit>& x_digits);

struct PairDiscrepancy {
    RepString x;
    RepString y;
    bool automaton_accepts = false;
};

/// Compares `conv` against direct evaluation of the defining condition on all
/// pairs of length <= max_len. Returns the first discrepancy, if any.
std::optional<PairDiscrepancy> oracle_pair_check(const Dfa& conv, const ConverterSpec& spec, int offset,
                                                 std::size_t max_len);
std::optional<PairDiscrepancy> oracle_pair_check(const ConverterSpec& spec, int offset, std::size_t max_len);

}  // namespace fibsys
