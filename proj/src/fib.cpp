#include "fibsys/fib.hpp"

#include "fibsys/regex.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>
#include <unordered_map>

namespace fibsys {

namespace {

constexpr int kMaxFib = 92;

constexpr std::array<std::int64_t, kMaxFib + 1> make_fib_table() {
    std::array<std::int64_t, kMaxFib + 1> t{};
    t[0] = 0;
    t[1] = 1;
    for (int i = 2; i <= kMaxFib; ++i) t[i] = t[i - 1] + t[i - 2];
    return t;
}

constexpr auto kFib = make_fib_table();

}  // namespace

std::int64_t fib(int n) {
    if (n < 0 || n > kMaxFib) throw Error("Fibonacci index out of range: " + std::to_string(n));
    return kFib[static_cast<std::size_t>(n)];
}

// --------------------------------------------------------------- RepString

RepString RepString::parse(std::string_view text) {
    std::vector<Digit> digits;
    if (text == "ε") return RepString{};
    if (text.find(',') != std::string_view::npos) {
        std::size_t pos = 0;
        while (pos <= text.size()) {
            auto comma = text.find(',', pos);
            auto item = text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
            std::string s(item);
            try {
                std::size_t used = 0;
                digits.push_back(std::stoi(s, &used));
                if (used != s.size()) throw std::invalid_argument(s);
            } catch (const std::exception&) {
                throw FormatError("bad digit '" + s + "' in '" + std::string(text) + "'");
            }
            if (comma == std::string_view::npos) break;
            pos = comma + 1;
        }
        return RepString(std::move(digits));
    }
    for (std::size_t i = 0; i < text.size();) {
        char c = text[i];
        if (c >= '0' && c <= '9') {
            digits.push_back(c - '0');
            ++i;
        } else if (c == '-' && i + 1 < text.size() && text[i + 1] >= '0' && text[i + 1] <= '9') {
            digits.push_back(-(text[i + 1] - '0'));
            i += 2;
        } else if (text.substr(i, 2) == "ī") {
            digits.push_back(-1);
            i += 2;
        } else {
            throw FormatError("bad digit string '" + std::string(text) + "'");
        }
    }
    return RepString(std::move(digits));
}

RepString RepString::stripped() const {
    std::size_t i = 0;
    while (i < digits_.size() && digits_[i] == 0) ++i;
    return RepString(std::vector<Digit>(digits_.begin() + static_cast<std::ptrdiff_t>(i), digits_.end()));
}

std::string RepString::str(bool human) const {
    if (digits_.empty() && human) return "ε";
    return format_digits(digits_, human);
}

std::int64_t eval_rep(const RepString& x, Anchor anchor) {
    const auto t = static_cast<int>(x.size());
    const int top = anchor == Anchor::F2 ? t + 1 : t;
    std::int64_t sum = 0;
    for (int j = 0; j < t; ++j) sum += x.digits()[static_cast<std::size_t>(j)] * fib(top - j);
    return sum;
}

RepString zeckendorf_encode(std::int64_t n) {
    if (n < 0) throw Error("zeckendorf_encode needs n >= 0");
    if (n == 0) return RepString{};
    int i = 2;
    while (i + 1 <= kMaxFib && fib(i + 1) <= n) ++i;
    std::vector<Digit> digits;
    for (int k = i; k >= 2; --k) {
        if (fib(k) <= n) {
            digits.push_back(1);
            n -= fib(k);
        } else {
            digits.push_back(0);
        }
    }
    return RepString(std::move(digits));
}

std::size_t zeckendorf_length(std::int64_t n) { return zeckendorf_encode(n < 0 ? -n : n).size(); }

// ------------------------------------------------------------- normalizers

Alphabet converter_alphabet(const std::vector<Digit>& x_digits) {
    return Alphabet(std::vector<std::vector<Digit>>{x_digits, {0, 1}});
}

Dfa build_normalizer(const ConverterSpec& spec, int offset, int bound) {
    if (spec.sign != 1 && spec.sign != -1) throw Error("converter sign must be +1 or -1");
    if (std::abs(offset) > 2) throw Error("normalizer offset must satisfy |offset| <= 2");
    if (bound < 4) throw ConvergenceError("normalizer bound too small");

    const Alphabet alpha = converter_alphabet(spec.x_digits);
    const bool delayed = spec.anchor == Anchor::F1;

    struct Key {
        int v, w, yprev, xd;
        bool operator<(const Key& o) const { return std::tie(v, w, yprev, xd) < std::tie(o.v, o.w, o.yprev, o.xd); }
    };
    std::map<Key, State> ids;
    std::vector<Key> states;
    std::vector<std::pair<State, bool>> raw;  // per (state, symbol): target, valid
    auto intern = [&](const Key& k) {
        auto [it, inserted] = ids.try_emplace(k, static_cast<State>(states.size()));
        if (inserted) states.push_back(k);
        return it->second;
    };
    intern(Key{0, 0, 0, 0});
    for (std::size_t i = 0; i < states.size(); ++i) {
        const Key k = states[i];
        for (SymbolId s = 0; s < alpha.size(); ++s) {
            const Digit a = alpha.digit(s, 0), b = alpha.digit(s, 1);
            if (k.yprev == 1 && b == 1) {
                raw.emplace_back(0, false);
                continue;
            }
            const int d = (delayed ? k.xd : a) - spec.sign * b;
            const int v = k.v + k.w + d;
            const int w = k.v + d;
            if (std::abs(v) > bound || std::abs(w) > bound) {
                raw.emplace_back(0, false);
                continue;
            }
            raw.emplace_back(intern(Key{v, w, b, delayed ? a : 0}), true);
        }
    }
    const std::size_t n = states.size();
    const auto dead = static_cast<State>(n);
    std::vector<State> delta;
    delta.reserve((n + 1) * alpha.size());
    for (const auto& [t, ok] : raw) delta.push_back(ok ? t : dead);
    for (SymbolId s = 0; s < alpha.size(); ++s) delta.push_back(dead);
    std::vector<bool> accepting(n + 1, false);
    for (std::size_t i = 0; i < n; ++i) {
        const Key& k = states[i];
        accepting[i] = (k.v + (delayed ? k.xd : 0)) == offset;
    }
    return minimize(Dfa(alpha, n + 1, 0, std::move(delta), std::move(accepting)));
}

const Dfa& normalizer(const ConverterSpec& spec, int offset) {
    using Key = std::tuple<std::vector<Digit>, int, int, int>;
    static std::mutex mutex;
    static std::map<Key, std::unique_ptr<Dfa>> cache;
    std::lock_guard lock(mutex);
    Key key{spec.x_digits, spec.sign, static_cast<int>(spec.anchor), offset};
    auto it = cache.find(key);
    if (it == cache.end()) {
        it = cache.emplace(key, std::make_unique<Dfa>(build_normalizer(spec, offset))).first;
    }
    return *it->second;
}

Dfa build_linear_relation(const std::vector<int>& coefficients, int bound) {
    const std::size_t k = coefficients.size();
    if (k == 0) throw Error("linear relation needs at least one track");
    const Alphabet alpha = Alphabet::binary(k);

    // (V, W, mask of tracks whose previous digit was 1)
    using Key = std::tuple<int, int, std::uint32_t>;
    std::map<Key, State> ids;
    std::vector<Key> states;
    std::vector<State> delta;
    auto intern = [&](const Key& key) {
        auto [it, inserted] = ids.try_emplace(key, static_cast<State>(states.size()));
        if (inserted) states.push_back(key);
        return it->second;
    };
    constexpr auto kDead = ~State{0};
    intern(Key{0, 0, 0});
    for (std::size_t i = 0; i < states.size(); ++i) {
        const auto [v, w, prev] = states[i];
        for (SymbolId s = 0; s < alpha.size(); ++s) {
            std::uint32_t mask = 0;
            int d = 0;
            for (std::size_t j = 0; j < k; ++j) {
                if (alpha.digit(s, j) == 1) {
                    mask |= 1u << j;
                    d += coefficients[j];
                }
            }
            const int v2 = v + w + d, w2 = v + d;
            if ((mask & prev) != 0 || std::abs(v2) > bound || std::abs(w2) > bound) {
                delta.push_back(kDead);
            } else {
                delta.push_back(intern(Key{v2, w2, mask}));
            }
        }
    }
    const auto dead = static_cast<State>(states.size());
    for (auto& t : delta) {
        if (t == kDead) t = dead;
    }
    for (SymbolId s = 0; s < alpha.size(); ++s) delta.push_back(dead);
    std::vector<bool> accepting(states.size() + 1, false);
    for (std::size_t i = 0; i < states.size(); ++i) accepting[i] = std::get<0>(states[i]) == 0;
    return minimize(Dfa(alpha, states.size() + 1, 0, std::move(delta), std::move(accepting)));
}

Dfa compose_signed_normalizer(int sign) {
    if (sign != 1 && sign != -1) throw Error("converter sign must be +1 or -1");
    // tracks: x, z, t, u, w, s
    const Alphabet six(std::vector<std::vector<Digit>>{{-1, 0, 1}, {0, 1}, {0, 1}, {0, 1}, {0, 1}, {0, 1}});
    const Alphabet sel(std::vector<std::vector<Digit>>{{-1, 0, 1}, {0, 1}});
    const Dfa posdigits = regex_dfa("([1,1]|[-1,0]|[0,0])*", sel);
    const Dfa negdigits = regex_dfa("([-1,1]|[1,0]|[0,0])*", sel);
    const Dfa& fcanon = normalizer(ConverterSpec{{0, 1}, 1, Anchor::F2}, 0);
    // z + w = s, or z + s = w
    const Dfa sum = build_linear_relation(sign == 1 ? std::vector<int>{1, 1, -1} : std::vector<int>{1, -1, 1});

    auto lift = [&](const Dfa& a, std::vector<std::size_t> at) { return cylinder(a, six, at); };
    Dfa r = lift(negdigits, {0, 2});
    r = combine(BoolOp::And, r, lift(posdigits, {0, 3}));
    r = combine(BoolOp::And, r, lift(fcanon, {2, 4}));
    r = combine(BoolOp::And, r, lift(fcanon, {3, 5}));
    r = combine(BoolOp::And, r, lift(sum, {1, 4, 5}));
    const std::size_t keep[] = {0, 1};
    return minimize(determinize(project(r, keep)));
}

Dfa build_shifter(const std::vector<Digit>& x_digits) {
    const Alphabet alpha(std::vector<std::vector<Digit>>{x_digits, x_digits});
    const auto& digits = alpha.coordinate(0);
    const std::size_t n = digits.size();
    const auto dead = static_cast<State>(n);
    std::size_t zero_index = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (digits[i] == 0) zero_index = i;
    }
    // State i: the previous x digit was digits[i].
    std::vector<State> delta;
    for (State q = 0; q <= n; ++q) {
        for (SymbolId s = 0; s < alpha.size(); ++s) {
            if (q == dead) {
                delta.push_back(dead);
                continue;
            }
            const Digit a = alpha.digit(s, 0), t = alpha.digit(s, 1);
            if (t != digits[q]) {
                delta.push_back(dead);
            } else {
                const auto next = std::find(digits.begin(), digits.end(), a) - digits.begin();
                delta.push_back(static_cast<State>(next));
            }
        }
    }
    std::vector<bool> accepting(n + 1, true);
    accepting[n] = false;
    return minimize(Dfa(alpha, n + 1, static_cast<State>(zero_index), std::move(delta), std::move(accepting)));
}

// ------------------------------------------------------------------ oracle

namespace {

bool has_block_11(const std::vector<Digit>& y) {
    for (std::size_t i = 1; i < y.size(); ++i) {
        if (y[i - 1] == 1 && y[i] == 1) return true;
    }
    return false;
}

struct PairWalker {
    const Dfa& conv;
    const ConverterSpec& spec;
    int offset;
    std::size_t max_len;
    std::vector<Digit> x, y;
    std::optional<PairDiscrepancy> found;

    bool expected() const {
        if (has_block_11(y)) return false;
        return eval_rep(RepString(x), spec.anchor) == spec.sign * eval_rep(RepString(y)) + offset;
    }

    void walk(State q) {
        if (found) return;
        bool got = conv.accepting(q);
        if (got != expected()) {
            found = PairDiscrepancy{RepString(x), RepString(y), got};
            return;
        }
        if (x.size() == max_len) return;
        const auto& alpha = conv.alphabet();
        for (SymbolId s = 0; s < alpha.size() && !found; ++s) {
            x.push_back(alpha.digit(s, 0));
            y.push_back(alpha.digit(s, 1));
            walk(conv.next(q, s));
            x.pop_back();
            y.pop_back();
        }
    }
};

}  // namespace

std::optional<PairDiscrepancy> oracle_pair_check(const Dfa& conv, const ConverterSpec& spec, int offset,
                                                 std::size_t max_len) {
    if (!(conv.alphabet() == converter_alphabet(spec.x_digits))) {
        throw AlphabetError("converter alphabet does not match spec digits");
    }
    PairWalker walker{conv, spec, offset, max_len, {}, {}, std::nullopt};
    walker.walk(conv.initial());
    return walker.found;
}

std::optional<PairDiscrepancy> oracle_pair_check(const ConverterSpec& spec, int offset, std::size_t max_len) {
    return oracle_pair_check(build_normalizer(spec, offset), spec, offset, max_len);
}

}  // namespace fibsys
