#include "fibsys/automata.hpp"

#include <algorithm>
#include <deque>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <unordered_map>

namespace fibsys {

namespace {

struct VectorHash {
    std::size_t operator()(const std::vector<State>& v) const noexcept {
        std::size_t h = v.size();
        for (State x : v) {
            h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        }
        return h;
    }
};

std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<Digit> parse_digit_list(std::string_view text) {
    std::vector<Digit> out;
    std::string item;
    std::stringstream ss{std::string(text)};
    while (std::getline(ss, item, ',')) {
        auto t = trim(item);
        if (t.empty()) throw FormatError("empty digit in list '" + std::string(text) + "'");
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(t, &used);
        } catch (const std::exception&) {
            throw FormatError("bad digit '" + t + "'");
        }
        if (used != t.size()) throw FormatError("bad digit '" + t + "'");
        out.push_back(v);
    }
    return out;
}

}  // namespace

// ---------------------------------------------------------------- Alphabet

Alphabet::Alphabet(std::vector<std::vector<Digit>> coordinates) : coords_(std::move(coordinates)) {
    if (coords_.empty()) throw AlphabetError("alphabet needs at least one coordinate");
    for (auto& c : coords_) {
        std::sort(c.begin(), c.end());
        c.erase(std::unique(c.begin(), c.end()), c.end());
        if (c.empty()) throw AlphabetError("empty digit set");
        if (!std::binary_search(c.begin(), c.end(), 0)) {
            throw AlphabetError("every coordinate must contain the padding digit 0");
        }
    }
    strides_.assign(coords_.size(), 1);
    size_ = 1;
    for (std::size_t i = coords_.size(); i-- > 0;) {
        strides_[i] = size_;
        size_ *= coords_[i].size();
    }
    Symbol zeros(coords_.size(), 0);
    zero_ = index(zeros);
}

Alphabet Alphabet::binary(std::size_t arity) {
    return Alphabet(std::vector<std::vector<Digit>>(arity, {0, 1}));
}

Alphabet Alphabet::signed_ternary(std::size_t arity) {
    return Alphabet(std::vector<std::vector<Digit>>(arity, {-1, 0, 1}));
}

Alphabet Alphabet::parse(std::string_view text) {
    std::vector<std::vector<Digit>> coords;
    std::string part;
    std::stringstream ss{std::string(text)};
    while (std::getline(ss, part, ';')) {
        coords.push_back(parse_digit_list(part));
    }
    return Alphabet(std::move(coords));
}

Symbol Alphabet::symbol(SymbolId id) const {
    Symbol s(coords_.size());
    for (std::size_t i = 0; i < coords_.size(); ++i) s[i] = digit(id, i);
    return s;
}

Digit Alphabet::digit(SymbolId id, std::size_t coord) const {
    return coords_[coord][(id / strides_[coord]) % coords_[coord].size()];
}

std::optional<SymbolId> Alphabet::find(std::span<const Digit> tuple) const {
    if (tuple.size() != coords_.size()) return std::nullopt;
    SymbolId id = 0;
    for (std::size_t i = 0; i < coords_.size(); ++i) {
        auto it = std::lower_bound(coords_[i].begin(), coords_[i].end(), tuple[i]);
        if (it == coords_[i].end() || *it != tuple[i]) return std::nullopt;
        id += static_cast<SymbolId>((it - coords_[i].begin()) * strides_[i]);
    }
    return id;
}

SymbolId Alphabet::index(std::span<const Digit> tuple) const {
    auto id = find(tuple);
    if (!id) {
        throw AlphabetError("symbol " + format_digits(tuple) + " is not in alphabet " + to_string());
    }
    return *id;
}

Alphabet Alphabet::restrict(std::span<const std::size_t> keep) const {
    std::vector<std::vector<Digit>> coords;
    for (auto k : keep) {
        if (k >= coords_.size()) throw AlphabetError("coordinate index out of range");
        coords.push_back(coords_[k]);
    }
    return Alphabet(std::move(coords));
}

std::string Alphabet::to_string() const {
    std::string out;
    for (std::size_t i = 0; i < coords_.size(); ++i) {
        if (i) out += ';';
        for (std::size_t j = 0; j < coords_[i].size(); ++j) {
            if (j) out += ',';
            out += std::to_string(coords_[i][j]);
        }
    }
    return out;
}

// --------------------------------------------------------------------- Nfa

Nfa::Nfa(Alphabet alphabet, std::size_t states) : alphabet_(std::move(alphabet)) {
    for (std::size_t i = 0; i < states; ++i) add_state();
}

State Nfa::add_state(bool accepting) {
    auto q = static_cast<State>(accepting_.size());
    accepting_.push_back(accepting);
    delta_.resize(delta_.size() + alphabet_.size());
    epsilon_.emplace_back();
    return q;
}

void Nfa::add_initial(State q) { initial_.push_back(q); }

void Nfa::set_accepting(State q, bool accepting) { accepting_.at(q) = accepting; }

void Nfa::add_transition(State from, SymbolId symbol, State to) {
    if (from >= num_states() || to >= num_states() || symbol >= alphabet_.size()) {
        throw Error("transition references an undeclared state or symbol");
    }
    delta_[from * alphabet_.size() + symbol].push_back(to);
}

void Nfa::add_epsilon(State from, State to) {
    if (from >= num_states() || to >= num_states()) throw Error("epsilon move references an undeclared state");
    epsilon_[from].push_back(to);
}

const std::vector<State>& Nfa::targets(State q, SymbolId symbol) const {
    return delta_[q * alphabet_.size() + symbol];
}

std::vector<State> Nfa::closure(std::vector<State> states) const {
    std::vector<bool> seen(num_states(), false);
    std::vector<State> stack;
    for (State q : states) {
        if (!seen[q]) {
            seen[q] = true;
            stack.push_back(q);
        }
    }
    std::vector<State> out;
    while (!stack.empty()) {
        State q = stack.back();
        stack.pop_back();
        out.push_back(q);
        for (State r : epsilon_[q]) {
            if (!seen[r]) {
                seen[r] = true;
                stack.push_back(r);
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool Nfa::accepts(std::span<const SymbolId> word) const {
    auto current = closure(initial_);
    for (SymbolId s : word) {
        std::vector<State> next;
        for (State q : current) {
            const auto& t = targets(q, s);
            next.insert(next.end(), t.begin(), t.end());
        }
        current = closure(std::move(next));
    }
    return std::any_of(current.begin(), current.end(), [&](State q) { return accepting_[q]; });
}

// --------------------------------------------------------------------- Dfa

Dfa::Dfa(Alphabet alphabet, std::size_t states, State initial, std::vector<State> delta,
         std::vector<bool> accepting)
    : alphabet_(std::move(alphabet)), initial_(initial), delta_(std::move(delta)), accepting_(std::move(accepting)) {
    if (states == 0) throw Error("automaton needs at least one state");
    if (initial_ >= states) throw Error("initial state out of range");
    if (delta_.size() != states * alphabet_.size()) throw Error("transition table is not total");
    if (accepting_.size() != states) throw Error("accepting vector has wrong size");
    for (State t : delta_) {
        if (t >= states) throw Error("transition target out of range");
    }
}

State Dfa::run(std::span<const SymbolId> word) const {
    State q = initial_;
    for (SymbolId s : word) q = next(q, s);
    return q;
}

std::vector<bool> Dfa::live_states() const {
    const std::size_t n = num_states(), k = alphabet_.size();
    std::vector<std::vector<State>> reverse(n);
    for (State q = 0; q < n; ++q) {
        for (SymbolId s = 0; s < k; ++s) reverse[next(q, s)].push_back(q);
    }
    std::vector<bool> live(n, false);
    std::vector<State> stack;
    for (State q = 0; q < n; ++q) {
        if (accepting_[q]) {
            live[q] = true;
            stack.push_back(q);
        }
    }
    while (!stack.empty()) {
        State q = stack.back();
        stack.pop_back();
        for (State p : reverse[q]) {
            if (!live[p]) {
                live[p] = true;
                stack.push_back(p);
            }
        }
    }
    return live;
}

// -------------------------------------------------------------- operations

Dfa determinize(const Nfa& a) {
    const std::size_t k = a.alphabet().size();
    std::unordered_map<std::vector<State>, State, VectorHash> ids;
    std::vector<std::vector<State>> subsets;
    std::vector<State> delta;
    std::vector<bool> accepting;

    auto intern = [&](std::vector<State> set) -> State {
        auto [it, inserted] = ids.try_emplace(set, static_cast<State>(subsets.size()));
        if (inserted) {
            accepting.push_back(std::any_of(set.begin(), set.end(), [&](State q) { return a.accepting(q); }));
            subsets.push_back(std::move(set));
        }
        return it->second;
    };

    intern(a.closure(a.initial()));
    for (std::size_t i = 0; i < subsets.size(); ++i) {
        for (SymbolId s = 0; s < k; ++s) {
            std::vector<State> next;
            for (State q : subsets[i]) {
                const auto& t = a.targets(q, s);
                next.insert(next.end(), t.begin(), t.end());
            }
            State id = intern(a.closure(std::move(next)));
            delta.push_back(id);
        }
    }
    const std::size_t n = subsets.size();
    return Dfa(a.alphabet(), n, 0, std::move(delta), std::move(accepting));
}

Dfa minimize(const Dfa& a) {
    const std::size_t k = a.alphabet().size();

    // Reachable states in breadth-first order.
    std::vector<State> order;
    std::vector<int> reach(a.num_states(), -1);
    order.push_back(a.initial());
    reach[a.initial()] = 0;
    for (std::size_t i = 0; i < order.size(); ++i) {
        for (SymbolId s = 0; s < k; ++s) {
            State t = a.next(order[i], s);
            if (reach[t] < 0) {
                reach[t] = static_cast<int>(order.size());
                order.push_back(t);
            }
        }
    }
    const std::size_t n = order.size();

    // Moore refinement on the reachable part.
    std::vector<State> cls(n);
    for (std::size_t i = 0; i < n; ++i) cls[i] = a.accepting(order[i]) ? 1 : 0;
    std::size_t num_classes = 0;
    {
        bool has0 = std::find(cls.begin(), cls.end(), 0u) != cls.end();
        bool has1 = std::find(cls.begin(), cls.end(), 1u) != cls.end();
        num_classes = static_cast<std::size_t>(has0) + static_cast<std::size_t>(has1);
    }
    std::vector<State> signature(k + 1);
    while (true) {
        std::unordered_map<std::vector<State>, State, VectorHash> ids;
        std::vector<State> next_cls(n);
        for (std::size_t i = 0; i < n; ++i) {
            signature[0] = cls[i];
            for (SymbolId s = 0; s < k; ++s) {
                signature[s + 1] = cls[static_cast<std::size_t>(reach[a.next(order[i], s)])];
            }
            auto [it, inserted] = ids.try_emplace(signature, static_cast<State>(ids.size()));
            next_cls[i] = it->second;
        }
        const std::size_t count = ids.size();
        cls = std::move(next_cls);
        if (count == num_classes) break;
        num_classes = count;
    }

    // Breadth-first canonical numbering of the quotient.
    std::vector<std::size_t> representative(num_classes, 0);
    std::vector<bool> have(num_classes, false);
    for (std::size_t i = 0; i < n; ++i) {
        if (!have[cls[i]]) {
            have[cls[i]] = true;
            representative[cls[i]] = i;
        }
    }
    std::vector<int> canon(num_classes, -1);
    std::vector<State> queue{cls[0]};
    canon[cls[0]] = 0;
    std::vector<State> delta;
    std::vector<bool> accepting;
    for (std::size_t i = 0; i < queue.size(); ++i) {
        std::size_t rep = representative[queue[i]];
        accepting.push_back(a.accepting(order[rep]));
        for (SymbolId s = 0; s < k; ++s) {
            State c = cls[static_cast<std::size_t>(reach[a.next(order[rep], s)])];
            if (canon[c] < 0) {
                canon[c] = static_cast<int>(queue.size());
                queue.push_back(c);
            }
            delta.push_back(static_cast<State>(canon[c]));
        }
    }
    return Dfa(a.alphabet(), queue.size(), 0, std::move(delta), std::move(accepting));
}

Dfa combine(BoolOp op, const Dfa& a, const Dfa& b) {
    if (!(a.alphabet() == b.alphabet())) {
        throw AlphabetError("alphabet mismatch: " + a.alphabet().to_string() + " vs " + b.alphabet().to_string());
    }
    const std::size_t k = a.alphabet().size();
    auto eval = [op](bool x, bool y) {
        switch (op) {
            case BoolOp::And: return x && y;
            case BoolOp::Or: return x || y;
            case BoolOp::Diff: return x && !y;
            case BoolOp::Xor: return x != y;
        }
        return false;
    };
    std::unordered_map<std::uint64_t, State> ids;
    std::vector<std::pair<State, State>> pairs;
    std::vector<State> delta;
    std::vector<bool> accepting;
    auto intern = [&](State p, State q) {
        std::uint64_t key = (static_cast<std::uint64_t>(p) << 32) | q;
        auto [it, inserted] = ids.try_emplace(key, static_cast<State>(pairs.size()));
        if (inserted) {
            pairs.emplace_back(p, q);
            accepting.push_back(eval(a.accepting(p), b.accepting(q)));
        }
        return it->second;
    };
    intern(a.initial(), b.initial());
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        auto [p, q] = pairs[i];
        for (SymbolId s = 0; s < k; ++s) delta.push_back(intern(a.next(p, s), b.next(q, s)));
    }
    return minimize(Dfa(a.alphabet(), pairs.size(), 0, std::move(delta), std::move(accepting)));
}

Dfa complement(const Dfa& a) {
    auto acc = a.accepting_states();
    acc.flip();
    return Dfa(a.alphabet(), a.num_states(), a.initial(), a.table(), std::move(acc));
}

Nfa project(const Dfa& a, std::span<const std::size_t> keep) {
    const Alphabet& big = a.alphabet();
    if (keep.empty() || keep.size() >= big.arity()) {
        throw AlphabetError("projection must keep at least one and drop at least one coordinate");
    }
    std::vector<std::size_t> sorted(keep.begin(), keep.end());
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw AlphabetError("duplicate coordinate in projection");
    }
    Alphabet small = big.restrict(sorted);
    std::vector<SymbolId> image(big.size());
    Symbol tuple(sorted.size());
    for (SymbolId s = 0; s < big.size(); ++s) {
        for (std::size_t i = 0; i < sorted.size(); ++i) tuple[i] = big.digit(s, sorted[i]);
        image[s] = small.index(tuple);
    }
    Nfa out(small, a.num_states());
    out.add_initial(a.initial());
    for (State q = 0; q < a.num_states(); ++q) {
        out.set_accepting(q, a.accepting(q));
        std::vector<std::vector<State>> seen(small.size());
        for (SymbolId s = 0; s < big.size(); ++s) {
            State t = a.next(q, s);
            auto& v = seen[image[s]];
            if (std::find(v.begin(), v.end(), t) == v.end()) {
                v.push_back(t);
                out.add_transition(q, image[s], t);
            }
        }
    }
    return out;
}

Dfa cylinder(const Dfa& a, const Alphabet& target, std::span<const std::size_t> positions) {
    const Alphabet& small = a.alphabet();
    if (positions.size() != small.arity()) throw AlphabetError("cylinder needs one position per coordinate");
    for (auto p : positions) {
        if (p >= target.arity()) throw AlphabetError("cylinder position out of range");
    }
    // Map target symbols to source symbols, or to a rejecting sink.
    constexpr SymbolId kMissing = ~SymbolId{0};
    std::vector<SymbolId> image(target.size());
    Symbol tuple(positions.size());
    for (SymbolId s = 0; s < target.size(); ++s) {
        for (std::size_t i = 0; i < positions.size(); ++i) tuple[i] = target.digit(s, positions[i]);
        auto id = small.find(tuple);
        image[s] = id ? *id : kMissing;
    }
    const std::size_t n = a.num_states();
    const auto sink = static_cast<State>(n);
    std::vector<State> delta;
    delta.reserve((n + 1) * target.size());
    for (State q = 0; q <= n; ++q) {
        for (SymbolId s = 0; s < target.size(); ++s) {
            delta.push_back(q == sink || image[s] == kMissing ? sink : a.next(q, image[s]));
        }
    }
    auto acc = a.accepting_states();
    acc.push_back(false);
    return minimize(Dfa(target, n + 1, a.initial(), std::move(delta), std::move(acc)));
}

Dfa cylinder(const Dfa& a, std::size_t target_arity, std::size_t at,
             const std::vector<std::vector<Digit>>& coords) {
    if (a.alphabet().arity() != 1) throw AlphabetError("single-coordinate cylinder needs a 1-track automaton");
    if (at >= target_arity || coords.size() != target_arity) throw AlphabetError("invalid arity for cylinder");
    std::size_t pos[] = {at};
    return cylinder(a, Alphabet(coords), pos);
}

Dfa pad_normalize(const Dfa& a) {
    const SymbolId zero = a.alphabet().zero();
    Nfa n(a.alphabet(), a.num_states() + 1);
    const auto start = static_cast<State>(a.num_states());
    n.add_initial(start);
    n.add_transition(start, zero, start);
    for (State q = 0; q < a.num_states(); ++q) {
        n.set_accepting(q, a.accepting(q));
        for (SymbolId s = 0; s < a.alphabet().size(); ++s) n.add_transition(q, s, a.next(q, s));
    }
    // epsilon into every state reachable from the initial state by padding
    State q = a.initial();
    std::vector<bool> seen(a.num_states(), false);
    while (!seen[q]) {
        seen[q] = true;
        n.add_epsilon(start, q);
        q = a.next(q, zero);
    }
    return minimize(determinize(n));
}

EmptinessResult is_empty(const Dfa& a) {
    const std::size_t k = a.alphabet().size();
    std::vector<std::pair<State, SymbolId>> parent(a.num_states(), {0, 0});
    std::vector<bool> seen(a.num_states(), false);
    std::deque<State> queue{a.initial()};
    seen[a.initial()] = true;
    while (!queue.empty()) {
        State q = queue.front();
        queue.pop_front();
        if (a.accepting(q)) {
            Word w;
            for (State p = q; p != a.initial();) {
                w.push_back(parent[p].second);
                p = parent[p].first;
            }
            std::reverse(w.begin(), w.end());
            return {false, std::move(w)};
        }
        for (SymbolId s = 0; s < k; ++s) {
            State t = a.next(q, s);
            if (!seen[t]) {
                seen[t] = true;
                parent[t] = {q, s};
                queue.push_back(t);
            }
        }
    }
    return {true, std::nullopt};
}

EquivalenceResult equivalent(const Dfa& a, const Dfa& b) {
    auto diff = combine(BoolOp::Xor, pad_normalize(a), pad_normalize(b));
    auto r = is_empty(diff);
    return {r.empty, std::move(r.witness)};
}

std::vector<Word> enumerate_strings(const Dfa& a, std::size_t max_len) {
    const std::size_t k = a.alphabet().size();
    auto live = a.live_states();
    std::vector<Word> out;
    std::vector<std::pair<Word, State>> layer{{Word{}, a.initial()}};
    for (std::size_t len = 0; len <= max_len && !layer.empty(); ++len) {
        std::vector<std::pair<Word, State>> next;
        for (auto& [w, q] : layer) {
            if (a.accepting(q)) out.push_back(w);
            if (len == max_len) continue;
            for (SymbolId s = 0; s < k; ++s) {
                State t = a.next(q, s);
                if (!live[t]) continue;
                Word v = w;
                v.push_back(s);
                next.emplace_back(std::move(v), t);
            }
        }
        layer = std::move(next);
    }
    return out;
}

Dfa relabel(const Dfa& a, std::span<const SymbolId> map) {
    const std::size_t k = a.alphabet().size();
    if (map.size() != k) throw AlphabetError("relabel map must cover the alphabet");
    std::vector<bool> hit(k, false);
    for (SymbolId s : map) {
        if (s >= k || hit[s]) throw AlphabetError("relabel map is not a bijection");
        hit[s] = true;
    }
    std::vector<State> delta(a.table().size());
    for (State q = 0; q < a.num_states(); ++q) {
        for (SymbolId s = 0; s < k; ++s) delta[q * k + map[s]] = a.next(q, s);
    }
    return minimize(Dfa(a.alphabet(), a.num_states(), a.initial(), std::move(delta), a.accepting_states()));
}

StateCounts state_counts(const Dfa& a) {
    auto m = minimize(a);
    auto live = m.live_states();
    return {static_cast<std::size_t>(std::count(live.begin(), live.end(), true)), m.num_states()};
}

Dfa universal_dfa(const Alphabet& alphabet) {
    return Dfa(alphabet, 1, 0, std::vector<State>(alphabet.size(), 0), {true});
}

Dfa empty_dfa(const Alphabet& alphabet) {
    return Dfa(alphabet, 1, 0, std::vector<State>(alphabet.size(), 0), {false});
}

// -------------------------------------------------------------- words & io

Word make_word(const Alphabet& alphabet, const std::vector<std::vector<Digit>>& tracks) {
    if (tracks.size() != alphabet.arity()) throw AlphabetError("track count does not match alphabet arity");
    std::size_t len = 0;
    for (const auto& t : tracks) len = std::max(len, t.size());
    Word w(len);
    Symbol tuple(tracks.size());
    for (std::size_t i = 0; i < len; ++i) {
        for (std::size_t c = 0; c < tracks.size(); ++c) {
            std::size_t pad = len - tracks[c].size();
            tuple[c] = i < pad ? 0 : tracks[c][i - pad];
        }
        w[i] = alphabet.index(tuple);
    }
    return w;
}

std::vector<std::vector<Digit>> split_word(const Alphabet& alphabet, std::span<const SymbolId> word) {
    std::vector<std::vector<Digit>> tracks(alphabet.arity());
    for (SymbolId s : word) {
        for (std::size_t c = 0; c < alphabet.arity(); ++c) tracks[c].push_back(alphabet.digit(s, c));
    }
    return tracks;
}

std::string format_digits(std::span<const Digit> digits, bool human) {
    std::string out;
    bool wide = std::any_of(digits.begin(), digits.end(), [](Digit d) { return d < -1 || d > 9; });
    for (std::size_t i = 0; i < digits.size(); ++i) {
        Digit d = digits[i];
        if (wide && i) out += ',';
        if (d == -1 && human) {
            out += "ī";
        } else {
            out += std::to_string(d);
        }
    }
    return out;
}

std::string format_symbol(const Alphabet& alphabet, SymbolId symbol) {
    std::string out = "[";
    for (std::size_t c = 0; c < alphabet.arity(); ++c) {
        if (c) out += ',';
        out += std::to_string(alphabet.digit(symbol, c));
    }
    return out + "]";
}

std::string format_word(const Alphabet& alphabet, std::span<const SymbolId> word, bool human) {
    if (alphabet.arity() == 1) {
        std::vector<Digit> digits;
        for (SymbolId s : word) digits.push_back(alphabet.digit(s, 0));
        return format_digits(digits, human);
    }
    std::string out;
    for (SymbolId s : word) out += format_symbol(alphabet, s);
    return out;
}

void write_text(std::ostream& out, const Dfa& a) {
    const auto& alpha = a.alphabet();
    out << "alphabet: " << alpha.to_string() << '\n';
    out << "initial: " << a.initial() << '\n';
    out << "accepting:";
    for (State q = 0; q < a.num_states(); ++q) {
        if (a.accepting(q)) out << ' ' << q;
    }
    out << '\n';
    for (State q = 0; q < a.num_states(); ++q) {
        for (SymbolId s = 0; s < alpha.size(); ++s) {
            out << q << ' ' << format_symbol(alpha, s) << " -> " << a.next(q, s) << '\n';
        }
    }
}

Dfa read_text(std::istream& in) {
    std::optional<Alphabet> alpha;
    std::optional<State> initial;
    std::vector<State> accepting;
    std::map<std::pair<State, SymbolId>, State> moves;
    State max_state = 0;
    std::string line;
    std::size_t lineno = 0;
    auto fail = [&](const std::string& msg) {
        throw FormatError("line " + std::to_string(lineno) + ": " + msg);
    };
    auto parse_state = [&](const std::string& s) -> State {
        try {
            std::size_t used = 0;
            long v = std::stol(s, &used);
            if (used != s.size() || v < 0) fail("bad state id '" + s + "'");
            return static_cast<State>(v);
        } catch (const std::logic_error&) {
            fail("bad state id '" + s + "'");
        }
        return 0;
    };
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto t = trim(line);
        if (t.empty()) continue;
        if (t.rfind("alphabet:", 0) == 0) {
            try {
                alpha = Alphabet::parse(trim(t.substr(9)));
            } catch (const Error& e) {
                fail(e.what());
            }
        } else if (t.rfind("initial:", 0) == 0) {
            initial = parse_state(trim(t.substr(8)));
            max_state = std::max(max_state, *initial);
        } else if (t.rfind("accepting:", 0) == 0) {
            std::stringstream ss(t.substr(10));
            std::string id;
            while (ss >> id) {
                accepting.push_back(parse_state(id));
                max_state = std::max(max_state, accepting.back());
            }
        } else {
            if (!alpha) fail("transition before alphabet header");
            auto lb = t.find('['), rb = t.find(']'), arrow = t.find("->");
            if (lb == std::string::npos || rb == std::string::npos || arrow == std::string::npos || rb < lb ||
                arrow < rb) {
                fail("expected 'from [digits] -> to'");
            }
            State from = parse_state(trim(t.substr(0, lb)));
            State to = parse_state(trim(t.substr(arrow + 2)));
            std::vector<Digit> tuple;
            try {
                tuple = parse_digit_list(t.substr(lb + 1, rb - lb - 1));
            } catch (const Error& e) {
                fail(e.what());
            }
            auto sym = alpha->find(tuple);
            if (!sym) fail("symbol not in alphabet");
            if (!moves.emplace(std::pair{from, *sym}, to).second) fail("duplicate transition");
            max_state = std::max({max_state, from, to});
        }
    }
    if (!alpha) throw FormatError("missing alphabet header");
    if (!initial) throw FormatError("missing initial state");
    const std::size_t n = static_cast<std::size_t>(max_state) + 1;
    std::vector<State> delta(n * alpha->size());
    for (State q = 0; q < n; ++q) {
        for (SymbolId s = 0; s < alpha->size(); ++s) {
            auto it = moves.find({q, s});
            if (it == moves.end()) {
                throw FormatError("missing transition from " + std::to_string(q) + " on " +
                                  format_symbol(*alpha, s));
            }
            delta[q * alpha->size() + s] = it->second;
        }
    }
    std::vector<bool> acc(n, false);
    for (State q : accepting) acc[q] = true;
    return Dfa(*alpha, n, *initial, std::move(delta), std::move(acc));
}

void write_dot(std::ostream& out, const Dfa& a, std::string_view name, bool trim_dead) {
    const auto& alpha = a.alphabet();
    auto live = a.live_states();
    auto shown = [&](State q) { return !trim_dead || live[q]; };
    out << "digraph \"" << name << "\" {\n  rankdir=LR;\n  node [shape=circle];\n";
    out << "  __start [shape=point];\n  __start -> " << a.initial() << ";\n";
    for (State q = 0; q < a.num_states(); ++q) {
        if (!shown(q)) continue;
        out << "  " << q << " [shape=" << (a.accepting(q) ? "doublecircle" : "circle") << "];\n";
    }
    for (State q = 0; q < a.num_states(); ++q) {
        if (!shown(q)) continue;
        std::map<State, std::string> labels;
        for (SymbolId s = 0; s < alpha.size(); ++s) {
            State t = a.next(q, s);
            if (!shown(t)) continue;
            auto& l = labels[t];
            if (!l.empty()) l += ", ";
            l += alpha.arity() == 1 ? std::to_string(alpha.digit(s, 0)) : format_symbol(alpha, s);
        }
        for (const auto& [t, l] : labels) {
            out << "  " << q << " -> " << t << " [label=\"" << l << "\"];\n";
        }
    }
    out << "}\n";
}

}  // namespace fibsys
