#include "fibsys/search.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <chrono>
#include <deque>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace fibsys {

using nlohmann::json;

// ------------------------------------------------------------------ shapes

namespace {

// Restricted-growth fill of table positions; state j must be named before its
// own row starts, which makes every shape initially connected and canonical.
bool fill_shapes(std::size_t n, std::size_t pos, State max_seen, Shape& shape,
                 const std::function<bool(const Shape&)>& visit) {
    if (pos == 2 * n) {
        if (max_seen + 1 != n) return true;
        bool go = visit(shape);
        ++shape.index;
        return go;
    }
    if (pos % 2 == 0 && pos / 2 > max_seen) return true;
    // remaining slots must still be able to name every state
    const std::size_t missing = n - 1 - max_seen;
    if (missing > 2 * n - pos) return true;
    const State top = std::min<State>(static_cast<State>(n - 1), max_seen + 1);
    for (State q = 0; q <= top; ++q) {
        shape.table[pos] = q;
        if (!fill_shapes(n, pos + 1, std::max(max_seen, q), shape, visit)) return false;
    }
    return true;
}

}  // namespace

void for_each_shape(std::size_t max_states, const std::function<bool(const Shape&)>& visit) {
    Shape shape;
    for (std::size_t n = 1; n <= max_states; ++n) {
        shape.states = n;
        shape.table.assign(2 * n, 0);
        if (!fill_shapes(n, 0, 0, shape, visit)) return;
    }
}

std::uint64_t count_shapes(std::size_t n) {
    if (n == 0) return 0;
    std::uint64_t count = 0;
    Shape shape;
    shape.states = n;
    shape.table.assign(2 * n, 0);
    fill_shapes(n, 0, 0, shape, [&](const Shape&) {
        ++count;
        return true;
    });
    return count;
}

Dfa shape_dfa(const Shape& shape, std::uint64_t accepting) {
    std::vector<bool> acc(shape.states);
    for (std::size_t q = 0; q < shape.states; ++q) acc[q] = (accepting >> q) & 1U;
    return Dfa(Alphabet::binary(), shape.states, 0, shape.table, std::move(acc));
}

Dfa canonical_form(const Dfa& a) {
    const std::size_t k = a.alphabet().size();
    constexpr State kUnseen = ~State{0};
    std::vector<State> number(a.num_states(), kUnseen);
    std::vector<State> order{a.initial()};
    number[a.initial()] = 0;
    for (std::size_t i = 0; i < order.size(); ++i) {
        for (SymbolId s = 0; s < k; ++s) {
            State r = a.next(order[i], s);
            if (number[r] == kUnseen) {
                number[r] = static_cast<State>(order.size());
                order.push_back(r);
            }
        }
    }
    std::vector<State> delta(order.size() * k);
    std::vector<bool> acc(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        acc[i] = a.accepting(order[i]);
        for (SymbolId s = 0; s < k; ++s) delta[i * k + s] = number[a.next(order[i], s)];
    }
    return Dfa(a.alphabet(), order.size(), 0, std::move(delta), std::move(acc));
}

std::vector<Dfa> enumerate_canonical(std::size_t k) {
    std::vector<Dfa> out;
    for_each_shape(k, [&](const Shape& s) {
        for (std::uint64_t acc = 0; acc < (std::uint64_t{1} << s.states); ++acc) out.push_back(shape_dfa(s, acc));
        return true;
    });
    return out;
}

std::string to_string(Pruning p) { return p == Pruning::Exact ? "exact" : "monotone"; }
std::string to_string(Dedup d) { return d == Dedup::ByLanguage ? "language" : "pad-closed-language"; }

// --------------------------------------------------------------- prefilter

namespace {

constexpr std::size_t kMaxSearchStates = 7;

// One bit per accepting set; 2^7 sets need two words.
struct Masks {
    std::array<std::uint64_t, 2> w{0, 0};

    Masks operator&(const Masks& o) const { return {{w[0] & o.w[0], w[1] & o.w[1]}}; }
    Masks operator|(const Masks& o) const { return {{w[0] | o.w[0], w[1] | o.w[1]}}; }
    Masks operator~() const { return {{~w[0], ~w[1]}}; }
    Masks& operator&=(const Masks& o) { return *this = *this & o; }
    Masks& operator|=(const Masks& o) { return *this = *this | o; }
    bool any() const { return (w[0] | w[1]) != 0; }
    bool test(std::uint64_t i) const { return (w[i / 64] >> (i % 64)) & 1U; }
};

// hit[E]: accepting sets meeting the state set E.
std::vector<Masks> hit_table(std::size_t n) {
    const std::size_t subsets = std::size_t{1} << n;
    std::vector<Masks> hit(subsets);
    for (std::size_t e = 0; e < subsets; ++e) {
        for (std::size_t a = 0; a < subsets; ++a) {
            if (a & e) hit[e].w[a / 64] |= std::uint64_t{1} << (a % 64);
        }
    }
    return hit;
}

Masks all_sets(std::size_t n) {
    Masks m;
    const std::size_t subsets = std::size_t{1} << n;
    for (std::size_t a = 0; a < subsets; ++a) m.w[a / 64] |= std::uint64_t{1} << (a % 64);
    return m;
}

struct Screen {
    explicit Screen(std::size_t length) : length(length), limit(static_cast<std::size_t>(fib(int(length) + 2))) {
        once.resize(limit);
        dup.resize(limit);
        for (std::size_t n = 1; n <= kMaxSearchStates; ++n) {
            hits[n] = hit_table(n);
            full[n] = all_sets(n);
        }
    }

    struct Node {
        std::uint8_t set;
        std::uint32_t value;  // value of the string
        std::uint32_t shifted;  // value with every weight moved up one place
    };

    // Accepting sets for which every value below F_{length+2} has exactly one
    // representation (leading zeros ignored).
    Masks run(const Shape& shape, bool monotone) {
        const std::size_t n = shape.states;
        const std::size_t subsets = std::size_t{1} << n;
        for (int d = 0; d < 2; ++d) {
            img[d][0] = 0;
            for (std::size_t e = 1; e < subsets; ++e) {
                const std::size_t low = std::countr_zero(e);
                img[d][e] = img[d][e & (e - 1)] | std::uint8_t(1U << shape.table[2 * low + d]);
            }
        }
        std::uint8_t start = 0;
        for (State q = 0; !(start >> q & 1U); q = shape.table[2 * q]) start |= std::uint8_t(1U << q);

        const auto& hit = hits[n];
        Masks alive = hit[start] & full[n];
        if (!alive.any()) return alive;

        std::size_t touched = 0;
        frontier.assign(1, Node{img[1][start], 1, 2});
        std::size_t done = 1;  // values below `done` are final
        for (std::size_t len = 1; len <= length && alive.any(); ++len) {
            if (len > 1) {
                next.clear();
                for (const Node& v : frontier) {
                    for (std::uint32_t d = 0; d < 2; ++d) {
                        next.push_back(Node{img[d][v.set], v.shifted + d, v.shifted + v.value + 2 * d});
                    }
                }
                frontier.swap(next);
            }
            for (const Node& v : frontier) {
                if (v.value >= limit) continue;
                const Masks h = hit[v.set] & alive;
                dup[v.value] |= once[v.value] & h;
                once[v.value] |= h;
                touched = std::max<std::size_t>(touched, v.value + 1);
            }
            const auto final_below = std::min<std::size_t>(limit, static_cast<std::size_t>(fib(int(len) + 2)));
            for (; done < final_below; ++done) alive &= once[done] & ~dup[done];
            if (monotone) {
                // a value covered by strings of length <= len while a smaller one is not
                for (std::size_t v = done; v + 1 < touched; ++v) alive &= ~(once[v + 1] & ~once[v]);
            }
        }
        std::fill(once.begin(), once.begin() + static_cast<std::ptrdiff_t>(touched), Masks{});
        std::fill(dup.begin(), dup.begin() + static_cast<std::ptrdiff_t>(touched), Masks{});
        return alive;
    }

    std::size_t length;
    std::size_t limit;
    std::array<std::vector<Masks>, kMaxSearchStates + 1> hits;
    std::array<Masks, kMaxSearchStates + 1> full;
    std::array<std::array<std::uint8_t, 1U << kMaxSearchStates>, 2> img{};
    std::vector<Masks> once, dup;
    std::vector<Node> frontier, next;
};

struct Candidate {
    std::uint64_t shape_index;
    std::uint64_t accepting;
    Dfa raw;
};

void screen_slice(const std::vector<Shape>& shapes, std::size_t begin, std::size_t end, std::size_t length,
                  bool monotone, std::vector<Candidate>& out) {
    Screen screen(length);
    for (std::size_t i = begin; i < end; ++i) {
        const Shape& s = shapes[i];
        const Masks alive = screen.run(s, monotone);
        if (!alive.any()) continue;
        for (std::uint64_t acc = 0; acc < (std::uint64_t{1} << s.states); ++acc) {
            if (alive.test(acc)) out.push_back({s.index, acc, shape_dfa(s, acc)});
        }
    }
}

std::string dfa_text(const Dfa& a) {
    std::ostringstream out;
    write_text(out, a);
    return out.str();
}

json config_json(const SearchConfig& cfg) {
    return {{"type", "config"},
            {"max_states", cfg.max_states},
            {"pruning", to_string(cfg.pruning)},
            {"dedup", to_string(cfg.dedup)},
            {"prefilter_length", cfg.prefilter_length}};
}

SearchResult make_result(const Candidate& c, Dfa pad_closed, PerfectionReport report, std::size_t samples) {
    SearchResult r;
    r.shape_index = c.shape_index;
    r.accepting = c.accepting;
    r.dfa = std::move(pad_closed);
    r.report = std::move(report);
    SystemSpec sys("search", r.dfa, ConverterSpec{});
    for (std::size_t n = 0; n < samples; ++n) {
        r.samples.emplace_back(static_cast<std::int64_t>(n), find_representation(sys, static_cast<std::int64_t>(n)));
    }
    return r;
}

}  // namespace

// ------------------------------------------------------------------ search

SearchOutcome search_perfect(const SearchConfig& cfg) {
    if (cfg.max_states < 1 || cfg.max_states > kMaxSearchStates) {
        throw Error("max_states must be between 1 and " + std::to_string(kMaxSearchStates));
    }
    if (cfg.prefilter_length < 2 || cfg.prefilter_length > 40) throw Error("prefilter_length must be in 2..40");
    const auto start = std::chrono::steady_clock::now();
    auto elapsed_s = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };

    SearchOutcome out;
    out.exhaustive = cfg.pruning == Pruning::Exact;
    for (std::size_t n = 1; n <= cfg.max_states; ++n) out.shapes_total += count_shapes(n);

    // keys of pad-closed languages already judged
    std::map<std::vector<State>, bool> judged;
    std::map<std::pair<std::vector<State>, std::vector<bool>>, bool> seen_raw;
    auto key = [](const Dfa& a) {
        std::vector<State> k = a.table();
        for (bool b : a.accepting_states()) k.push_back(b ? 1 : 0);
        return k;
    };

    std::uint64_t resume_from = 0;
    std::ofstream log;
    if (!cfg.log_path.empty()) {
        if (cfg.resume) {
            std::ifstream in(cfg.log_path);
            if (!in) throw Error("cannot open search log " + cfg.log_path);
            std::vector<SearchResult> pending;
            std::vector<std::string> kept, tail;
            std::string line;
            bool header_ok = false;
            while (std::getline(in, line)) {
                if (line.empty()) continue;
                json j = json::parse(line);
                const std::string type = j.at("type");
                tail.push_back(line);
                if (type == "config") {
                    if (j != config_json(cfg)) throw Error("search log was written with a different configuration");
                    header_ok = true;
                } else if (type == "system") {
                    pending.push_back(result_from_json(line));
                } else if (type == "checkpoint") {
                    resume_from = j.at("next_shape").get<std::uint64_t>();
                    for (auto& r : pending) {
                        judged[key(r.dfa)] = true;
                        out.results.push_back(std::move(r));
                    }
                    pending.clear();
                    kept.insert(kept.end(), tail.begin(), tail.end());
                    tail.clear();
                }
            }
            if (!header_ok) throw Error("search log has no configuration header");
            in.close();
            // drop whatever followed the last checkpoint
            std::ofstream rewrite(cfg.log_path, std::ios::trunc);
            if (kept.empty()) rewrite << config_json(cfg).dump() << '\n';
            for (const auto& l : kept) rewrite << l << '\n';
            rewrite.close();
            log.open(cfg.log_path, std::ios::app);
        } else {
            log.open(cfg.log_path, std::ios::trunc);
            if (log) log << config_json(cfg).dump() << '\n';
        }
        if (!log) throw Error("cannot write search log " + cfg.log_path);
    }

    const unsigned workers = std::max(1U, cfg.workers);
    const std::size_t round_size = std::size_t{workers} * 16384;
    std::vector<Shape> round;
    round.reserve(round_size);

    auto process_round = [&] {
        std::vector<std::vector<Candidate>> found(workers);
        const std::size_t per = (round.size() + workers - 1) / workers;
        const bool monotone = cfg.pruning == Pruning::Monotone;
        if (workers == 1) {
            screen_slice(round, 0, round.size(), cfg.prefilter_length, monotone, found[0]);
        } else {
            std::vector<std::thread> pool;
            for (unsigned w = 0; w < workers; ++w) {
                const std::size_t b = std::min(round.size(), w * per), e = std::min(round.size(), b + per);
                pool.emplace_back(screen_slice, std::cref(round), b, e, cfg.prefilter_length, monotone,
                                  std::ref(found[w]));
            }
            for (auto& t : pool) t.join();
        }
        // slices are contiguous and in order, so concatenation keeps canonical order
        for (auto& slice : found) {
            for (auto& c : slice) {
                ++out.candidates;
                if (cfg.dedup == Dedup::ByLanguage) {
                    Dfa m = minimize(c.raw);
                    if (!seen_raw.emplace(std::pair{m.table(), m.accepting_states()}, true).second) continue;
                }
                Dfa closed = pad_normalize(c.raw);
                auto [it, fresh] = judged.try_emplace(key(closed), false);
                if (!fresh && cfg.dedup == Dedup::ByPadClosedLanguage) continue;
                if (fresh) {
                    PerfectionReport report = check_perfect(SystemSpec("search", closed, ConverterSpec{}));
                    it->second = report.perfect();
                    if (!report.perfect()) continue;
                    out.results.push_back(make_result(c, std::move(closed), std::move(report), cfg.sample_count));
                } else if (it->second) {
                    PerfectionReport report = check_perfect(SystemSpec("search", closed, ConverterSpec{}));
                    out.results.push_back(make_result(c, std::move(closed), std::move(report), cfg.sample_count));
                } else {
                    continue;
                }
                if (log) log << result_to_json(out.results.back()) << '\n';
            }
        }
        out.shapes_done += round.size();
        if (log) {
            const std::uint64_t next_shape = round.back().index + 1;
            log << json{{"type", "checkpoint"}, {"next_shape", next_shape}}.dump() << '\n';
            log.flush();
        }
        round.clear();
    };

    for_each_shape(cfg.max_states, [&](const Shape& s) {
        if (s.index < resume_from) {
            ++out.shapes_done;
            return true;
        }
        round.push_back(s);
        if (round.size() == round_size) {
            process_round();
            if (cfg.time_budget_s && elapsed_s() > *cfg.time_budget_s) {
                out.budget_exhausted = true;
                return false;
            }
        }
        return true;
    });
    if (!round.empty()) process_round();

    out.elapsed_ms = elapsed_s() * 1000.0;
    if (log) {
        log << json{{"type", "done"},
                    {"exhaustive", out.exhaustive},
                    {"budget_exhausted", out.budget_exhausted},
                    {"shapes_done", out.shapes_done},
                    {"shapes_total", out.shapes_total},
                    {"results", out.results.size()}}
                   .dump()
            << '\n';
    }
    return out;
}

std::string result_to_json(const SearchResult& r) {
    json samples = json::array();
    for (const auto& [n, rep] : r.samples) samples.push_back(json::array({n, rep.str()}));
    const StateCounts counts = state_counts(r.dfa);
    json j{{"type", "system"},
           {"shape", r.shape_index},
           {"accepting", r.accepting},
           {"states", {{"trimmed", counts.trimmed}, {"complete", counts.complete}}},
           {"dfa", dfa_text(r.dfa)},
           {"report", json::parse(report_to_json(r.report))},
           {"samples", samples}};
    return j.dump();
}

SearchResult result_from_json(const std::string& line) {
    try {
        json j = json::parse(line);
        SearchResult r;
        r.shape_index = j.at("shape").get<std::uint64_t>();
        r.accepting = j.at("accepting").get<std::uint64_t>();
        std::istringstream text(j.at("dfa").get<std::string>());
        r.dfa = read_text(text);
        r.report = report_from_json(j.at("report").dump());
        for (const auto& s : j.at("samples")) {
            r.samples.emplace_back(s.at(0).get<std::int64_t>(), RepString::parse(s.at(1).get<std::string>()));
        }
        return r;
    } catch (const json::exception& e) {
        throw FormatError(std::string("bad search record: ") + e.what());
    }
}

}  // namespace fibsys
