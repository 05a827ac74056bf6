// Naive search oracle: every complete binary DFA table up to k states, no
// canonicalization, screened by direct simulation and then checked exactly.
#pragma once

#include <set>
#include <sstream>
#include <string>

#include "oracles.hpp"

namespace oracle {

inline std::string text_of(const fibsys::Dfa& a) {
    std::ostringstream s;
    fibsys::write_text(s, a);
    return s.str();
}

inline void each_table(std::size_t n, const std::function<void(const std::vector<int>&)>& f) {
    std::vector<int> t(2 * n, 0);
    while (true) {
        f(t);
        std::size_t i = 0;
        while (i < t.size() && ++t[i] == static_cast<int>(n)) t[i++] = 0;
        if (i == t.size()) return;
    }
}

// Necessary condition for perfection, evaluated by direct simulation: every
// n <= 20 has exactly one representation among stripped strings of length <= 8
// (any representation of such n is at most 7 digits long).
inline bool naive_screen(std::size_t n, const std::vector<int>& table, unsigned mask) {
    unsigned starts = 0;
    int q = 0;
    for (std::size_t k = 0; k <= n; ++k) {
        starts |= 1U << q;
        q = table[2 * q];
    }
    auto step = [&](unsigned set, int d) {
        unsigned out = 0;
        for (std::size_t s = 0; s < n; ++s) {
            if (set >> s & 1) out |= 1U << table[2 * s + d];
        }
        return out;
    };
    int count[21] = {};
    if (starts & mask) ++count[0];
    bool ok = true;
    std::function<void(unsigned, std::size_t, std::int64_t, std::int64_t)> rec = [&](unsigned set, std::size_t len,
                                                                                      std::int64_t v, std::int64_t s) {
        // (v, s) = (value at anchor F_2, value one place up) of the digits so far
        if (!ok) return;
        if (len > 0 && (set & mask) && v <= 20 && ++count[v] > 1) ok = false;
        if (len == 8) return;
        for (int d = 0; d < 2; ++d) {
            if (len == 0 && d == 0) continue;
            rec(step(set, d), len + 1, s + d, s + v + 2 * d);
        }
    };
    rec(starts, 0, 0, 0);
    if (!ok) return false;
    for (int v = 0; v <= 20; ++v) {
        if (count[v] != 1) return false;
    }
    return true;
}

// All pad-closed languages of complete DFAs with <= k states (no
// canonicalization) passing the screen and then check_perfect.
inline std::set<std::string> naive_perfect(std::size_t k) {
    std::set<std::string> candidates, perfect;
    for (std::size_t n = 1; n <= k; ++n) {
        each_table(n, [&](const std::vector<int>& t) {
            for (unsigned mask = 0; mask < (1U << n); ++mask) {
                if (!naive_screen(n, t, mask)) continue;
                std::vector<fibsys::State> delta(t.begin(), t.end());
                std::vector<bool> acc(n);
                for (std::size_t q = 0; q < n; ++q) acc[q] = mask >> q & 1;
                candidates.insert(text_of(fibsys::pad_normalize(fibsys::Dfa(fibsys::Alphabet::binary(), n, 0, delta, acc))));
            }
        });
    }
    for (const auto& c : candidates) {
        std::istringstream in(c);
        if (fibsys::check_perfect(fibsys::SystemSpec("naive", fibsys::read_text(in), fibsys::ConverterSpec{})).perfect()) perfect.insert(c);
    }
    return perfect;
}

}  // namespace oracle
