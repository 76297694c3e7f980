#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "germlab/words.hpp"

namespace germlab {

// Signed reference to a named generator: index+1, negated for inverses.
// Used only for display words; the algebra runs on machines.
using GenTok = std::int32_t;
using TokenWord = std::vector<GenTok>;

inline GenTok tok_inverse(GenTok t) { return -t; }

inline TokenWord word_inverse(const TokenWord& w) {
    TokenWord out(w.rbegin(), w.rend());
    for (GenTok& t : out) t = -t;
    return out;
}

// Concatenate and freely reduce (drop adjacent x x^-1 pairs).
inline TokenWord word_concat(const TokenWord& a, const TokenWord& b) {
    TokenWord out;
    out.reserve(a.size() + b.size());
    auto push = [&out](GenTok t) {
        if (!out.empty() && out.back() == -t)
            out.pop_back();
        else
            out.push_back(t);
    };
    for (GenTok t : a) push(t);
    for (GenTok t : b) push(t);
    return out;
}

// One state of a finite-state tree automorphism: the permutation its
// subtree action induces on the first letter, and the state acting on
// the subtree below letter i (the section at i, in slot i).
struct RawState {
    std::vector<Letter> perm;
    std::vector<int> succ;
    std::optional<TokenWord> word;
};

struct RawMachine {
    int degree = 2;
    std::vector<RawState> states;
    int initial = 0;
};

inline bool is_permutation(const std::vector<Letter>& p) {
    std::vector<bool> seen(p.size(), false);
    for (Letter x : p) {
        if (x < 0 || static_cast<std::size_t>(x) >= p.size() || seen[x]) return false;
        seen[x] = true;
    }
    return true;
}

inline void validate_machine(const RawMachine& m) {
    require(m.degree >= 2, "machine degree must be at least 2");
    require(!m.states.empty(), "machine has no states");
    require(m.initial >= 0 && static_cast<std::size_t>(m.initial) < m.states.size(),
            "machine initial state out of range");
    for (const RawState& s : m.states) {
        require(s.perm.size() == static_cast<std::size_t>(m.degree) &&
                    s.succ.size() == static_cast<std::size_t>(m.degree),
                "machine state has wrong arity");
        require(is_permutation(s.perm), "state root permutation is not a bijection");
        for (int t : s.succ)
            require(t >= 0 && static_cast<std::size_t>(t) < m.states.size(),
                    "state successor out of range");
    }
}

// Evaluate the machine action on a finite word without any rewriting:
// apply(s, a.t) = perm_s(a) . apply(succ_s(a), t).
inline Word machine_apply(const RawMachine& m, const Word& w) {
    Word out;
    out.letters.reserve(w.size());
    int cur = m.initial;
    for (Letter a : w.letters) {
        const RawState& s = m.states[cur];
        out.push_back(s.perm[a]);
        cur = s.succ[a];
    }
    return out;
}

// Coarsest bisimulation quotient of the part reachable from the initial
// state, followed by a canonical BFS relabeling (letters ascending).
// Two automorphisms are equal iff canonicalization yields identical
// machines, which is what the interning layer keys on.
inline RawMachine minimize_machine(const RawMachine& m) {
    // reachable restriction
    std::vector<int> order;
    std::vector<int> index(m.states.size(), -1);
    order.push_back(m.initial);
    index[m.initial] = 0;
    for (std::size_t i = 0; i < order.size(); ++i) {
        for (int t : m.states[order[i]].succ) {
            if (index[t] < 0) {
                index[t] = static_cast<int>(order.size());
                order.push_back(t);
            }
        }
    }
    std::size_t n = order.size();

    // partition refinement on (perm, successor-class vector) signatures
    std::vector<int> cls(n, 0);
    {
        std::map<std::vector<Letter>, int> by_perm;
        for (std::size_t i = 0; i < n; ++i) {
            auto [it, _] = by_perm.try_emplace(m.states[order[i]].perm,
                                               static_cast<int>(by_perm.size()));
            cls[i] = it->second;
        }
    }
    for (;;) {
        std::map<std::pair<int, std::vector<int>>, int> sig_index;
        std::vector<int> next(n);
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<int> succ_cls(m.degree);
            for (int a = 0; a < m.degree; ++a)
                succ_cls[a] = cls[index[m.states[order[i]].succ[a]]];
            auto [it, _] = sig_index.try_emplace({cls[i], std::move(succ_cls)},
                                                 static_cast<int>(sig_index.size()));
            next[i] = it->second;
        }
        if (next == cls) break;
        cls = std::move(next);
    }

    // canonical BFS over classes from the initial state's class
    int nclasses = 1 + *std::max_element(cls.begin(), cls.end());
    std::vector<int> repr(nclasses, -1);
    for (std::size_t i = n; i-- > 0;) repr[cls[i]] = static_cast<int>(i);

    std::vector<int> bfs_id(nclasses, -1);
    std::vector<int> bfs_order;
    bfs_id[cls[0]] = 0;
    bfs_order.push_back(cls[0]);
    for (std::size_t i = 0; i < bfs_order.size(); ++i) {
        const RawState& s = m.states[order[repr[bfs_order[i]]]];
        for (int a = 0; a < m.degree; ++a) {
            int c = cls[index[s.succ[a]]];
            if (bfs_id[c] < 0) {
                bfs_id[c] = static_cast<int>(bfs_order.size());
                bfs_order.push_back(c);
            }
        }
    }

    RawMachine out;
    out.degree = m.degree;
    out.initial = 0;
    out.states.resize(bfs_order.size());
    for (std::size_t k = 0; k < bfs_order.size(); ++k) {
        const RawState& s = m.states[order[repr[bfs_order[k]]]];
        RawState& t = out.states[k];
        t.perm = s.perm;
        t.succ.resize(m.degree);
        for (int a = 0; a < m.degree; ++a)
            t.succ[a] = bfs_id[cls[index[s.succ[a]]]];
        // keep the word of the BFS-first original state in the class
        for (std::size_t i = 0; i < n; ++i) {
            if (cls[i] == bfs_order[k] && m.states[order[i]].word) {
                t.word = m.states[order[i]].word;
                break;
            }
        }
    }
    return out;
}

// Byte encoding of a canonical machine; equal encodings = equal actions.
inline std::string encode_machine(const RawMachine& m) {
    std::string out;
    out.reserve(m.states.size() * m.degree * 8 + 8);
    auto put = [&out](std::uint32_t v) {
        for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
    };
    put(static_cast<std::uint32_t>(m.degree));
    for (const RawState& s : m.states) {
        for (Letter a : s.perm) put(static_cast<std::uint32_t>(a));
        for (int t : s.succ) put(static_cast<std::uint32_t>(t));
    }
    return out;
}

} // namespace germlab
