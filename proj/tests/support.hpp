#pragma once

// Test-only helpers: an evaluator that works straight off the generator
// recursions (independent of the machine/minimization path it checks),
// plus random machine generation and the two tuple-order evaluators.

#include <random>
#include <set>
#include <vector>

#include "germlab/group.hpp"

namespace oracle {

using germlab::GroupSpec;
using germlab::Letter;
using germlab::TokenWord;
using germlab::Word;

// Image of one letter and the section word there, for a formal word over
// the recursions; factors act rightmost-first.
inline std::pair<TokenWord, Letter> step(const GroupSpec& spec, const TokenWord& w, Letter a) {
    std::vector<TokenWord> parts(w.size());
    Letter cur = a;
    for (std::size_t i = w.size(); i-- > 0;) {
        const germlab::GeneratorDef& g = spec.generators[std::abs(w[i]) - 1];
        if (w[i] > 0) {
            parts[i] = g.sections[cur];
            cur = g.perm[cur];
        } else {
            std::vector<Letter> inv(spec.degree);
            for (int x = 0; x < spec.degree; ++x) inv[g.perm[x]] = x;
            parts[i] = germlab::word_inverse(g.sections[inv[cur]]);
            cur = inv[cur];
        }
    }
    TokenWord sect;
    for (const TokenWord& p : parts)
        sect.insert(sect.end(), p.begin(), p.end());
    return {sect, cur};
}

inline Word apply(const GroupSpec& spec, TokenWord w, const Word& input) {
    Word out;
    for (Letter a : input.letters) {
        auto [sect, image] = step(spec, w, a);
        out.push_back(image);
        w = std::move(sect);
    }
    return out;
}

inline TokenWord section(const GroupSpec& spec, TokenWord w, const Word& at) {
    for (Letter a : at.letters) w = step(spec, w, a).first;
    return w;
}

inline void all_words(int degree, int length, std::vector<Word>& out, Word& scratch) {
    if (length == 0) {
        out.push_back(scratch);
        return;
    }
    for (Letter a = 0; a < degree; ++a) {
        scratch.push_back(a);
        all_words(degree, length - 1, out, scratch);
        scratch.letters.pop_back();
    }
}

inline std::vector<Word> words_of_length(int degree, int length) {
    std::vector<Word> out;
    Word scratch;
    all_words(degree, length, out, scratch);
    return out;
}

inline bool equal_to_depth(const GroupSpec& spec, const TokenWord& u, const TokenWord& v,
                           int depth) {
    for (const Word& w : words_of_length(spec.degree, depth))
        if (apply(spec, u, w) != apply(spec, v, w)) return false;
    return true;
}

inline bool identity_to_depth(const GroupSpec& spec, const TokenWord& u, int depth) {
    for (const Word& w : words_of_length(spec.degree, depth))
        if (apply(spec, u, w) != w) return false;
    return true;
}

} // namespace oracle

namespace testgen {

using germlab::Letter;
using germlab::RawMachine;
using germlab::RawState;
using germlab::Word;

inline RawMachine random_machine(std::mt19937_64& rng, int degree, int max_states = 5) {
    RawMachine m;
    m.degree = degree;
    int n = 1 + static_cast<int>(rng() % max_states);
    for (int s = 0; s < n; ++s) {
        RawState st;
        st.perm.resize(degree);
        for (int a = 0; a < degree; ++a) st.perm[a] = a;
        std::shuffle(st.perm.begin(), st.perm.end(), rng);
        st.succ.resize(degree);
        for (int a = 0; a < degree; ++a) st.succ[a] = static_cast<int>(rng() % n);
        m.states.push_back(std::move(st));
    }
    m.initial = 0;
    return m;
}

inline Word random_word(std::mt19937_64& rng, int degree, int length) {
    Word w;
    for (int i = 0; i < length; ++i) w.push_back(static_cast<Letter>(rng() % degree));
    return w;
}

// Evaluator in tuple-then-permutation order: the tuple entry in slot j
// acts below output letter j, so the machine's section at a is
// tuple[perm[a]].
inline Word apply_perm_first(const RawMachine& m, int state, const Word& w) {
    Word out;
    int cur = state;
    for (Letter a : w.letters) {
        const RawState& s = m.states[cur];
        Letter image = s.perm[a];
        out.push_back(image);
        std::vector<int> tuple(m.degree);
        std::vector<Letter> inv(m.degree);
        for (int x = 0; x < m.degree; ++x) inv[s.perm[x]] = x;
        for (int j = 0; j < m.degree; ++j) tuple[j] = s.succ[inv[j]];
        cur = tuple[image];
    }
    return out;
}

// Evaluator in permutation-then-tuple order: the tuple entry in slot a
// acts below input letter a.
inline Word apply_tuple_first(const RawMachine& m, int state, const Word& w) {
    Word out;
    int cur = state;
    for (Letter a : w.letters) {
        const RawState& s = m.states[cur];
        out.push_back(s.perm[a]);
        cur = s.succ[a];
    }
    return out;
}

} // namespace testgen
