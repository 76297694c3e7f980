#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <unordered_map>
#include <vector>

#include "germlab/machine.hpp"

namespace germlab {

using ElemId = std::uint32_t;

class Context;

// Handle to a canonical tree automorphism inside one Context.  Equality
// of handles is equality of automorphisms.
struct Element {
    Context* ctx = nullptr;
    ElemId id = 0;

    bool operator==(const Element& o) const { return ctx == o.ctx && id == o.id; }
    bool operator!=(const Element& o) const { return !(*this == o); }
};

struct LevelNormalForm {
    int level = 0;
    std::vector<std::uint32_t> perm;  // lexicographic vertex indexing
    std::vector<Element> sections;    // lexicographic word order
};

// Store of canonical minimized machines.  Every state of every interned
// machine is itself an element, so sections are table lookups and two
// elements are equal exactly when their ids coincide.
class Context {
  public:
    explicit Context(int degree) : alphabet_(degree) {
        RawMachine id_machine;
        id_machine.degree = degree;
        RawState s;
        s.perm.resize(degree);
        s.succ.assign(degree, 0);
        for (int a = 0; a < degree; ++a) s.perm[a] = a;
        s.word = TokenWord{};
        id_machine.states.push_back(std::move(s));
        ElemId id = intern(id_machine);
        check_invariant(id == 0, "identity must intern as id 0");
    }

    Context(const Context&) = delete;
    Context& operator=(const Context&) = delete;

    int degree() const { return alphabet_.degree; }
    const Alphabet& alphabet() const { return alphabet_; }
    std::size_t size() const { return nodes_.size(); }

    Element identity() { return {this, 0}; }
    Element element(ElemId id) { return {this, id}; }

    const std::vector<Letter>& root_perm(ElemId id) const { return nodes_[id].perm; }
    ElemId succ(ElemId id, Letter a) const { return nodes_[id].succ[a]; }
    const std::optional<TokenWord>& token_word(ElemId id) const { return words_[id]; }

    // Minimize, canonicalize and intern a raw machine; returns the id of
    // its initial state.  Every state of the canonical machine becomes an
    // interned element.
    ElemId intern(const RawMachine& machine) {
        validate_machine(machine);
        require(machine.degree == degree(), "machine degree does not match context alphabet");
        RawMachine canon = minimize_machine(machine);
        std::size_t n = canon.states.size();

        std::lock_guard<std::mutex> lock(mutex_);
        std::vector<std::string> enc(n);
        std::vector<ElemId> mapped(n);
        std::vector<bool> fresh(n, false);
        for (std::size_t k = 0; k < n; ++k) {
            enc[k] = pointed_encoding(canon, static_cast<int>(k));
            auto it = index_.find(enc[k]);
            if (it != index_.end()) {
                mapped[k] = it->second;
            } else {
                fresh[k] = true;
                mapped[k] = static_cast<ElemId>(nodes_.size());
                nodes_.emplace_back();
                words_.emplace_back(canon.states[k].word);
                index_.emplace(enc[k], mapped[k]);
            }
        }
        for (std::size_t k = 0; k < n; ++k) {
            if (!fresh[k]) continue;
            Node& node = nodes_[mapped[k]];
            node.perm = canon.states[k].perm;
            node.succ.resize(degree());
            for (int a = 0; a < degree(); ++a)
                node.succ[a] = mapped[canon.states[k].succ[a]];
        }
        return mapped[0];
    }

    // Element with root permutation `perm` and the section at letter a
    // given by succ_elems[a].
    ElemId make_sections(const std::vector<Letter>& perm, const std::vector<ElemId>& succ_elems) {
        require(perm.size() == static_cast<std::size_t>(degree()) &&
                    succ_elems.size() == static_cast<std::size_t>(degree()),
                "wrong arity for wreath form");
        require(is_permutation(perm), "root permutation is not a bijection");
        std::map<ElemId, int> pos;
        RawMachine m = snapshot(succ_elems, pos);
        RawState root;
        root.perm = perm;
        root.succ.resize(degree());
        for (int a = 0; a < degree(); ++a) root.succ[a] = pos.at(succ_elems[a]) + 1;
        m.states.insert(m.states.begin(), std::move(root));
        for (std::size_t i = 1; i < m.states.size(); ++i)
            for (int& t : m.states[i].succ) ++t;
        m.initial = 0;
        return intern(m);
    }

    // Element written in tuple-then-permutation form: slot j of the tuple
    // is the section at the preimage of j, so the section at a is
    // tuple[perm[a]].
    ElemId make_wreath(const std::vector<Letter>& perm, const std::vector<ElemId>& tuple) {
        require(tuple.size() == static_cast<std::size_t>(degree()), "wrong tuple arity");
        require(perm.size() == static_cast<std::size_t>(degree()) && is_permutation(perm),
                "root permutation is not a bijection");
        std::vector<ElemId> succ_elems(degree());
        for (int a = 0; a < degree(); ++a) succ_elems[a] = tuple[perm[a]];
        return make_sections(perm, succ_elems);
    }

    // gh acts by h first; (gh)|_a = g|_{h(a)} . h|_a.
    ElemId compose(ElemId g, ElemId h) {
        if (g == 0) return h;
        if (h == 0) return g;
        {
            std::lock_guard<std::mutex> lock(mutex_);
            auto it = product_cache_.find({g, h});
            if (it != product_cache_.end()) return it->second;
        }
        std::map<std::pair<ElemId, ElemId>, int> pos;
        std::vector<std::pair<ElemId, ElemId>> pairs{{g, h}};
        pos[{g, h}] = 0;
        RawMachine m;
        m.degree = degree();
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            auto [x, y] = pairs[i];
            RawState s;
            s.perm.resize(degree());
            s.succ.resize(degree());
            for (int a = 0; a < degree(); ++a) {
                Letter b = nodes_[y].perm[a];
                s.perm[a] = nodes_[x].perm[b];
                auto key = std::make_pair(nodes_[x].succ[b], nodes_[y].succ[a]);
                auto [it, inserted] = pos.try_emplace(key, static_cast<int>(pairs.size()));
                if (inserted) pairs.push_back(key);
                s.succ[a] = it->second;
            }
            if (words_[x] && words_[y]) s.word = word_concat(*words_[x], *words_[y]);
            m.states.push_back(std::move(s));
        }
        last_product_pairs_ = pairs.size();
        check_invariant(pairs.size() <= static_cast<std::size_t>(state_count(g)) * state_count(h),
                        "product exploration exceeded the state-pair bound");
        ElemId r = intern(m);
        std::lock_guard<std::mutex> lock(mutex_);
        product_cache_.emplace(std::make_pair(g, h), r);
        return r;
    }

    // (g^-1)|_a = (g|_{g^-1(a)})^-1.
    ElemId inverse(ElemId g) {
        if (g == 0) return 0;
        {
            std::lock_guard<std::mutex> lock(mutex_);
            auto it = inverse_cache_.find(g);
            if (it != inverse_cache_.end()) return it->second;
        }
        std::vector<ElemId> order{g};
        std::map<ElemId, int> pos{{g, 0}};
        RawMachine m;
        m.degree = degree();
        for (std::size_t i = 0; i < order.size(); ++i) {
            ElemId x = order[i];
            std::vector<Letter> inv_perm(degree());
            for (int a = 0; a < degree(); ++a) inv_perm[nodes_[x].perm[a]] = a;
            RawState s;
            s.perm = inv_perm;
            s.succ.resize(degree());
            for (int a = 0; a < degree(); ++a) {
                ElemId child = nodes_[x].succ[inv_perm[a]];
                auto [it, inserted] = pos.try_emplace(child, static_cast<int>(order.size()));
                if (inserted) order.push_back(child);
                s.succ[a] = it->second;
            }
            if (words_[x]) s.word = word_inverse(*words_[x]);
            m.states.push_back(std::move(s));
        }
        ElemId r = intern(m);
        std::lock_guard<std::mutex> lock(mutex_);
        inverse_cache_.emplace(g, r);
        inverse_cache_.emplace(r, g);
        return r;
    }

    // Binary exponentiation; every partial product is interned, so the
    // machine is re-minimized after each squaring.
    ElemId power(ElemId g, long long k) {
        if (k < 0) return power(inverse(g), -k);
        ElemId acc = 0;
        ElemId base = g;
        while (k > 0) {
            if (k & 1) acc = compose(acc, base);
            k >>= 1;
            if (k > 0) base = compose(base, base);
        }
        return acc;
    }

    Word apply(ElemId g, const Word& w) const {
        check_word(alphabet_, w);
        Word out;
        out.letters.reserve(w.size());
        ElemId cur = g;
        for (Letter a : w.letters) {
            out.push_back(nodes_[cur].perm[a]);
            cur = nodes_[cur].succ[a];
        }
        return out;
    }

    ElemId section(ElemId g, const Word& w) const {
        check_word(alphabet_, w);
        ElemId cur = g;
        for (Letter a : w.letters) cur = nodes_[cur].succ[a];
        return cur;
    }

    bool is_identity(ElemId g) const { return g == 0; }

    // Shortest moved word, lexicographically smallest among shortest;
    // nullopt when g is the identity or nothing moves within max_len.
    std::optional<Word> moved_word(ElemId g, std::size_t max_len = SIZE_MAX) const {
        struct Item {
            ElemId state;
            int parent;
            Letter via;
            std::size_t depth;
        };
        std::vector<Item> bfs{{g, -1, 0, 0}};
        std::set<ElemId> seen{g};
        for (std::size_t i = 0; i < bfs.size(); ++i) {
            Item it = bfs[i];
            if (it.depth + 1 > max_len) break;
            const Node& node = nodes_[it.state];
            for (int a = 0; a < degree(); ++a) {
                if (node.perm[a] != a) {
                    Word w;
                    w.letters.resize(it.depth + 1);
                    w.letters[it.depth] = a;
                    int p = static_cast<int>(i);
                    for (std::size_t pos = it.depth; pos-- > 0;) {
                        w.letters[pos] = bfs[p].via;
                        p = bfs[p].parent;
                    }
                    return w;
                }
            }
            for (int a = 0; a < degree(); ++a) {
                ElemId t = node.succ[a];
                if (seen.insert(t).second)
                    bfs.push_back({t, static_cast<int>(i), a, it.depth + 1});
            }
        }
        return std::nullopt;
    }

    // True iff g fixes every word of length <= n (trivial level-n action).
    bool trivial_to_level(ElemId g, std::size_t n) const {
        return !moved_word(g, n).has_value();
    }

    std::size_t state_count(ElemId g) const {
        std::set<ElemId> seen{g};
        std::vector<ElemId> stack{g};
        while (!stack.empty()) {
            ElemId x = stack.back();
            stack.pop_back();
            for (int a = 0; a < degree(); ++a)
                if (seen.insert(nodes_[x].succ[a]).second) stack.push_back(nodes_[x].succ[a]);
        }
        return seen.size();
    }

    std::size_t last_product_pairs() const { return last_product_pairs_; }

    std::uint64_t level_size(int n, std::uint64_t cap) const {
        std::uint64_t size = 1;
        for (int i = 0; i < n; ++i) {
            size *= static_cast<std::uint64_t>(degree());
            if (size > cap)
                throw resource_error("level " + std::to_string(n) +
                                     " exceeds the vertex cap (use --force to override)");
        }
        return size;
    }

    std::vector<std::uint32_t> level_permutation(ElemId g, int n, std::uint64_t cap = 1u << 20) const {
        std::uint64_t size = level_size(n, cap);
        std::vector<std::uint32_t> perm(size);
        fill_level(g, 0, n, 0, 0, &perm, nullptr);
        return perm;
    }

    LevelNormalForm level_normal_form(ElemId g, int n, std::uint64_t cap = 1u << 20) {
        std::uint64_t size = level_size(n, cap);
        LevelNormalForm out;
        out.level = n;
        out.perm.resize(size);
        std::vector<ElemId> secs(size);
        fill_level(g, 0, n, 0, 0, &out.perm, &secs);
        out.sections.reserve(size);
        for (ElemId s : secs) out.sections.push_back({this, s});
        return out;
    }

    // All eventually periodic rays fixed by g whose canonical preperiod
    // length is at most P and period length at most Q.  A ray is fixed
    // exactly when every step of the walk uses a letter fixed by the
    // current state's root permutation.
    std::vector<Ray> fixed_rays(ElemId g, int P, int Q) const {
        require(P >= 0 && Q >= 1, "fixed-ray bounds must satisfy P >= 0, Q >= 1");
        std::set<Ray> found;
        Word pre;
        explore_preperiods(g, P, Q, pre, found);
        return {found.begin(), found.end()};
    }

    // Number of level-n words fixed by g.
    std::uint64_t count_fixed(ElemId g, int n) const {
        std::map<std::pair<ElemId, int>, std::uint64_t> memo;
        return count_fixed_memo(g, n, memo);
    }

  private:
    struct Node {
        std::vector<Letter> perm;
        std::vector<ElemId> succ;
    };

    struct PairHash {
        std::size_t operator()(const std::pair<ElemId, ElemId>& p) const {
            return std::hash<std::uint64_t>()((static_cast<std::uint64_t>(p.first) << 32) | p.second);
        }
    };

    std::string pointed_encoding(const RawMachine& canon, int k) const {
        RawMachine pointed = canon;
        pointed.initial = k;
        return encode_machine(minimize_machine(pointed));
    }

    // Snapshot the reachable closure of the given elements as RawMachine
    // states (without a root), recording each element's position.
    RawMachine snapshot(const std::vector<ElemId>& roots, std::map<ElemId, int>& pos) const {
        std::vector<ElemId> order;
        for (ElemId r : roots) {
            if (pos.try_emplace(r, static_cast<int>(order.size())).second) order.push_back(r);
        }
        for (std::size_t i = 0; i < order.size(); ++i) {
            for (int a = 0; a < degree(); ++a) {
                ElemId t = nodes_[order[i]].succ[a];
                if (pos.try_emplace(t, static_cast<int>(order.size())).second) order.push_back(t);
            }
        }
        RawMachine m;
        m.degree = degree();
        for (ElemId x : order) {
            RawState s;
            s.perm = nodes_[x].perm;
            s.succ.resize(degree());
            for (int a = 0; a < degree(); ++a) s.succ[a] = pos.at(nodes_[x].succ[a]);
            s.word = words_[x];
            m.states.push_back(std::move(s));
        }
        return m;
    }

    void fill_level(ElemId g, int depth, int n, std::uint64_t in_idx, std::uint64_t out_idx,
                    std::vector<std::uint32_t>* perm, std::vector<ElemId>* secs) const {
        if (depth == n) {
            (*perm)[in_idx] = static_cast<std::uint32_t>(out_idx);
            if (secs) (*secs)[in_idx] = g;
            return;
        }
        const Node& node = nodes_[g];
        for (int a = 0; a < degree(); ++a)
            fill_level(node.succ[a], depth + 1, n, in_idx * degree() + a,
                       out_idx * degree() + node.perm[a], perm, secs);
    }

    void explore_preperiods(ElemId state, int P, int Q, Word& pre, std::set<Ray>& found) const {
        collect_periods(state, Q, pre, found);
        if (static_cast<int>(pre.size()) >= P) return;
        for (int a = 0; a < degree(); ++a) {
            if (nodes_[state].perm[a] != a) continue;
            pre.push_back(a);
            explore_preperiods(nodes_[state].succ[a], P, Q, pre, found);
            pre.letters.pop_back();
        }
    }

    void collect_periods(ElemId start, int Q, const Word& pre, std::set<Ray>& found) const {
        Word per;
        std::vector<ElemId> path{start};
        collect_periods_dfs(start, Q, pre, per, path, found);
    }

    void collect_periods_dfs(ElemId state, int Q, const Word& pre, Word& per,
                             std::vector<ElemId>& path, std::set<Ray>& found) const {
        if (!per.empty() && period_closes(path.front(), per)) {
            found.insert(Ray(pre, per));
        }
        if (static_cast<int>(per.size()) >= Q) return;
        for (int a = 0; a < degree(); ++a) {
            if (nodes_[state].perm[a] != a) continue;
            per.push_back(a);
            path.push_back(nodes_[state].succ[a]);
            collect_periods_dfs(path.back(), Q, pre, per, path, found);
            path.pop_back();
            per.letters.pop_back();
        }
    }

    // True iff reading `per` forever from `start` always walks fixed letters.
    bool period_closes(ElemId start, const Word& per) const {
        std::set<ElemId> seen;
        ElemId cur = start;
        while (seen.insert(cur).second) {
            for (Letter a : per.letters) {
                if (nodes_[cur].perm[a] != a) return false;
                cur = nodes_[cur].succ[a];
            }
        }
        return true;
    }

    std::uint64_t count_fixed_memo(ElemId g, int n,
                                   std::map<std::pair<ElemId, int>, std::uint64_t>& memo) const {
        if (n == 0) return 1;
        auto key = std::make_pair(g, n);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        std::uint64_t total = 0;
        for (int a = 0; a < degree(); ++a)
            if (nodes_[g].perm[a] == a) total += count_fixed_memo(nodes_[g].succ[a], n - 1, memo);
        memo.emplace(key, total);
        return total;
    }

    Alphabet alphabet_;
    std::deque<Node> nodes_;
    std::deque<std::optional<TokenWord>> words_;
    std::unordered_map<std::string, ElemId> index_;
    std::unordered_map<std::pair<ElemId, ElemId>, ElemId, PairHash> product_cache_;
    std::unordered_map<ElemId, ElemId> inverse_cache_;
    std::size_t last_product_pairs_ = 0;
    std::mutex mutex_;
};

// --- element-level operations ---------------------------------------------

inline void check_same_context(const Element& a, const Element& b) {
    require(a.ctx != nullptr && a.ctx == b.ctx, "elements belong to different groups/alphabets");
}

inline Word apply(const Element& g, const Word& w) { return g.ctx->apply(g.id, w); }
inline Element section(const Element& g, const Word& w) { return {g.ctx, g.ctx->section(g.id, w)}; }
inline Element compose(const Element& g, const Element& h) {
    check_same_context(g, h);
    return {g.ctx, g.ctx->compose(g.id, h.id)};
}
inline Element inverse(const Element& g) { return {g.ctx, g.ctx->inverse(g.id)}; }
inline Element power(const Element& g, long long k) { return {g.ctx, g.ctx->power(g.id, k)}; }
inline bool is_identity(const Element& g) { return g.ctx->is_identity(g.id); }
inline bool equals(const Element& a, const Element& b) {
    check_same_context(a, b);
    return a.id == b.id;
}
inline Element commutator(const Element& g, const Element& h) {
    return compose(compose(inverse(g), inverse(h)), compose(g, h));
}

// g acts as the identity map on the cylinder below u: fixes u and has
// trivial section there.
inline bool trivial_on_cylinder(const Element& g, const Word& u) {
    return apply(g, u) == u && is_identity(section(g, u));
}

} // namespace germlab
