#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "germlab/group.hpp"

namespace germlab {

using BigInt = boost::multiprecision::cpp_int;
using Perm = std::vector<std::uint32_t>;

inline Perm perm_identity(std::size_t n) {
    Perm p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = static_cast<std::uint32_t>(i);
    return p;
}

inline bool perm_is_identity(const Perm& p) {
    for (std::size_t i = 0; i < p.size(); ++i)
        if (p[i] != i) return false;
    return true;
}

inline Perm perm_compose(const Perm& p, const Perm& q) {  // (p*q)(x) = p(q(x))
    Perm out(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) out[i] = p[q[i]];
    return out;
}

inline Perm perm_inverse(const Perm& p) {
    Perm out(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) out[p[i]] = static_cast<std::uint32_t>(i);
    return out;
}

// The image of the group in the symmetric group on level-n vertices,
// with a base and strong generating set for order and membership.
class LevelPermGroup {
  public:
    LevelPermGroup(int level, std::uint64_t points,
                   std::vector<std::pair<std::string, Perm>> named_gens)
        : level_(level), points_(points), named_gens_(std::move(named_gens)) {
        for (const auto& [name, p] : named_gens_) insert(p);
        bool closed = false;
        while (!closed) closed = close_schreier_once();
    }

    int level() const { return level_; }
    std::uint64_t points() const { return points_; }
    const std::vector<std::pair<std::string, Perm>>& generators() const { return named_gens_; }

    BigInt order() const {
        BigInt n = 1;
        for (const Layer& layer : chain_) n *= static_cast<std::uint64_t>(layer.transversal.size());
        return n;
    }

    bool contains(const Perm& p) const {
        auto [level, residue] = sift(p, 0);
        (void)level;
        return perm_is_identity(residue);
    }

    std::vector<std::uint32_t> base() const {
        std::vector<std::uint32_t> b;
        for (const Layer& layer : chain_) b.push_back(layer.base);
        return b;
    }

  private:
    struct Layer {
        std::uint32_t base = 0;
        std::vector<Perm> gens;                   // strong generators introduced here
        std::map<std::uint32_t, Perm> transversal; // orbit point -> perm sending base there
    };

    // Strong generators available at layer i: those introduced at layers >= i,
    // which by construction fix the earlier base points.
    std::vector<const Perm*> gens_at(std::size_t i) const {
        std::vector<const Perm*> out;
        for (std::size_t j = i; j < chain_.size(); ++j)
            for (const Perm& g : chain_[j].gens) out.push_back(&g);
        return out;
    }

    void rebuild_orbit(std::size_t i) {
        Layer& layer = chain_[i];
        layer.transversal.clear();
        layer.transversal.emplace(layer.base, perm_identity(points_));
        std::vector<std::uint32_t> queue{layer.base};
        auto gens = gens_at(i);
        for (std::size_t k = 0; k < queue.size(); ++k) {
            std::uint32_t x = queue[k];
            for (const Perm* g : gens) {
                std::uint32_t y = (*g)[x];
                if (!layer.transversal.count(y)) {
                    layer.transversal.emplace(y, perm_compose(*g, layer.transversal.at(x)));
                    queue.push_back(y);
                }
            }
        }
    }

    std::pair<std::size_t, Perm> sift(Perm p, std::size_t from) const {
        for (std::size_t i = from; i < chain_.size(); ++i) {
            if (perm_is_identity(p)) return {i, p};
            std::uint32_t image = p[chain_[i].base];
            auto it = chain_[i].transversal.find(image);
            if (it == chain_[i].transversal.end()) return {i, p};
            p = perm_compose(perm_inverse(it->second), p);
        }
        return {chain_.size(), p};
    }

    void insert(const Perm& p) {
        auto [i, residue] = sift(p, 0);
        if (perm_is_identity(residue)) return;
        if (i == chain_.size()) {
            Layer layer;
            for (std::uint32_t x = 0; x < points_; ++x) {
                if (residue[x] != x) {
                    layer.base = x;
                    break;
                }
            }
            chain_.push_back(std::move(layer));
        }
        chain_[i].gens.push_back(residue);
        for (std::size_t j = 0; j <= i && j < chain_.size(); ++j) rebuild_orbit(j);
    }

    // One Schreier pass over every layer; true when no new strong
    // generator appears (the chain is then complete).
    bool close_schreier_once() {
        for (std::size_t i = 0; i < chain_.size(); ++i) {
            auto gens = gens_at(i);
            for (const auto& [point, t_point] : chain_[i].transversal) {
                for (const Perm* g : gens) {
                    std::uint32_t image = (*g)[point];
                    const Perm& t_image = chain_[i].transversal.at(image);
                    Perm schreier =
                        perm_compose(perm_inverse(t_image), perm_compose(*g, t_point));
                    auto [j, residue] = sift(schreier, i + 1);
                    (void)j;
                    if (!perm_is_identity(residue)) {
                        insert(schreier);
                        return false;
                    }
                }
            }
        }
        return true;
    }

    int level_;
    std::uint64_t points_;
    std::vector<std::pair<std::string, Perm>> named_gens_;
    std::vector<Layer> chain_;
};

inline Perm level_permutation(Element g, int n, std::uint64_t cap = 1u << 20) {
    return g.ctx->level_permutation(g.id, n, cap);
}

inline LevelPermGroup quotient_group(Group& G, int n, std::uint64_t cap = 1u << 20) {
    std::uint64_t points = G.ctx().level_size(n, cap);
    std::vector<std::pair<std::string, Perm>> gens;
    for (std::size_t i = 0; i < G.generator_count(); ++i)
        gens.emplace_back(G.generator_name(i), level_permutation(G.generator(i), n, cap));
    return LevelPermGroup(n, points, std::move(gens));
}

inline bool is_level_transitive(Group& G, int n, std::uint64_t cap = 1u << 20) {
    std::uint64_t points = G.ctx().level_size(n, cap);
    std::vector<Perm> gens;
    for (std::size_t i = 0; i < G.generator_count(); ++i)
        gens.push_back(level_permutation(G.generator(i), n, cap));
    std::vector<bool> seen(points, false);
    std::vector<std::uint32_t> queue{0};
    seen[0] = true;
    std::size_t reached = 1;
    for (std::size_t k = 0; k < queue.size(); ++k) {
        for (const Perm& g : gens) {
            std::uint32_t y = g[queue[k]];
            if (!seen[y]) {
                seen[y] = true;
                ++reached;
                queue.push_back(y);
            }
        }
    }
    return reached == points;
}

// --- vertex stabilizers -----------------------------------------------------

struct StabilizerData {
    Word vertex;
    std::vector<Element> generators;  // Schreier generators, each fixing the vertex
};

// Schreier generators of the stabilizer of a vertex, lifted to elements
// through the coset-representative words of the orbit traversal.
inline StabilizerData vertex_stabilizer_gens(Group& G, const Word& vertex,
                                             std::uint64_t cap = 1u << 20) {
    require(!vertex.empty(), "vertex stabilizer needs a nonempty vertex word");
    check_word(G.alphabet(), vertex);
    int n = static_cast<int>(vertex.size());
    G.ctx().level_size(n, cap);

    std::vector<Element> step;
    for (std::size_t i = 0; i < G.generator_count(); ++i) step.push_back(G.generator(i));
    for (std::size_t i = 0; i < G.generator_count(); ++i) step.push_back(inverse(G.generator(i)));

    std::map<std::uint64_t, Element> transversal;  // orbit point -> coset representative
    std::uint64_t root = vertex_index(vertex, G.degree());
    transversal.emplace(root, G.identity());
    std::vector<std::pair<std::uint64_t, Word>> queue{{root, vertex}};
    for (std::size_t k = 0; k < queue.size(); ++k) {
        auto [idx, w] = queue[k];
        Element rep = transversal.at(idx);
        for (Element s : step) {
            Word image = apply(s, w);
            std::uint64_t yidx = vertex_index(image, G.degree());
            if (!transversal.count(yidx)) {
                transversal.emplace(yidx, compose(s, rep));
                queue.push_back({yidx, image});
            }
        }
    }

    StabilizerData data;
    data.vertex = vertex;
    std::set<ElemId> seen{0};
    for (const auto& [idx, w] : queue) {
        Element rep = transversal.at(idx);
        for (Element s : step) {
            Word image = apply(s, w);
            Element rep_image = transversal.at(vertex_index(image, G.degree()));
            Element schreier = compose(inverse(rep_image), compose(s, rep));
            check_invariant(apply(schreier, vertex) == vertex,
                            "Schreier generator fails to fix the vertex");
            if (seen.insert(schreier.id).second) data.generators.push_back(schreier);
        }
    }
    return data;
}

// --- cylinder kernels and properness witnesses --------------------------------

// Ball slice of the elements acting trivially on the level-l cylinder
// along the ray: the finite window of the cylinder kernel available at
// this word length.
inline std::vector<Element> kernel_ball(Group& G, const Ray& z, int level, int word_bound) {
    require(level >= 0 && word_bound >= 0, "kernel ball bounds must be nonnegative");
    check_ray(G.alphabet(), z);
    Word prefix = z.prefix(static_cast<std::size_t>(level));
    std::vector<Element> out;
    for (Element g : G.ball(word_bound))
        if (trivial_on_cylinder(g, prefix)) out.push_back(g);
    return out;
}

struct PropernessCheck {
    bool accepted = false;
    std::string rejected_clause;  // names the first failed clause
    int level = 0;
    Element g, h, commutator_value;
    Word evidence;  // word moved by the commutator
};

// Accepts (g, h) when g is trivial on the level-l cylinder, h stabilizes
// the level-l prefix, and their commutator is nontrivial: g then lies in
// the cylinder kernel but not in the centralizer of the prefix
// stabilizer at this level.
inline PropernessCheck properness_witness_check(Group& G, const Ray& z, int level, Element g,
                                                Element h, int probe_depth = 64) {
    check_ray(G.alphabet(), z);
    PropernessCheck out;
    out.level = level;
    out.g = g;
    out.h = h;
    Word prefix = z.prefix(static_cast<std::size_t>(level));
    if (!trivial_on_cylinder(g, prefix)) {
        out.rejected_clause = "g is not trivial on the level-" + std::to_string(level) + " cylinder";
        return out;
    }
    if (apply(h, prefix) != prefix) {
        out.rejected_clause = "h does not stabilize the level-" + std::to_string(level) + " vertex";
        return out;
    }
    Element c = compose(compose(compose(inverse(h), g), h), inverse(g));
    out.commutator_value = c;
    if (is_identity(c)) {
        out.rejected_clause = "the commutator of h and g is trivial";
        return out;
    }
    auto w = c.ctx->moved_word(c.id, static_cast<std::size_t>(probe_depth));
    if (!w) w = c.ctx->moved_word(c.id);
    check_invariant(w.has_value(), "nontrivial commutator must move some word");
    out.evidence = *w;
    out.accepted = true;
    return out;
}

// --- section formula self-checks ---------------------------------------------

struct FormulaCheckRow {
    std::string item;
    bool pass = false;
};

struct EvenDisplayRow {
    int level = 0;
    std::string displayed_matches;  // "l-2", "l-1", or "none"
    std::string corrected_matches;
};

struct FormulaCheckReport {
    std::vector<FormulaCheckRow> rows;
    std::vector<EvenDisplayRow> even_rows;
    bool all_pass = true;
};

// Self-checks of the closed-form section formulas in the two-generator
// group K(1); any failure signals an engine bug.  The even-level
// conjugation identity is compared at both adjacent depths against the
// published form and against the algebraically derived form; the report
// records where each matches.
inline FormulaCheckReport section_formula_check(int l_max = 8) {
    require(l_max >= 1, "l_max must be positive");
    FormulaCheckReport report;
    Group G(build_Kv("1"));
    Context& ctx = G.ctx();
    Element a1 = G.generator_by_name("a1");
    Element a2 = G.generator_by_name("a2");
    Element P = compose(a1, a2);
    Element A = compose(a2, a1);

    auto ones = [](int k) {
        Word w;
        for (int i = 0; i < k; ++i) w.push_back(1);
        return w;
    };
    auto push = [&report](std::string item, bool ok) {
        report.rows.push_back({std::move(item), ok});
        report.all_pass = report.all_pass && ok;
    };
    auto pair_of = [&ctx](Element x) {  // (x, 1) with trivial root permutation
        return Element{&ctx, ctx.make_wreath({0, 1}, {x.id, 0})};
    };

    push("(a1 a2)^2 = (a2 a1, a2 a1)",
         equals(power(P, 2), Element{&ctx, ctx.make_wreath({0, 1}, {A.id, A.id})}));
    push("(a2 a1)^2 = (a2 a1, a1 a2)",
         equals(power(A, 2), Element{&ctx, ctx.make_wreath({0, 1}, {A.id, P.id})}));

    for (int l = 1; l <= l_max; ++l) {
        Element pw = power(P, 1LL << l);
        bool ok = ctx.trivial_to_level(pw.id, l) &&
                  equals(section(pw, ones(l)), (l % 2 == 1) ? A : P);
        push("(a1 a2)^(2^" + std::to_string(l) + ") is trivial at level " + std::to_string(l) +
                 " with section " + ((l % 2 == 1) ? "a2 a1" : "a1 a2") + " below 1^" +
                 std::to_string(l),
             ok);
    }
    for (int l = 1; l <= std::min(l_max, 5); ++l) {
        Element pw = power(a2, 1LL << l);
        bool ok = ctx.trivial_to_level(pw.id, 2 * l) && equals(section(pw, ones(2 * l)), a2);
        push("a2^(2^" + std::to_string(l) + ") has section a2 below 1^" + std::to_string(2 * l), ok);
    }
    push("(a1 a2)^-1 a2 (a1 a2) = (a1, 1)",
         equals(compose(compose(inverse(P), a2), P), pair_of(a1)));

    for (int l = 6; l <= l_max; l += 2) {
        long long e = 1LL << (l - 2);
        Element g = compose(compose(power(P, -e), power(a2, 1LL << ((l - 2) / 2))), power(P, e));
        Element h = power(P, -(1LL << l));
        Element conj = compose(compose(inverse(h), g), h);
        Element displayed = pair_of(compose(compose(power(A, 2), a1), power(A, -1)));
        Element corrected = pair_of(compose(compose(power(A, 2), a1), power(A, -2)));
        Element deep2 = section(conj, ones(l - 2));
        Element deep1 = section(conj, ones(l - 1));
        auto where = [&](Element target) -> std::string {
            if (equals(deep2, target)) return "l-2";
            if (equals(deep1, target)) return "l-1";
            return "none";
        };
        report.even_rows.push_back({l, where(displayed), where(corrected)});
        push("even level " + std::to_string(l) +
                 ": conjugated section matches the derived form at depth l-2",
             equals(deep2, corrected));
    }
    return report;
}

} // namespace germlab
