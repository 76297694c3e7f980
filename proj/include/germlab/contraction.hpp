#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "germlab/hausdorff.hpp"

namespace germlab {

struct NucleusResult {
    enum class Status { certified, budget_exceeded };
    Status status = Status::budget_exceeded;
    std::vector<Element> elements;  // section- and inverse-closed when certified
    int depth_bound = 0;            // depth at which every pair product's sections land inside
    int size_cap = 0;
    int depth_cap = 0;

    bool certified() const { return status == Status::certified; }
};

// Closure computation: start from the generators, their inverses and the
// identity, close under sections, then repeatedly deepen sections of
// every pair product until they land in the current set, adding whatever
// canonical elements keep appearing at the depth cap.  Budget exhaustion
// is reported as a status, never an error: non-contraction is not
// decidable here, only failure to certify within caps.
inline NucleusResult nucleus(Group& G, int size_cap = 500, int depth_cap = 16) {
    require(size_cap > 0 && depth_cap > 0, "nucleus caps must be positive");
    Context& ctx = G.ctx();
    std::set<ElemId> N;

    auto close = [&](ElemId seed) {
        std::vector<ElemId> stack{seed};
        while (!stack.empty()) {
            ElemId x = stack.back();
            stack.pop_back();
            if (!N.insert(x).second) continue;
            stack.push_back(ctx.inverse(x));
            for (int a = 0; a < ctx.degree(); ++a) stack.push_back(ctx.succ(x, a));
        }
    };

    close(0);
    for (std::size_t i = 0; i < G.generator_count(); ++i) close(G.generator(i).id);

    NucleusResult result;
    result.size_cap = size_cap;
    result.depth_cap = depth_cap;

    std::set<std::pair<ElemId, ElemId>> settled;
    int depth_bound = 0;
    bool grew = true;
    while (grew) {
        grew = false;
        if (N.size() > static_cast<std::size_t>(size_cap)) break;
        std::vector<ElemId> snapshot(N.begin(), N.end());
        for (ElemId g : snapshot) {
            for (ElemId h : snapshot) {
                if (settled.count({g, h})) continue;
                ElemId p = ctx.compose(g, h);
                std::set<ElemId> frontier{p};
                bool ok = false;
                for (int depth = 0; depth <= depth_cap; ++depth) {
                    bool inside = true;
                    for (ElemId x : frontier) inside = inside && N.count(x);
                    if (inside) {
                        ok = true;
                        depth_bound = std::max(depth_bound, depth);
                        break;
                    }
                    if (depth == depth_cap) break;
                    std::set<ElemId> next;
                    for (ElemId x : frontier)
                        for (int a = 0; a < ctx.degree(); ++a) next.insert(ctx.succ(x, a));
                    frontier = std::move(next);
                }
                if (ok) {
                    settled.insert({g, h});
                } else {
                    for (ElemId x : frontier)
                        if (!N.count(x)) close(x);
                    grew = true;
                    break;  // restart the pair scan over the grown set
                }
            }
            if (grew) break;
        }
    }

    result.elements.reserve(N.size());
    for (ElemId x : N) result.elements.push_back(ctx.element(x));
    if (N.size() > static_cast<std::size_t>(size_cap)) {
        result.status = NucleusResult::Status::budget_exceeded;
    } else {
        result.status = NucleusResult::Status::certified;
        result.depth_bound = depth_bound;
    }
    return result;
}

struct SpecialSets {
    std::vector<Element> n0;  // elements equal to one of their proper sections
    std::vector<Element> n1;  // additionally fixing the witnessing vertex
    std::map<ElemId, Word> n0_witness;
    std::map<ElemId, Word> n1_witness;
};

namespace detail {

// Shortest nonempty word u with section walk g -> ... -> g, optionally
// restricted to letters fixed by the walking state's root permutation.
inline std::optional<Word> self_section_word(Context& ctx, ElemId g, bool fixed_only) {
    struct NodeRef {
        ElemId state;
        int parent;
        Letter via;
    };
    std::vector<NodeRef> bfs;
    std::set<ElemId> seen;
    auto expand = [&](ElemId state, int parent) {
        for (int a = 0; a < ctx.degree(); ++a) {
            if (fixed_only && ctx.root_perm(state)[a] != a) continue;
            bfs.push_back({ctx.succ(state, a), parent, a});
        }
    };
    expand(g, -1);
    for (std::size_t i = 0; i < bfs.size(); ++i) {
        if (bfs[i].state == g) {
            Word u;
            for (int p = static_cast<int>(i); p >= 0; p = bfs[p].parent)
                u.push_back(bfs[p].via);
            std::reverse(u.letters.begin(), u.letters.end());
            return u;
        }
        if (seen.insert(bfs[i].state).second) expand(bfs[i].state, static_cast<int>(i));
    }
    return std::nullopt;
}

} // namespace detail

// The self-section sets inside a certified nucleus.  Any element equal
// to a proper section of itself is its own arbitrarily deep section, so
// it lies in the nucleus; the search space is exactly the nucleus.
inline SpecialSets special_sets(Group& G, const NucleusResult& nucleus_result) {
    require(nucleus_result.certified(),
            "special sets need a certified nucleus (the search space must be finite)");
    Context& ctx = G.ctx();
    SpecialSets sets;
    for (Element g : nucleus_result.elements) {
        if (auto u = detail::self_section_word(ctx, g.id, false)) {
            sets.n0.push_back(g);
            sets.n0_witness[g.id] = *u;
        }
        if (auto u = detail::self_section_word(ctx, g.id, true)) {
            check_invariant(equals(section(g, *u), g) && apply(g, *u) == *u,
                            "self-section witness failed re-verification");
            sets.n1.push_back(g);
            sets.n1_witness[g.id] = *u;
        }
    }
    return sets;
}

struct OrderResult {
    bool finite = false;
    std::uint64_t order = 0;          // when finite: exact order, no proper divisor works
    int level_reached = 0;            // when not: levels examined
    std::uint64_t partial_order = 0;  // largest level permutation order seen

    bool exceeds_cap() const { return !finite; }
};

// Permutation order at successive levels; each divides the next, so the
// element order is certified as soon as the level order stabilizes and
// the corresponding power is exactly the identity.
inline OrderResult torsion_order(Element g, std::uint64_t order_cap = 4096, int level_cap = 16,
                                 std::uint64_t vertex_cap = 1u << 20) {
    require(order_cap > 0 && level_cap > 0, "torsion caps must be positive");
    if (is_identity(g)) return {.finite = true, .order = 1, .level_reached = 0, .partial_order = 1};
    Context& ctx = *g.ctx;
    std::uint64_t prev = 0;
    std::uint64_t largest = 1;
    for (int n = 1; n <= level_cap; ++n) {
        std::vector<std::uint32_t> perm = ctx.level_permutation(g.id, n, vertex_cap);
        std::uint64_t o = 1;
        std::vector<bool> seen(perm.size(), false);
        for (std::size_t i = 0; i < perm.size(); ++i) {
            if (seen[i]) continue;
            std::uint64_t len = 0;
            for (std::size_t j = i; !seen[j]; j = perm[j]) {
                seen[j] = true;
                ++len;
            }
            o = std::lcm(o, len);
            if (o > order_cap) return {.finite = false, .order = 0, .level_reached = n, .partial_order = o};
        }
        largest = std::max(largest, o);
        if (o == prev || n == level_cap) {
            if (is_identity(power(g, static_cast<long long>(o))))
                return {.finite = true, .order = o, .level_reached = n, .partial_order = o};
        }
        prev = o;
    }
    return {.finite = false, .order = 0, .level_reached = level_cap, .partial_order = largest};
}

// --- contraction-based (non-)Hausdorff pipeline ------------------------------

struct ContractingReport {
    NucleusResult nucleus;
    SpecialSets sets;  // populated when certified
    std::vector<NonHausdorffCertificate> certificates;
    std::string verdict;
};

// If the group certifies contracting and the fixed-vertex self-section
// set is trivial, no torsion candidate for a non-Hausdorff element
// exists; otherwise each nontrivial candidate is sent through the
// certificate search along its self-section ray.
inline ContractingReport criterion_contracting_report(Group& G, int size_cap = 500,
                                                      int depth_cap = 16, int cert_depth = 30) {
    ContractingReport report;
    report.nucleus = nucleus(G, size_cap, depth_cap);
    if (!report.nucleus.certified()) {
        report.verdict = "inconclusive (not certified contracting within caps)";
        return report;
    }
    report.sets = special_sets(G, report.nucleus);
    if (report.sets.n1.size() == 1) {
        report.verdict = "Hausdorff certified (trivial fixed-vertex self-section set)";
        return report;
    }
    Context& ctx = G.ctx();
    for (Element g : report.sets.n1) {
        if (is_identity(g)) continue;
        Ray z(Word{}, report.sets.n1_witness.at(g.id));
        detail::RayWalk walk = detail::walk_ray(ctx, g.id, z);
        if (walk.germ_dies) continue;
        std::size_t tail_bound = 2 * ctx.state_count(g.id) + 2;
        bool emitted = false;
        for (long long a = 1; !emitted && a <= static_cast<long long>(walk.pi); ++a) {
            for (long long b = -a; !emitted && b <= static_cast<long long>(walk.rho + walk.pi); ++b) {
                std::size_t pos = static_cast<std::size_t>(a + b);
                ElemId state = ctx.section(g.id, z.prefix(pos));
                for (Word& tail : detail::patch_tails(ctx, z, pos, state, tail_bound, 16)) {
                    NonHausdorffCertificate cert(g, z, {a, b, std::move(tail)}, cert_depth);
                    try {
                        if (verify_certificate(G, cert).pass) {
                            report.certificates.push_back(std::move(cert));
                            emitted = true;
                            break;
                        }
                    } catch (const validation_error&) {
                    }
                }
            }
        }
    }
    report.verdict = report.certificates.empty()
                         ? "inconclusive (nontrivial candidates, no certificate verified)"
                         : "non-Hausdorff certified";
    return report;
}

} // namespace germlab
