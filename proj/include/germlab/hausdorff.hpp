#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "germlab/group.hpp"

namespace germlab {

// Patch placement: the watched neighborhood at step l is the cylinder
// below the ray prefix of length n_l = a*l + b, and the patch inside it
// is the cylinder below prefix + tail.
struct PatchSchema {
    long long a = 1;
    long long b = 0;
    Word tail;

    long long n(int level) const { return a * level + b; }
};

struct NonHausdorffCertificate {
    Element g;
    Ray ray;
    PatchSchema schema;
    int depth = 30;

    NonHausdorffCertificate(Element g_, Ray ray_, PatchSchema schema_, int depth_)
        : g(g_), ray(std::move(ray_)), schema(std::move(schema_)), depth(depth_) {}
};

struct LevelOutcome {
    int level = 0;
    long long n = 0;
    bool fixed_prefix = false;
    bool germ_nontrivial = false;
    bool patch_trivial = false;

    bool pass() const { return fixed_prefix && germ_nontrivial && patch_trivial; }
};

struct VerificationReport {
    bool pass = false;
    std::vector<LevelOutcome> levels;
};

inline void validate_certificate(Group& G, const NonHausdorffCertificate& cert) {
    check_ray(G.alphabet(), cert.ray);
    check_word(G.alphabet(), cert.schema.tail);
    require(cert.g.ctx == &G.ctx(), "certificate element belongs to a different group");
    require(cert.depth >= 1, "certificate depth must be at least 1");
    require(cert.schema.a >= 1, "patch prefix length must strictly increase with the level");
    require(cert.schema.n(1) >= 0, "patch schema gives a negative prefix length at level 1");
    require(!cert.schema.tail.empty(), "patch tail must be nonempty");
    for (int l = 1; l <= cert.depth; ++l) {
        std::size_t n = static_cast<std::size_t>(cert.schema.n(l));
        Word continuation = cert.ray.prefix(n + cert.schema.tail.size());
        Word patch = cert.ray.prefix(n) + cert.schema.tail;
        require(continuation != patch,
                "patch tail follows the ray at level " + std::to_string(l) +
                    "; the patch cylinder would contain the fixed ray");
    }
}

// Exact check of the three defining conditions at every level up to the
// certificate depth: the element fixes the ray prefix, acts with a
// nontrivial section below it, and is the identity on the patch cylinder.
inline VerificationReport verify_certificate(Group& G, const NonHausdorffCertificate& cert) {
    validate_certificate(G, cert);
    VerificationReport report;
    report.pass = true;
    for (int l = 1; l <= cert.depth; ++l) {
        LevelOutcome out;
        out.level = l;
        out.n = cert.schema.n(l);
        Word prefix = cert.ray.prefix(static_cast<std::size_t>(out.n));
        out.fixed_prefix = (apply(cert.g, prefix) == prefix);
        out.germ_nontrivial = !is_identity(section(cert.g, prefix));
        Word patch = prefix + cert.schema.tail;
        out.patch_trivial = trivial_on_cylinder(cert.g, patch);
        report.pass = report.pass && out.pass();
        report.levels.push_back(out);
    }
    return report;
}

// --- builtin certificates ---------------------------------------------------
//
// Names: "lemma5.3" (K(w,v) with |v| = 1), "lemma5.5" or "lemma5.5:a<i>"
// (K(w,v) with |v| >= 2), "thm1.4" (M(d), d >= 3).

inline NonHausdorffCertificate builtin_certificate(Group& G, const std::string& which,
                                                   int depth = 30) {
    const FamilyInfo& fam = G.spec().family;
    auto flip = [](Letter x) { return 1 - x; };

    if (which == "lemma5.3") {
        require(fam.tag == FamilyInfo::Tag::kwv, "lemma5.3 applies to K(w,v) groups");
        int k = static_cast<int>(fam.w.size());
        int n = static_cast<int>(fam.v.size());
        require(n == 1, "lemma5.3 applies when |v| = 1 (for longer v use lemma5.5)");
        require(k >= 2, "lemma5.3 needs |w| >= 2");
        Letter x1 = family_letter(fam.v, 1);
        Letter yk1 = family_letter(fam.w, k - 1);
        Ray z(Word{}, Word{{x1}});
        PatchSchema schema;
        schema.a = 1;
        schema.b = 0;
        schema.tail = Word{{flip(x1), flip(yk1)}};
        return {G.generator_by_name("a1"), z, schema, depth};
    }

    if (which.rfind("lemma5.5", 0) == 0) {
        require(fam.tag == FamilyInfo::Tag::kwv, "lemma5.5 applies to K(w,v) groups");
        int n = static_cast<int>(fam.v.size());
        require(n >= 2, "lemma5.5 applies when |v| >= 2 (for |v| = 1 use lemma5.3)");
        int i = n;
        if (which.size() > 8) {
            require(which.size() > 10 && which[8] == ':' && which[9] == 'a',
                    "certificate syntax: lemma5.5:a<i>");
            try {
                i = std::stoi(which.substr(10));
            } catch (const std::exception&) {
                throw parse_error("certificate syntax: lemma5.5:a<i>");
            }
            require(i >= 1 && i <= n, "lemma5.5:a<i> needs 1 <= i <= |v|");
        }
        Word period;
        for (int j = n - 1; j >= 1; --j) period.push_back(family_letter(fam.v, j));
        period.push_back(family_letter(fam.v, n));
        Word pre;
        if (i < n) {
            for (int j = i - 1; j >= 1; --j) pre.push_back(family_letter(fam.v, j));
            pre.push_back(family_letter(fam.v, n));
        }
        PatchSchema schema;
        schema.a = n;
        schema.b = (i == n) ? -n : i - n;
        schema.tail = Word{{flip(family_letter(fam.v, n - 1))}};
        return {G.generator_by_name("a" + std::to_string(i)), Ray(pre, period), schema, depth};
    }

    if (which == "thm1.4") {
        require(fam.tag == FamilyInfo::Tag::md, "thm1.4 applies to M(d) groups");
        require(fam.d >= 3, "thm1.4 applies to M(d) with d >= 3");
        Ray z(Word{}, Word{{fam.d - 1}});
        PatchSchema schema;
        schema.a = 1;
        schema.b = -1;
        schema.tail = Word{{1, fam.d - 1}};
        return {G.generator_by_name("m" + std::to_string(fam.d)), z, schema, depth};
    }

    throw parse_error("unknown builtin certificate \"" + which +
                      "\" (expected lemma5.3, lemma5.5[:a<i>], or thm1.4)");
}

// --- certificate search -----------------------------------------------------

namespace detail {

// Walk of section states along a ray: states[m] = section at prefix(m),
// continued until the (state, ray phase) pair repeats.  rho = start of
// the cycle, pi = its length.
struct RayWalk {
    std::vector<ElemId> states;
    std::size_t rho = 0;
    std::size_t pi = 1;
    bool germ_dies = false;  // some section along the ray is the identity
};

inline RayWalk walk_ray(Context& ctx, ElemId g, const Ray& z) {
    RayWalk walk;
    std::map<std::pair<ElemId, std::size_t>, std::size_t> seen;
    std::size_t p = z.preperiod.size(), q = z.period.size();
    ElemId cur = g;
    for (std::size_t m = 0;; ++m) {
        if (ctx.is_identity(cur)) walk.germ_dies = true;
        std::size_t phase = (m < p) ? m : p + ((m - p) % q);
        auto key = std::make_pair(cur, phase);
        auto it = seen.find(key);
        if (it != seen.end()) {
            walk.rho = it->second;
            walk.pi = m - it->second;
            return walk;
        }
        seen.emplace(key, m);
        walk.states.push_back(cur);
        cur = ctx.succ(cur, z.at(m));
    }
}

// Patch tails below the section state at one ray position: words through
// letters fixed by the walk that end at the identity state, in
// (length, lex) order, not following the ray itself.
inline std::vector<Word> patch_tails(Context& ctx, const Ray& z, std::size_t pos, ElemId state,
                                     std::size_t max_len, std::size_t max_tails) {
    std::vector<Word> tails;
    struct NodeRef {
        ElemId state;
        int parent;
        Letter via;
        std::size_t depth;
    };
    std::vector<NodeRef> bfs{{state, -1, 0, 0}};
    for (std::size_t i = 0; i < bfs.size() && tails.size() < max_tails; ++i) {
        NodeRef cur = bfs[i];
        if (cur.depth >= max_len) continue;
        for (int a = 0; a < ctx.degree(); ++a) {
            if (ctx.root_perm(cur.state)[a] != a) continue;
            ElemId child = ctx.succ(cur.state, a);
            if (ctx.is_identity(child)) {
                Word tail;
                tail.letters.resize(cur.depth + 1);
                tail.letters[cur.depth] = a;
                int p = static_cast<int>(i);
                for (std::size_t k = cur.depth; k-- > 0;) {
                    tail.letters[k] = bfs[p].via;
                    p = bfs[p].parent;
                }
                bool follows_ray = true;
                for (std::size_t k = 0; k < tail.size() && follows_ray; ++k)
                    follows_ray = (tail[k] == z.at(pos + k));
                if (!follows_ray) tails.push_back(std::move(tail));
            } else {
                bfs.push_back({child, static_cast<int>(i), a, cur.depth + 1});
            }
        }
    }
    return tails;
}

} // namespace detail

// Enumerate ball elements, their fixed rays, and affine patch schemas;
// every returned certificate has been re-verified at the given depth.
// Per (element, ray) the minimal (a, b, tail) schema is reported.
inline std::vector<NonHausdorffCertificate> search_nonhausdorff(Group& G, int word_bound,
                                                                int preperiod_bound,
                                                                int period_bound, int depth) {
    require(word_bound >= 1 && depth >= 1, "search bounds must be positive");
    Context& ctx = G.ctx();
    std::vector<NonHausdorffCertificate> found;
    for (Element g : G.ball(word_bound)) {
        if (is_identity(g)) continue;
        std::size_t tail_bound = 2 * ctx.state_count(g.id) + 2;
        for (const Ray& z : ctx.fixed_rays(g.id, preperiod_bound, period_bound)) {
            detail::RayWalk walk = detail::walk_ray(ctx, g.id, z);
            if (walk.germ_dies) continue;
            bool emitted = false;
            for (long long a = 1; !emitted && a <= static_cast<long long>(walk.pi); ++a) {
                long long b_max = static_cast<long long>(walk.rho + walk.pi);
                for (long long b = -a; !emitted && b <= b_max; ++b) {
                    std::size_t pos = static_cast<std::size_t>(a + b);
                    ElemId state = ctx.section(g.id, z.prefix(pos));
                    for (Word& tail :
                         detail::patch_tails(ctx, z, pos, state, tail_bound, 16)) {
                        NonHausdorffCertificate cert(g, z, {a, b, std::move(tail)}, depth);
                        try {
                            if (verify_certificate(G, cert).pass) {
                                found.push_back(std::move(cert));
                                emitted = true;
                                break;
                            }
                        } catch (const validation_error&) {
                            // malformed candidate (patch follows the ray deeper on)
                        }
                    }
                }
            }
        }
    }
    std::stable_sort(found.begin(), found.end(),
                     [&G](const NonHausdorffCertificate& x, const NonHausdorffCertificate& y) {
                         auto key = [&G](const NonHausdorffCertificate& c) {
                             std::string w = G.word_str(c.g);
                             return std::make_tuple(
                                 std::count(w.begin(), w.end(), ' ') + (w.empty() ? 0 : 1), w,
                                 G.format_ray(c.ray), c.schema.a, c.schema.b,
                                 G.format_word(c.schema.tail));
                         };
                         return key(x) < key(y);
                     });
    return found;
}

// --- local quasi-analyticity probe ------------------------------------------

struct LqaWitness {
    Element g;
    Word patch;  // minimal word with trivial action on its cylinder
    Word inner;  // proper prefix where the action is still nontrivial
};

// Witnesses (g, u, u0): g acts as the identity below u but not below the
// prefix u0.  Only minimal patch words u are listed; every extension of
// a listed u also qualifies.
inline std::vector<LqaWitness> lqa_violation_search(Group& G, int word_bound, int depth) {
    require(word_bound >= 1 && depth >= 1, "search bounds must be positive");
    Context& ctx = G.ctx();
    std::vector<LqaWitness> out;
    for (Element g : G.ball(word_bound)) {
        if (is_identity(g)) continue;
        Word u;
        auto dfs = [&](auto&& self, ElemId state) -> void {
            if (static_cast<int>(u.size()) >= depth) return;
            for (int a = 0; a < ctx.degree(); ++a) {
                if (ctx.root_perm(state)[a] != a) continue;
                ElemId child = ctx.succ(state, a);
                u.push_back(a);
                if (ctx.is_identity(child)) {
                    for (std::size_t j = 0; j < u.size(); ++j)
                        out.push_back({g, u, u.prefix(j)});
                } else {
                    self(self, child);
                }
                u.letters.pop_back();
            }
        };
        dfs(dfs, g.id);
    }
    return out;
}

// --- fixed-vertex census ----------------------------------------------------

struct FixedVertexReport {
    int level = 0;
    std::vector<std::pair<Element, std::uint64_t>> rows;  // nontrivial ball elements
    std::uint64_t fixed_pairs = 0;
    std::uint64_t total_pairs = 0;

    double fraction() const {
        return total_pairs == 0 ? 0.0
                                : static_cast<double>(fixed_pairs) / static_cast<double>(total_pairs);
    }
};

inline FixedVertexReport fixed_vertex_report(Group& G, int word_bound, int level,
                                             std::uint64_t cap = 1u << 20) {
    require(word_bound >= 1 && level >= 1, "bounds must be positive");
    FixedVertexReport report;
    report.level = level;
    std::uint64_t vertices = G.ctx().level_size(level, cap);
    for (Element g : G.ball(word_bound)) {
        if (is_identity(g)) continue;
        std::uint64_t fixed = G.ctx().count_fixed(g.id, level);
        report.rows.push_back({g, fixed});
        report.fixed_pairs += fixed;
        report.total_pairs += vertices;
    }
    return report;
}

} // namespace germlab
