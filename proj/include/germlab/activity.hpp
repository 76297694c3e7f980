#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "germlab/context.hpp"

namespace germlab {

enum class ActivityClass { bounded, polynomial, exponential };

inline std::string to_string(ActivityClass c) {
    switch (c) {
        case ActivityClass::bounded: return "bounded";
        case ActivityClass::polynomial: return "polynomial";
        case ActivityClass::exponential: return "exponential";
    }
    return "?";
}

struct ActivityProfile {
    std::vector<std::uint64_t> counts;  // counts[n-1] = words of length n with nontrivial section
    ActivityClass cls = ActivityClass::bounded;
    int degree = 0;  // polynomial degree; 0 for bounded
    std::string evidence;
    double fit_slope = 0.0;
    bool fit_consistent = true;
};

// Exact per-level counts of nontrivial sections, by path counting in the
// canonical machine restricted to non-identity states.
inline std::vector<std::uint64_t> activity_counts(const Element& g, int levels) {
    require(levels >= 1, "activity levels must be positive");
    Context& ctx = *g.ctx;
    double bits = levels * std::log2(static_cast<double>(ctx.degree()));
    if (bits > 62) throw resource_error("activity count would overflow at this depth");

    std::vector<ElemId> states;
    std::map<ElemId, std::size_t> index;
    states.push_back(g.id);
    index[g.id] = 0;
    for (std::size_t i = 0; i < states.size(); ++i) {
        for (int a = 0; a < ctx.degree(); ++a) {
            ElemId t = ctx.succ(states[i], a);
            if (index.try_emplace(t, states.size()).second) states.push_back(t);
        }
    }
    std::vector<std::uint64_t> cur(states.size(), 0);
    cur[0] = 1;
    std::vector<std::uint64_t> counts;
    for (int n = 1; n <= levels; ++n) {
        std::vector<std::uint64_t> next(states.size(), 0);
        for (std::size_t i = 0; i < states.size(); ++i) {
            if (cur[i] == 0) continue;
            for (int a = 0; a < ctx.degree(); ++a) next[index.at(ctx.succ(states[i], a))] += cur[i];
        }
        cur = std::move(next);
        std::uint64_t total = 0;
        for (std::size_t i = 0; i < states.size(); ++i)
            if (!ctx.is_identity(states[i])) total += cur[i];
        counts.push_back(total);
    }
    return counts;
}

// Structural growth classification from the digraph of non-identity
// states: entangled cycles in one strongly connected component force
// exponential growth; otherwise the degree is the longest chain of
// cycles minus one.  The count fit is recorded as a consistency signal,
// not used for the decision.
inline ActivityProfile classify_activity(const Element& g, int count_levels = 12) {
    Context& ctx = *g.ctx;
    ActivityProfile profile;

    std::vector<ElemId> states;
    std::map<ElemId, std::size_t> index;
    if (!ctx.is_identity(g.id)) {
        states.push_back(g.id);
        index[g.id] = 0;
    }
    for (std::size_t i = 0; i < states.size(); ++i) {
        for (int a = 0; a < ctx.degree(); ++a) {
            ElemId t = ctx.succ(states[i], a);
            if (ctx.is_identity(t)) continue;
            if (index.try_emplace(t, states.size()).second) states.push_back(t);
        }
    }
    std::size_t n = states.size();
    std::vector<std::vector<std::size_t>> out_edges(n);  // with multiplicity
    for (std::size_t i = 0; i < n; ++i)
        for (int a = 0; a < ctx.degree(); ++a) {
            ElemId t = ctx.succ(states[i], a);
            if (!ctx.is_identity(t)) out_edges[i].push_back(index.at(t));
        }

    // Tarjan strongly connected components, iterative.
    std::vector<int> comp(n, -1), low(n), num(n, -1);
    std::vector<std::size_t> stk;
    std::vector<bool> on_stack(n, false);
    int counter = 0, ncomp = 0;
    for (std::size_t root = 0; root < n; ++root) {
        if (num[root] >= 0) continue;
        std::vector<std::pair<std::size_t, std::size_t>> call{{root, 0}};
        while (!call.empty()) {
            auto& [v, ei] = call.back();
            if (ei == 0) {
                num[v] = low[v] = counter++;
                stk.push_back(v);
                on_stack[v] = true;
            }
            if (ei < out_edges[v].size()) {
                std::size_t w = out_edges[v][ei++];
                if (num[w] < 0)
                    call.push_back({w, 0});
                else if (on_stack[w])
                    low[v] = std::min(low[v], num[w]);
            } else {
                if (low[v] == num[v]) {
                    for (;;) {
                        std::size_t w = stk.back();
                        stk.pop_back();
                        on_stack[w] = false;
                        comp[w] = ncomp;
                        if (w == v) break;
                    }
                    ++ncomp;
                }
                std::size_t child = v;
                call.pop_back();
                if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[child]);
            }
        }
    }

    std::vector<std::size_t> comp_vertices(ncomp, 0), comp_edges(ncomp, 0);
    std::vector<std::set<int>> comp_out(ncomp);
    for (std::size_t i = 0; i < n; ++i) {
        ++comp_vertices[comp[i]];
        for (std::size_t w : out_edges[i]) {
            if (comp[w] == comp[i])
                ++comp_edges[comp[i]];
            else
                comp_out[comp[i]].insert(comp[w]);
        }
    }

    bool entangled = false;
    std::vector<int> weight(ncomp, 0);
    for (int c = 0; c < ncomp; ++c) {
        if (comp_edges[c] > comp_vertices[c]) entangled = true;
        weight[c] = (comp_edges[c] >= comp_vertices[c]) ? 1 : 0;  // component carries a cycle
    }

    // longest cycle-weighted chain over the condensation (Tarjan order is
    // a reverse topological order, so process components in order).
    std::vector<int> best(ncomp, 0);
    int chain = 0;
    for (int c = 0; c < ncomp; ++c) {
        int below = 0;
        for (int d : comp_out[c]) below = std::max(below, best[d]);
        best[c] = weight[c] + below;
        chain = std::max(chain, best[c]);
    }

    int cycles = 0;
    for (int c = 0; c < ncomp; ++c) cycles += weight[c];

    if (entangled) {
        profile.cls = ActivityClass::exponential;
        profile.degree = 0;
    } else if (chain <= 1) {
        profile.cls = ActivityClass::bounded;
        profile.degree = 0;
    } else {
        profile.cls = ActivityClass::polynomial;
        profile.degree = chain - 1;
    }
    profile.evidence = "nontrivial states: " + std::to_string(n) +
                       "; cyclic components: " + std::to_string(cycles) +
                       "; longest cycle chain: " + std::to_string(chain) +
                       "; entangled cycles: " + (entangled ? std::string("yes") : std::string("no"));

    profile.counts = activity_counts(g, count_levels);
    int hi = count_levels, lo = std::max(2, count_levels / 2);
    if (n == 0 || profile.counts[hi - 1] == 0 || profile.counts[lo - 1] == 0) {
        profile.fit_slope = 0.0;
        profile.fit_consistent = (profile.cls == ActivityClass::bounded);
    } else {
        profile.fit_slope = std::log2(static_cast<double>(profile.counts[hi - 1]) /
                                      static_cast<double>(profile.counts[lo - 1])) /
                            std::log2(static_cast<double>(hi) / static_cast<double>(lo));
        switch (profile.cls) {
            case ActivityClass::bounded:
                profile.fit_consistent = profile.fit_slope < 0.75;
                break;
            case ActivityClass::polynomial:
                profile.fit_consistent = std::abs(profile.fit_slope - profile.degree) <= 0.75;
                break;
            case ActivityClass::exponential:
                profile.fit_consistent = profile.fit_slope > cycles + 0.75;
                break;
        }
    }
    return profile;
}

} // namespace germlab
