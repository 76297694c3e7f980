#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "germlab/level_quotients.hpp"
#include "support.hpp"

using namespace germlab;

namespace {

// Independent order oracle: plain closure of the generated permutation set.
std::size_t closure_size(const std::vector<Perm>& gens, std::size_t points) {
    std::set<Perm> seen{perm_identity(points)};
    std::vector<Perm> queue{perm_identity(points)};
    for (std::size_t i = 0; i < queue.size(); ++i) {
        for (const Perm& g : gens) {
            Perm next = perm_compose(g, queue[i]);
            if (seen.insert(next).second) queue.push_back(next);
        }
    }
    return seen.size();
}

std::uint64_t perm_order(const Perm& p) {
    std::uint64_t o = 1;
    std::vector<bool> seen(p.size(), false);
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (seen[i]) continue;
        std::uint64_t len = 0;
        for (std::size_t j = i; !seen[j]; j = p[j]) {
            seen[j] = true;
            ++len;
        }
        o = std::lcm(o, len);
    }
    return o;
}

} // namespace

TEST_CASE("level permutations") {
    Group k1(build_Kv("1"));
    Perm id3 = level_permutation(k1.identity(), 3);
    CHECK(perm_is_identity(id3));

    GroupSpec sigma_spec;
    sigma_spec.degree = 2;
    sigma_spec.generators = {{"s", {1, 0}, {TokenWord{}, TokenWord{}}}};
    Group sigma(std::move(sigma_spec));
    Perm s1 = level_permutation(sigma.generator(0), 1);
    CHECK(s1 == Perm({1, 0}));

    Group odo(build_Kv(""));
    Perm a2 = level_permutation(odo.generator(0), 2);
    CHECK(perm_order(a2) == 4);  // a single 4-cycle in adding order
    for (const Word& w : oracle::words_of_length(2, 2))
        CHECK(a2[vertex_index(w, 2)] == vertex_index(apply(odo.generator(0), w), 2));
}

TEST_CASE("level permutation respects products") {
    std::mt19937_64 rng(88);
    Group kwv(build_Kwv("00", "1"));
    auto ball = kwv.ball(2);
    for (int trial = 0; trial < 40; ++trial) {
        Element g = ball[rng() % ball.size()];
        Element h = ball[rng() % ball.size()];
        int n = 1 + static_cast<int>(rng() % 6);
        CHECK(level_permutation(compose(g, h), n) ==
              perm_compose(level_permutation(g, n), level_permutation(h, n)));
    }
}

TEST_CASE("quotient orders") {
    Group odo(build_Kv(""));
    for (int n = 1; n <= 8; ++n) {
        LevelPermGroup q = quotient_group(odo, n);
        CHECK(q.order() == BigInt(1) << n);
    }

    GroupSpec sigma_spec;
    sigma_spec.degree = 2;
    sigma_spec.generators = {{"s", {1, 0}, {TokenWord{}, TokenWord{}}}};
    Group sigma(std::move(sigma_spec));
    CHECK(quotient_group(sigma, 3).order() == 2);

    Group k1(build_Kv("1"));
    LevelPermGroup q3 = quotient_group(k1, 3);
    BigInt full = BigInt(1) << 7;  // the level-3 automorphism count
    CHECK(full % q3.order() == 0);
}

TEST_CASE("grigorchuk congruence quotients have the classical orders") {
    Group grig(build_grigorchuk());
    const std::uint64_t expected[] = {2, 8, 128, 4096};
    for (int n = 1; n <= 4; ++n) CHECK(quotient_group(grig, n).order() == expected[n - 1]);
    // cross-check the first three levels against plain closure
    for (int n = 1; n <= 3; ++n) {
        std::vector<Perm> gens;
        for (std::size_t i = 0; i < grig.generator_count(); ++i)
            gens.push_back(level_permutation(grig.generator(i), n));
        CHECK(quotient_group(grig, n).order() == closure_size(gens, std::size_t(1) << n));
    }
}

TEST_CASE("quotient order equals brute-force closure") {
    for (const char* name : {"K()", "K(1)", "K(00,1)"}) {
        Group G(builtin_group(name));
        for (int n = 1; n <= 3; ++n) {
            std::vector<Perm> gens;
            for (std::size_t i = 0; i < G.generator_count(); ++i)
                gens.push_back(level_permutation(G.generator(i), n));
            LevelPermGroup q = quotient_group(G, n);
            CHECK(q.order() == closure_size(gens, std::size_t(1) << n));
        }
    }
}

TEST_CASE("quotient order ignores generator order") {
    GroupSpec spec = build_Kwv("00", "1");
    std::reverse(spec.generators.begin(), spec.generators.end());
    for (GeneratorDef& g : spec.generators)
        for (TokenWord& s : g.sections)
            for (GenTok& t : s) t = (t > 0) ? 4 - t : -(4 + t);  // reindex after the reversal
    Group reversed(std::move(spec));
    Group forward(build_Kwv("00", "1"));
    for (int n = 1; n <= 4; ++n)
        CHECK(quotient_group(forward, n).order() == quotient_group(reversed, n).order());
}

TEST_CASE("membership is consistent with generator products") {
    std::mt19937_64 rng(17);
    Group kwv(build_Kwv("00", "1"));
    LevelPermGroup q = quotient_group(kwv, 3);
    for (int trial = 0; trial < 30; ++trial) {
        Perm p = perm_identity(8);
        int len = static_cast<int>(rng() % 6);
        for (int i = 0; i < len; ++i)
            p = perm_compose(p, level_permutation(kwv.generator(rng() % 3), 3));
        CHECK(q.contains(p));
    }
    // an odd transposition of two leaves is not realized by this group
    Perm stranger = perm_identity(8);
    std::swap(stranger[0], stranger[7]);
    CHECK_FALSE(q.contains(stranger));
}

TEST_CASE("level transitivity") {
    Group odo(build_Kv(""));
    CHECK(is_level_transitive(odo, 5));

    GroupSpec sigma_spec;
    sigma_spec.degree = 2;
    sigma_spec.generators = {{"s", {1, 0}, {TokenWord{}, TokenWord{}}}};
    Group sigma(std::move(sigma_spec));
    CHECK_FALSE(is_level_transitive(sigma, 2));

    Group md(build_Md(3));
    CHECK(is_level_transitive(md, 3));
}

TEST_CASE("vertex stabilizer generators") {
    Group odo(build_Kv(""));
    StabilizerData data = vertex_stabilizer_gens(odo, odo.parse_word("1"));
    REQUIRE_FALSE(data.generators.empty());
    bool has_square = false;
    for (Element e : data.generators) {
        CHECK(apply(e, data.vertex) == data.vertex);
        has_square = has_square || equals(e, power(odo.generator(0), 2));
    }
    CHECK(has_square);

    GroupSpec sigma_spec;
    sigma_spec.degree = 2;
    sigma_spec.generators = {{"s", {1, 0}, {TokenWord{}, TokenWord{}}}};
    Group sigma(std::move(sigma_spec));
    StabilizerData sdata = vertex_stabilizer_gens(sigma, sigma.parse_word("0"));
    CHECK(sdata.generators.empty());  // the stabilizer of 0 under <s> is trivial

    Group k1(build_Kv("1"));
    StabilizerData kdata = vertex_stabilizer_gens(k1, k1.parse_word("11"));
    REQUIRE_FALSE(kdata.generators.empty());
    for (Element e : kdata.generators) CHECK(apply(e, kdata.vertex) == kdata.vertex);
}

TEST_CASE("kernel balls") {
    Group odo(build_Kv(""));
    Ray ones(Word{}, Word({1}));
    auto odo_kernel = kernel_ball(odo, ones, 3, 4);
    REQUIRE(odo_kernel.size() == 1);
    CHECK(is_identity(odo_kernel[0]));

    Group kwv(build_Kwv("00", "1"));
    auto members = kernel_ball(kwv, ones, 2, 3);
    CHECK(members.size() > 1);
    std::set<ElemId> ids;
    for (Element e : members) ids.insert(e.id);
    Word prefix = ones.prefix(2);
    for (Element e : members) {
        CHECK(trivial_on_cylinder(e, prefix));
        CHECK(ids.count(inverse(e).id) == 1);  // closed under inverses
    }
    CHECK(ids.count(kwv.generator_by_name("b2").id) == 1);
    // closed under products that stay inside the enumerated ball
    std::set<ElemId> ball_ids;
    for (Element e : kwv.ball(3)) ball_ids.insert(e.id);
    for (Element x : members)
        for (Element y : members) {
            Element p = compose(x, y);
            if (ball_ids.count(p.id)) CHECK(ids.count(p.id) == 1);
        }

    auto only_identity = kernel_ball(kwv, ones, 2, 0);
    REQUIRE(only_identity.size() == 1);
    CHECK(is_identity(only_identity[0]));
}

TEST_CASE("properness witnesses from the explicit chain") {
    Group k1(build_Kv("1"));
    Context& ctx = k1.ctx();
    Element a1 = k1.generator_by_name("a1");
    Element a2 = k1.generator_by_name("a2");
    Element P = compose(a1, a2);
    Element A = compose(a2, a1);
    Ray ones(Word{}, Word({1}));
    auto ones_word = [&](int k) {
        Word w;
        for (int i = 0; i < k; ++i) w.push_back(1);
        return w;
    };
    auto pair_form = [&ctx](Element x) {
        return Element{&ctx, ctx.make_wreath({0, 1}, {x.id, 0})};
    };

    for (int l : {5, 7}) {
        Element g = compose(compose(power(P, -(1LL << (l - 1))), power(a2, 1LL << ((l - 1) / 2))),
                            power(P, 1LL << (l - 1)));
        Element h = power(P, -(1LL << l));
        PropernessCheck check = properness_witness_check(k1, ones, l, g, h);
        REQUIRE(check.accepted);
        CHECK(equals(section(g, ones_word(l - 1)), pair_form(a1)));
        Element conj = compose(compose(inverse(h), g), h);
        CHECK(equals(section(conj, ones_word(l - 1)),
                     pair_form(compose(compose(a2, a1), inverse(a2)))));
        // acceptance does not depend on the probe depth
        CHECK(properness_witness_check(k1, ones, l, g, h, 2).accepted);
    }

    for (int l : {6, 8}) {
        Element g = compose(compose(power(P, -(1LL << (l - 2))), power(a2, 1LL << ((l - 2) / 2))),
                            power(P, 1LL << (l - 2)));
        Element h = power(P, -(1LL << l));
        PropernessCheck check = properness_witness_check(k1, ones, l, g, h);
        REQUIRE(check.accepted);
        Element conj = compose(compose(inverse(h), g), h);
        CHECK(equals(section(conj, ones_word(l - 2)),
                     pair_form(compose(compose(power(A, 2), a1), power(A, -2)))));
    }

    PropernessCheck trivial = properness_witness_check(k1, ones, 5, k1.identity(), power(P, -32));
    CHECK_FALSE(trivial.accepted);
    CHECK(trivial.rejected_clause.find("commutator") != std::string::npos);

    PropernessCheck not_kernel = properness_witness_check(k1, ones, 5, a1, P);
    CHECK_FALSE(not_kernel.accepted);
    CHECK(not_kernel.rejected_clause.find("not trivial") != std::string::npos);

    PropernessCheck not_stab =
        properness_witness_check(k1, ones, 3,
                                 compose(compose(power(P, -4), power(a2, 2)), power(P, 4)), a1);
    CHECK_FALSE(not_stab.accepted);
}

TEST_CASE("accepted witnesses re-verify") {
    Group k1(build_Kv("1"));
    Element a1 = k1.generator_by_name("a1");
    Element a2 = k1.generator_by_name("a2");
    Element P = compose(a1, a2);
    Ray ones(Word{}, Word({1}));
    Element g = compose(compose(power(P, -16), power(a2, 4)), power(P, 16));
    Element h = power(P, -32);
    PropernessCheck check = properness_witness_check(k1, ones, 5, g, h);
    REQUIRE(check.accepted);
    // evidence verifies against the commutator action
    Element c = compose(compose(compose(inverse(h), g), h), inverse(g));
    CHECK(apply(c, check.evidence) != check.evidence);
    // clause (a) from scratch
    Word prefix = ones.prefix(5);
    CHECK(trivial_on_cylinder(g, prefix));
    CHECK(apply(h, prefix) == prefix);
}

TEST_CASE("section formula self-checks") {
    FormulaCheckReport report = section_formula_check(8);
    CHECK(report.all_pass);
    for (const FormulaCheckRow& row : report.rows) {
        INFO(row.item);
        CHECK(row.pass);
    }
    REQUIRE(report.even_rows.size() == 2);
    for (const EvenDisplayRow& row : report.even_rows) {
        CHECK(row.displayed_matches == "none");
        CHECK(row.corrected_matches == "l-2");
    }
}
