#include <catch2/catch_amalgamated.hpp>

#include "germlab/group.hpp"
#include "support.hpp"

using namespace germlab;

TEST_CASE("K(v) construction") {
    GroupSpec k1 = build_Kv("1");
    REQUIRE(k1.generators.size() == 2);
    CHECK(k1.generators[0].name == "a1");
    CHECK(k1.generators[0].perm == std::vector<Letter>({1, 0}));
    CHECK(k1.generators[0].sections == std::vector<TokenWord>({{}, {2}}));
    CHECK(k1.generators[1].perm == std::vector<Letter>({0, 1}));
    CHECK(k1.generators[1].sections == std::vector<TokenWord>({{}, {1}}));

    GroupSpec ko = build_Kv("");
    REQUIRE(ko.generators.size() == 1);
    CHECK(ko.generators[0].sections == std::vector<TokenWord>({{}, {1}}));
    CHECK(ko.family.tag == FamilyInfo::Tag::odometer);

    GroupSpec k0 = build_Kv("0");
    CHECK(k0.generators[1].sections == std::vector<TokenWord>({{1}, {}}));

    CHECK_THROWS_AS(build_Kv("102"), validation_error);
}

TEST_CASE("K(w,v) construction") {
    GroupSpec g = build_Kwv("00", "1");
    REQUIRE(g.generators.size() == 3);
    CHECK(g.generators[0].name == "b1");
    CHECK(g.generators[0].perm == std::vector<Letter>({1, 0}));
    CHECK(g.generators[1].name == "b2");
    CHECK(g.generators[1].sections == std::vector<TokenWord>({{1}, {}}));
    CHECK(g.generators[2].name == "a1");
    CHECK(g.generators[2].sections == std::vector<TokenWord>({{2}, {3}}));

    GroupSpec h = build_Kwv("1", "0");
    REQUIRE(h.generators.size() == 2);
    CHECK(h.generators[1].sections == std::vector<TokenWord>({{2}, {1}}));  // (a1, b1)

    CHECK_THROWS_AS(build_Kwv("0", "0"), validation_error);
    CHECK_THROWS_AS(build_Kwv("", "1"), validation_error);
}

TEST_CASE("M(d) construction") {
    GroupSpec m3 = build_Md(3);
    REQUIRE(m3.generators.size() == 3);
    CHECK(m3.generators[0].perm == std::vector<Letter>({1, 2, 0}));
    CHECK(m3.generators[1].perm == std::vector<Letter>({1, 0, 2}));  // (01)
    CHECK(m3.generators[1].sections == std::vector<TokenWord>({{2}, {}, {}}));
    CHECK(m3.generators[2].perm == std::vector<Letter>({0, 1, 2}));
    CHECK(m3.generators[2].sections == std::vector<TokenWord>({{1}, {2}, {3}}));

    GroupSpec m2 = build_Md(2);
    REQUIRE(m2.generators.size() == 2);
    CHECK(m2.generators[0].perm == std::vector<Letter>({1, 0}));
    // m1 = (1, m1)(01) in tuple form, so the section below letter 0 is m1
    CHECK(m2.generators[0].sections == std::vector<TokenWord>({{1}, {}}));
    CHECK(m2.generators[1].sections == std::vector<TokenWord>({{1}, {2}}));

    CHECK_THROWS_AS(build_Md(1), validation_error);
}

TEST_CASE("spec documents round-trip") {
    for (const GroupSpec& spec :
         {build_Kv(""), build_Kv("1"), build_Kv("01"), build_Kwv("00", "1"), build_Kwv("0", "10"),
          build_Md(3), build_Md(5), build_grigorchuk()}) {
        GroupSpec back = load_spec(serialize_spec(spec));
        CHECK(back == spec);
    }
}

TEST_CASE("spec document validation") {
    json ok = {{"degree", 2},
               {"generators",
                {{"a1", {{"perm", {1, 0}}, {"sections", {"", "a2"}}}},
                 {"a2", {{"perm", {0, 1}}, {"sections", {"", "a1"}}}}}}};
    GroupSpec loaded = load_spec(ok);
    GroupSpec expect = build_Kv("1");
    CHECK(loaded.degree == expect.degree);
    CHECK(loaded.generators == expect.generators);

    json unknown = ok;
    unknown["generators"]["a1"]["sections"] = {"", "q"};
    try {
        load_spec(unknown);
        FAIL("expected a validation error");
    } catch (const validation_error& e) {
        CHECK(std::string(e.what()).find("q") != std::string::npos);
    }

    json badperm = ok;
    badperm["generators"]["a1"]["perm"] = {0, 0};
    try {
        load_spec(badperm);
        FAIL("expected a validation error");
    } catch (const validation_error& e) {
        CHECK(std::string(e.what()).find("not a bijection") != std::string::npos);
    }

    json nodegree = {{"generators", json::object()}};
    CHECK_THROWS_AS(load_spec(nodegree), validation_error);

    // wrong field types surface as validation errors, never raw crashes
    json stringperm = ok;
    stringperm["generators"]["a1"]["perm"] = {"x", "y"};
    CHECK_THROWS_AS(load_spec(stringperm), validation_error);
    json numeric_sections = ok;
    numeric_sections["generators"]["a2"]["sections"] = {1, 2};
    CHECK_THROWS_AS(load_spec(numeric_sections), validation_error);
    json bad_degree = ok;
    bad_degree["degree"] = "two";
    CHECK_THROWS_AS(load_spec(bad_degree), validation_error);
    CHECK_THROWS_AS(load_spec(json::array()), validation_error);
}

TEST_CASE("odometer acts as the adding machine") {
    Group odo(build_Kv(""));
    Element a1 = odo.generator(0);
    for (int k = 0; k <= 10; ++k) {
        Word w, expect;
        for (int i = 0; i < k; ++i) w.push_back(1);
        w.push_back(0);
        for (int i = 0; i < k; ++i) expect.push_back(0);
        expect.push_back(1);
        Word tail{{1, 0, 1}};
        CHECK(apply(a1, w + tail) == expect + tail);
    }
}

TEST_CASE("generator sections stay inside the declared set") {
    for (const GroupSpec& spec :
         {build_Kv("1"), build_Kwv("00", "1"), build_Md(4), build_grigorchuk()}) {
        for (const GeneratorDef& g : spec.generators)
            for (const TokenWord& s : g.sections)
                for (GenTok t : s) {
                    CHECK(std::abs(t) >= 1);
                    CHECK(std::abs(t) <= static_cast<int>(spec.generators.size()));
                }
        Group G{GroupSpec(spec)};
        for (std::size_t i = 0; i < G.generator_count(); ++i)
            CHECK(G.ctx().token_word(G.generator(i).id).has_value());
    }
}

TEST_CASE("element word syntax") {
    Group k1(build_Kv("1"));
    CHECK(is_identity(k1.element("")));
    Element e = k1.element("a1 a2 a1^-1");
    Element f = compose(compose(k1.generator_by_name("a1"), k1.generator_by_name("a2")),
                        inverse(k1.generator_by_name("a1")));
    CHECK(equals(e, f));
    CHECK_THROWS_AS(k1.element("zz"), validation_error);
}

TEST_CASE("display words render generator names") {
    Group kwv(build_Kwv("00", "1"));
    CHECK(kwv.word_str(kwv.generator_by_name("a1")) == "a1");
    CHECK(kwv.word_str(kwv.identity()).empty());
    // a1 is an involution here, so its inverse canonicalizes to a1 itself
    Element p = compose(kwv.generator_by_name("b1"), inverse(kwv.generator_by_name("a1")));
    CHECK(kwv.word_str(p) == "b1 a1");

    Group k1(build_Kv("1"));
    Element q = compose(k1.generator_by_name("a1"), inverse(k1.generator_by_name("a2")));
    CHECK(k1.word_str(q) == "a1 a2^-1");
}

TEST_CASE("builtin registry resolves every documented name") {
    for (const char* name : {"K()", "K(1)", "K(01)", "K(00,1)", "K(000,1)", "K(11,0)",
                                    "K(0,10)", "K(0,110)", "M(2)", "M(3)", "M(4)", "M(5)",
                                    "grigorchuk"}) {
        GroupSpec spec = builtin_group(name);
        CHECK(spec.degree >= 2);
        Group G{std::move(spec)};
        CHECK(G.generator_count() >= 1);
    }
    CHECK_THROWS_AS(builtin_group("Q(1)"), parse_error);
    CHECK_THROWS_AS(builtin_group("K(0,0)"), validation_error);
}

TEST_CASE("ball enumeration") {
    Group kwv(build_Kwv("00", "1"));
    auto b0 = kwv.ball(0);
    REQUIRE(b0.size() == 1);
    CHECK(is_identity(b0[0]));
    auto b1 = kwv.ball(1);
    CHECK(b1.size() == 4);  // identity + three involutive generators
    auto b2 = kwv.ball(2);
    CHECK(b2.size() > b1.size());
    // deduplication: all canonical ids distinct
    std::set<ElemId> ids;
    for (Element e : b2) ids.insert(e.id);
    CHECK(ids.size() == b2.size());
}

TEST_CASE("group elements agree with the recursion oracle") {
    std::mt19937_64 rng(321);
    for (const GroupSpec& spec : {build_Kv("1"), build_Kwv("00", "1"), build_Md(3)}) {
        Group G{GroupSpec(spec)};
        for (int trial = 0; trial < 50; ++trial) {
            TokenWord w;
            int len = 1 + static_cast<int>(rng() % 4);
            for (int i = 0; i < len; ++i) {
                GenTok t = static_cast<GenTok>(1 + rng() % spec.generators.size());
                w.push_back((rng() % 2) ? t : -t);
            }
            Element e = G.identity();
            for (GenTok t : w) {
                Element f = G.generator(std::abs(t) - 1);
                e = compose(e, t > 0 ? f : inverse(f));
            }
            Word input = testgen::random_word(rng, spec.degree, 6);
            CHECK(apply(e, input) == oracle::apply(spec, w, input));
        }
    }
}
