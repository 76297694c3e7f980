#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "germlab/activity.hpp"
#include "germlab/group.hpp"
#include "support.hpp"

using namespace germlab;

namespace {

// Direct enumeration of nontrivial sections, no transfer matrix.
std::uint64_t direct_count(Group& G, Element g, int n) {
    std::uint64_t total = 0;
    for (const Word& w : oracle::words_of_length(G.degree(), n))
        if (!is_identity(section(g, w))) ++total;
    return total;
}

} // namespace

TEST_CASE("identity has zero activity") {
    Group k1(build_Kv("1"));
    auto counts = activity_counts(k1.identity(), 10);
    for (std::uint64_t c : counts) CHECK(c == 0);
    CHECK(classify_activity(k1.identity()).cls == ActivityClass::bounded);
}

TEST_CASE("M(d) generators have the published counts") {
    for (int d : {3, 4}) {
        Group md(build_Md(d));
        for (int i = 1; i < d; ++i) {
            auto counts = activity_counts(md.generator_by_name("m" + std::to_string(i)), 10);
            for (std::uint64_t c : counts) CHECK(c == 1);
        }
        auto counts = activity_counts(md.generator_by_name("m" + std::to_string(d)), 10);
        for (int n = 1; n <= 10; ++n)
            CHECK(counts[n - 1] == static_cast<std::uint64_t>(n) * (d - 1) + 1);
        ActivityProfile profile = classify_activity(md.generator_by_name("m" + std::to_string(d)));
        CHECK(profile.cls == ActivityClass::polynomial);
        CHECK(profile.degree == 1);
        CHECK(profile.fit_consistent);
    }
}

TEST_CASE("bounded families") {
    for (const char* name : {"K(1)", "K(01)", "K(00,1)", "K(000,1)", "K(11,0)", "K(0,10)",
                                    "K(0,110)", "grigorchuk"}) {
        Group G(builtin_group(name));
        for (std::size_t i = 0; i < G.generator_count(); ++i) {
            ActivityProfile profile = classify_activity(G.generator(i));
            INFO(name << " generator " << G.generator_name(i));
            CHECK(profile.cls == ActivityClass::bounded);
            CHECK(profile.fit_consistent);
        }
    }
    for (int d : {3, 4}) {
        Group md(build_Md(d));
        for (int i = 1; i < d; ++i) {
            ActivityProfile profile = classify_activity(md.generator_by_name("m" + std::to_string(i)));
            CHECK(profile.cls == ActivityClass::bounded);
        }
    }
}

TEST_CASE("entangled cycles grow exponentially") {
    GroupSpec shift;
    shift.degree = 2;
    shift.generators = {{"q", {1, 0}, {TokenWord{{1}}, TokenWord{{1}}}}};
    Group G(std::move(shift));
    ActivityProfile profile = classify_activity(G.generator(0));
    CHECK(profile.cls == ActivityClass::exponential);
    auto counts = activity_counts(G.generator(0), 10);
    for (int n = 1; n <= 10; ++n) CHECK(counts[n - 1] == (std::uint64_t(1) << n));
    CHECK(profile.fit_consistent);
}

TEST_CASE("transfer counts agree with direct enumeration") {
    std::mt19937_64 rng(2024);
    Group kwv(build_Kwv("00", "1"));
    Group md(build_Md(3));
    for (Group* G : {&kwv, &md}) {
        auto ball = G->ball(2);
        for (int trial = 0; trial < 10; ++trial) {
            Element g = ball[rng() % ball.size()];
            auto counts = activity_counts(g, 6);
            for (int n = 1; n <= 6; ++n) CHECK(counts[n - 1] == direct_count(*G, g, n));
        }
    }
}

TEST_CASE("activity is subadditive under products") {
    std::mt19937_64 rng(31337);
    Group md(build_Md(3));
    auto ball = md.ball(1);
    for (int trial = 0; trial < 20; ++trial) {
        Element g = ball[rng() % ball.size()];
        Element h = ball[rng() % ball.size()];
        auto cg = activity_counts(g, 6);
        auto ch = activity_counts(h, 6);
        auto cgh = activity_counts(compose(g, h), 6);
        for (int n = 1; n <= 6; ++n) CHECK(cgh[n - 1] <= cg[n - 1] + ch[n - 1]);
    }
}

TEST_CASE("classification is stable under recanonicalization") {
    Group md(build_Md(3));
    Element m3 = md.generator_by_name("m3");
    Element same = compose(m3, md.identity());
    ActivityProfile p = classify_activity(m3);
    ActivityProfile q = classify_activity(same);
    CHECK(p.cls == q.cls);
    CHECK(p.degree == q.degree);
    CHECK(p.counts == q.counts);
}

TEST_CASE("deep counts are refused instead of overflowing") {
    Group md(build_Md(3));
    CHECK_THROWS_AS(activity_counts(md.generator_by_name("m3"), 64), resource_error);
}
