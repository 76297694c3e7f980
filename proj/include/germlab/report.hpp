#pragma once

#include <string>
#include <vector>

#include "germlab/activity.hpp"
#include "germlab/contraction.hpp"
#include "germlab/hausdorff.hpp"
#include "germlab/level_quotients.hpp"

namespace germlab {

inline json certificate_to_json(Group& G, const NonHausdorffCertificate& cert) {
    json doc;
    doc["element"] = G.word_str(cert.g);
    doc["ray"] = G.format_ray(cert.ray);
    doc["tail"] = G.format_word(cert.schema.tail);
    doc["prefix"] = {{"a", cert.schema.a}, {"b", cert.schema.b}};
    doc["depth"] = cert.depth;
    return doc;
}

inline NonHausdorffCertificate certificate_from_json(Group& G, const json& doc) try {
    require(doc.is_object(), "certificate document must be a JSON object");
    for (const char* key : {"element", "ray", "tail", "prefix"})
        require(doc.contains(key), std::string("certificate document needs \"") + key + "\"");
    Element g = G.element(doc["element"].get<std::string>());
    Ray z = G.parse_ray(doc["ray"].get<std::string>());
    PatchSchema schema;
    schema.tail = G.parse_word(doc["tail"].get<std::string>());
    schema.a = doc["prefix"].value("a", 1);
    schema.b = doc["prefix"].value("b", 0);
    int depth = doc.value("depth", 30);
    return NonHausdorffCertificate(g, z, schema, depth);
} catch (const nlohmann::json::exception& e) {
    throw validation_error(std::string("malformed certificate document: ") + e.what());
}

inline json verification_to_json(const VerificationReport& report) {
    json doc;
    doc["verdict"] = report.pass ? "pass" : "fail";
    json levels = json::array();
    for (const LevelOutcome& out : report.levels) {
        levels.push_back({{"level", out.level},
                          {"n", out.n},
                          {"fixed_prefix", out.fixed_prefix},
                          {"germ_nontrivial", out.germ_nontrivial},
                          {"patch_trivial", out.patch_trivial}});
    }
    doc["levels"] = levels;
    return doc;
}

inline json nucleus_to_json(Group& G, const NucleusResult& result, bool list_elements = true) {
    json doc;
    doc["contracting"] = result.certified() ? "certified" : "budget_exceeded";
    doc["nucleus_size"] = result.elements.size();
    if (result.certified()) doc["depth_bound"] = result.depth_bound;
    doc["size_cap"] = result.size_cap;
    doc["depth_cap"] = result.depth_cap;
    if (list_elements && result.certified()) {
        std::vector<std::string> words;
        for (Element e : result.elements) words.push_back(G.word_str(e));
        std::sort(words.begin(), words.end(), [](const std::string& x, const std::string& y) {
            return std::make_pair(x.size(), x) < std::make_pair(y.size(), y);
        });
        doc["nucleus"] = words;
    }
    return doc;
}

inline json special_sets_to_json(Group& G, const SpecialSets& sets) {
    auto words = [&G](const std::vector<Element>& es) {
        std::vector<std::string> out;
        for (Element e : es) out.push_back(G.word_str(e));
        std::sort(out.begin(), out.end(), [](const std::string& x, const std::string& y) {
            return std::make_pair(x.size(), x) < std::make_pair(y.size(), y);
        });
        return out;
    };
    json doc;
    doc["n0"] = words(sets.n0);
    doc["n1"] = words(sets.n1);
    return doc;
}

inline json order_to_json(const OrderResult& result) {
    json doc;
    if (result.finite) {
        doc["status"] = "finite";
        doc["order"] = result.order;
    } else {
        doc["status"] = "exceeds_cap";
        doc["level_reached"] = result.level_reached;
        doc["partial_order_lower_bound"] = result.partial_order;
    }
    return doc;
}

inline json activity_to_json(const ActivityProfile& profile) {
    json doc;
    doc["counts"] = profile.counts;
    doc["class"] = to_string(profile.cls);
    if (profile.cls == ActivityClass::polynomial) doc["degree"] = profile.degree;
    doc["evidence"] = profile.evidence;
    doc["fit_slope"] = profile.fit_slope;
    doc["fit_consistent"] = profile.fit_consistent;
    return doc;
}

inline json properness_to_json(Group& G, const PropernessCheck& check) {
    json doc;
    doc["accepted"] = check.accepted;
    doc["level"] = check.level;
    doc["g"] = G.word_str(check.g);
    doc["h"] = G.word_str(check.h);
    if (check.accepted)
        doc["evidence_moved_word"] = G.format_word(check.evidence);
    else
        doc["rejected_clause"] = check.rejected_clause;
    return doc;
}

inline json formula_check_to_json(const FormulaCheckReport& report) {
    json doc;
    doc["all_pass"] = report.all_pass;
    json rows = json::array();
    for (const FormulaCheckRow& row : report.rows)
        rows.push_back({{"item", row.item}, {"pass", row.pass}});
    doc["rows"] = rows;
    json evens = json::array();
    for (const EvenDisplayRow& row : report.even_rows)
        evens.push_back({{"level", row.level},
                         {"published_form_matches_at", row.displayed_matches},
                         {"derived_form_matches_at", row.corrected_matches}});
    doc["even_level_conjugation"] = evens;
    return doc;
}

inline json lqa_to_json(Group& G, const std::vector<LqaWitness>& witnesses) {
    json doc = json::array();
    for (const LqaWitness& w : witnesses)
        doc.push_back({{"element", G.word_str(w.g)},
                       {"patch", G.format_word(w.patch)},
                       {"inner", G.format_word(w.inner)}});
    return doc;
}

inline json fixed_vertices_to_json(Group& G, const FixedVertexReport& report) {
    json doc;
    doc["level"] = report.level;
    json rows = json::array();
    for (const auto& [e, count] : report.rows)
        rows.push_back({{"element", G.word_str(e)}, {"fixed", count}});
    doc["rows"] = rows;
    doc["fixed_pairs"] = report.fixed_pairs;
    doc["total_pairs"] = report.total_pairs;
    doc["fraction"] = report.fraction();
    return doc;
}

struct ReportOptions {
    bool quick = false;
    int nucleus_size_cap = 500;
    int nucleus_depth_cap = 16;
    int search_word_bound = 2;
    int search_preperiod = 2;
    int search_period = 4;
    int cert_depth = 12;
    int lqa_word_bound = 2;
    int lqa_depth = 6;
    int quotient_levels = 4;
    int activity_levels = 10;
    std::uint64_t vertex_cap = 1u << 20;
};

// Composite survey of one group: contraction pipeline, direct
// certificate search, activity classes, level quotients, and a
// fixed-vertex census, with a single overall verdict.
inline json report(Group& G, const ReportOptions& opt = {}) {
    json doc;
    doc["schema"] = "germlab/1";
    doc["group"] = G.name();
    doc["profile"] = opt.quick ? "quick" : "full";

    ContractingReport pipeline = criterion_contracting_report(G, opt.nucleus_size_cap,
                                                              opt.nucleus_depth_cap, opt.cert_depth);
    doc["contracting"] = nucleus_to_json(G, pipeline.nucleus, !opt.quick);
    if (pipeline.nucleus.certified()) doc["special_sets"] = special_sets_to_json(G, pipeline.sets);
    doc["contraction_pipeline"] = {{"verdict", pipeline.verdict}};
    json pipeline_certs = json::array();
    for (const NonHausdorffCertificate& cert : pipeline.certificates)
        pipeline_certs.push_back(certificate_to_json(G, cert));
    doc["contraction_pipeline"]["certificates"] = pipeline_certs;

    std::vector<NonHausdorffCertificate> found;
    if (!opt.quick) {
        found = search_nonhausdorff(G, opt.search_word_bound, opt.search_preperiod,
                                    opt.search_period, opt.cert_depth);
        json certs = json::array();
        for (const NonHausdorffCertificate& cert : found) certs.push_back(certificate_to_json(G, cert));
        doc["search"] = {{"word_bound", opt.search_word_bound},
                         {"preperiod_bound", opt.search_preperiod},
                         {"period_bound", opt.search_period},
                         {"depth", opt.cert_depth},
                         {"certificates", certs}};

        auto lqa = lqa_violation_search(G, opt.lqa_word_bound, opt.lqa_depth);
        doc["lqa"] = {{"word_bound", opt.lqa_word_bound},
                      {"depth", opt.lqa_depth},
                      {"violations_found", lqa.size()}};
        json sample = json::array();
        for (std::size_t i = 0; i < lqa.size() && i < 5; ++i)
            sample.push_back({{"element", G.word_str(lqa[i].g)},
                              {"patch", G.format_word(lqa[i].patch)},
                              {"inner", G.format_word(lqa[i].inner)}});
        doc["lqa"]["sample"] = sample;

        doc["fixed_vertices"] = fixed_vertices_to_json(G, fixed_vertex_report(G, 1, 3, opt.vertex_cap));
    }

    json act = json::object();
    for (std::size_t i = 0; i < G.generator_count(); ++i)
        act[G.generator_name(i)] = activity_to_json(classify_activity(G.generator(i), opt.activity_levels));
    doc["activity"] = act;

    json quot = json::object();
    json orders = json::array();
    json transitive = json::array();
    for (int n = 1; n <= opt.quotient_levels; ++n) {
        orders.push_back(quotient_group(G, n, opt.vertex_cap).order().str());
        transitive.push_back(is_level_transitive(G, n, opt.vertex_cap));
    }
    quot["orders"] = orders;
    quot["level_transitive"] = transitive;
    doc["quotients"] = quot;

    // The two-generator K(1) carries explicit witnesses separating the
    // cylinder kernels from the prefix-stabilizer centralizers.
    if (G.spec().family.tag == FamilyInfo::Tag::kv && G.spec().family.v == "1" && !opt.quick) {
        Element a1 = G.generator_by_name("a1");
        Element a2 = G.generator_by_name("a2");
        Element P = compose(a1, a2);
        int l = 5;
        Element g = compose(compose(power(P, -16), power(a2, 4)), power(P, 16));
        Element h = power(P, -32);
        PropernessCheck check = properness_witness_check(G, Ray(Word{}, Word{{1}}), l, g, h);
        doc["properness_witness"] = properness_to_json(G, check);
    }

    bool non_hausdorff = !pipeline.certificates.empty() || !found.empty();
    if (non_hausdorff) {
        doc["verdict"] = "non-Hausdorff certified";
        std::vector<std::string> witnesses;
        for (const NonHausdorffCertificate& c : pipeline.certificates)
            witnesses.push_back(G.word_str(c.g));
        for (const NonHausdorffCertificate& c : found) witnesses.push_back(G.word_str(c.g));
        std::sort(witnesses.begin(), witnesses.end());
        witnesses.erase(std::unique(witnesses.begin(), witnesses.end()), witnesses.end());
        doc["witnesses"] = witnesses;
    } else if (pipeline.nucleus.certified() && pipeline.sets.n1.size() == 1) {
        doc["verdict"] = "Hausdorff certified";
    } else if (G.spec().family.tag == FamilyInfo::Tag::md && G.spec().family.d == 2) {
        doc["verdict"] = "inconclusive (open question: M(2))";
    } else {
        doc["verdict"] = "inconclusive";
    }
    return doc;
}

} // namespace germlab
