// germlab: exact computations with self-similar groups acting on rooted
// d-ary trees.  Every subcommand prints a JSON report to stdout and a
// short human summary to stderr.
//
// Exit codes: 0 answer/verdict produced, 1 usage or parse error,
// 2 resource cap exceeded, 3 internal invariant violation.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "germlab/germlab.hpp"

namespace {

using namespace germlab;

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open file \"" + path + "\"");
    try {
        return json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw parse_error("bad JSON in \"" + path + "\": " + e.what());
    }
}

GroupSpec resolve_group(const std::string& ref) {
    GroupSpec spec;
    if (ref.rfind("builtin:", 0) == 0)
        spec = builtin_group(ref.substr(8));
    else
        spec = load_spec(read_json_file(ref));
    require(spec.degree <= 36, "degree " + std::to_string(spec.degree) +
                                   " exceeds the CLI limit of 36 (reports stay readable)");
    return spec;
}

void emit(const json& body, const std::string& summary) {
    json doc;
    doc["schema"] = "germlab/1";
    for (auto it = body.begin(); it != body.end(); ++it) doc[it.key()] = it.value();
    std::cout << doc.dump(2) << std::endl;
    std::cerr << summary << std::endl;
}

struct Options {
    std::string group_ref, element, word, vertex, ray, cert_ref, witness_file, profile = "full";
    std::string g_word, h_word;
    int size_cap = 500, depth_cap = 16;
    std::uint64_t order_cap = 4096;
    int level_cap = 16;
    int depth = 30, search_depth = 12;
    int word_bound = 2, preperiod_bound = 2, period_bound = 4;
    int lqa_word_bound = 2, lqa_depth = 6;
    int level = 0, probe_depth = 64, lmax = 8, activity_levels = 10;
    int kernel_word_bound = 3;
    bool force = false;
    long long seed = 0;

    std::uint64_t vertex_cap() const { return force ? (1ull << 40) : (1ull << 20); }
};

int run(const std::string& verb, const Options& opt) {
    std::optional<Group> G;
    if (!opt.group_ref.empty()) G.emplace(resolve_group(opt.group_ref));
    auto need_group = [&]() -> Group& {
        require(G.has_value(), "this command needs --group");
        return *G;
    };

    if (verb == "eval") {
        Group& g = need_group();
        Element e = g.element(opt.element);
        Word w = g.parse_word(opt.word);
        std::string image = g.format_word(apply(e, w));
        emit({{"group", g.name()}, {"element", opt.element}, {"word", opt.word}, {"image", image}},
             opt.element + " . " + opt.word + " = " + image);
        return 0;
    }
    if (verb == "section") {
        Group& g = need_group();
        Element s = section(g.element(opt.element), g.parse_word(opt.word));
        emit({{"group", g.name()},
              {"element", opt.element},
              {"word", opt.word},
              {"section", g.word_str(s)},
              {"is_identity", is_identity(s)}},
             "section of " + opt.element + " below " + opt.word + " = \"" + g.word_str(s) + "\"");
        return 0;
    }
    if (verb == "identity") {
        Group& g = need_group();
        Element e = g.element(opt.element);
        json body{{"group", g.name()}, {"element", opt.element}, {"identity", is_identity(e)}};
        std::string summary;
        if (is_identity(e)) {
            summary = opt.element + " is the identity";
        } else {
            Word w = *e.ctx->moved_word(e.id);
            body["moved_word"] = g.format_word(w);
            summary = opt.element + " moves the word " + g.format_word(w);
        }
        emit(body, summary);
        return 0;
    }
    if (verb == "nucleus") {
        Group& g = need_group();
        NucleusResult r = nucleus(g, opt.size_cap, opt.depth_cap);
        emit({{"group", g.name()}, {"nucleus", nucleus_to_json(g, r)}},
             g.name() + ": " + (r.certified() ? "contracting certified, nucleus size " +
                                                    std::to_string(r.elements.size())
                                              : "budget exceeded"));
        return 0;
    }
    if (verb == "special-sets") {
        Group& g = need_group();
        NucleusResult r = nucleus(g, opt.size_cap, opt.depth_cap);
        require(r.certified(), "special sets need a certified nucleus; raise the caps");
        SpecialSets sets = special_sets(g, r);
        emit({{"group", g.name()},
              {"nucleus", nucleus_to_json(g, r, false)},
              {"special_sets", special_sets_to_json(g, sets)}},
             g.name() + ": |n0| = " + std::to_string(sets.n0.size()) +
                 ", |n1| = " + std::to_string(sets.n1.size()));
        return 0;
    }
    if (verb == "order") {
        Group& g = need_group();
        OrderResult r = torsion_order(g.element(opt.element), opt.order_cap, opt.level_cap,
                                      opt.vertex_cap());
        emit({{"group", g.name()}, {"element", opt.element}, {"order", order_to_json(r)}},
             opt.element + ": " + (r.finite ? "finite order " + std::to_string(r.order)
                                            : "order exceeds cap (level permutation order " +
                                                  std::to_string(r.partial_order) + " at level " +
                                                  std::to_string(r.level_reached) + ")"));
        return 0;
    }
    if (verb == "hausdorff-verify") {
        Group& g = need_group();
        NonHausdorffCertificate cert = [&]() {
            if (opt.cert_ref.rfind("builtin:", 0) == 0)
                return builtin_certificate(g, opt.cert_ref.substr(8), opt.depth);
            json doc = read_json_file(opt.cert_ref);
            if (!doc.contains("depth")) {
                json patched = doc;
                patched["depth"] = opt.depth;
                return certificate_from_json(g, patched);
            }
            return certificate_from_json(g, doc);
        }();
        VerificationReport report = verify_certificate(g, cert);
        emit({{"group", g.name()},
              {"certificate", certificate_to_json(g, cert)},
              {"verification", verification_to_json(report)}},
             std::string("certificate ") + (report.pass ? "PASS" : "FAIL") + " at depth " +
                 std::to_string(cert.depth));
        return 0;
    }
    if (verb == "hausdorff-search") {
        Group& g = need_group();
        auto certs = search_nonhausdorff(g, opt.word_bound, opt.preperiod_bound, opt.period_bound,
                                         opt.search_depth);
        json arr = json::array();
        for (const auto& c : certs) arr.push_back(certificate_to_json(g, c));
        emit({{"group", g.name()},
              {"bounds",
               {{"word_bound", opt.word_bound},
                {"preperiod_bound", opt.preperiod_bound},
                {"period_bound", opt.period_bound},
                {"depth", opt.search_depth}}},
              {"certificates", arr}},
             g.name() + ": " +
                 (certs.empty() ? "no certificate found up to bounds"
                                : std::to_string(certs.size()) + " certificate(s) found"));
        return 0;
    }
    if (verb == "lqa-search") {
        Group& g = need_group();
        auto witnesses = lqa_violation_search(g, opt.lqa_word_bound, opt.lqa_depth);
        emit({{"group", g.name()},
              {"bounds", {{"word_bound", opt.lqa_word_bound}, {"depth", opt.lqa_depth}}},
              {"witnesses", lqa_to_json(g, witnesses)}},
             g.name() + ": " + std::to_string(witnesses.size()) + " violation witness(es)");
        return 0;
    }
    if (verb == "quotient") {
        Group& g = need_group();
        require(opt.level >= 1, "quotient needs --level >= 1");
        LevelPermGroup q = quotient_group(g, opt.level, opt.vertex_cap());
        bool trans = is_level_transitive(g, opt.level, opt.vertex_cap());
        emit({{"group", g.name()},
              {"level", opt.level},
              {"order", q.order().str()},
              {"level_transitive", trans}},
             g.name() + " at level " + std::to_string(opt.level) + ": order " + q.order().str() +
                 (trans ? ", transitive" : ", not transitive"));
        return 0;
    }
    if (verb == "stabilizer") {
        Group& g = need_group();
        StabilizerData data = vertex_stabilizer_gens(g, g.parse_word(opt.vertex), opt.vertex_cap());
        json gens = json::array();
        for (Element e : data.generators) gens.push_back(g.word_str(e));
        emit({{"group", g.name()}, {"vertex", opt.vertex}, {"schreier_generators", gens}},
             "stabilizer of " + opt.vertex + ": " + std::to_string(data.generators.size()) +
                 " Schreier generator(s)");
        return 0;
    }
    if (verb == "kernel-ball") {
        Group& g = need_group();
        Ray z = g.parse_ray(opt.ray);
        auto members = kernel_ball(g, z, opt.level, opt.kernel_word_bound);
        json arr = json::array();
        for (Element e : members) arr.push_back(g.word_str(e));
        emit({{"group", g.name()},
              {"ray", opt.ray},
              {"level", opt.level},
              {"word_bound", opt.kernel_word_bound},
              {"elements", arr}},
             std::to_string(members.size()) + " element(s) trivial on the level-" +
                 std::to_string(opt.level) + " cylinder");
        return 0;
    }
    if (verb == "witness-check") {
        Group& g = need_group();
        std::string ray_text = opt.ray, gw = opt.g_word, hw = opt.h_word;
        int level = opt.level;
        if (!opt.witness_file.empty()) {
            json doc = read_json_file(opt.witness_file);
            ray_text = doc.value("ray", ray_text);
            level = doc.value("level", level);
            gw = doc.value("g", gw);
            hw = doc.value("h", hw);
        }
        require(!ray_text.empty(), "witness-check needs --ray (or a --witness file)");
        PropernessCheck check = properness_witness_check(g, g.parse_ray(ray_text), level,
                                                         g.element(gw), g.element(hw),
                                                         opt.probe_depth);
        emit({{"group", g.name()}, {"witness", properness_to_json(g, check)}},
             check.accepted ? "witness accepted at level " + std::to_string(level)
                            : "witness rejected: " + check.rejected_clause);
        return 0;
    }
    if (verb == "formula-check") {
        FormulaCheckReport report = section_formula_check(opt.lmax);
        emit({{"formula_check", formula_check_to_json(report)}},
             report.all_pass ? "all section formulas verified" : "FORMULA CHECK FAILED");
        if (!report.all_pass) throw internal_error("section formula check failed");
        return 0;
    }
    if (verb == "activity") {
        Group& g = need_group();
        json body{{"group", g.name()}};
        std::string summary;
        if (!opt.element.empty()) {
            ActivityProfile p = classify_activity(g.element(opt.element), opt.activity_levels);
            body["activity"] = activity_to_json(p);
            summary = opt.element + ": " + to_string(p.cls) +
                      (p.cls == ActivityClass::polynomial
                           ? " degree " + std::to_string(p.degree)
                           : "");
        } else {
            json per = json::object();
            for (std::size_t i = 0; i < g.generator_count(); ++i) {
                ActivityProfile p = classify_activity(g.generator(i), opt.activity_levels);
                per[g.generator_name(i)] = activity_to_json(p);
                summary += g.generator_name(i) + ":" + to_string(p.cls) + " ";
            }
            body["activity"] = per;
        }
        emit(body, summary);
        return 0;
    }
    if (verb == "report") {
        Group& g = need_group();
        ReportOptions ropt;
        ropt.quick = (opt.profile == "quick");
        json doc = report(g, ropt);
        std::cout << doc.dump(2) << std::endl;
        std::cerr << g.name() << ": " << doc["verdict"].get<std::string>() << std::endl;
        return 0;
    }
    throw parse_error("unknown command \"" + verb + "\"");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact computation with self-similar groups on rooted trees"};
    app.require_subcommand(1);
    Options opt;
    app.add_option("--seed", opt.seed,
                   "seed for randomized property-test tooling; reports are deterministic");

    auto add_group = [&opt](CLI::App* cmd, bool required = true) {
        auto* o = cmd->add_option("--group", opt.group_ref, "group file or builtin:<name>");
        if (required) o->required();
    };

    auto* eval = app.add_subcommand("eval", "apply an element to a vertex word");
    add_group(eval);
    eval->add_option("--element", opt.element, "group word")->required();
    eval->add_option("--word", opt.word, "vertex word")->required();

    auto* sect = app.add_subcommand("section", "section of an element below a vertex");
    add_group(sect);
    sect->add_option("--element", opt.element)->required();
    sect->add_option("--word", opt.word)->required();

    auto* ident = app.add_subcommand("identity", "decide the word problem");
    add_group(ident);
    ident->add_option("--element", opt.element)->required();

    auto* nuc = app.add_subcommand("nucleus", "contracting certification and nucleus");
    add_group(nuc);
    nuc->add_option("--size-cap", opt.size_cap);
    nuc->add_option("--depth-cap", opt.depth_cap);

    auto* ss = app.add_subcommand("special-sets", "self-section sets inside the nucleus");
    add_group(ss);
    ss->add_option("--size-cap", opt.size_cap);
    ss->add_option("--depth-cap", opt.depth_cap);

    auto* order = app.add_subcommand("order", "torsion order of an element");
    add_group(order);
    order->add_option("--element", opt.element)->required();
    order->add_option("--order-cap", opt.order_cap);
    order->add_option("--level-cap", opt.level_cap);

    auto* hv = app.add_subcommand("hausdorff-verify", "verify a non-Hausdorff certificate");
    add_group(hv);
    hv->add_option("--cert", opt.cert_ref, "certificate file or builtin:<name>")->required();
    hv->add_option("--depth", opt.depth);

    auto* hs = app.add_subcommand("hausdorff-search", "search for non-Hausdorff certificates");
    add_group(hs);
    hs->add_option("--word-bound", opt.word_bound);
    hs->add_option("--preperiod-bound", opt.preperiod_bound);
    hs->add_option("--period-bound", opt.period_bound);
    hs->add_option("--depth", opt.search_depth);

    auto* lqa = app.add_subcommand("lqa-search", "search for local quasi-analyticity violations");
    add_group(lqa);
    lqa->add_option("--word-bound", opt.lqa_word_bound);
    lqa->add_option("--depth", opt.lqa_depth);

    auto* quot = app.add_subcommand("quotient", "level permutation quotient");
    add_group(quot);
    quot->add_option("--level", opt.level)->required();
    quot->add_flag("--force", opt.force, "override the vertex cap");

    auto* stab = app.add_subcommand("stabilizer", "vertex stabilizer Schreier generators");
    add_group(stab);
    stab->add_option("--vertex", opt.vertex)->required();
    stab->add_flag("--force", opt.force);

    auto* kb = app.add_subcommand("kernel-ball", "ball slice of a cylinder kernel");
    add_group(kb);
    kb->add_option("--ray", opt.ray)->required();
    kb->add_option("--level", opt.level)->required();
    kb->add_option("--word-bound", opt.kernel_word_bound);

    auto* wc = app.add_subcommand("witness-check", "check a properness witness pair");
    wc->set_help_flag("--help", "print help");  // frees -h/--h for the element option
    add_group(wc);
    wc->add_option("--witness", opt.witness_file, "witness JSON document");
    wc->add_option("--ray", opt.ray);
    wc->add_option("--level", opt.level);
    wc->add_option("--g", opt.g_word);
    wc->add_option("--h", opt.h_word);
    wc->add_option("--probe-depth", opt.probe_depth);

    auto* fc = app.add_subcommand("formula-check", "closed-form section formula self-checks");
    fc->add_option("--lmax", opt.lmax);

    auto* act = app.add_subcommand("activity", "activity growth classification");
    add_group(act);
    act->add_option("--element", opt.element, "group word (default: every generator)");
    act->add_option("--levels", opt.activity_levels);

    auto* rep = app.add_subcommand("report", "composite survey of one group");
    add_group(rep);
    rep->add_option("--profile", opt.profile)->check(CLI::IsMember({"full", "quick"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        return run(app.get_subcommands().front()->get_name(), opt);
    } catch (const germlab::parse_error& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 1;
    } catch (const germlab::validation_error& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 1;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: malformed document: " << e.what() << std::endl;
        return 1;
    } catch (const germlab::resource_error& e) {
        std::cerr << "resource cap: " << e.what() << std::endl;
        return 2;
    } catch (const std::bad_alloc&) {
        std::cerr << "resource cap: out of memory" << std::endl;
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal invariant violation: " << e.what() << std::endl;
        return 3;
    }
}
