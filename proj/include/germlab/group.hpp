#pragma once

#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "germlab/context.hpp"

namespace germlab {

using json = nlohmann::ordered_json;

struct GeneratorDef {
    std::string name;
    std::vector<Letter> perm;
    std::vector<TokenWord> sections;  // sections[i] acts below letter i

    bool operator==(const GeneratorDef&) const = default;
};

struct FamilyInfo {
    enum class Tag { custom, odometer, kv, kwv, md };
    Tag tag = Tag::custom;
    std::string v;  // for kv/kwv
    std::string w;  // for kwv
    int d = 0;      // for md

    bool operator==(const FamilyInfo&) const = default;
};

// A self-similar group presentation: degree plus named wreath recursions.
struct GroupSpec {
    int degree = 2;
    std::vector<GeneratorDef> generators;
    FamilyInfo family;
    std::string name;  // optional display name

    bool operator==(const GroupSpec& o) const {
        return degree == o.degree && generators == o.generators && family == o.family;
    }

    int generator_index(const std::string& gname) const {
        for (std::size_t i = 0; i < generators.size(); ++i)
            if (generators[i].name == gname) return static_cast<int>(i);
        return -1;
    }
};

// --- family parameter indexing ---------------------------------------------
//
// Family parameter strings list their letters x_n ... x_1 left to right:
// the rightmost character is x_1, the one driving the lowest recursion,
// and the leading characters of w and v are the letters y_k and x_n that
// the K(w,v) constraint compares.

inline Letter family_letter(const std::string& s, int i /* 1-based, from the right */) {
    char c = s[s.size() - static_cast<std::size_t>(i)];
    require(c == '0' || c == '1', "family words must be over {0,1}");
    return c - '0';
}

inline void check_binary_word(const std::string& s) {
    for (char c : s) require(c == '0' || c == '1', "family words must be over {0,1}");
}

namespace detail {

inline GeneratorDef simple_gen(std::string name, std::vector<Letter> perm,
                               std::vector<TokenWord> sections) {
    return GeneratorDef{std::move(name), std::move(perm), std::move(sections)};
}

inline TokenWord one(int gen_index) { return TokenWord{static_cast<GenTok>(gen_index + 1)}; }

} // namespace detail

// K(v): n = |v|+1 generators over the binary alphabet.  a1 swaps the top
// letter and has section a_n below letter 1; a_{i+1} has section a_i
// below letter x_i.  Empty v yields the one-generator adding machine.
inline GroupSpec build_Kv(const std::string& v) {
    check_binary_word(v);
    int n = static_cast<int>(v.size()) + 1;
    GroupSpec spec;
    spec.degree = 2;
    spec.family = v.empty() ? FamilyInfo{FamilyInfo::Tag::odometer, "", "", 0}
                            : FamilyInfo{FamilyInfo::Tag::kv, v, "", 0};
    spec.name = "K(" + v + ")";
    for (int i = 1; i <= n; ++i) spec.generators.push_back({"a" + std::to_string(i), {}, {}});
    spec.generators[0].perm = {1, 0};
    spec.generators[0].sections = {TokenWord{}, detail::one(n - 1)};
    for (int i = 1; i <= n - 1; ++i) {
        GeneratorDef& g = spec.generators[i];
        g.perm = {0, 1};
        if (family_letter(v, i) == 0)
            g.sections = {detail::one(i - 1), TokenWord{}};
        else
            g.sections = {TokenWord{}, detail::one(i - 1)};
    }
    return spec;
}

// K(w,v): k+n generators b1..bk, a1..an over the binary alphabet.
inline GroupSpec build_Kwv(const std::string& w, const std::string& v) {
    require(!w.empty() && !v.empty(), "K(w,v) requires nonempty w and v");
    check_binary_word(w);
    check_binary_word(v);
    int k = static_cast<int>(w.size());
    int n = static_cast<int>(v.size());
    Letter yk = family_letter(w, k);
    Letter xn = family_letter(v, n);
    require(yk != xn,
            "K(w,v) requires the letters y_k and x_n to differ "
            "(the leading characters of the two parameter strings)");
    GroupSpec spec;
    spec.degree = 2;
    spec.family = {FamilyInfo::Tag::kwv, v, w, 0};
    spec.name = "K(" + w + "," + v + ")";
    for (int j = 1; j <= k; ++j) spec.generators.push_back({"b" + std::to_string(j), {}, {}});
    for (int i = 1; i <= n; ++i) spec.generators.push_back({"a" + std::to_string(i), {}, {}});
    auto b = [&](int j) { return j - 1; };
    auto a = [&](int i) { return k + i - 1; };

    spec.generators[b(1)].perm = {1, 0};
    spec.generators[b(1)].sections = {TokenWord{}, TokenWord{}};
    for (int j = 1; j <= k - 1; ++j) {
        GeneratorDef& g = spec.generators[b(j + 1)];
        g.perm = {0, 1};
        if (family_letter(w, j) == 0)
            g.sections = {detail::one(b(j)), TokenWord{}};
        else
            g.sections = {TokenWord{}, detail::one(b(j))};
    }
    {
        GeneratorDef& g = spec.generators[a(1)];
        g.perm = {0, 1};
        if (yk == 0)  // x_n = 1
            g.sections = {detail::one(b(k)), detail::one(a(n))};
        else  // y_k = 1, x_n = 0
            g.sections = {detail::one(a(n)), detail::one(b(k))};
    }
    for (int i = 1; i <= n - 1; ++i) {
        GeneratorDef& g = spec.generators[a(i + 1)];
        g.perm = {0, 1};
        if (family_letter(v, i) == 0)
            g.sections = {detail::one(a(i)), TokenWord{}};
        else
            g.sections = {TokenWord{}, detail::one(a(i))};
    }
    return spec;
}

// M(d): d generators on the d-ary alphabet.  For i < d, m_i cycles the
// letters 0..d-i and repeats itself below letter d-i-1; m_d has trivial
// root permutation and sections m_1, ..., m_d in slot order.
inline GroupSpec build_Md(int d) {
    require(d >= 2, "M(d) requires degree d >= 2");
    GroupSpec spec;
    spec.degree = d;
    spec.family = {FamilyInfo::Tag::md, "", "", d};
    spec.name = "M(" + std::to_string(d) + ")";
    for (int i = 1; i <= d; ++i) spec.generators.push_back({"m" + std::to_string(i), {}, {}});
    for (int i = 1; i <= d - 1; ++i) {
        GeneratorDef& g = spec.generators[i - 1];
        g.perm.resize(d);
        for (int j = 0; j < d; ++j) g.perm[j] = j;
        for (int j = 0; j < d - i; ++j) g.perm[j] = j + 1;
        g.perm[d - i] = 0;
        g.sections.assign(d, TokenWord{});
        g.sections[d - i - 1] = detail::one(i - 1);
    }
    {
        GeneratorDef& g = spec.generators[d - 1];
        g.perm.resize(d);
        for (int j = 0; j < d; ++j) g.perm[j] = j;
        g.sections.resize(d);
        for (int j = 0; j < d; ++j) g.sections[j] = detail::one(j);
    }
    return spec;
}

// Bonus builtin: the first Grigorchuk group, as contraction test fodder.
inline GroupSpec build_grigorchuk() {
    GroupSpec spec;
    spec.degree = 2;
    spec.family = {FamilyInfo::Tag::custom, "", "", 0};
    spec.name = "grigorchuk";
    spec.generators = {
        detail::simple_gen("a", {1, 0}, {TokenWord{}, TokenWord{}}),
        detail::simple_gen("b", {0, 1}, {detail::one(0), detail::one(2)}),
        detail::simple_gen("c", {0, 1}, {detail::one(0), detail::one(3)}),
        detail::simple_gen("d", {0, 1}, {TokenWord{}, detail::one(1)}),
    };
    return spec;
}

// --- spec document (JSON) ---------------------------------------------------

inline json serialize_tokens(const GroupSpec& spec, const TokenWord& w) {
    std::ostringstream os;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) os << ' ';
        int idx = std::abs(w[i]) - 1;
        os << spec.generators[idx].name;
        if (w[i] < 0) os << "^-1";
    }
    return os.str();
}

inline TokenWord parse_tokens(const GroupSpec& spec, const std::string& text) {
    TokenWord out;
    std::istringstream is(text);
    std::string tok;
    while (is >> tok) {
        bool inv = false;
        if (tok.size() > 3 && tok.substr(tok.size() - 3) == "^-1") {
            inv = true;
            tok = tok.substr(0, tok.size() - 3);
        }
        int idx = spec.generator_index(tok);
        require(idx >= 0, "undeclared generator name \"" + tok + "\"");
        GenTok t = static_cast<GenTok>(idx + 1);
        out.push_back(inv ? -t : t);
    }
    return out;
}

inline json serialize_spec(const GroupSpec& spec) {
    json doc;
    doc["schema"] = "germlab/1";
    if (!spec.name.empty()) doc["name"] = spec.name;
    doc["degree"] = spec.degree;
    json gens = json::object();
    for (const GeneratorDef& g : spec.generators) {
        json entry;
        entry["perm"] = g.perm;
        json secs = json::array();
        for (const TokenWord& s : g.sections) secs.push_back(serialize_tokens(spec, s));
        entry["sections"] = secs;
        gens[g.name] = entry;
    }
    doc["generators"] = gens;
    switch (spec.family.tag) {
        case FamilyInfo::Tag::odometer:
            doc["family"] = {{"tag", "odometer"}};
            break;
        case FamilyInfo::Tag::kv:
            doc["family"] = {{"tag", "Kv"}, {"v", spec.family.v}};
            break;
        case FamilyInfo::Tag::kwv:
            doc["family"] = {{"tag", "Kwv"}, {"w", spec.family.w}, {"v", spec.family.v}};
            break;
        case FamilyInfo::Tag::md:
            doc["family"] = {{"tag", "Md"}, {"d", spec.family.d}};
            break;
        case FamilyInfo::Tag::custom:
            break;
    }
    return doc;
}

inline GroupSpec load_spec(const json& doc) try {
    require(doc.is_object(), "group document must be a JSON object");
    require(doc.contains("degree") && doc["degree"].is_number_integer(),
            "group document needs an integer \"degree\"");
    GroupSpec spec;
    spec.degree = doc["degree"].get<int>();
    require(spec.degree >= 2, "degree must be at least 2");
    if (doc.contains("name")) spec.name = doc["name"].get<std::string>();
    require(doc.contains("generators") && doc["generators"].is_object(),
            "group document needs a \"generators\" object");

    std::vector<std::string> missing;
    for (auto it = doc["generators"].begin(); it != doc["generators"].end(); ++it)
        spec.generators.push_back({it.key(), {}, {}});

    std::size_t gi = 0;
    for (auto it = doc["generators"].begin(); it != doc["generators"].end(); ++it, ++gi) {
        const json& entry = it.value();
        GeneratorDef& g = spec.generators[gi];
        require(entry.contains("perm") && entry["perm"].is_array(),
                "generator \"" + g.name + "\" needs a \"perm\" array");
        require(entry["perm"].size() == static_cast<std::size_t>(spec.degree),
                "generator \"" + g.name + "\": perm length does not match the degree");
        for (const json& x : entry["perm"]) g.perm.push_back(x.get<int>());
        require(is_permutation(g.perm), "generator \"" + g.name + "\": perm is not a bijection");
        require(entry.contains("sections") && entry["sections"].is_array() &&
                    entry["sections"].size() == static_cast<std::size_t>(spec.degree),
                "generator \"" + g.name + "\" needs one section word per letter");
        for (const json& s : entry["sections"]) {
            std::istringstream is(s.get<std::string>());
            std::string tok;
            TokenWord wtok;
            while (is >> tok) {
                bool inv = false;
                if (tok.size() > 3 && tok.substr(tok.size() - 3) == "^-1") {
                    inv = true;
                    tok = tok.substr(0, tok.size() - 3);
                }
                int idx = spec.generator_index(tok);
                if (idx < 0) {
                    missing.push_back(tok);
                    continue;
                }
                GenTok t = static_cast<GenTok>(idx + 1);
                wtok.push_back(inv ? -t : t);
            }
            g.sections.push_back(std::move(wtok));
        }
    }
    if (!missing.empty()) {
        std::string msg = "section words reference undeclared generators:";
        for (const std::string& m : missing) msg += " \"" + m + "\"";
        throw validation_error(msg);
    }
    if (doc.contains("family")) {
        const json& fam = doc["family"];
        std::string tag = fam.value("tag", "custom");
        if (tag == "odometer") spec.family = {FamilyInfo::Tag::odometer, "", "", 0};
        else if (tag == "Kv") spec.family = {FamilyInfo::Tag::kv, fam.value("v", ""), "", 0};
        else if (tag == "Kwv")
            spec.family = {FamilyInfo::Tag::kwv, fam.value("v", ""), fam.value("w", ""), 0};
        else if (tag == "Md") spec.family = {FamilyInfo::Tag::md, "", "", fam.value("d", 0)};
        else spec.family = {};
    }
    return spec;
} catch (const nlohmann::json::exception& e) {
    throw validation_error(std::string("malformed group document: ") + e.what());
}

// --- runtime group ----------------------------------------------------------

// A GroupSpec with its machines interned: the working object every
// analysis takes.  Move-only; Elements borrow the context.
class Group {
  public:
    explicit Group(GroupSpec s, std::size_t state_cap = 100000)
        : spec_(std::move(s)), ctx_(std::make_unique<Context>(spec_.degree)) {
        for (std::size_t i = 0; i < spec_.generators.size(); ++i) {
            TokenWord start{static_cast<GenTok>(i + 1)};
            generators_.push_back({ctx_.get(), intern_word(start, state_cap)});
        }
    }

    const GroupSpec& spec() const { return spec_; }
    Context& ctx() { return *ctx_; }
    const Alphabet& alphabet() const { return ctx_->alphabet(); }
    int degree() const { return ctx_->degree(); }
    std::string name() const { return spec_.name.empty() ? "custom" : spec_.name; }

    Element identity() { return ctx_->identity(); }
    std::size_t generator_count() const { return generators_.size(); }
    Element generator(std::size_t i) { return generators_.at(i); }
    const std::string& generator_name(std::size_t i) const { return spec_.generators.at(i).name; }

    Element generator_by_name(const std::string& gname) {
        int idx = spec_.generator_index(gname);
        require(idx >= 0, "undeclared generator name \"" + gname + "\"");
        return generators_[idx];
    }

    // Element word syntax: whitespace-separated "name" / "name^-1" tokens;
    // the empty string is the identity.
    Element element(const std::string& text) {
        TokenWord toks = parse_tokens(spec_, text);
        Element e = identity();
        for (GenTok t : toks) {
            Element f = generators_[std::abs(t) - 1];
            if (t < 0) f = germlab::inverse(f);
            e = germlab::compose(e, f);
        }
        return e;
    }

    std::string word_str(const Element& e) const {
        const auto& w = ctx_->token_word(e.id);
        if (!w) return "#" + std::to_string(e.id);
        std::ostringstream os;
        for (std::size_t i = 0; i < w->size(); ++i) {
            if (i) os << ' ';
            os << spec_.generators[std::abs((*w)[i]) - 1].name;
            if ((*w)[i] < 0) os << "^-1";
        }
        return os.str();
    }

    // Canonical elements of word length <= radius, in breadth-first order
    // over (length, generator sequence).
    std::vector<Element> ball(int radius) {
        std::vector<Element> out{identity()};
        std::set<ElemId> seen{0};
        std::vector<Element> step_gens;
        for (Element g : generators_) step_gens.push_back(g);
        for (Element g : generators_) {
            Element gi = germlab::inverse(g);
            step_gens.push_back(gi);
        }
        std::size_t frontier_begin = 0;
        for (int r = 0; r < radius; ++r) {
            std::size_t frontier_end = out.size();
            for (std::size_t i = frontier_begin; i < frontier_end; ++i) {
                for (Element s : step_gens) {
                    Element p = germlab::compose(out[i], s);
                    if (seen.insert(p.id).second) out.push_back(p);
                }
            }
            frontier_begin = frontier_end;
        }
        return out;
    }

    Word parse_word(const std::string& text) const { return germlab::parse_word(alphabet(), text); }
    std::string format_word(const Word& w) const { return germlab::format_word(alphabet(), w); }
    Ray parse_ray(const std::string& text) const { return germlab::parse_ray(alphabet(), text); }
    std::string format_ray(const Ray& z) const { return germlab::format_ray(alphabet(), z); }

  private:
    // Build the machine of a formal generator word by unfolding the
    // recursions; states are freely reduced token words.
    ElemId intern_word(const TokenWord& start, std::size_t state_cap) {
        std::map<TokenWord, int> pos;
        std::vector<TokenWord> order{start};
        pos[start] = 0;
        RawMachine m;
        m.degree = spec_.degree;
        for (std::size_t i = 0; i < order.size(); ++i) {
            TokenWord w = order[i];
            RawState s;
            s.perm.resize(spec_.degree);
            s.succ.resize(spec_.degree);
            s.word = w;
            for (int a = 0; a < spec_.degree; ++a) {
                auto [sect, image] = word_section(w, a);
                s.perm[a] = image;
                auto [it, inserted] = pos.try_emplace(sect, static_cast<int>(order.size()));
                if (inserted) {
                    order.push_back(sect);
                    require(order.size() <= state_cap,
                            "element is not finite-state within the state cap");
                }
                s.succ[a] = it->second;
            }
            m.states.push_back(std::move(s));
        }
        return ctx_->intern(m);
    }

    // Section of a token word at a letter, together with the letter's
    // image; factors act rightmost-first.
    std::pair<TokenWord, Letter> word_section(const TokenWord& w, Letter a) const {
        std::vector<TokenWord> parts(w.size());
        Letter cur = a;
        for (std::size_t i = w.size(); i-- > 0;) {
            GenTok t = w[i];
            const GeneratorDef& g = spec_.generators[std::abs(t) - 1];
            if (t > 0) {
                parts[i] = g.sections[cur];
                cur = g.perm[cur];
            } else {
                std::vector<Letter> inv(spec_.degree);
                for (int x = 0; x < spec_.degree; ++x) inv[g.perm[x]] = x;
                parts[i] = word_inverse(g.sections[inv[cur]]);
                cur = inv[cur];
            }
        }
        TokenWord sect;
        for (const TokenWord& p : parts) sect = word_concat(sect, p);
        return {sect, cur};
    }

    GroupSpec spec_;
    std::unique_ptr<Context> ctx_;
    std::vector<Element> generators_;
};

// --- builtin registry -------------------------------------------------------
//
// Names: "K()", "K(v)", "K(w,v)", "M(d)", "grigorchuk".

inline GroupSpec builtin_group(const std::string& name) {
    if (name == "grigorchuk") return build_grigorchuk();
    if (name.size() >= 3 && name.front() == 'K' && name[1] == '(' && name.back() == ')') {
        std::string inner = name.substr(2, name.size() - 3);
        auto comma = inner.find(',');
        if (comma == std::string::npos) return build_Kv(inner);
        return build_Kwv(inner.substr(0, comma), inner.substr(comma + 1));
    }
    if (name.size() >= 3 && name.front() == 'M' && name[1] == '(' && name.back() == ')') {
        std::string inner = name.substr(2, name.size() - 3);
        try {
            return build_Md(std::stoi(inner));
        } catch (const std::invalid_argument&) {
            throw parse_error("bad M(d) degree \"" + inner + "\"");
        }
    }
    throw parse_error("unknown builtin group \"" + name +
                      "\" (expected K(), K(v), K(w,v), M(d), or grigorchuk)");
}

} // namespace germlab
