#pragma once

// Command-line front end. Every subcommand reads a JSON params object, built
// from flags and/or --input, and prints one JSON document on stdout.
// Exit codes: 0 success, 1 malformed input, 2 domain error, 4 failing suite.

#include <kw/io.hpp>
#include <kw/suites.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace kw::cli {

using io::json;

enum class FlagKind { integer, int_list, element, series, pairs, boolean, text };

struct Flag {
    std::string name;
    FlagKind kind;
    std::string help;
};

struct Command {
    std::string name;
    std::string help;
    std::vector<Flag> flags;
    std::function<json(const json &)> handler;
};

namespace detail {

inline std::string trim(const std::string &s) {
    const auto b = s.find_first_not_of(" \t[]");
    const auto e = s.find_last_not_of(" \t[]");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

inline std::int64_t parse_int(const std::string &raw) {
    const std::string s = trim(raw);
    std::size_t used = 0;
    std::int64_t v = 0;
    try {
        v = std::stoll(s, &used);
    } catch (const std::exception &) {
        io::bad_input("expected an integer, got \"" + raw + "\"");
    }
    if (used != s.size()) io::bad_input("expected an integer, got \"" + raw + "\"");
    return v;
}

inline std::vector<std::string> split(const std::string &s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) out.push_back(cur);
    return out;
}

inline json parse_int_list(const std::string &raw) {
    json out = json::array();
    if (trim(raw).empty()) return out;
    for (const auto &tok : split(trim(raw), ',')) out.push_back(parse_int(tok));
    return out;
}

/// "a1,a2;b1,b2;..." into [[a1,a2],[b1,b2],...].
inline json parse_pairs(const std::string &raw) {
    json out = json::array();
    for (const auto &chunk : split(raw, ';')) {
        auto pr = parse_int_list(chunk);
        if (pr.size() != 2) io::bad_input("expected integer pairs separated by ';', got \"" + raw + "\"");
        out.push_back(std::move(pr));
    }
    return out;
}

/// An integer, or a coefficient vector "c0,c1,..." in the field generator.
inline json parse_element(const std::string &raw) {
    auto list = parse_int_list(raw);
    if (list.size() == 1 && raw.find(',') == std::string::npos && raw.find('[') == std::string::npos) return list[0];
    return list;
}

inline bool parse_bool(const std::string &raw) {
    const std::string s = trim(raw);
    if (s == "1" || s == "true" || s == "yes") return true;
    if (s == "0" || s == "false" || s == "no") return false;
    io::bad_input("expected a boolean, got \"" + raw + "\"");
}

inline json read_input(const std::string &path) {
    std::string text;
    if (path == "-") {
        text.assign(std::istreambuf_iterator<char>(std::cin), {});
    } else {
        std::ifstream in(path);
        if (!in) io::bad_input("cannot open input file \"" + path + "\"");
        text.assign(std::istreambuf_iterator<char>(in), {});
    }
    try {
        auto j = json::parse(text);
        if (!j.is_object()) io::bad_input("input must be a JSON object");
        return j;
    } catch (const json::parse_error &ex) {
        io::bad_input(std::string("input is not valid JSON: ") + ex.what());
    }
}

inline FieldPtr field_of(const json &p) { return io::field_from_json(p); }

inline std::vector<int> ints(const json &p, const char *key) { return io::get<std::vector<int>>(p, key); }

inline int f_of(const json &p) {
    const auto r = ints(p, "r");
    const int f = io::get_or<int>(p, "f", static_cast<int>(r.size()));
    require(f == static_cast<int>(r.size()), ErrorKind::structural, "r must have f entries");
    return f;
}

inline Subset subset_of(const json &p, const char *key, int n) {
    return io::subset_from_json(io::get_or<json>(p, key, json::array()), n);
}

inline RankOneModule module_of(const json &p, const char *r_key, const char *a_key) {
    json m;
    m["p"] = io::get<int>(p, "p");
    m["r"] = io::member(p, r_key);
    m["a"] = io::member(p, a_key);
    for (const char *k : {"m", "modulus"})
        if (p.contains(k)) m[k] = p.at(k);
    return io::rankone_from_json(m);
}

/// Either an explicit "M1"/"M2"-style object or the flat keys r1, a1 (etc.).
inline RankOneModule module_param(const json &p, const char *obj_key, const char *r_key, const char *a_key) {
    if (p.contains(obj_key)) {
        json m = p.at(obj_key);
        for (const char *k : {"p", "m", "modulus"})
            if (!m.contains(k) && p.contains(k)) m[k] = p.at(k);
        return io::rankone_from_json(m);
    }
    return module_of(p, r_key, a_key);
}

/// An extension from a nested object under `key`, or from the top-level keys with x taken from `x_key`.
inline ExtensionData extension_param(const json &p, const char *key = nullptr, const char *x_key = "x") {
    if (key && p.contains(key)) {
        json e = p.at(key);
        for (const char *k : {"p", "m", "modulus", "r", "f", "J", "a", "b", "trunc"})
            if (!e.contains(k) && p.contains(k)) e[k] = p.at(k);
        return io::extension_from_json(e);
    }
    json e = p;
    e.erase("x");
    if (p.contains(x_key)) e["x"] = p.at(x_key);
    return io::extension_from_json(e);
}

inline json decomposition(const CarryDecomposition &d) { return io::to_json(d); }

inline InertialType type_param(const json &p, int niveau) {
    if (p.contains("type")) {
        json t = p.at("type");
        for (const char *k : {"p", "f", "m", "modulus"})
            if (!t.contains(k) && p.contains(k)) t[k] = p.at(k);
        if (!t.contains("niveau")) t["niveau"] = niveau;
        require(io::get<int>(t, "niveau") == niveau, ErrorKind::domain,
                "expected a niveau-" + std::to_string(niveau) + " type");
        return io::inertial_type_from_json(t);
    }
    const auto e = io::get<std::vector<std::int64_t>>(p, "exponents");
    if (e.size() != 2) io::bad_input("\"exponents\" must hold two values");
    return {io::get<int>(p, "p"), niveau, io::get<int>(p, "f"), e[0], e[1]};
}

inline std::vector<std::pair<int, int>> pairs_param(const json &p, const char *key) {
    return io::weight_from_json(io::member(p, key)).pairs;
}

} // namespace detail

inline const std::vector<Command> &commands() {
    using namespace detail;
    static const Flag P{"p", FlagKind::integer, "prime p"};
    static const Flag Fl{"f", FlagKind::integer, "residue degree f (defaults to the length of r)"};
    static const Flag M{"m", FlagKind::integer, "degree of the coefficient field over F_p"};
    static const Flag Mod{"modulus", FlagKind::int_list, "monic modulus of the coefficient field, little-endian"};
    static const Flag R{"r", FlagKind::int_list, "exponents r_0,...,r_{f-1}"};
    static const Flag Jf{"J", FlagKind::int_list, "subset J as a list of indices"};
    static const Flag A{"a", FlagKind::element, "unramified label a"};
    static const Flag B{"b", FlagKind::element, "unramified label b"};
    static const Flag N{"trunc", FlagKind::integer, "truncation N (series known mod u^{N+1})"};
    static const Flag X{"x", FlagKind::series, "extension coefficient x_i (repeat once per index)"};
    const std::vector<Flag> field{P, M, Mod};
    auto with = [](std::vector<Flag> base, std::initializer_list<Flag> extra) {
        base.insert(base.end(), extra);
        return base;
    };

    static const std::vector<Command> cmds{
        {"rankone-canon", "canonical form (r, a) of a rank-one module given by structure constants",
         with(field, {Fl, N, {"c", FlagKind::series, "structure constant c_i (repeat once per index)"}}),
         [](const json &p) { return io::to_json(canonicalize(io::raw_rankone_from_json(p))); }},
        {"rankone-iso", "whether two rank-one modules give isomorphic characters",
         with(field, {{"r1", FlagKind::int_list, "r of the first module"}, {"a1", FlagKind::element, "a of the first module"},
                      {"r2", FlagKind::int_list, "r of the second module"}, {"a2", FlagKind::element, "a of the second module"}}),
         [](const json &p) {
             return json{{"isomorphic", iso_test(module_param(p, "M1", "r1", "a1"), module_param(p, "M2", "r2", "a2"))}};
         }},
        {"rankone-char", "inertial character of a rank-one module", with(field, {Fl, R, A}),
         [](const json &p) { return io::to_json(inertial_exponent(module_param(p, "M", "r", "a"))); }},
        {"carry", "decompose a kernel sequence in [-p, p]^f", {P, Fl, R},
         [](const json &p) {
             f_of(p);
             return decomposition(carry_decompose(io::get<int>(p, "p"), ints(p, "r")));
         }},
        {"pset", "membership of r in the set P", {P, R},
         [](const json &p) { return json{{"member", p_set_member(io::get<int>(p, "p"), ints(p, "r"))}}; }},
        {"jmax", "the maximal subset J_max with the same h(J)", {P, Fl, R, Jf},
         [](const json &p) {
             const int f = f_of(p);
             return json{{"J_max", io::to_json(j_max(io::get<int>(p, "p"), ints(p, "r"), subset_of(p, "J", f)))}};
         }},
        {"ext-reduce", "reduce an extension to normal form", with(field, {Fl, R, Jf, A, B, N, X}),
         [](const json &p) {
             auto res = reduce_normal_form(extension_param(p, "extension"));
             return json{{"reduced", io::to_json(res.reduced)}, {"change", io::to_json(res.change)}};
         }},
        {"ext-equiv", "coboundary equivalence of two extensions with the same type",
         with(field, {Fl, R, Jf, A, B, N, {"x1", FlagKind::series, "x of the first extension (repeat per index)"},
                      {"x2", FlagKind::series, "x of the second extension (repeat per index)"},
                      {"scaling", FlagKind::boolean, "also allow x ~ lambda x"}}),
         [](const json &p) {
             const auto e1 = extension_param(p, "e1", "x1");
             const auto e2 = extension_param(p, "e2", "x2");
             return io::to_json(coboundary_equivalent(e1, e2, io::get_or<bool>(p, "scaling", false)));
         }},
        {"ext-forms", "all extensions of the crystalline shape", with(field, {Fl, R, Jf, A, B, N}),
         [](const json &p) {
             const auto shape = extension_param(p);
             const auto forms = crystalline_forms(shape.r, shape.J, shape.a, shape.b, shape.trunc);
             json list = json::array();
             for (const auto &e : forms) list.push_back(io::to_json(e));
             return json{{"count", forms.size()}, {"exceptional", exceptional_configuration(shape)}, {"forms", std::move(list)}};
         }},
        {"ghat-unique", "whether the G-hat action on an extension of this type is unique", {P, Fl, R, Jf},
         [](const json &p) {
             const int f = f_of(p);
             return json{{"unique", ghat_unique(io::get<int>(p, "p"), ints(p, "r"), subset_of(p, "J", f))}};
         }},
        {"beta-val", "exact valuation bound at index i (all indices when i is omitted)",
         {P, Fl, R, Jf, {"i", FlagKind::integer, "index i"}},
         [](const json &p) {
             const int f = f_of(p), pp = io::get<int>(p, "p");
             const auto r = ints(p, "r");
             const auto J = subset_of(p, "J", f);
             if (p.contains("i")) return io::to_json(beta_valuation(pp, r, J, io::get<int>(p, "i")));
             json vals = json::array();
             for (int i = 0; i < f; ++i) vals.push_back(io::to_json(beta_valuation(pp, r, J, i)));
             return json{{"valuations", std::move(vals)}, {"threshold", io::to_json(ghat_threshold(pp))}};
         }},
        {"raise", "model raising: one string (--string start,len) or all the way to J_max",
         with(field, {Fl, R, Jf, A, B, N, X, {"string", FlagKind::int_list, "raise only the string start,len"}}),
         [](const json &p) {
             const auto e = extension_param(p, "extension");
             json out;
             if (p.contains("string")) {
                 const auto s = ints(p, "string");
                 if (s.size() != 2) io::bad_input("\"string\" must be start,len");
                 auto res = model_raise_detailed(e, {s[0], s[1]});
                 out["extension"] = io::to_json(res.extension);
                 out["J_max"] = io::to_json(j_max(e.p, e.r, e.J));
                 out["steps"] = json::array({io::to_json(res.step)});
                 return out;
             }
             auto res = raise_to_jmax(e);
             out["extension"] = io::to_json(res.extension);
             out["J_max"] = io::to_json(res.j_max);
             json steps = json::array();
             for (const auto &s : res.steps) steps.push_back(io::to_json(s));
             out["steps"] = std::move(steps);
             return out;
         }},
        {"weights-equiv", "whether two Serre weights give isomorphic representations",
         {P, Fl, {"w1", FlagKind::pairs, "first weight a1,a2;..."}, {"w2", FlagKind::pairs, "second weight"}},
         [](const json &p) {
             SerreWeight w1{pairs_param(p, "w1")}, w2{pairs_param(p, "w2")};
             const int f = io::get_or<int>(p, "f", w1.f());
             return json{{"equivalent", weight_equivalent(w1, w2, io::get<int>(p, "p"), f)}};
         }},
        {"hodge-type", "Hodge-Tate weights {a_1 + 1, a_2} per embedding",
         {P, {"w", FlagKind::pairs, "weight a1,a2;..."}},
         [](const json &p) {
             SerreWeight w{pairs_param(p, "w")};
             if (p.contains("p")) w.validate(io::get<int>(p, "p"));
             json ht = json::array();
             for (auto [x, y] : hodge_type(w)) ht.push_back(json::array({x, y}));
             return json{{"hodge_type", std::move(ht)}};
         }},
        {"bdj1", "niveau-1 inertial witnesses J for a weight",
         {P, Fl, {"exponents", FlagKind::int_list, "the two exponents mod p^f - 1"}, {"w", FlagKind::pairs, "weight a1,a2;..."}},
         [](const json &p) { return io::to_json(bdj_niveau1(type_param(p, 1), SerreWeight{pairs_param(p, "w")})); }},
        {"bdj2", "niveau-2 balanced witnesses for a weight",
         {P, Fl, {"exponents", FlagKind::int_list, "the two exponents mod p^{2f} - 1"}, {"w", FlagKind::pairs, "weight a1,a2;..."}},
         [](const json &p) { return io::to_json(bdj_niveau2(type_param(p, 2), SerreWeight{pairs_param(p, "w")})); }},
        {"rebalance", "a balanced subset of S_2 inducing the same characters",
         {P, {"b", FlagKind::pairs, "Hodge-Tate weights b_1,b_2 per embedding of k"}, {"J", FlagKind::int_list, "subset of {0..2f-1}"}},
         [](const json &p) {
             const auto b = pairs_param(p, "b");
             const auto J = subset_of(p, "J", 2 * static_cast<int>(b.size()));
             return io::to_json(rebalance(io::get<int>(p, "p"), b, J));
         }},
        {"suite", "run an acceptance battery",
         {{"name", FlagKind::text, "lemma71, lemma73, prop74-reduce, thm75-counts, jmax, rebalance or cross-char"},
          {"seed", FlagKind::integer, "seed for randomized batteries"}},
         [](const json &p) {
             return suites::run(io::get<std::string>(p, "name"), io::get_or<std::uint64_t>(p, "seed", 1)).to_json();
         }},
    };
    return cmds;
}

inline std::string command_list() {
    std::string s;
    for (const auto &c : commands()) s += (s.empty() ? "" : ", ") + c.name;
    return s;
}

inline int emit_error(std::ostream &out, const std::string &kind, const std::string &detail, int code) {
    json j;
    j["error"] = kind;
    j["detail"] = detail;
    if (code == 1) j["commands"] = command_list();
    out << j.dump() << '\n';
    return code;
}

/// Runs one invocation; argv[0] is the program name.
inline int run(int argc, const char *const *argv, std::ostream &out) {
    CLI::App app{"Exact computations with rank-one and rank-two Kisin modules mod p and Serre weights"};
    app.require_subcommand(1);
    app.footer("Commands: " + command_list());

    struct Bound {
        const Command *cmd;
        CLI::App *sub;
        std::map<std::string, std::vector<std::string>> values;
        std::string input;
    };
    std::vector<Bound> bound;
    bound.reserve(commands().size());
    for (const auto &c : commands()) {
        bound.push_back({&c, app.add_subcommand(c.name, c.help), {}, {}});
        auto &b = bound.back();
        b.sub->add_option("--input", b.input, "JSON params object from a file, or - for stdin");
        for (const auto &fl : c.flags) {
            auto *opt = b.sub->add_option("--" + fl.name, b.values[fl.name], fl.help);
            if (fl.kind != FlagKind::series) opt->expected(1)->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError &ex) {
        return emit_error(out, "malformed_input", std::string(ex.what()) + " (usage: kw <command> [flags]; commands: " + command_list() + ")", 1);
    }

    for (auto &b : bound) {
        if (!b.sub->parsed()) continue;
        try {
            json params = b.input.empty() ? json::object() : detail::read_input(b.input);
            for (const auto &fl : b.cmd->flags) {
                const auto &vals = b.values[fl.name];
                if (vals.empty()) continue;
                switch (fl.kind) {
                    case FlagKind::integer: params[fl.name] = detail::parse_int(vals.back()); break;
                    case FlagKind::int_list: params[fl.name] = detail::parse_int_list(vals.back()); break;
                    case FlagKind::element: params[fl.name] = detail::parse_element(vals.back()); break;
                    case FlagKind::pairs: params[fl.name] = detail::parse_pairs(vals.back()); break;
                    case FlagKind::boolean: params[fl.name] = detail::parse_bool(vals.back()); break;
                    case FlagKind::text: params[fl.name] = vals.back(); break;
                    case FlagKind::series: {
                        json list = json::array();
                        for (const auto &v : vals) list.push_back(detail::parse_int_list(v));
                        params[fl.name] = std::move(list);
                        break;
                    }
                }
            }
            const json result = b.cmd->handler(params);
            out << result.dump() << '\n';
            if (b.cmd->name == "suite" && !result.value("passed", false)) return 4;
            return 0;
        } catch (const Error &ex) {
            return emit_error(out, std::string(to_string(ex.kind())), ex.detail(), 2);
        } catch (const io::InputError &ex) {
            return emit_error(out, "malformed_input", ex.what(), 1);
        } catch (const json::exception &ex) {
            return emit_error(out, "malformed_input", ex.what(), 1);
        }
    }
    return emit_error(out, "malformed_input", "no command given", 1);
}

} // namespace kw::cli
