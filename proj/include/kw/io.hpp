#pragma once

// JSON readers and writers. Key order is preserved (ordered_json) so that
// output is byte-stable.

#include <kw/combinat.hpp>
#include <kw/extension.hpp>
#include <kw/ghat.hpp>
#include <kw/rankone.hpp>
#include <kw/weights.hpp>

#include <json.hpp>

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace kw::io {

using json = nlohmann::ordered_json;

/// Malformed or incomplete input, as opposed to a mathematical domain error.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

[[noreturn]] inline void bad_input(const std::string &what) { throw InputError(what); }

inline const json &member(const json &j, const char *key) {
    if (!j.is_object() || !j.contains(key)) bad_input(std::string("missing field \"") + key + "\"");
    return j.at(key);
}

template <class T>
T get(const json &j, const char *key) {
    try {
        return member(j, key).get<T>();
    } catch (const json::exception &ex) {
        bad_input(std::string("field \"") + key + "\": " + ex.what());
    }
}

template <class T>
T get_or(const json &j, const char *key, T fallback) {
    if (!j.is_object() || !j.contains(key) || j.at(key).is_null()) return fallback;
    return get<T>(j, key);
}

// ---------------------------------------------------------------------------
// Fields and elements

/// Fields are shared per (p, m, modulus) so repeated reads do not rebuild log tables.
inline FieldPtr field_for(int p, int m = 1, std::vector<int> modulus = {}) {
    static std::mutex mu;
    static std::map<std::tuple<int, int, std::vector<int>>, FieldPtr> cache;
    if (m == 1) modulus.clear();
    std::lock_guard lock(mu);
    auto key = std::make_tuple(p, m, modulus);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    auto F = FqField::make(p, m, modulus);
    cache.emplace(key, F);
    return F;
}

inline json field_header(const FqField &F) {
    json j;
    j["p"] = F.prime();
    j["m"] = F.degree();
    j["modulus"] = F.modulus();
    return j;
}

/// Reads the field described by p, m, modulus keys of j.
inline FieldPtr field_from_json(const json &j) {
    return field_for(get<int>(j, "p"), get_or<int>(j, "m", 1), get_or<std::vector<int>>(j, "modulus", {}));
}

inline json to_json(const FqElement &x) {
    json j = field_header(x.field());
    j["coeffs"] = x.coeffs();
    return j;
}

/// Accepts the self-describing object form, or a bare integer / coefficient list interpreted in `field`.
inline FqElement element_from_json(const json &j, const FieldPtr &field = nullptr) {
    if (j.is_object()) {
        auto F = field_from_json(j);
        if (field) require_same_field(*F, *field);
        auto c = get<std::vector<int>>(j, "coeffs");
        return FqElement::from_coeffs(field ? field : F, c);
    }
    if (!field) bad_input("field element given without its field");
    if (j.is_number_integer()) return FqElement::from_int(field, j.get<std::int64_t>());
    if (j.is_array()) {
        try {
            return FqElement::from_coeffs(field, j.get<std::vector<int>>());
        } catch (const json::exception &ex) {
            bad_input(std::string("field element: ") + ex.what());
        }
    }
    bad_input("field element must be an integer, a coefficient list, or an object");
}

// ---------------------------------------------------------------------------
// Series

inline json to_json(const TruncatedSeries &s) {
    json j = field_header(s.field());
    j["trunc"] = s.trunc();
    json coeffs = json::array();
    for (auto v : s.packed_coeffs()) coeffs.push_back(s.field().digits(v));
    j["coeffs"] = std::move(coeffs);
    return j;
}

/// Object form, or a list of coefficients (integers or coefficient lists) in `field` at truncation `trunc`.
inline TruncatedSeries series_from_json(const json &j, const FieldPtr &field = nullptr, std::optional<int> trunc = {}) {
    FieldPtr F = field;
    int N = trunc.value_or(-1);
    const json *coeffs = &j;
    if (j.is_object()) {
        auto G = field_from_json(j);
        if (F) require_same_field(*G, *F);
        F = F ? F : G;
        N = get<int>(j, "trunc");
        if (trunc) require(*trunc == N, ErrorKind::structural, "series truncation differs from the expected one");
        coeffs = &member(j, "coeffs");
    }
    if (!F) bad_input("series given without its field");
    if (!coeffs->is_array()) bad_input("series coefficients must be a list");
    if (N < 0) N = std::max<int>(0, static_cast<int>(coeffs->size()) - 1);
    if (static_cast<int>(coeffs->size()) > N + 1)
        fail(ErrorKind::structural, "series has more coefficients than its truncation allows");
    TruncatedSeries s(F, N);
    for (std::size_t k = 0; k < coeffs->size(); ++k) s.set_coeff(static_cast<int>(k), element_from_json((*coeffs)[k], F));
    return s;
}

inline json to_json(const std::vector<TruncatedSeries> &v) {
    json j = json::array();
    for (const auto &s : v) j.push_back(to_json(s));
    return j;
}

// ---------------------------------------------------------------------------
// Subsets

inline json to_json(const Subset &J) { return J.elements(); }

inline Subset subset_from_json(const json &j, int n) {
    if (!j.is_array()) bad_input("subset must be a list of indices");
    std::vector<int> elems;
    try {
        elems = j.get<std::vector<int>>();
    } catch (const json::exception &ex) {
        bad_input(std::string("subset: ") + ex.what());
    }
    return Subset::of(n, elems);
}

// ---------------------------------------------------------------------------
// Rank one

inline json to_json(const RankOneModule &m) {
    json j;
    j["p"] = m.p;
    j["f"] = m.f;
    j["r"] = m.r;
    j["a"] = to_json(m.a);
    return j;
}

inline RankOneModule rankone_from_json(const json &j, const FieldPtr &field = nullptr) {
    const int p = get<int>(j, "p");
    auto r = get<std::vector<int>>(j, "r");
    const int f = get_or<int>(j, "f", static_cast<int>(r.size()));
    FieldPtr F = field;
    if (!F && !member(j, "a").is_object()) F = field_from_json(j);
    return {p, f, std::move(r), element_from_json(member(j, "a"), F)};
}

inline json to_json(const InertialCharacter &c) {
    json j;
    j["p"] = c.p;
    j["f"] = c.f;
    j["niveau"] = c.niveau;
    j["exponent"] = c.exponent;
    j["unramified"] = to_json(c.unramified);
    return j;
}

inline InertialCharacter character_from_json(const json &j, const FieldPtr &field = nullptr) {
    FieldPtr F = field;
    if (!F && !member(j, "unramified").is_object()) F = field_from_json(j);
    return {get<int>(j, "p"), get_or<int>(j, "niveau", 1), get<int>(j, "f"), get<std::int64_t>(j, "exponent"),
            element_from_json(member(j, "unramified"), F)};
}

inline json to_json(const RawRankOne &raw) {
    json j;
    j["p"] = raw.p;
    j["f"] = raw.f;
    j["c"] = to_json(raw.c);
    return j;
}

inline RawRankOne raw_rankone_from_json(const json &j) {
    RawRankOne raw;
    const auto &c = member(j, "c");
    if (!c.is_array() || c.empty()) bad_input("\"c\" must be a non-empty list of series");
    FieldPtr F = c.front().is_object() ? field_from_json(c.front()) : field_from_json(j);
    std::optional<int> N;
    if (j.contains("trunc")) N = get<int>(j, "trunc");
    for (const auto &s : c) raw.c.push_back(series_from_json(s, F, N));
    raw.p = get_or<int>(j, "p", F->prime());
    raw.f = get_or<int>(j, "f", static_cast<int>(raw.c.size()));
    return raw;
}

// ---------------------------------------------------------------------------
// Combinatorics

inline json to_json(const CarryDecomposition &d) {
    json j;
    j["kind"] = to_string(d.kind);
    if (d.kind != CarryDecomposition::Kind::strings) j["sign"] = d.sign;
    json strings = json::array();
    for (const auto &s : d.strings) strings.push_back(json{{"start", s.start}, {"len", s.len}, {"sign", s.sign}});
    j["strings"] = std::move(strings);
    return j;
}

inline CarryDecomposition carry_from_json(const json &j) {
    CarryDecomposition d;
    const auto kind = get<std::string>(j, "kind");
    if (kind == "strings")
        d.kind = CarryDecomposition::Kind::strings;
    else if (kind == "all_p_minus_one")
        d.kind = CarryDecomposition::Kind::all_p_minus_one;
    else if (kind == "all_two")
        d.kind = CarryDecomposition::Kind::all_two;
    else
        bad_input("unknown decomposition kind \"" + kind + "\"");
    d.sign = get_or<int>(j, "sign", 1);
    for (const auto &s : get_or<json>(j, "strings", json::array()))
        d.strings.push_back({get<int>(s, "start"), get<int>(s, "len"), get<int>(s, "sign")});
    return d;
}

inline json to_json(const HClass &h) { return json{{"p", h.p}, {"f", h.f}, {"h", h.h}}; }

// ---------------------------------------------------------------------------
// Extensions

inline json to_json(const ExtensionData &e) {
    json j;
    j["p"] = e.p;
    j["f"] = e.f;
    j["r"] = e.r;
    j["J"] = to_json(e.J);
    j["a"] = to_json(e.a);
    j["b"] = to_json(e.b);
    j["trunc"] = e.trunc;
    j["x"] = to_json(e.x);
    return j;
}

/// Missing x means the split extension; trunc defaults to p^2.
inline ExtensionData extension_from_json(const json &j) {
    auto r = get<std::vector<int>>(j, "r");
    const int f = get_or<int>(j, "f", static_cast<int>(r.size()));
    if (f != static_cast<int>(r.size())) fail(ErrorKind::structural, "r must have f entries");
    FieldPtr F = member(j, "a").is_object() ? field_from_json(member(j, "a")) : field_from_json(j);
    if (j.contains("p")) require(get<int>(j, "p") == F->prime(), ErrorKind::structural, "p differs from the field's characteristic");
    const int trunc = get_or<int>(j, "trunc", default_trunc(F->prime()));
    auto J = subset_from_json(get_or<json>(j, "J", json::array()), f);
    auto a = element_from_json(member(j, "a"), F);
    auto b = element_from_json(member(j, "b"), F);
    std::vector<TruncatedSeries> x;
    if (j.contains("x") && !j.at("x").is_null()) {
        const auto &xs = j.at("x");
        if (!xs.is_array() || static_cast<int>(xs.size()) != f) fail(ErrorKind::structural, "x must list one series per index");
        for (const auto &s : xs) x.push_back(series_from_json(s, F, trunc));
    } else {
        x.assign(f, TruncatedSeries::zero(F, trunc));
    }
    return {std::move(r), J, std::move(a), std::move(b), std::move(x), trunc};
}

inline json to_json(const BasisChange &bc) { return to_json(bc.alpha); }

inline BasisChange basis_change_from_json(const json &j, const ExtensionData &shape) {
    if (!j.is_array() || static_cast<int>(j.size()) != shape.f) fail(ErrorKind::structural, "alpha must list one series per index");
    BasisChange bc;
    for (const auto &s : j) bc.alpha.push_back(series_from_json(s, shape.field_ptr()));
    return bc;
}

inline json to_json(const EquivalenceResult &r) {
    json j;
    j["equivalent"] = r.equivalent;
    j["witness"] = r.witness ? to_json(*r.witness) : json(nullptr);
    if (r.scale) j["scale"] = to_json(*r.scale);
    return j;
}

inline json to_json(const DegreePair &d) { return json::array({d.index, d.degree}); }

inline json to_json(const PairPartition &pp) {
    auto chains = [](const std::vector<std::vector<DegreePair>> &group) {
        json out = json::array();
        for (const auto &chain : group) {
            json c = json::array();
            for (auto d : chain) c.push_back(to_json(d));
            out.push_back(std::move(c));
        }
        return out;
    };
    return json{{"cutoff", pp.cutoff}, {"loops", chains(pp.loops)}, {"stubs", chains(pp.stubs)}, {"paths", chains(pp.paths)}};
}

// ---------------------------------------------------------------------------
// ghat

inline json to_json(const ValuationQ &v) { return json{{"num", v.num()}, {"den", v.den()}}; }

inline ValuationQ valuation_from_json(const json &j) { return {get<std::int64_t>(j, "num"), get<std::int64_t>(j, "den")}; }

inline json to_json(const RaiseStep &s) {
    json j;
    j["start"] = s.string.start;
    j["len"] = s.string.len;
    j["before"] = to_json(s.before);
    j["after"] = to_json(s.after);
    j["cleanup"] = to_string(s.cleanup);
    return j;
}

// ---------------------------------------------------------------------------
// Weights

inline json to_json(const SerreWeight &w) {
    json pairs = json::array();
    for (auto [a1, a2] : w.pairs) pairs.push_back(json::array({a1, a2}));
    return json{{"pairs", std::move(pairs)}};
}

/// {"pairs": [[a1, a2], ...]} or the bare list of pairs.
inline SerreWeight weight_from_json(const json &j) {
    const json &pairs = j.is_object() ? member(j, "pairs") : j;
    if (!pairs.is_array()) bad_input("weight pairs must be a list");
    SerreWeight w;
    for (const auto &pr : pairs) {
        if (!pr.is_array() || pr.size() != 2 || !pr[0].is_number_integer() || !pr[1].is_number_integer())
            bad_input("each weight entry must be a pair of integers");
        w.pairs.emplace_back(pr[0].get<int>(), pr[1].get<int>());
    }
    return w;
}

inline json to_json(const InertialType &t) {
    json j;
    j["p"] = t.p;
    j["f"] = t.f;
    j["niveau"] = t.niveau;
    j["exponents"] = json::array({t.exponents[0], t.exponents[1]});
    if (t.unramified)
        j["unramified"] = json::array({to_json((*t.unramified)[0]), to_json((*t.unramified)[1])});
    else
        j["unramified"] = nullptr;
    j["reducible"] = t.reducible;
    return j;
}

inline InertialType inertial_type_from_json(const json &j) {
    const int p = get<int>(j, "p");
    const auto e = get<std::vector<std::int64_t>>(j, "exponents");
    if (e.size() != 2) bad_input("an inertial type has exactly two exponents");
    std::optional<std::array<FqElement, 2>> unr;
    if (j.contains("unramified") && !j.at("unramified").is_null()) {
        const auto &u = j.at("unramified");
        if (!u.is_array() || u.size() != 2) bad_input("\"unramified\" must list two labels");
        FieldPtr F = u[0].is_object() ? nullptr : field_from_json(j);
        unr = std::array<FqElement, 2>{element_from_json(u[0], F), element_from_json(u[1], F)};
    }
    return {p, get_or<int>(j, "niveau", 1), get<int>(j, "f"), e[0], e[1], unr};
}

inline json to_json(const BdjResult &r) {
    json w = json::array();
    for (const auto &J : r.witnesses) w.push_back(to_json(J));
    return json{{"member", r.member}, {"witnesses", std::move(w)}};
}

inline json to_json(const BdjNiveau2Result &r) {
    json w = json::array();
    for (const auto &J : r.witnesses) w.push_back(to_json(J.J));
    return json{{"member", r.member}, {"witnesses", std::move(w)}};
}

inline json to_json(const BalancedSubset &b) { return json{{"J", to_json(b.J)}}; }

} // namespace kw::io
