#pragma once

// Serre weights and the inertial form of the predicted weight sets.
//
// Exponents use the generator convention omega_s = omega_{nf-1}^{p^{nf-1-s}},
// so a product prod_s omega_s^{c_s} has exponent sum_s p^{nf-1-s} c_s.

#include <kw/combinat.hpp>
#include <kw/integer.hpp>
#include <kw/rankone.hpp>
#include <kw/subset.hpp>

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace kw {

struct SerreWeight {
    std::vector<std::pair<int, int>> pairs;  // (a_{i,1}, a_{i,2}) per embedding

    int f() const noexcept { return static_cast<int>(pairs.size()); }

    void validate(int p) const {
        require(!pairs.empty(), ErrorKind::domain, "a weight needs at least one embedding");
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            const int d = pairs[i].first - pairs[i].second;
            require(d >= 0 && d <= p - 1, ErrorKind::domain,
                    "embedding " + std::to_string(i) + ": a_1 - a_2 = " + std::to_string(d) + " outside [0, p-1]");
        }
    }

    friend bool operator==(const SerreWeight &, const SerreWeight &) = default;
};

inline bool weight_equivalent(const SerreWeight &w1, const SerreWeight &w2, int p, int f) {
    require(w1.f() == f && w2.f() == f, ErrorKind::domain, "weights must have f embeddings");
    w1.validate(p);
    w2.validate(p);
    std::vector<std::int64_t> diff(f);
    for (int i = 0; i < f; ++i) {
        if (w1.pairs[i].first - w1.pairs[i].second != w2.pairs[i].first - w2.pairs[i].second) return false;
        diff[i] = w1.pairs[i].second - w2.pairs[i].second;
    }
    return weighted_exponent(p, diff) == 0;
}

/// Per embedding, the Hodge-Tate weights {a_1 + 1, a_2}, larger first.
inline std::vector<std::pair<int, int>> hodge_type(const SerreWeight &w) {
    std::vector<std::pair<int, int>> out;
    out.reserve(w.pairs.size());
    for (auto [a1, a2] : w.pairs) out.emplace_back(a1 + 1, a2);
    return out;
}

/// Residual inertial data: an unordered pair of exponents mod p^{nf} - 1.
struct InertialType {
    int p = 0;
    int niveau = 1;
    int f = 0;
    std::array<std::int64_t, 2> exponents{};  // sorted ascending
    std::optional<std::array<FqElement, 2>> unramified;
    bool reducible = true;

    InertialType() = default;
    InertialType(int p_, int niveau_, int f_, std::int64_t e1, std::int64_t e2,
                 std::optional<std::array<FqElement, 2>> unramified_ = std::nullopt)
        : p(p_), niveau(niveau_), f(f_), unramified(std::move(unramified_)) {
        detail::require_odd_prime(p);
        require(niveau == 1 || niveau == 2, ErrorKind::domain, "niveau must be 1 or 2");
        require(f >= 1, ErrorKind::domain, "f must be at least 1");
        const std::int64_t m = modulus();
        e1 = mod_floor(e1, m);
        e2 = mod_floor(e2, m);
        if (niveau == 2) {
            const std::int64_t twist = checked_pow(p, f);
            require(mul_mod(e1, twist, m) == e2 && e1 != e2, ErrorKind::domain,
                    "niveau-2 exponents must be distinct and swapped by multiplication by p^f");
        }
        reducible = niveau == 1;
        exponents = {std::min(e1, e2), std::max(e1, e2)};
    }

    std::int64_t modulus() const { return tame_modulus(p, niveau * f); }

    static InertialType from_characters(const InertialCharacter &c1, const InertialCharacter &c2) {
        require(c1.p == c2.p && c1.f == c2.f && c1.niveau == c2.niveau, ErrorKind::structural,
                "characters with different (p, f, niveau)");
        return {c1.p, c1.niveau, c1.f, c1.exponent, c2.exponent, std::array<FqElement, 2>{c1.unramified, c2.unramified}};
    }

    bool matches(std::int64_t e1, std::int64_t e2) const {
        const std::int64_t m = modulus();
        e1 = mod_floor(e1, m);
        e2 = mod_floor(e2, m);
        return std::array<std::int64_t, 2>{std::min(e1, e2), std::max(e1, e2)} == exponents;
    }
};

namespace detail {
/// Exponents of prod_{s in J} omega_s^{c1_s} prod_{s not in J} omega_s^{c2_s} and of the complementary product.
inline std::pair<std::int64_t, std::int64_t> split_exponents(int p, int n_embeddings, const Subset &J,
                                                             const std::vector<int> &c1, const std::vector<int> &c2) {
    const int base = static_cast<int>(c1.size());
    std::vector<std::int64_t> first(n_embeddings), second(n_embeddings);
    for (int s = 0; s < n_embeddings; ++s) {
        const int k = s % base;
        first[s] = J.contains(s) ? c1[k] : c2[k];
        second[s] = J.contains(s) ? c2[k] : c1[k];
    }
    return {weighted_exponent(p, first), weighted_exponent(p, second)};
}

inline std::pair<std::vector<int>, std::vector<int>> weight_columns(const SerreWeight &w) {
    std::vector<int> hi, lo;
    for (auto [a1, a2] : w.pairs) {
        hi.push_back(a1 + 1);
        lo.push_back(a2);
    }
    return {hi, lo};
}
} // namespace detail

struct BdjResult {
    bool member = false;
    std::vector<Subset> witnesses;
};

/// Inertial-level membership for reducible types: every J with {prod_J omega^{a_1+1} prod_{J^c} omega^{a_2}, swap} = t.
/// For non-split extensions this over-approximates, since the extension class is not consulted.
inline BdjResult bdj_niveau1(const InertialType &t, const SerreWeight &w) {
    require(t.niveau == 1, ErrorKind::domain, "expected a niveau-1 type");
    require(w.f() == t.f, ErrorKind::domain, "weight and type have different f");
    w.validate(t.p);
    require_enumerable(t.f);
    auto [hi, lo] = detail::weight_columns(w);
    BdjResult out;
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << t.f); ++bits) {
        Subset J(t.f, bits);
        auto [e1, e2] = detail::split_exponents(t.p, t.f, J, hi, lo);
        if (t.matches(e1, e2)) out.witnesses.push_back(J);
    }
    out.member = !out.witnesses.empty();
    return out;
}

inline BdjResult bdj_inertial(const InertialType &t, const SerreWeight &w) { return bdj_niveau1(t, w); }

/// Whether J in {0..2f-1} holds exactly one of s, s+f for every s < f.
inline bool is_balanced(const Subset &J, int f) {
    if (J.universe() != 2 * f) return false;
    for (int s = 0; s < f; ++s)
        if (J.contains(s) == J.contains(s + f)) return false;
    return true;
}

struct BalancedSubset {
    Subset J;

    BalancedSubset() = default;
    BalancedSubset(Subset J_, int f) : J(J_) {
        require(is_balanced(J, f), ErrorKind::domain, "subset does not contain exactly one lift of each embedding");
    }

    /// The balanced subset choosing s + f exactly where bit s of `choice` is set.
    static BalancedSubset from_choice(int f, std::uint64_t choice) {
        Subset J(2 * f);
        for (int s = 0; s < f; ++s) J.insert((choice >> s) & 1u ? s + f : s);
        return {J, f};
    }

    friend bool operator==(const BalancedSubset &, const BalancedSubset &) = default;
};

inline BdjResult bdj_niveau2_raw(const InertialType &t, const SerreWeight &w) {
    require(t.niveau == 2, ErrorKind::domain, "expected a niveau-2 type");
    require(w.f() == t.f, ErrorKind::domain, "weight and type have different f");
    w.validate(t.p);
    require_enumerable(t.f);
    auto [hi, lo] = detail::weight_columns(w);
    BdjResult out;
    for (std::uint64_t choice = 0; choice < (std::uint64_t{1} << t.f); ++choice) {
        auto J = BalancedSubset::from_choice(t.f, choice).J;
        auto [e1, e2] = detail::split_exponents(t.p, 2 * t.f, J, hi, lo);
        if (t.matches(e1, e2)) out.witnesses.push_back(J);
    }
    std::sort(out.witnesses.begin(), out.witnesses.end(), [](const Subset &x, const Subset &y) { return x.bits() < y.bits(); });
    out.member = !out.witnesses.empty();
    return out;
}

struct BdjNiveau2Result {
    bool member = false;
    std::vector<BalancedSubset> witnesses;
};

inline BdjNiveau2Result bdj_niveau2(const InertialType &t, const SerreWeight &w) {
    auto raw = bdj_niveau2_raw(t, w);
    BdjNiveau2Result out{raw.member, {}};
    for (const auto &J : raw.witnesses) out.witnesses.emplace_back(J, t.f);
    return out;
}

/// Exponent pair (ordered as written) of the diagonal characters attached to J in S_2 and weights b on S.
inline std::pair<std::int64_t, std::int64_t> niveau2_exponents(int p, const std::vector<std::pair<int, int>> &b,
                                                               const Subset &J) {
    std::vector<int> hi, lo;
    for (auto [b1, b2] : b) {
        hi.push_back(b1);
        lo.push_back(b2);
    }
    return detail::split_exponents(p, 2 * static_cast<int>(b.size()), J, hi, lo);
}

/// A balanced subset inducing the same pair of characters as J, by the string-flipping argument.
inline BalancedSubset rebalance(int p, const std::vector<std::pair<int, int>> &b, const Subset &J) {
    detail::require_odd_prime(p);
    const int f = static_cast<int>(b.size());
    require(f >= 1, ErrorKind::domain, "f must be at least 1");
    require(J.universe() == 2 * f, ErrorKind::structural, "J must be a subset of {0..2f-1}");
    for (auto [b1, b2] : b)
        require(b1 - b2 >= 1 && b1 - b2 <= p, ErrorKind::domain, "need 1 <= b_1 - b_2 <= p at every embedding");
    const auto [e1, e2] = niveau2_exponents(p, b, J);
    const InertialType type(p, 2, f, e1, e2);  // rejects reducible data

    std::vector<int> x(f, 0);
    for (int s = 0; s < f; ++s) {
        const int d = b[s].first - b[s].second;
        if (J.contains(s) && J.contains(s + f)) x[s] = d;
        if (!J.contains(s) && !J.contains(s + f)) x[s] = -d;
    }
    if (std::all_of(x.begin(), x.end(), [](int v) { return v == 0; })) return {J, f};

    const auto dec = carry_decompose(p, x);
    require(dec.kind == CarryDecomposition::Kind::strings, ErrorKind::internal,
            "difference sequence is not a union of strings");

    Subset out = J;
    for (const auto &str : dec.strings) {
        bool done = false;
        // Prefer the lift start + f; fall back to start if that would disturb the characters.
        for (int lift : {str.start + f, str.start}) {
            Subset trial = out;
            for (int t = 0; t <= str.len; ++t) trial.toggle(cyc(lift + t, 2 * f));
            const auto [t1, t2] = niveau2_exponents(p, b, trial);
            if (type.matches(t1, t2)) {
                out = trial;
                done = true;
                break;
            }
        }
        require(done, ErrorKind::internal, "no lift of a string preserves the characters");
    }
    require(is_balanced(out, f), ErrorKind::internal, "rebalancing did not produce a balanced subset");
    return {out, f};
}

/// Recorded formula: |J|, or |J| + 1 when the two characters coincide.
inline int crystalline_ext_dimension(const Subset &J, bool chars_equal) { return J.size() + (chars_equal ? 1 : 0); }

} // namespace kw
