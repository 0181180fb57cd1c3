#pragma once

// Rank-one Kisin modules mod p in idempotent presentation:
//   phi(e_{i-1}) = (a)_i u^{r_i} e_i,   (a)_i = a iff i = 0 mod f.
// The attached character restricted to inertia is prod_i omega_i^{r_i}; with
// omega_s = omega_{f-1}^{p^{f-1-s}} its exponent is sum_i p^{f-1-i} r_i.

#include <kw/algebra.hpp>
#include <kw/integer.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace kw {

struct RankOneModule {
    int p = 0;
    int f = 0;
    std::vector<int> r;
    FqElement a;

    RankOneModule() = default;
    RankOneModule(int p_, int f_, std::vector<int> r_, FqElement a_)
        : p(p_), f(f_), r(std::move(r_)), a(std::move(a_)) {
        require(f >= 1, ErrorKind::domain, "f must be at least 1");
        require(static_cast<int>(r.size()) == f, ErrorKind::structural, "r must have f entries");
        require(a.field_ptr() != nullptr, ErrorKind::structural, "missing unramified label");
        require(a.field().prime() == p, ErrorKind::structural, "label field has the wrong characteristic");
        require(!a.is_zero(), ErrorKind::domain, "unramified label must be nonzero");
        for (int ri : r) require(ri >= 0, ErrorKind::domain, "r_i must be non-negative");
    }

    friend bool operator==(const RankOneModule &, const RankOneModule &) = default;
};

/// A tame character omega_{nf-1}^exponent times the unramified character with label `unramified`.
struct InertialCharacter {
    int p = 0;
    int niveau = 1;
    int f = 0;
    std::int64_t exponent = 0;
    FqElement unramified;

    InertialCharacter() = default;
    InertialCharacter(int p_, int niveau_, int f_, std::int64_t exponent_, FqElement unramified_)
        : p(p_), niveau(niveau_), f(f_), unramified(std::move(unramified_)) {
        require(niveau == 1 || niveau == 2, ErrorKind::domain, "niveau must be 1 or 2");
        require(f >= 1, ErrorKind::domain, "f must be at least 1");
        exponent = mod_floor(exponent_, modulus());
        require(!unramified.is_zero(), ErrorKind::domain, "unramified label must be nonzero");
    }

    std::int64_t modulus() const { return tame_modulus(p, niveau * f); }

    friend bool operator==(const InertialCharacter &, const InertialCharacter &) = default;
};

/// Structure constants phi(e_{i-1}) = c_i e_i of an arbitrary rank-one phi-module.
struct RawRankOne {
    int p = 0;
    int f = 0;
    std::vector<TruncatedSeries> c;
};

namespace detail {
inline void require_compatible(const RankOneModule &m1, const RankOneModule &m2) {
    require(m1.p == m2.p && m1.f == m2.f, ErrorKind::structural, "rank-one modules over different (p, f)");
    require_same_field(m1.a.field(), m2.a.field());
}
} // namespace detail

/// Canonical form: r_i is the u-valuation of c_i, a the product of the leading coefficients.
inline RankOneModule canonicalize(const RawRankOne &raw) {
    require(raw.f >= 1 && static_cast<int>(raw.c.size()) == raw.f, ErrorKind::structural,
            "need exactly f structure constants");
    std::vector<int> r(raw.f);
    FqElement a = FqElement::one(raw.c.front().field_ptr());
    for (int i = 0; i < raw.f; ++i) {
        const auto &ci = raw.c[i];
        require(ci.field().prime() == raw.p, ErrorKind::structural, "structure constant over the wrong field");
        auto v = ci.u_valuation();
        require(!v.is_infinite(), ErrorKind::degenerate, "structure constant c_" + std::to_string(i) + " vanishes");
        r[i] = v.value();
        a = a * ci.coeff(r[i]);
    }
    return {raw.p, raw.f, std::move(r), a};
}

inline std::int64_t inertial_exponent_value(const RankOneModule &m) { return weighted_exponent(m.p, m.r); }

inline InertialCharacter inertial_exponent(const RankOneModule &m) {
    return {m.p, 1, m.f, inertial_exponent_value(m), m.a};
}

inline RankOneModule product(const RankOneModule &m1, const RankOneModule &m2) {
    detail::require_compatible(m1, m2);
    std::vector<int> r(m1.f);
    for (int i = 0; i < m1.f; ++i) r[i] = m1.r[i] + m2.r[i];
    return {m1.p, m1.f, std::move(r), m1.a * m2.a};
}

/// Whether the attached Galois characters agree.
inline bool iso_test(const RankOneModule &m1, const RankOneModule &m2) {
    detail::require_compatible(m1, m2);
    return m1.a == m2.a && inertial_exponent_value(m1) == inertial_exponent_value(m2);
}

/// Phi-semilinear structure constants of m: c_i = (a)_i u^{r_i} at the given truncation.
inline RawRankOne structure_constants(const RankOneModule &m, int trunc) {
    RawRankOne raw{m.p, m.f, {}};
    for (int i = 0; i < m.f; ++i) raw.c.push_back(TruncatedSeries::monomial(label_at(m.a, i, m.f), m.r[i], trunc));
    return raw;
}

} // namespace kw
