#pragma once

// Exact arithmetic over small finite fields F_q and over F_q[u]/(u^{N+1}).
//
// Field elements are stored packed: the coefficient vector (c_0, ..., c_{m-1})
// in the basis 1, t, ..., t^{m-1} of F_p[t]/(modulus) is the integer
// sum c_j p^j. Multiplication goes through discrete log tables built once
// per field, which is why q is capped at 2^16.

#include <kw/error.hpp>
#include <kw/integer.hpp>

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace kw {

class FqField;
using FieldPtr = std::shared_ptr<const FqField>;

class FqField {
public:
    using packed = std::uint32_t;
    static constexpr std::int64_t max_order = 1 << 16;

    /// modulus is monic of degree m, little-endian (length m+1); ignored when m == 1.
    static FieldPtr make(int p, int m = 1, std::vector<int> modulus = {}) {
        return std::shared_ptr<const FqField>(new FqField(p, m, std::move(modulus)));
    }

    int prime() const noexcept { return p_; }
    int degree() const noexcept { return m_; }
    std::uint32_t order() const noexcept { return q_; }
    const std::vector<int> &modulus() const noexcept { return modulus_; }

    bool same_as(const FqField &o) const noexcept {
        return this == &o || (p_ == o.p_ && m_ == o.m_ && modulus_ == o.modulus_);
    }

    packed add(packed a, packed b) const noexcept {
        if (m_ == 1) return (a + b) % q_;
        packed out = 0, scale = 1;
        for (int j = 0; j < m_; ++j, a /= p_, b /= p_, scale *= p_) out += ((a % p_ + b % p_) % p_) * scale;
        return out;
    }
    packed neg(packed a) const noexcept {
        if (m_ == 1) return a == 0 ? 0 : q_ - a;
        packed out = 0, scale = 1;
        for (int j = 0; j < m_; ++j, a /= p_, scale *= p_) out += ((p_ - a % p_) % p_) * scale;
        return out;
    }
    packed sub(packed a, packed b) const noexcept { return add(a, neg(b)); }
    packed mul(packed a, packed b) const noexcept {
        if (a == 0 || b == 0) return 0;
        std::uint32_t e = log_[a] + log_[b];
        if (e >= q_ - 1) e -= q_ - 1;
        return exp_[e];
    }
    packed inv(packed a) const {
        require(a != 0, ErrorKind::domain, "inverse of zero in F_" + std::to_string(q_));
        return exp_[(q_ - 1 - log_[a]) % (q_ - 1)];
    }
    packed from_int(std::int64_t n) const noexcept { return static_cast<packed>(mod_floor(n, p_)); }

    std::vector<int> digits(packed a) const {
        std::vector<int> out(m_);
        for (int j = 0; j < m_; ++j, a /= p_) out[j] = static_cast<int>(a % p_);
        return out;
    }
    packed pack(std::span<const int> coeffs) const {
        require(static_cast<int>(coeffs.size()) <= m_, ErrorKind::structural,
                "field element has more than m = " + std::to_string(m_) + " coefficients");
        packed out = 0, scale = 1;
        for (int c : coeffs) {
            out += static_cast<packed>(mod_floor(c, p_)) * scale;
            scale *= p_;
        }
        return out;
    }

private:
    FqField(int p, int m, std::vector<int> modulus) : p_(p), m_(m) {
        require(is_prime(p), ErrorKind::domain, "p = " + std::to_string(p) + " is not prime");
        require(p > 2, ErrorKind::domain, "fields of characteristic 2 are not supported");
        require(m >= 1, ErrorKind::domain, "extension degree must be at least 1");
        std::int64_t q = 1;
        for (int j = 0; j < m; ++j) {
            q *= p;
            require(q <= max_order, ErrorKind::resource, "field order exceeds 2^16");
        }
        q_ = static_cast<std::uint32_t>(q);
        if (m > 1) {
            require(static_cast<int>(modulus.size()) == m + 1, ErrorKind::domain,
                    "modulus must have m+1 coefficients (little-endian, monic)");
            for (auto &c : modulus) c = static_cast<int>(mod_floor(c, p));
            require(modulus.back() == 1, ErrorKind::domain, "modulus must be monic");
            modulus_ = std::move(modulus);
            require(modulus_irreducible(), ErrorKind::domain, "modulus is reducible over F_" + std::to_string(p));
        }
        build_tables();
    }

    // Polynomial product mod (p, modulus) on digit vectors; only used to build tables.
    std::vector<int> slow_mul(const std::vector<int> &a, const std::vector<int> &b) const {
        std::vector<int> prod(2 * m_ - 1, 0);
        for (int i = 0; i < m_; ++i)
            for (int j = 0; j < m_; ++j) prod[i + j] = (prod[i + j] + a[i] * b[j]) % p_;
        for (int k = 2 * m_ - 2; k >= m_; --k) {
            int c = prod[k];
            if (c == 0) continue;
            for (int j = 0; j <= m_; ++j) prod[k - m_ + j] = static_cast<int>(mod_floor(prod[k - m_ + j] - c * modulus_[j], p_));
        }
        prod.resize(m_);
        return prod;
    }

    static bool divides(std::vector<int> num, const std::vector<int> &den, int p) {
        // den monic
        const int dd = static_cast<int>(den.size()) - 1;
        for (int k = static_cast<int>(num.size()) - 1; k >= dd; --k) {
            int c = num[k];
            if (c == 0) continue;
            for (int j = 0; j <= dd; ++j) num[k - dd + j] = static_cast<int>(mod_floor(num[k - dd + j] - c * den[j], p));
        }
        for (int k = 0; k < dd; ++k)
            if (num[k] != 0) return false;
        return true;
    }

    bool modulus_irreducible() const {
        for (int d = 1; 2 * d <= m_; ++d) {
            std::int64_t count = checked_pow(p_, d);
            for (std::int64_t idx = 0; idx < count; ++idx) {
                std::vector<int> cand(d + 1);
                std::int64_t t = idx;
                for (int j = 0; j < d; ++j, t /= p_) cand[j] = static_cast<int>(t % p_);
                cand[d] = 1;
                if (divides(modulus_, cand, p_)) return false;
            }
        }
        return true;
    }

    void build_tables() {
        exp_.assign(q_, 0);
        log_.assign(q_, 0);
        for (packed g = 1; g < q_; ++g) {
            std::vector<int> gd = digits(g), cur(m_, 0);
            cur[0] = 1;
            std::uint32_t k = 0;
            bool ok = true;
            for (; k < q_ - 1; ++k) {
                packed c = pack(cur);
                if (k > 0 && c == 1) {
                    ok = false;
                    break;
                }
                exp_[k] = c;
                log_[c] = k;
                cur = m_ == 1 ? std::vector<int>{static_cast<int>((static_cast<std::int64_t>(cur[0]) * gd[0]) % p_)}
                              : slow_mul(cur, gd);
            }
            if (ok) return;
        }
        fail(ErrorKind::internal, "no multiplicative generator found");
    }

    int p_;
    int m_;
    std::uint32_t q_ = 0;
    std::vector<int> modulus_;
    std::vector<packed> exp_;
    std::vector<std::uint32_t> log_;
};

inline void require_same_field(const FqField &a, const FqField &b) {
    require(a.same_as(b), ErrorKind::structural, "field mismatch");
}

class FqElement {
public:
    using packed = FqField::packed;

    FqElement() = default;
    FqElement(FieldPtr field, packed value) : field_(std::move(field)), v_(value) {}

    static FqElement zero(FieldPtr field) { return {std::move(field), 0}; }
    static FqElement one(FieldPtr field) { return {std::move(field), 1}; }
    static FqElement from_int(FieldPtr field, std::int64_t n) {
        auto v = field->from_int(n);
        return {std::move(field), v};
    }
    static FqElement from_coeffs(FieldPtr field, std::span<const int> coeffs) {
        auto v = field->pack(coeffs);
        return {std::move(field), v};
    }

    const FieldPtr &field_ptr() const noexcept { return field_; }
    const FqField &field() const noexcept { return *field_; }
    packed value() const noexcept { return v_; }
    bool is_zero() const noexcept { return v_ == 0; }
    bool is_one() const noexcept { return v_ == 1; }
    std::vector<int> coeffs() const { return field_->digits(v_); }

    FqElement inverse() const { return {field_, field_->inv(v_)}; }

    friend FqElement operator+(const FqElement &a, const FqElement &b) {
        require_same_field(*a.field_, *b.field_);
        return {a.field_, a.field_->add(a.v_, b.v_)};
    }
    friend FqElement operator-(const FqElement &a, const FqElement &b) {
        require_same_field(*a.field_, *b.field_);
        return {a.field_, a.field_->sub(a.v_, b.v_)};
    }
    friend FqElement operator-(const FqElement &a) { return {a.field_, a.field_->neg(a.v_)}; }
    friend FqElement operator*(const FqElement &a, const FqElement &b) {
        require_same_field(*a.field_, *b.field_);
        return {a.field_, a.field_->mul(a.v_, b.v_)};
    }
    friend FqElement operator/(const FqElement &a, const FqElement &b) {
        require_same_field(*a.field_, *b.field_);
        return {a.field_, a.field_->mul(a.v_, a.field_->inv(b.v_))};
    }
    friend bool operator==(const FqElement &a, const FqElement &b) noexcept {
        return a.v_ == b.v_ && a.field_ && b.field_ && a.field_->same_as(*b.field_);
    }

    friend std::ostream &operator<<(std::ostream &os, const FqElement &x) {
        if (x.field_->degree() == 1) return os << x.v_;
        auto c = x.coeffs();
        os << '[';
        for (std::size_t j = 0; j < c.size(); ++j) os << (j ? "," : "") << c[j];
        return os << ']';
    }

private:
    FieldPtr field_;
    packed v_ = 0;
};

/// (a)_i: a when i is divisible by f, 1 otherwise.
inline FqElement label_at(const FqElement &a, int i, int f) {
    return cyc(i, f) == 0 ? a : FqElement::one(a.field_ptr());
}

/// u-adic valuation with a distinguished infinity for the zero series.
class SeriesValuation {
public:
    static SeriesValuation infinity() noexcept { return SeriesValuation(); }
    static SeriesValuation finite(int d) noexcept { return SeriesValuation(d); }

    bool is_infinite() const noexcept { return !d_.has_value(); }
    int value() const {
        require(d_.has_value(), ErrorKind::domain, "valuation of the zero series is infinite");
        return *d_;
    }

    friend bool operator==(const SeriesValuation &, const SeriesValuation &) = default;
    friend SeriesValuation operator+(const SeriesValuation &a, const SeriesValuation &b) noexcept {
        if (a.is_infinite() || b.is_infinite()) return infinity();
        return finite(*a.d_ + *b.d_);
    }

    friend std::ostream &operator<<(std::ostream &os, const SeriesValuation &v) {
        return v.is_infinite() ? os << "inf" : os << *v.d_;
    }

private:
    SeriesValuation() = default;
    explicit SeriesValuation(int d) : d_(d) {}
    std::optional<int> d_;
};

/// An element of F_q[u]/(u^{trunc+1}).
class TruncatedSeries {
public:
    using packed = FqField::packed;

    TruncatedSeries() = default;
    TruncatedSeries(FieldPtr field, int trunc) : field_(std::move(field)), c_(checked_len(trunc), 0) {}
    TruncatedSeries(FieldPtr field, int trunc, std::vector<packed> coeffs)
        : field_(std::move(field)), c_(std::move(coeffs)) {
        require(static_cast<int>(c_.size()) <= trunc + 1, ErrorKind::structural,
                "more coefficients than the truncation allows");
        c_.resize(checked_len(trunc), 0);
        for (auto v : c_) require(v < field_->order(), ErrorKind::domain, "coefficient outside the field");
    }

    static TruncatedSeries zero(FieldPtr field, int trunc) { return {std::move(field), trunc}; }
    static TruncatedSeries constant(const FqElement &c, int trunc) {
        TruncatedSeries s(c.field_ptr(), trunc);
        s.c_[0] = c.value();
        return s;
    }
    static TruncatedSeries monomial(const FqElement &c, int degree, int trunc) {
        TruncatedSeries s(c.field_ptr(), trunc);
        if (degree <= trunc) s.c_[degree] = c.value();
        return s;
    }
    /// Prime-field integer coefficients, little-endian in u.
    static TruncatedSeries from_ints(FieldPtr field, int trunc, std::span<const int> coeffs) {
        TruncatedSeries s(field, trunc);
        require(static_cast<int>(coeffs.size()) <= trunc + 1, ErrorKind::structural,
                "more coefficients than the truncation allows");
        for (std::size_t k = 0; k < coeffs.size(); ++k) s.c_[k] = field->from_int(coeffs[k]);
        return s;
    }

    const FieldPtr &field_ptr() const noexcept { return field_; }
    const FqField &field() const noexcept { return *field_; }
    int trunc() const noexcept { return static_cast<int>(c_.size()) - 1; }
    const std::vector<packed> &packed_coeffs() const noexcept { return c_; }

    FqElement coeff(int k) const {
        require(k >= 0 && k <= trunc(), ErrorKind::truncation, "coefficient of u^" + std::to_string(k) + " is not known");
        return {field_, c_[k]};
    }
    packed raw(int k) const noexcept { return c_[k]; }
    void set_coeff(int k, const FqElement &v) {
        require(k >= 0 && k <= trunc(), ErrorKind::truncation, "degree beyond truncation");
        require_same_field(*field_, v.field());
        c_[k] = v.value();
    }
    void set_raw(int k, packed v) noexcept { c_[k] = v; }

    bool is_zero() const noexcept {
        for (auto v : c_)
            if (v != 0) return false;
        return true;
    }

    SeriesValuation u_valuation() const noexcept {
        for (std::size_t k = 0; k < c_.size(); ++k)
            if (c_[k] != 0) return SeriesValuation::finite(static_cast<int>(k));
        return SeriesValuation::infinity();
    }

    /// Highest degree with a nonzero coefficient, -1 for zero.
    int degree() const noexcept {
        for (int k = trunc(); k >= 0; --k)
            if (c_[k] != 0) return k;
        return -1;
    }

    /// Re-truncate to a smaller precision, or pad with zeros to a larger one.
    TruncatedSeries with_trunc(int trunc) const {
        TruncatedSeries s(field_, trunc);
        for (int k = 0; k <= std::min(trunc, this->trunc()); ++k) s.c_[k] = c_[k];
        return s;
    }

    /// s(u^p) mod u^{trunc+1}; coefficients are untouched.
    TruncatedSeries frobenius() const {
        const int p = field_->prime();
        TruncatedSeries s(field_, trunc());
        for (int k = 0; static_cast<std::int64_t>(k) * p <= trunc(); ++k) s.c_[k * p] = c_[k];
        return s;
    }

    /// u^k s mod u^{trunc+1}.
    TruncatedSeries shifted(int k) const {
        TruncatedSeries s(field_, trunc());
        for (int d = trunc() - k; d >= 0; --d) s.c_[d + k] = c_[d];
        return s;
    }

    TruncatedSeries scaled(const FqElement &c) const {
        require_same_field(*field_, c.field());
        TruncatedSeries s = *this;
        for (auto &v : s.c_) v = field_->mul(v, c.value());
        return s;
    }

    TruncatedSeries &operator+=(const TruncatedSeries &o) {
        check_compatible(o);
        for (std::size_t k = 0; k < c_.size(); ++k) c_[k] = field_->add(c_[k], o.c_[k]);
        return *this;
    }
    TruncatedSeries &operator-=(const TruncatedSeries &o) {
        check_compatible(o);
        for (std::size_t k = 0; k < c_.size(); ++k) c_[k] = field_->sub(c_[k], o.c_[k]);
        return *this;
    }
    friend TruncatedSeries operator+(TruncatedSeries a, const TruncatedSeries &b) { return a += b; }
    friend TruncatedSeries operator-(TruncatedSeries a, const TruncatedSeries &b) { return a -= b; }
    friend TruncatedSeries operator-(const TruncatedSeries &a) {
        TruncatedSeries s = a;
        for (auto &v : s.c_) v = a.field_->neg(v);
        return s;
    }
    friend TruncatedSeries operator*(const TruncatedSeries &a, const TruncatedSeries &b) {
        a.check_compatible(b);
        const int n = a.trunc();
        TruncatedSeries s(a.field_, n);
        const FqField &F = *a.field_;
        for (int i = 0; i <= n; ++i) {
            if (a.c_[i] == 0) continue;
            for (int j = 0; i + j <= n; ++j)
                if (b.c_[j] != 0) s.c_[i + j] = F.add(s.c_[i + j], F.mul(a.c_[i], b.c_[j]));
        }
        return s;
    }
    friend bool operator==(const TruncatedSeries &a, const TruncatedSeries &b) noexcept {
        return a.c_ == b.c_ && a.field_ && b.field_ && a.field_->same_as(*b.field_);
    }

    friend std::ostream &operator<<(std::ostream &os, const TruncatedSeries &s) {
        bool any = false;
        for (int k = 0; k <= s.trunc(); ++k) {
            if (s.c_[k] == 0) continue;
            if (any) os << " + ";
            any = true;
            os << FqElement(s.field_, s.c_[k]);
            if (k > 0) os << "*u^" << k;
        }
        if (!any) os << '0';
        return os << " + O(u^" << s.trunc() + 1 << ')';
    }

private:
    static std::size_t checked_len(int trunc) {
        require(trunc >= 0, ErrorKind::domain, "truncation must be non-negative");
        return static_cast<std::size_t>(trunc) + 1;
    }
    void check_compatible(const TruncatedSeries &o) const {
        require_same_field(*field_, *o.field_);
        require(trunc() == o.trunc(), ErrorKind::structural,
                "truncation mismatch: " + std::to_string(trunc()) + " vs " + std::to_string(o.trunc()));
    }

    FieldPtr field_;
    std::vector<packed> c_;
};

inline TruncatedSeries series_mul(const TruncatedSeries &s, const TruncatedSeries &t) { return s * t; }
inline TruncatedSeries frobenius_substitute(const TruncatedSeries &s) { return s.frobenius(); }
inline SeriesValuation u_valuation(const TruncatedSeries &s) noexcept { return s.u_valuation(); }

} // namespace kw
