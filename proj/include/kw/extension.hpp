#pragma once

// Rank-two extensions of rank-one Kisin modules mod p.
//
// An extension of type (r, a, b, J) has basis e_i, f_i with
//   phi(e_{i-1}) = (b)_i u^{r_i - h_i} e_i
//   phi(f_{i-1}) = (a)_i u^{h_i} f_i + x_i e_i,       h_i = r_i [i in J].
// A change of basis f'_i = f_i + alpha_i e_i replaces x_i by
//   x_i + (b)_i u^{r_i - h_i} phi(alpha_{i-1}) - (a)_i u^{h_i} alpha_i.

#include <kw/algebra.hpp>
#include <kw/combinat.hpp>
#include <kw/rankone.hpp>
#include <kw/subset.hpp>

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace kw {

struct ExtensionData {
    int p = 0;
    int f = 0;
    std::vector<int> r;
    Subset J;
    FqElement a;
    FqElement b;
    std::vector<TruncatedSeries> x;
    int trunc = 0;

    ExtensionData() = default;
    ExtensionData(std::vector<int> r_, Subset J_, FqElement a_, FqElement b_, std::vector<TruncatedSeries> x_, int trunc_)
        : r(std::move(r_)), J(J_), a(std::move(a_)), b(std::move(b_)), x(std::move(x_)), trunc(trunc_) {
        require(a.field_ptr() && b.field_ptr(), ErrorKind::structural, "missing unramified labels");
        p = a.field().prime();
        f = static_cast<int>(r.size());
        validate();
    }

    /// The split extension (all x_i = 0).
    static ExtensionData split(std::vector<int> r, Subset J, FqElement a, FqElement b, int trunc) {
        std::vector<TruncatedSeries> x(r.size(), TruncatedSeries::zero(a.field_ptr(), trunc));
        return {std::move(r), J, std::move(a), std::move(b), std::move(x), trunc};
    }

    void validate() const {
        detail::require_odd_prime(p);
        detail::require_weight_range(p, r);
        require(J.universe() == f, ErrorKind::structural, "J is not a subset of {0..f-1}");
        require_same_field(a.field(), b.field());
        require(!a.is_zero() && !b.is_zero(), ErrorKind::domain, "unramified labels must be nonzero");
        require(static_cast<int>(x.size()) == f, ErrorKind::structural, "need one extension coefficient per index");
        for (const auto &xi : x) {
            require_same_field(xi.field(), a.field());
            require(xi.trunc() == trunc, ErrorKind::structural, "extension coefficients must share the truncation");
        }
    }

    const FieldPtr &field_ptr() const noexcept { return a.field_ptr(); }
    int h(int i) const noexcept { return J.contains(i) ? r[cyc(i, f)] : 0; }
    int sub_exponent(int i) const noexcept { return r[cyc(i, f)] - h(i); }
    std::vector<int> h_vector() const { return kw::h_vector(r, J); }

    /// M(h; a), the quotient.
    RankOneModule quotient_module() const { return {p, f, h_vector(), a}; }
    /// M(r - h; b), the submodule.
    RankOneModule sub_module() const {
        std::vector<int> s(f);
        for (int i = 0; i < f; ++i) s[i] = sub_exponent(i);
        return {p, f, std::move(s), b};
    }

    bool same_parameters(const ExtensionData &o) const {
        return p == o.p && f == o.f && r == o.r && J == o.J && a == o.a && b == o.b && trunc == o.trunc;
    }

    friend bool operator==(const ExtensionData &, const ExtensionData &) = default;
};

struct BasisChange {
    std::vector<TruncatedSeries> alpha;

    static BasisChange zero(const ExtensionData &e) {
        return {std::vector<TruncatedSeries>(e.f, TruncatedSeries::zero(e.field_ptr(), e.trunc))};
    }

    /// A change that keeps x_i = 0 for i outside J: there alpha_i = (b/a)_i u^{r_i} phi(alpha_{i-1}).
    static BasisChange preserving(const ExtensionData &e, std::vector<TruncatedSeries> alpha) {
        require(static_cast<int>(alpha.size()) == e.f, ErrorKind::structural, "need one alpha per index");
        if (!e.J.empty()) {
            for (int i = 0; i < e.f; ++i) {
                if (e.J.contains(i)) continue;
                const auto &prev = alpha[cyc(i - 1, e.f)];
                auto expect = prev.with_trunc(alpha[i].trunc())
                                  .frobenius()
                                  .shifted(e.r[i])
                                  .scaled(label_at(e.b, i, e.f) / label_at(e.a, i, e.f));
                require(expect == alpha[i], ErrorKind::domain,
                        "alpha_" + std::to_string(i) + " violates the recursion outside J");
            }
        }
        return {std::move(alpha)};
    }

    BasisChange &operator+=(const BasisChange &o) {
        for (std::size_t i = 0; i < alpha.size(); ++i) alpha[i] += o.alpha[i];
        return *this;
    }
    BasisChange scaled(const FqElement &c) const {
        BasisChange out = *this;
        for (auto &s : out.alpha) s = s.scaled(c);
        return out;
    }
    bool is_zero() const {
        return std::all_of(alpha.begin(), alpha.end(), [](const auto &s) { return s.is_zero(); });
    }

    friend bool operator==(const BasisChange &, const BasisChange &) = default;
};

inline ExtensionData apply_basis_change(const ExtensionData &e, const BasisChange &bc) {
    require(static_cast<int>(bc.alpha.size()) == e.f, ErrorKind::structural, "need one alpha per index");
    const int N = e.trunc;
    std::vector<TruncatedSeries> padded;
    padded.reserve(e.f);
    for (int i = 0; i < e.f; ++i) {
        const auto &al = bc.alpha[i];
        require_same_field(al.field(), e.a.field());
        // alpha_i enters as u^{h_i} alpha_i and, one index later, as u^{r-h} phi(alpha_i).
        const int next = cyc(i + 1, e.f);
        const int need = std::max(N - e.h(i), (N - e.sub_exponent(next)) / e.p);
        require(al.trunc() >= need, ErrorKind::truncation,
                "alpha_" + std::to_string(i) + " is known mod u^" + std::to_string(al.trunc() + 1) + ", need mod u^" +
                    std::to_string(need + 1));
        padded.push_back(al.with_trunc(N));
    }
    ExtensionData out = e;
    for (int i = 0; i < e.f; ++i) {
        const auto &prev = padded[cyc(i - 1, e.f)];
        out.x[i] += prev.frobenius().shifted(e.sub_exponent(i)).scaled(label_at(e.b, i, e.f));
        out.x[i] -= padded[i].shifted(e.h(i)).scaled(label_at(e.a, i, e.f));
    }
    return out;
}

// ---------------------------------------------------------------------------
// The affects relation on pairs (i, d), i in J, d >= r_i.

struct DegreePair {
    int index = 0;
    int degree = 0;

    friend auto operator<=>(const DegreePair &, const DegreePair &) = default;
};

struct PairPartition {
    std::vector<std::vector<DegreePair>> loops;
    std::vector<std::vector<DegreePair>> stubs;
    std::vector<std::vector<DegreePair>> paths;  // truncated at `cutoff`; they continue beyond it
    int cutoff = 0;

    std::size_t pair_count() const {
        std::size_t n = 0;
        for (const auto *group : {&loops, &stubs, &paths})
            for (const auto &chain : *group) n += chain.size();
        return n;
    }
};

/// Least delta > 0 with i + delta in J (delta = f when J = {i}).
inline int next_in_J(const Subset &J, int i) {
    const int f = J.universe();
    for (int d = 1; d <= f; ++d)
        if (J.contains(i + d)) return d;
    fail(ErrorKind::domain, "J is empty");
}

/// The pair affected by (i, d): (i + delta, p^delta (d - r_i) + sum_{j<delta} r_{i+j} p^{delta-j}).
inline DegreePair affected_pair(int p, const std::vector<int> &r, const Subset &J, DegreePair pr) {
    const int f = static_cast<int>(r.size());
    const int delta = next_in_J(J, pr.index);
    std::int64_t d = pr.degree - r[cyc(pr.index, f)];
    for (int j = 1; j < delta; ++j) d = d * p + r[cyc(pr.index + j, f)];
    d *= p;
    require(d <= INT32_MAX, ErrorKind::resource, "degree overflow in the affects relation");
    return {cyc(pr.index + delta, f), static_cast<int>(d)};
}

inline PairPartition classify_pairs(int p, const std::vector<int> &r, const Subset &J, int cutoff) {
    detail::require_odd_prime(p);
    detail::require_weight_range(p, r);
    require(!J.empty(), ErrorKind::domain, "J is empty, so there are no pairs to classify");
    // Beyond 2p - 1 degrees strictly increase, so chains leaving the window never return.
    require(cutoff >= 2 * p - 1, ErrorKind::domain, "cutoff must be at least 2p - 1");
    const int f = static_cast<int>(r.size());

    std::vector<DegreePair> pairs;
    for (int i = 0; i < f; ++i)
        if (J.contains(i))
            for (int d = r[i]; d <= cutoff; ++d) pairs.push_back({i, d});

    auto in_window = [&](DegreePair q) { return J.contains(q.index) && q.degree >= r[q.index] && q.degree <= cutoff; };
    std::map<DegreePair, DegreePair> succ;
    std::map<DegreePair, bool> has_pred;
    for (auto pr : pairs) {
        auto q = affected_pair(p, r, J, pr);
        succ[pr] = q;
        if (in_window(q)) has_pred[q] = true;
    }

    PairPartition out;
    out.cutoff = cutoff;
    std::map<DegreePair, bool> seen;
    for (auto start : pairs) {
        if (has_pred.count(start)) continue;
        std::vector<DegreePair> chain;
        DegreePair cur = start;
        bool stub = false;
        while (true) {
            chain.push_back(cur);
            seen[cur] = true;
            auto q = succ.at(cur);
            if (q.degree < r[q.index]) {
                stub = true;
                break;
            }
            if (!in_window(q)) break;
            cur = q;
        }
        (stub ? out.stubs : out.paths).push_back(std::move(chain));
    }
    // Whatever is left has a predecessor all the way back, hence lies on a cycle.
    for (auto start : pairs) {
        if (seen.count(start)) continue;
        std::vector<DegreePair> loop;
        DegreePair cur = start;
        while (!seen.count(cur)) {
            seen[cur] = true;
            loop.push_back(cur);
            cur = succ.at(cur);
        }
        out.loops.push_back(std::move(loop));
    }
    return out;
}

inline PairPartition classify_pairs(const ExtensionData &e, int cutoff) { return classify_pairs(e.p, e.r, e.J, cutoff); }

/// r in the set P, J = {i : r_i in {p-1, p}} and a = b: the one configuration whose degree-p term survives.
inline bool exceptional_configuration(int p, const std::vector<int> &r, const Subset &J, const FqElement &a,
                                      const FqElement &b) {
    if (!p_set_member(p, r) || !(a == b)) return false;
    for (int i = 0; i < static_cast<int>(r.size()); ++i)
        if (J.contains(i) != (r[i] == p - 1 || r[i] == p)) return false;
    return true;
}

inline bool exceptional_configuration(const ExtensionData &e) { return exceptional_configuration(e.p, e.r, e.J, e.a, e.b); }

/// The index carrying the extra degree-p term in the exceptional case.
inline int distinguished_index(const Subset &J) { return J.min(); }

/// deg(x_i) < h_i for all i, except possibly one extra u^p term at the distinguished index in the exceptional case.
inline bool in_normal_form(const ExtensionData &e) {
    const bool exceptional = exceptional_configuration(e);
    for (int i = 0; i < e.f; ++i) {
        const auto &xi = e.x[i];
        for (int d = e.h(i); d <= e.trunc; ++d) {
            if (xi.raw(d) == 0) continue;
            if (exceptional && i == distinguished_index(e.J) && d == e.p) continue;
            return false;
        }
    }
    return true;
}

struct ReductionResult {
    ExtensionData reduced;
    BasisChange change;
};

namespace detail {

/// alpha_i = c u^k, continued through the indices after i outside J so that their x stays zero.
inline BasisChange chain_change(const ExtensionData &e, int i, const FqElement &c, int k) {
    BasisChange bc = BasisChange::zero(e);
    bc.alpha[i] = TruncatedSeries::monomial(c, k, e.trunc);
    const int delta = next_in_J(e.J, i);
    for (int t = 1; t < delta; ++t) {
        const int j = cyc(i + t, e.f);
        bc.alpha[j] = bc.alpha[cyc(j - 1, e.f)].frobenius().shifted(e.r[j]).scaled(label_at(e.b, j, e.f) /
                                                                                   label_at(e.a, j, e.f));
    }
    return bc;
}

/// Removes the u^d term of x_i (i in J, d >= r_i), pushing it to the pair (i, d) affects.
inline void kill_term(ExtensionData &e, BasisChange &total, DegreePair pr) {
    const auto coef = e.x[pr.index].raw(pr.degree);
    if (coef == 0) return;
    FqElement c = FqElement(e.field_ptr(), coef) / label_at(e.a, pr.index, e.f);
    auto bc = chain_change(e, pr.index, c, pr.degree - e.r[pr.index]);
    e = apply_basis_change(e, bc);
    total += bc;
}

/// A change making x_i = 0 for every i outside J.
inline BasisChange clear_outside_J(const ExtensionData &e) {
    BasisChange bc = BasisChange::zero(e);
    auto solve_at = [&](int i) {
        const auto &prev = bc.alpha[cyc(i - 1, e.f)];
        auto rhs = e.x[i] + prev.frobenius().shifted(e.r[i]).scaled(label_at(e.b, i, e.f));
        bc.alpha[i] = rhs.scaled(label_at(e.a, i, e.f).inverse());
    };
    if (!e.J.empty()) {
        for (int j : e.J.elements())
            for (int t = 1; !e.J.contains(j + t); ++t) solve_at(cyc(j + t, e.f));
    } else {
        // alpha = a^{-1}(x + b u^r phi(alpha)) around the cycle; each sweep fixes at least one more degree.
        for (int sweep = 0; sweep <= e.trunc + 1; ++sweep)
            for (int i = 0; i < e.f; ++i) solve_at(i);
    }
    return bc;
}

} // namespace detail

/// Default working truncation, large enough to see every stub and loop through degree p.
inline int default_trunc(int p) { return p * p; }

inline ReductionResult reduce_normal_form(const ExtensionData &e) {
    e.validate();
    require(e.trunc >= e.p * e.p, ErrorKind::truncation, "reduction needs truncation N >= p^2");

    BasisChange total = detail::clear_outside_J(e);
    ExtensionData cur = apply_basis_change(e, total);
    for (int i = 0; i < e.f; ++i)
        if (!e.J.contains(i))
            require(cur.x[i].is_zero(), ErrorKind::internal, "failed to clear x_" + std::to_string(i));

    if (!e.J.empty()) {
        const auto parts = classify_pairs(cur, cur.trunc);
        for (const auto *group : {&parts.stubs, &parts.paths})
            for (const auto &chain : *group)
                for (auto pr : chain) detail::kill_term(cur, total, pr);

        for (auto loop : parts.loops) {
            // Rotate so the loop starts at the distinguished index.
            auto it = std::find_if(loop.begin(), loop.end(),
                                   [&](DegreePair q) { return q.index == distinguished_index(e.J); });
            if (it != loop.end()) std::rotate(loop.begin(), it, loop.end());
            for (std::size_t j = 1; j < loop.size(); ++j) detail::kill_term(cur, total, loop[j]);
            const DegreePair head = loop.front();
            const auto kappa = cur.x[head.index].raw(head.degree);
            if (kappa == 0) continue;

            // Once around the loop from a unit change at the head.
            ExtensionData probe = ExtensionData::split(cur.r, cur.J, cur.a, cur.b, cur.trunc);
            BasisChange unit = detail::chain_change(probe, head.index, FqElement::one(cur.field_ptr()),
                                                    head.degree - cur.r[head.index]);
            probe = apply_basis_change(probe, unit);
            for (std::size_t j = 1; j < loop.size(); ++j) detail::kill_term(probe, unit, loop[j]);
            const FqElement lambda(cur.field_ptr(), probe.x[head.index].raw(head.degree));
            if (lambda.is_zero()) continue;  // a = b: the term survives
            auto bc = unit.scaled(-FqElement(cur.field_ptr(), kappa) / lambda);
            cur = apply_basis_change(cur, bc);
            total += bc;
        }
    }

    require(cur == apply_basis_change(e, total), ErrorKind::internal, "accumulated change does not reproduce the reduction");
    require(in_normal_form(cur), ErrorKind::internal, "reduction did not reach normal form");
    return {std::move(cur), std::move(total)};
}

// ---------------------------------------------------------------------------
// Equivalence of extensions: x2 - x1 in the image of the linear coboundary map.

class CoboundarySpace {
public:
    using packed = FqField::packed;

    explicit CoboundarySpace(const ExtensionData &shape) : shape_(ExtensionData::split(shape.r, shape.J, shape.a, shape.b, shape.trunc)) {
        const int n = dim();
        const FqField &F = field();
        for (int i = 0; i < shape_.f; ++i) {
            for (int k = 0; k <= shape_.trunc; ++k) {
                BasisChange bc = BasisChange::zero(shape_);
                bc.alpha[i].set_raw(k, 1);
                std::vector<packed> v = flatten(apply_basis_change(shape_, bc).x);
                std::vector<packed> combo(n, 0);
                combo[i * (shape_.trunc + 1) + k] = 1;
                insert(std::move(v), std::move(combo), F);
            }
        }
    }

    int dim() const noexcept { return shape_.f * (shape_.trunc + 1); }
    int rank() const noexcept { return static_cast<int>(basis_.size()); }
    const FqField &field() const noexcept { return shape_.a.field(); }

    /// Number of classes equals q^{dim - rank}; returned as the exponent.
    int class_count_exponent() const noexcept { return dim() - rank(); }

    /// Canonical representative of x modulo the image.
    std::vector<packed> class_key(const std::vector<TruncatedSeries> &x) const {
        auto v = flatten(x);
        reduce(v, nullptr);
        return v;
    }

    /// alpha with apply_basis_change(x1) = x2, if any.
    std::optional<BasisChange> solve(const ExtensionData &e1, const ExtensionData &e2) const {
        check(e1);
        check(e2);
        const FqField &F = field();
        auto v2 = flatten(e2.x), v1 = flatten(e1.x);
        for (std::size_t k = 0; k < v2.size(); ++k) v2[k] = F.sub(v2[k], v1[k]);
        std::vector<packed> combo(dim(), 0);
        reduce(v2, &combo);
        if (std::any_of(v2.begin(), v2.end(), [](packed c) { return c != 0; })) return std::nullopt;
        BasisChange bc = BasisChange::zero(shape_);
        for (int i = 0; i < shape_.f; ++i)
            for (int k = 0; k <= shape_.trunc; ++k) bc.alpha[i].set_raw(k, combo[i * (shape_.trunc + 1) + k]);
        return bc;
    }

    void check(const ExtensionData &e) const {
        require(e.same_parameters(shape_), ErrorKind::structural, "extension parameters differ from the space's");
    }

private:
    struct Row {
        int pivot;
        std::vector<packed> v;
        std::vector<packed> combo;
    };

    std::vector<packed> flatten(const std::vector<TruncatedSeries> &x) const {
        std::vector<packed> v;
        v.reserve(dim());
        for (const auto &s : x)
            for (int k = 0; k <= shape_.trunc; ++k) v.push_back(s.raw(k));
        return v;
    }

    static void axpy(std::vector<packed> &y, packed c, const std::vector<packed> &x, const FqField &F) {
        for (std::size_t k = 0; k < y.size(); ++k)
            if (x[k] != 0) y[k] = F.sub(y[k], F.mul(c, x[k]));
    }

    void reduce(std::vector<packed> &v, std::vector<packed> *combo) const {
        const FqField &F = field();
        for (const auto &row : basis_) {
            const packed c = v[row.pivot];
            if (c == 0) continue;
            axpy(v, c, row.v, F);
            if (combo) {
                // v - c*image(row) means combo + c*row.combo reproduces the removed part.
                for (std::size_t k = 0; k < combo->size(); ++k)
                    if (row.combo[k] != 0) (*combo)[k] = F.add((*combo)[k], F.mul(c, row.combo[k]));
            }
        }
    }

    void insert(std::vector<packed> v, std::vector<packed> combo, const FqField &F) {
        for (const auto &row : basis_) {
            const packed c = v[row.pivot];
            if (c == 0) continue;
            axpy(v, c, row.v, F);
            axpy(combo, c, row.combo, F);
        }
        auto it = std::find_if(v.begin(), v.end(), [](packed c) { return c != 0; });
        if (it == v.end()) return;
        const int pivot = static_cast<int>(it - v.begin());
        const packed inv = F.inv(v[pivot]);
        for (auto &c : v) c = F.mul(c, inv);
        for (auto &c : combo) c = F.mul(c, inv);
        // Keep the echelon basis fully reduced so class keys are canonical.
        for (auto &row : basis_) {
            const packed c = row.v[pivot];
            if (c == 0) continue;
            axpy(row.v, c, v, F);
            axpy(row.combo, c, combo, F);
        }
        basis_.push_back({pivot, std::move(v), std::move(combo)});
    }

    ExtensionData shape_;
    std::vector<Row> basis_;
};

struct EquivalenceResult {
    bool equivalent = false;
    std::optional<BasisChange> witness;
    std::optional<FqElement> scale;  // set when equivalence was found up to scaling x by a unit
};

/// Extension equivalence with fixed sub and quotient bases; with up_to_scaling, also x ~ lambda x.
inline EquivalenceResult coboundary_equivalent(const ExtensionData &e1, const ExtensionData &e2, bool up_to_scaling = false) {
    e1.validate();
    e2.validate();
    require(e1.same_parameters(e2), ErrorKind::structural, "extensions do not share (p, f, r, J, a, b, trunc)");
    CoboundarySpace space(e1);
    if (!up_to_scaling) {
        auto w = space.solve(e1, e2);
        return {w.has_value(), std::move(w), std::nullopt};
    }
    for (FqField::packed v = 1; v < e1.a.field().order(); ++v) {
        FqElement lambda(e1.field_ptr(), v);
        ExtensionData scaled = e1;
        for (auto &xi : scaled.x) xi = xi.scaled(lambda);
        if (auto w = space.solve(scaled, e2)) return {true, std::move(w), lambda};
    }
    return {false, std::nullopt, std::nullopt};
}

// ---------------------------------------------------------------------------

/// Every extension of the crystalline shape: constants on J, zero elsewhere, plus a u^p
/// coefficient at the distinguished index in the exceptional configuration.
inline std::vector<ExtensionData> crystalline_forms(const std::vector<int> &r, const Subset &J, const FqElement &a,
                                                    const FqElement &b, int trunc) {
    const int p = a.field().prime();
    detail::require_odd_prime(p);
    detail::require_weight_range(p, r);
    require(trunc >= p, ErrorKind::truncation, "truncation must reach degree p");
    const bool exceptional = exceptional_configuration(p, r, J, a, b);
    std::vector<DegreePair> slots;
    for (int i : J.elements()) slots.push_back({i, 0});
    if (exceptional) slots.push_back({distinguished_index(J), p});

    const std::uint64_t q = a.field().order();
    std::uint64_t total = 1;
    for (std::size_t k = 0; k < slots.size(); ++k) {
        total *= q;
        require(total <= (std::uint64_t{1} << 24), ErrorKind::resource, "too many crystalline forms to enumerate");
    }
    std::vector<ExtensionData> out;
    out.reserve(total);
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        ExtensionData e = ExtensionData::split(r, J, a, b, trunc);
        std::uint64_t t = idx;
        for (auto slot : slots) {
            e.x[slot.index].set_raw(slot.degree, static_cast<FqField::packed>(t % q));
            t /= q;
        }
        out.push_back(std::move(e));
    }
    return out;
}

} // namespace kw
