#pragma once

// (phi, G-hat) bookkeeping: exact valuations, the uniqueness criterion for the
// G-hat action, and the model-raising move that walks J up to J_max.

#include <kw/combinat.hpp>
#include <kw/extension.hpp>

#include <compare>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <string>
#include <vector>

namespace kw {

/// An exact rational in lowest terms with positive denominator.
class ValuationQ {
public:
    ValuationQ() = default;
    ValuationQ(std::int64_t num, std::int64_t den = 1) {
        require(den != 0, ErrorKind::domain, "zero denominator");
        if (den < 0) num = -num, den = -den;
        const std::int64_t g = std::gcd(num, den);
        num_ = num / g;
        den_ = den / g;
    }

    std::int64_t num() const noexcept { return num_; }
    std::int64_t den() const noexcept { return den_; }

    friend bool operator==(const ValuationQ &, const ValuationQ &) = default;
    friend std::strong_ordering operator<=>(const ValuationQ &a, const ValuationQ &b) noexcept {
        const __int128 l = static_cast<__int128>(a.num_) * b.den_;
        const __int128 r = static_cast<__int128>(b.num_) * a.den_;
        return l < r ? std::strong_ordering::less : (l > r ? std::strong_ordering::greater : std::strong_ordering::equal);
    }
    friend std::ostream &operator<<(std::ostream &os, const ValuationQ &v) {
        os << v.num_;
        if (v.den_ != 1) os << '/' << v.den_;
        return os;
    }

private:
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

struct GhatType {
    std::vector<int> r;
    FqElement a;
    FqElement b;
    Subset J;

    static GhatType of(const ExtensionData &e) { return {e.r, e.a, e.b, e.J}; }
};

/// p^2 / (p - 1), the threshold in the uniqueness argument.
inline ValuationQ ghat_threshold(int p) { return {static_cast<std::int64_t>(p) * p, p - 1}; }

/// (1 / (p^f - 1)) sum_{j<f} p^{f-j} (2 h_{i+j} - r_{i+j}).
inline ValuationQ beta_valuation(int p, const std::vector<int> &r, const Subset &J, int i) {
    detail::require_odd_prime(p);
    detail::require_weight_range(p, r);
    const int f = static_cast<int>(r.size());
    require(J.universe() == f, ErrorKind::structural, "J is not a subset of {0..f-1}");
    std::int64_t num = 0;
    for (int j = 0; j < f; ++j) {
        const int idx = cyc(i + j, f);
        const int h = J.contains(idx) ? r[idx] : 0;
        num += checked_pow(p, f - j) * (2 * h - r[idx]);
    }
    return {num, tame_modulus(p, f)};
}

/// False exactly when h_i = r_i = p for every i.
inline bool ghat_unique(int p, const std::vector<int> &r, const Subset &J) {
    detail::require_odd_prime(p);
    detail::require_weight_range(p, r);
    require(J.universe() == static_cast<int>(r.size()), ErrorKind::structural, "J is not a subset of {0..f-1}");
    return !(J.is_full() && std::all_of(r.begin(), r.end(), [&](int v) { return v == p; }));
}

enum class CleanupCase { none, loop, stub, path };

inline std::string to_string(CleanupCase c) {
    switch (c) {
        case CleanupCase::none: return "none";
        case CleanupCase::loop: return "loop";
        case CleanupCase::stub: return "stub";
        case CleanupCase::path: return "path";
    }
    return "?";
}

struct RaiseStep {
    RaiseString string;
    Subset before;
    Subset after;
    CleanupCase cleanup = CleanupCase::none;
};

struct ModelRaiseResult {
    ExtensionData extension;
    RaiseStep step;
};

/// Rescales e'_j = u^{-1} e_j, f'_j = u f_j on [i, i+s-1], then restores the normal form for
/// J' = J + {i+1..i+s} - {i}. The structure holding the new (i+1, p) term is reported.
inline ModelRaiseResult model_raise_detailed(const ExtensionData &e, const RaiseString &s) {
    e.validate();
    const int f = e.f, p = e.p;
    require(s.len >= 1 && s.len < f, ErrorKind::domain, "string length must lie in [1, f-1]");
    bool shape = e.r[cyc(s.start, f)] == 1 && e.r[cyc(s.start + s.len, f)] == p;
    for (int t = 1; t < s.len; ++t) shape = shape && e.r[cyc(s.start + t, f)] == p - 1;
    require(shape, ErrorKind::domain, "r is not (1, p-1, ..., p-1, p) on the given string");
    require(string_raisable(s, e.J), ErrorKind::domain, "J must contain the string start and none of the rest");

    ExtensionData cur = e.trunc >= p * p ? reduce_normal_form(e).reduced : e;
    Subset J2 = flip_string(s, e.J);

    std::vector<int> eps(f, 0);
    for (int t = 0; t < s.len; ++t) eps[cyc(s.start + t, f)] = 1;
    ExtensionData raised = ExtensionData::split(e.r, J2, e.a, e.b, e.trunc);
    for (int j = 0; j < f; ++j) raised.x[j] = cur.x[j].shifted(p * eps[cyc(j - 1, f)] + eps[j]);

    // The index i has left J; clearing it pushes a c u^p term onto i+1.
    raised = apply_basis_change(raised, detail::clear_outside_J(raised));

    RaiseStep step{s, e.J, J2, CleanupCase::none};
    const DegreePair target{cyc(s.start + 1, f), p};
    const int cutoff = std::max(raised.trunc, 2 * p - 1);
    const auto parts = classify_pairs(raised, cutoff);
    auto holds = [&](const std::vector<std::vector<DegreePair>> &group) {
        for (const auto &chain : group)
            if (std::find(chain.begin(), chain.end(), target) != chain.end()) return true;
        return false;
    };
    if (holds(parts.loops))
        step.cleanup = CleanupCase::loop;
    else if (holds(parts.stubs))
        step.cleanup = CleanupCase::stub;
    else if (holds(parts.paths))
        step.cleanup = CleanupCase::path;
    else
        fail(ErrorKind::internal, "the pair (i+1, p) is not classified");

    if (raised.trunc >= p * p) raised = reduce_normal_form(raised).reduced;
    return {std::move(raised), step};
}

inline ExtensionData model_raise(const ExtensionData &e, const RaiseString &s) { return model_raise_detailed(e, s).extension; }

struct RaiseResult {
    ExtensionData extension;
    Subset j_max;
    std::vector<RaiseStep> steps;
};

/// Raises every string whose start lies in J, in ascending order of start index.
inline RaiseResult raise_to_jmax(const ExtensionData &e) {
    e.validate();
    const Subset target = j_max(e.p, e.r, e.J);
    RaiseResult out{e, target, {}};
    const bool all_low = std::all_of(e.r.begin(), e.r.end(), [&](int v) { return v == e.p - 1; });
    if (all_low && e.J.empty()) return out;  // such an extension is split; nothing to raise

    for (const auto &s : raise_strings(e.p, e.r)) {
        if (!string_raisable(s, out.extension.J)) continue;
        auto res = model_raise_detailed(out.extension, s);
        require(h_of_J(e.p, e.r, res.step.after) == h_of_J(e.p, e.r, res.step.before), ErrorKind::internal,
                "model raising changed h(J)");
        out.extension = std::move(res.extension);
        out.steps.push_back(res.step);
    }
    require(out.extension.J == target, ErrorKind::internal, "raising did not reach J_max");
    require(static_cast<int>(out.steps.size()) <= e.f, ErrorKind::internal, "raising took more than f steps");
    return out;
}

} // namespace kw
