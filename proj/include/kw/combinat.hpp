#pragma once

// Base-p carrying combinatorics on cyclic sequences.
//
// A sequence r in [-p, p]^f with sum_i p^{f-1-i} r_i = 0 mod p^f - 1 is either
// +-(p-1, ..., p-1), +-(2, ..., 2) when p = 2, or a disjoint union of cyclic
// strings +-(-1, p-1, ..., p-1, p) padded with zeros.

#include <kw/error.hpp>
#include <kw/integer.hpp>
#include <kw/subset.hpp>

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

namespace kw {

struct CarryString {
    int start = 0;
    int len = 0;  // covers start, ..., start + len (cyclically)
    int sign = 1;

    friend bool operator==(const CarryString &, const CarryString &) = default;
};

struct CarryDecomposition {
    enum class Kind { all_p_minus_one, strings, all_two };

    Kind kind = Kind::strings;
    int sign = 1;  // meaningful for all_p_minus_one and all_two
    std::vector<CarryString> strings;

    std::vector<int> reconstruct(int p, int f) const {
        std::vector<int> r(f, 0);
        switch (kind) {
            case Kind::all_p_minus_one: std::fill(r.begin(), r.end(), sign * (p - 1)); break;
            case Kind::all_two: std::fill(r.begin(), r.end(), sign * 2); break;
            case Kind::strings:
                for (const auto &s : strings) {
                    r[cyc(s.start, f)] += -s.sign;
                    for (int t = 1; t < s.len; ++t) r[cyc(s.start + t, f)] += s.sign * (p - 1);
                    r[cyc(s.start + s.len, f)] += s.sign * p;
                }
                break;
        }
        return r;
    }

    friend bool operator==(const CarryDecomposition &, const CarryDecomposition &) = default;
};

inline std::string to_string(CarryDecomposition::Kind k) {
    switch (k) {
        case CarryDecomposition::Kind::all_p_minus_one: return "all_p_minus_one";
        case CarryDecomposition::Kind::strings: return "strings";
        case CarryDecomposition::Kind::all_two: return "all_two";
    }
    return "?";
}

namespace detail {
inline void require_odd_prime(int p) {
    require(is_prime(p) && p > 2, ErrorKind::domain, "p = " + std::to_string(p) + " must be an odd prime");
}
inline void require_weight_range(int p, const std::vector<int> &r) {
    require(!r.empty(), ErrorKind::domain, "f must be at least 1");
    for (int ri : r)
        require(ri >= 1 && ri <= p, ErrorKind::domain, "r_i = " + std::to_string(ri) + " outside [1, p]");
}
} // namespace detail

/// Decomposes a kernel sequence; p = 2 is accepted here (and only here).
inline CarryDecomposition carry_decompose(int p, const std::vector<int> &r) {
    require(is_prime(p), ErrorKind::domain, "p = " + std::to_string(p) + " is not prime");
    const int f = static_cast<int>(r.size());
    require(f >= 1, ErrorKind::domain, "f must be at least 1");
    for (int ri : r) require(ri >= -p && ri <= p, ErrorKind::domain, "entry " + std::to_string(ri) + " outside [-p, p]");
    require(weighted_exponent(p, r) == 0, ErrorKind::not_in_kernel, "sum p^{f-1-i} r_i is not 0 mod p^f - 1");

    CarryDecomposition out;
    for (int sign : {1, -1}) {
        if (std::all_of(r.begin(), r.end(), [&](int v) { return v == sign * (p - 1); })) {
            out.kind = CarryDecomposition::Kind::all_p_minus_one;
            out.sign = sign;
            return out;
        }
    }
    if (p == 2) {
        for (int sign : {1, -1}) {
            if (std::all_of(r.begin(), r.end(), [&](int v) { return v == 2 * sign; })) {
                out.kind = CarryDecomposition::Kind::all_two;
                out.sign = sign;
                return out;
            }
        }
    }

    // Every string ends at an entry +-p; walk back over the +-(p-1) interior to the -+1 start.
    std::vector<bool> covered(f, false);
    for (int end = 0; end < f; ++end) {
        if (r[end] != p && r[end] != -p) continue;
        const int sign = r[end] > 0 ? 1 : -1;
        int len = 1;
        for (; len < f; ++len) {
            const int v = r[cyc(end - len, f)];
            if (v == -sign) break;
            if (v != sign * (p - 1)) len = f;  // not a string
        }
        require(len < f, ErrorKind::internal, "no string ends at index " + std::to_string(end));
        const int start = cyc(end - len, f);
        for (int t = 0; t <= len; ++t) {
            int idx = cyc(start + t, f);
            require(!covered[idx], ErrorKind::internal, "overlapping strings");
            covered[idx] = true;
        }
        out.strings.push_back({start, len, sign});
    }
    for (int i = 0; i < f; ++i)
        require(covered[i] || r[i] == 0, ErrorKind::internal, "entry at index " + std::to_string(i) + " not covered");
    std::sort(out.strings.begin(), out.strings.end(), [](const auto &a, const auto &b) { return a.start < b.start; });
    return out;
}

/// Membership in the set of tuples over {1, p-1, p} with the cyclic adjacency rules.
inline bool p_set_member(int p, const std::vector<int> &r) {
    const int f = static_cast<int>(r.size());
    if (f == 0) return false;
    for (int i = 0; i < f; ++i) {
        const int cur = r[i], next = r[cyc(i + 1, f)];
        if (cur != 1 && cur != p - 1 && cur != p) return false;
        if (cur == p && next != 1) return false;
        if ((cur == 1 || cur == p - 1) && next != p - 1 && next != p) return false;
    }
    return true;
}

/// The adjacency conditions a subset J must satisfy for r in the set above.
inline bool j_adjacency_holds(int p, const std::vector<int> &r, const Subset &J) {
    const int f = static_cast<int>(r.size());
    for (int i = 0; i < f; ++i) {
        const int prev = r[cyc(i - 1, f)], cur = r[i];
        if (prev == p && cur == 1 && J.contains(i + 1) == J.contains(i)) return false;
        if ((prev == 1 || prev == p - 1) && cur == p - 1 && J.contains(i + 1) != J.contains(i)) return false;
    }
    return true;
}

struct HClass {
    int p = 0;
    int f = 0;
    std::int64_t h = 0;  // in [0, p^f - 1)

    friend bool operator==(const HClass &, const HClass &) = default;
};

/// The truncated vector h_i = r_i [i in J].
inline std::vector<int> h_vector(const std::vector<int> &r, const Subset &J) {
    std::vector<int> h(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) h[i] = J.contains(static_cast<int>(i)) ? r[i] : 0;
    return h;
}

inline HClass h_of_J(int p, const std::vector<int> &r, const Subset &J) {
    detail::require_weight_range(p, r);
    const int f = static_cast<int>(r.size());
    require(J.universe() == f, ErrorKind::structural, "J is not a subset of {0..f-1}");
    return {p, f, weighted_exponent(p, h_vector(r, J))};
}

inline std::vector<Subset> j_sets_for_h(int p, const std::vector<int> &r, std::int64_t h) {
    detail::require_weight_range(p, r);
    const int f = static_cast<int>(r.size());
    require_enumerable(f);
    const std::int64_t target = mod_floor(h, tame_modulus(p, f));
    std::vector<Subset> out;
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << f); ++bits) {
        Subset J(f, bits);
        if (weighted_exponent(p, h_vector(r, J)) == target) out.push_back(J);
    }
    return out;
}

/// A cyclic run (r_start, ..., r_{start+len}) = (1, p-1, ..., p-1, p), len >= 1.
struct RaiseString {
    int start = 0;
    int len = 0;

    friend bool operator==(const RaiseString &, const RaiseString &) = default;
};

inline std::vector<RaiseString> raise_strings(int p, const std::vector<int> &r) {
    const int f = static_cast<int>(r.size());
    std::vector<RaiseString> out;
    for (int i = 0; i < f; ++i) {
        if (r[i] != 1) continue;
        for (int len = 1; len < f; ++len) {
            const int v = r[cyc(i + len, f)];
            if (v == p) {
                out.push_back({i, len});
                break;
            }
            if (v != p - 1) break;
        }
    }
    return out;
}

/// Whether J holds the start of s and none of the rest (the configuration that can be flipped upward).
inline bool string_raisable(const RaiseString &s, const Subset &J) {
    if (!J.contains(s.start)) return false;
    for (int t = 1; t <= s.len; ++t)
        if (J.contains(s.start + t)) return false;
    return true;
}

inline Subset flip_string(const RaiseString &s, Subset J) {
    J.erase(s.start);
    for (int t = 1; t <= s.len; ++t) J.insert(s.start + t);
    return J;
}

inline Subset j_max(int p, const std::vector<int> &r, const Subset &J) {
    detail::require_odd_prime(p);
    detail::require_weight_range(p, r);
    const int f = static_cast<int>(r.size());
    require(J.universe() == f, ErrorKind::structural, "J is not a subset of {0..f-1}");
    if (std::all_of(r.begin(), r.end(), [&](int v) { return v == p - 1; }) && (J.empty() || J.is_full()))
        return Subset::full(f);
    Subset out = J;
    for (const auto &s : raise_strings(p, r))
        if (string_raisable(s, J)) out = flip_string(s, out);
    return out;
}

} // namespace kw
