#pragma once

#include <kw/error.hpp>
#include <kw/integer.hpp>

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <vector>

namespace kw {

/// A subset of the cyclic index set {0, ..., n-1}, n <= 63.
class Subset {
public:
    static constexpr int max_size = 63;

    Subset() = default;
    explicit Subset(int n, std::uint64_t bits = 0) : n_(n), bits_(bits) {
        require(n >= 0 && n <= max_size, ErrorKind::resource, "index sets are limited to 63 elements");
        bits_ &= mask();
    }
    static Subset full(int n) { return Subset(n, ~std::uint64_t{0}); }
    static Subset of(int n, const std::vector<int> &elements) {
        Subset s(n);
        for (int i : elements) {
            require(i >= 0 && i < n, ErrorKind::domain, "index " + std::to_string(i) + " outside {0.." + std::to_string(n - 1) + "}");
            s.insert(i);
        }
        return s;
    }

    int universe() const noexcept { return n_; }
    std::uint64_t bits() const noexcept { return bits_; }

    /// Membership with the index read cyclically mod n.
    bool contains(int i) const noexcept { return n_ > 0 && ((bits_ >> cyc(i, n_)) & 1u); }
    void insert(int i) noexcept { bits_ |= std::uint64_t{1} << cyc(i, n_); }
    void erase(int i) noexcept { bits_ &= ~(std::uint64_t{1} << cyc(i, n_)); }
    void toggle(int i) noexcept { bits_ ^= std::uint64_t{1} << cyc(i, n_); }

    int size() const noexcept { return std::popcount(bits_); }
    bool empty() const noexcept { return bits_ == 0; }
    bool is_full() const noexcept { return bits_ == mask(); }
    Subset complement() const { return Subset(n_, ~bits_); }

    std::vector<int> elements() const {
        std::vector<int> out;
        for (int i = 0; i < n_; ++i)
            if (contains(i)) out.push_back(i);
        return out;
    }
    /// Smallest element, or -1.
    int min() const noexcept { return bits_ ? std::countr_zero(bits_) : -1; }

    friend bool operator==(const Subset &, const Subset &) = default;
    friend Subset operator^(const Subset &a, const Subset &b) { return Subset(a.n_, a.bits_ ^ b.bits_); }

private:
    std::uint64_t mask() const noexcept { return n_ >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n_) - 1); }

    int n_ = 0;
    std::uint64_t bits_ = 0;
};

/// Upper bound on f for 2^f enumerations; KW_MAX_F overrides the default of 24.
inline int max_enumeration_f() {
    if (const char *env = std::getenv("KW_MAX_F")) {
        char *end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && v > 0) return static_cast<int>(std::min<long>(v, Subset::max_size));
    }
    return 24;
}

inline void require_enumerable(int n) {
    require(n <= max_enumeration_f(), ErrorKind::resource,
            "refusing to enumerate 2^" + std::to_string(n) + " subsets (limit " + std::to_string(max_enumeration_f()) +
                ", raise with KW_MAX_F)");
}

} // namespace kw
