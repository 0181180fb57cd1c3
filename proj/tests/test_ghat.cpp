#include "oracles.hpp"

#include <gtest/gtest.h>

#include <kw/ghat.hpp>

#include <numeric>
#include <sstream>
#include <random>

using namespace kw;

namespace {

/// Numerator and denominator of beta_i by direct summation, unreduced.
std::pair<std::int64_t, std::int64_t> beta_oracle(int p, const oracle::Vec &r, std::uint64_t J, int i) {
    const int f = static_cast<int>(r.size());
    std::int64_t num = 0;
    for (int j = 0; j < f; ++j) {
        const int idx = (i + j) % f;
        const int h = ((J >> idx) & 1u) ? r[idx] : 0;
        num += oracle::ipow(p, f - j) * (2 * h - r[idx]);
    }
    return {num, oracle::ipow(p, f) - 1};
}

ExtensionData ext(int p, std::vector<int> r, Subset J, std::vector<std::vector<int>> x, int a = 1, int b = 1) {
    auto F = FqField::make(p);
    const int N = p * p;
    std::vector<TruncatedSeries> xs;
    for (const auto &xi : x) xs.push_back(TruncatedSeries::from_ints(F, N, xi));
    return {std::move(r), J, FqElement::from_int(F, a), FqElement::from_int(F, b), std::move(xs), N};
}

bool is_split_class(const ExtensionData &e) {
    CoboundarySpace space(e);
    return space.solve(ExtensionData::split(e.r, e.J, e.a, e.b, e.trunc), e).has_value();
}

} // namespace

TEST(ValuationQ, ReducedAndOrdered) {
    EXPECT_EQ(ValuationQ(6, -4), ValuationQ(-3, 2));
    EXPECT_EQ(ValuationQ(6, -4).den(), 2);
    EXPECT_LT(ValuationQ(4, 1), ValuationQ(9, 2));
    EXPECT_GT(ValuationQ(-1, 3), ValuationQ(-1, 2));
    EXPECT_THROW(ValuationQ(1, 0), Error);
    std::ostringstream os;
    os << ValuationQ(9, 2) << ' ' << ValuationQ(-3);
    EXPECT_EQ(os.str(), "9/2 -3");
}

TEST(BetaValuation, Examples) {
    for (int p : {3, 5, 7})
        for (int f = 1; f <= 3; ++f) EXPECT_EQ(beta_valuation(p, std::vector<int>(f, p), Subset::full(f), 0), ghat_threshold(p));
    EXPECT_EQ(beta_valuation(3, {2}, Subset(1), 0), ValuationQ(-3));
    EXPECT_EQ(beta_valuation(3, {2}, Subset::full(1), 0), ValuationQ(3));
    EXPECT_LT(ValuationQ(3), ghat_threshold(3));
}

TEST(BetaValuation, BoundedByThresholdWithEqualityOnlyAtAllP) {
    for (int p : {3, 5})
        for (int f = 1; f <= 3; ++f)
            oracle::for_each_vector(f, 1, p, [&](const oracle::Vec &r) {
                for (std::uint64_t J = 0; J < (1u << f); ++J)
                    for (int i = 0; i < f; ++i) {
                        auto [num, den] = beta_oracle(p, r, J, i);
                        const auto v = beta_valuation(p, r, Subset(f, J), i);
                        ASSERT_EQ(v, ValuationQ(num, den));
                        // num / den <= p^2 / (p - 1), compared by cross-multiplication.
                        const std::int64_t lhs = num * (p - 1), rhs = static_cast<std::int64_t>(p) * p * den;
                        EXPECT_LE(lhs, rhs);
                        const bool top = J == (1u << f) - 1 && std::all_of(r.begin(), r.end(), [&](int v) { return v == p; });
                        EXPECT_EQ(lhs == rhs, top);
                        EXPECT_EQ(ghat_unique(p, r, Subset(f, J)), !top);
                    }
            });
}

TEST(GhatUnique, Examples) {
    EXPECT_FALSE(ghat_unique(3, {3, 3}, Subset::full(2)));
    EXPECT_TRUE(ghat_unique(3, {3, 3}, Subset(2)));
    for (std::uint64_t J = 0; J < 4; ++J) EXPECT_TRUE(ghat_unique(3, {2, 2}, Subset(2, J)));
    EXPECT_THROW(ghat_unique(3, {4}, Subset(1)), Error);
}

TEST(ModelRaise, SplitStaysSplit) {
    auto e = ext(3, {1, 3}, Subset::of(2, {0}), {{0}, {0}});
    auto out = model_raise(e, {0, 1});
    EXPECT_EQ(out.J, Subset::of(2, {1}));
    EXPECT_TRUE(out.x[0].is_zero() && out.x[1].is_zero());
}

TEST(ModelRaise, ConstituentsMatchRaisedType) {
    for (int c = 0; c < 3; ++c) {
        auto e = ext(3, {1, 3}, Subset::of(2, {0}), {{c}, {0}});
        auto res = model_raise_detailed(e, {0, 1});
        const auto &out = res.extension;
        EXPECT_EQ(out.J, Subset::of(2, {1}));
        EXPECT_EQ(h_of_J(3, out.r, out.J).h, 3);
        EXPECT_EQ(h_of_J(3, e.r, e.J).h, 3);
        EXPECT_TRUE(iso_test(out.quotient_module(), e.quotient_module()));
        EXPECT_TRUE(iso_test(out.sub_module(), e.sub_module()));
        EXPECT_TRUE(in_normal_form(out));
        // a = b and r = (1, 3) is exceptional for J' = {1}, so the pushed u^3 term survives.
        EXPECT_EQ(is_split_class(out), c == 0);
        EXPECT_EQ(j_max(3, out.r, out.J), out.J);
        EXPECT_NE(res.step.cleanup, CleanupCase::none);
    }
}

TEST(ModelRaise, PreconditionViolations) {
    auto e = ext(3, {1, 3}, Subset::of(2, {1}), {{0}, {0}});
    try {
        model_raise(e, {0, 1});
        FAIL();
    } catch (const Error &err) {
        EXPECT_EQ(err.kind(), ErrorKind::domain);
    }
    EXPECT_THROW(model_raise(ext(3, {2, 3}, Subset::of(2, {0}), {{0}, {0}}), {0, 1}), Error);
    EXPECT_THROW(model_raise(ext(3, {1, 3}, Subset::of(2, {0}), {{0}, {0}}), {0, 2}), Error);
}

TEST(ModelRaise, LongerStringsOverF5) {
    // r = (1, 4, 5) with J = {0}: the constant at index 0 is pushed to (1, 5), which lies on the
    // loop {(1, 5), (2, 5)}. It survives exactly when a = b.
    for (int b : {2, 3}) {
        auto e = ext(5, {1, 4, 5}, Subset::of(3, {0}), {{2}, {0}, {0}}, 2, b);
        auto res = model_raise_detailed(e, {0, 2});
        const auto &out = res.extension;
        EXPECT_EQ(out.J, Subset::of(3, {1, 2}));
        EXPECT_EQ(h_of_J(5, out.r, out.J), h_of_J(5, e.r, e.J));
        EXPECT_TRUE(iso_test(out.quotient_module(), e.quotient_module()));
        EXPECT_TRUE(iso_test(out.sub_module(), e.sub_module()));
        EXPECT_EQ(res.step.cleanup, CleanupCase::loop);
        EXPECT_FALSE(is_split_class(e));
        EXPECT_EQ(is_split_class(out), b != 2);
        EXPECT_EQ(out.x[1].raw(5) != 0, b == 2);
    }
}

TEST(RaiseToJmax, Examples) {
    auto done = ext(3, {1, 3}, Subset::of(2, {1}), {{0}, {2}});
    auto res = raise_to_jmax(done);
    EXPECT_EQ(res.extension, done);
    EXPECT_TRUE(res.steps.empty());

    res = raise_to_jmax(ext(3, {1, 3}, Subset::of(2, {0}), {{1}, {0}}));
    EXPECT_EQ(res.extension.J, Subset::of(2, {1}));
    EXPECT_EQ(res.j_max, Subset::of(2, {1}));
    ASSERT_EQ(res.steps.size(), 1u);
    EXPECT_EQ(res.steps[0].string, (RaiseString{0, 1}));

    auto low = ext(3, {2, 2}, Subset(2), {{0}, {0}});
    res = raise_to_jmax(low);
    EXPECT_EQ(res.extension, low);
    EXPECT_EQ(res.j_max, Subset::full(2));
}

TEST(RaiseToJmax, ExhaustiveOnSplitExtensions) {
    for (int p : {3, 5})
        for (int f = 1; f <= 3; ++f)
            oracle::for_each_vector(f, 1, p, [&](const oracle::Vec &r) {
                for (std::uint64_t J = 0; J < (1u << f); ++J) {
                    const Subset S(f, J);
                    auto res = raise_to_jmax(ext(p, r, S, std::vector<std::vector<int>>(f, {0})));
                    const auto target = oracle::jmax_search(p, r, J);
                    EXPECT_EQ(res.j_max.bits(), target);
                    const bool all_low = std::all_of(r.begin(), r.end(), [&](int v) { return v == p - 1; });
                    if (!(all_low && J == 0)) {
                        EXPECT_EQ(res.extension.J.bits(), target);
                    }
                    EXPECT_LE(static_cast<int>(res.steps.size()), f);
                    for (const auto &st : res.steps)
                        EXPECT_EQ(oracle::exponent(p, oracle::h_vec(r, st.before.bits())),
                                  oracle::exponent(p, oracle::h_vec(r, st.after.bits())));
                    for (const auto &xi : res.extension.x) EXPECT_TRUE(xi.is_zero());
                }
            });
}

// Raising changes the lattice, so a non-split class may become split; a split one cannot become non-split.
TEST(RaiseToJmax, RandomClassesKeepConstituents) {
    std::mt19937_64 rng(17);
    int raised = 0;
    for (int trial = 0; trial < 300; ++trial) {
        const int p = trial % 2 ? 5 : 3, f = 2 + trial % 3;
        oracle::Vec r(f);
        for (auto &v : r) {
            const int pick = static_cast<int>(rng() % 4);
            v = pick == 0 ? 1 : pick == 1 ? p - 1 : pick == 2 ? p : 1 + static_cast<int>(rng() % p);
        }
        const Subset S(f, rng() % (1u << f));
        std::vector<std::vector<int>> x(f);
        for (int i = 0; i < f; ++i)
            if (S.contains(i)) x[i] = {static_cast<int>(rng() % p)};
        const int a = 1 + static_cast<int>(rng() % (p - 1)), b = 1 + static_cast<int>(rng() % (p - 1));
        auto e = ext(p, r, S, x, a, b);
        auto res = raise_to_jmax(e);
        raised += !res.steps.empty();
        EXPECT_EQ(res.j_max, j_max(p, r, S));
        EXPECT_TRUE(iso_test(res.extension.quotient_module(), e.quotient_module()));
        EXPECT_TRUE(iso_test(res.extension.sub_module(), e.sub_module()));
        if (is_split_class(e)) {
            EXPECT_TRUE(is_split_class(res.extension));
        }
        EXPECT_TRUE(in_normal_form(res.extension));
    }
    EXPECT_GT(raised, 10);
}
