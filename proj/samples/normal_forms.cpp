// Reduces an extension to normal form, checks the result with the coboundary
// oracle, then raises a split extension to J_max.

#include <kw/kw.hpp>

#include <iostream>
#include <vector>

int main() {
    using namespace kw;
    auto F = FqField::make(3);
    const auto one = FqElement::one(F);

    // p = 3, f = 1, r = (2), J = {0}, a = b = 1: the degree-3 term cannot be removed.
    const std::vector<int> coeffs{0, 0, 1, 1};
    ExtensionData e({2}, Subset::full(1), one, one, {TruncatedSeries::from_ints(F, 9, coeffs)}, 9);
    const auto res = reduce_normal_form(e);
    std::cout << "x        = " << e.x[0] << '\n';
    std::cout << "reduced  = " << res.reduced.x[0] << '\n';
    std::cout << "certified: " << std::boolalpha << coboundary_equivalent(e, res.reduced).equivalent << '\n';
    std::cout << "crystalline forms: " << crystalline_forms(e.r, e.J, e.a, e.b, 9).size() << '\n';

    // p = 3, f = 2, r = (1, 3), J = {0} raises to J_max = {1}.
    const auto split = ExtensionData::split({1, 3}, Subset::of(2, {0}), one, one, 9);
    const auto raised = raise_to_jmax(split);
    std::cout << "J_max = {";
    for (int i : raised.extension.J.elements()) std::cout << ' ' << i;
    std::cout << " } after " << raised.steps.size() << " step(s)\n";
}
