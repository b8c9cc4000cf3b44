#pragma once

// Integer-order Bessel functions of the first kind.

#include <vector>

namespace accordion {

// J_n(x) for |n| <= 512, |x| <= 1e4. Miller downward recurrence normalised
// with J_0 + 2 sum_k J_2k = 1; J_{-n}(x) = (-1)^n J_n(x).
double bessel_j(int n, double x);

// J_0(x) .. J_nmax(x) in one sweep, without the argument limit. For large
// |x| (well beyond nmax) J_0, J_1 come from the Hankel asymptotic series and
// the rest from upward recurrence, which is stable there.
std::vector<double> bessel_j_sequence(int nmax, double x);

}  // namespace accordion
