#pragma once

#include <array>
#include <functional>
#include <vector>

namespace wlanfair {

// Dense univariate polynomial over the reals, coefficients stored in
// ascending order: coeffs[k] multiplies x^k.
struct RealPolynomial {
    std::vector<double> coeffs;

    RealPolynomial() = default;
    explicit RealPolynomial(std::vector<double> c) : coeffs(std::move(c)) {}

    // Highest index with a nonzero coefficient; -1 for the zero polynomial.
    int degree() const;
    double eval(double x) const;  // Horner
    RealPolynomial derivative() const;
    double max_abs_coeff() const;
};

enum class RootMethod { closed_form, bisection };

// Real roots in ascending order. Roots closer than 1e-8 * (1 + |r|) are
// merged and their multiplicities summed. Every root r satisfies
// |poly(r)| <= 1e-9 + 1e-12 * max|coeff|.
struct RootSet {
    std::vector<double> roots;
    std::vector<int> multiplicities;
    RootMethod method = RootMethod::closed_form;
};

// Closed-form real roots of a cubic, coefficients ascending. A leading
// coefficient below 1e-300 * max|coeff| delegates to the quadratic solver,
// and so on downward. The identically zero polynomial is rejected.
RootSet solve_cubic(const std::array<double, 4>& coeffs);

// Closed-form real roots of a quartic via the resolvent cubic. Degenerate
// leading coefficient delegates to solve_cubic. May return an empty set.
RootSet solve_quartic(const std::array<double, 5>& coeffs);

// Dispatch on degree (<= 4). Used by the model solvers.
RootSet find_real_roots(const RealPolynomial& p);

// Bisection on a bracketing interval: requires lo < hi, tol > 0 and
// f(lo) * f(hi) < 0. Returns the midpoint of the final interval, which is
// within tol of a sign change of f.
double bracket_bisect(const std::function<double(double)>& f,
                      double lo, double hi, double tol);

// Brute-force root scan: evaluates f on a uniform grid of `grid_cells`
// cells over [lo, hi] and bisects every sign-change cell. Only roots of odd
// multiplicity produce a sign change, so this is an oracle for simple
// roots, used as the independent check against the closed forms.
RootSet scan_real_roots(const std::function<double(double)>& f,
                        double lo, double hi, int grid_cells);

}  // namespace wlanfair
