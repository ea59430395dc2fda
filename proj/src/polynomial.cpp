#include "wlanfair/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace wlanfair {

int RealPolynomial::degree() const {
    for (int i = static_cast<int>(coeffs.size()) - 1; i >= 0; --i)
        if (coeffs[static_cast<std::size_t>(i)] != 0.0) return i;
    return -1;
}

double RealPolynomial::eval(double x) const {
    double acc = 0.0;
    for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * x + coeffs[i];
    return acc;
}

RealPolynomial RealPolynomial::derivative() const {
    RealPolynomial d;
    if (coeffs.size() <= 1) {
        d.coeffs.assign(1, 0.0);
        return d;
    }
    d.coeffs.resize(coeffs.size() - 1);
    for (std::size_t i = 1; i < coeffs.size(); ++i)
        d.coeffs[i - 1] = static_cast<double>(i) * coeffs[i];
    return d;
}

double RealPolynomial::max_abs_coeff() const {
    double m = 0.0;
    for (double c : coeffs) m = std::max(m, std::abs(c));
    return m;
}

namespace {

double horner(const double* c, int n, double x) {  // n coefficients, ascending
    double acc = 0.0;
    for (int i = n - 1; i >= 0; --i) acc = acc * x + c[i];
    return acc;
}

double horner_deriv(const double* c, int n, double x) {
    double acc = 0.0;
    for (int i = n - 1; i >= 1; --i) acc = acc * x + static_cast<double>(i) * c[i];
    return acc;
}

// A few guarded Newton steps against the original coefficients. Keeps the
// closed forms within the residual bound; steps that do not reduce |p|
// are discarded.
double polish_root(const double* c, int n, double x) {
    double fx = std::abs(horner(c, n, x));
    for (int it = 0; it < 4; ++it) {
        double d = horner_deriv(c, n, x);
        if (d == 0.0 || !std::isfinite(d)) break;
        double step = horner(c, n, x) / d;
        if (!std::isfinite(step)) break;
        double xn = x - step;
        double fn = std::abs(horner(c, n, xn));
        if (fn >= fx) break;
        x = xn;
        fx = fn;
        if (std::abs(step) <= 1e-16 * (1.0 + std::abs(x))) break;
    }
    return x;
}

// Sort, then merge roots closer than 1e-8 * (1 + |r|), summing
// multiplicities.
RootSet merge_roots(std::vector<double> roots, std::vector<int> mults,
                    RootMethod method) {
    std::vector<std::size_t> idx(roots.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return roots[a] < roots[b]; });

    RootSet out;
    out.method = method;
    for (std::size_t k : idx) {
        if (!out.roots.empty() &&
            roots[k] - out.roots.back() <= 1e-8 * (1.0 + std::abs(roots[k]))) {
            out.multiplicities.back() += mults[k];
        } else {
            out.roots.push_back(roots[k]);
            out.multiplicities.push_back(mults[k]);
        }
    }
    return out;
}

void solve_monic_quadratic(double b, double c, std::vector<double>& out) {
    // x^2 + b x + c, roots via the stable quadratic formula
    double disc = b * b - 4.0 * c;
    if (disc < 0.0) return;
    double sq = std::sqrt(disc);
    double q = -0.5 * (b + (b >= 0.0 ? sq : -sq));
    out.push_back(q);
    if (q != 0.0)
        out.push_back(c / q);
    else
        out.push_back(-b);  // b == 0 or disc == b^2; second root is -b - q
}

void solve_quadratic_raw(double a, double b, double c, std::vector<double>& out) {
    if (a == 0.0) {
        if (b != 0.0) out.push_back(-c / b);
        // constant: no roots (the all-zero case is rejected by the caller)
        return;
    }
    solve_monic_quadratic(b / a, c / a, out);
}

// Real roots of the monic cubic x^3 + a x^2 + b x + c (Numerical Recipes
// form: trigonometric for three real roots, Cardano otherwise).
void solve_monic_cubic(double a, double b, double c, std::vector<double>& out) {
    double q = (a * a - 3.0 * b) / 9.0;
    double r = (2.0 * a * a * a - 9.0 * a * b + 27.0 * c) / 54.0;
    double q3 = q * q * q;
    if (r == 0.0 && q == 0.0) {
        // triple root
        out.insert(out.end(), 3, -a / 3.0);
        return;
    }
    if (r * r < q3 || (r * r == q3 && q > 0.0)) {
        double theta = std::acos(std::clamp(r / std::sqrt(q3), -1.0, 1.0));
        double m = -2.0 * std::sqrt(q);
        out.push_back(m * std::cos(theta / 3.0) - a / 3.0);
        out.push_back(m * std::cos((theta + 2.0 * std::numbers::pi) / 3.0) - a / 3.0);
        out.push_back(m * std::cos((theta - 2.0 * std::numbers::pi) / 3.0) - a / 3.0);
        return;
    }
    double A = -std::copysign(std::cbrt(std::abs(r) + std::sqrt(r * r - q3)), r);
    double B = (A == 0.0) ? 0.0 : q / A;
    out.push_back(A + B - a / 3.0);
}

constexpr double kDegenerateLead = 1e-300;

}  // namespace

RootSet solve_cubic(const std::array<double, 4>& coeffs) {
    double scale = 0.0;
    for (double c : coeffs) scale = std::max(scale, std::abs(c));
    if (scale == 0.0)
        throw std::invalid_argument("solve_cubic: identically zero polynomial");

    std::vector<double> roots;
    if (std::abs(coeffs[3]) < kDegenerateLead * scale) {
        solve_quadratic_raw(coeffs[2], coeffs[1], coeffs[0], roots);
    } else {
        solve_monic_cubic(coeffs[2] / coeffs[3], coeffs[1] / coeffs[3],
                          coeffs[0] / coeffs[3], roots);
    }
    for (double& r : roots) r = polish_root(coeffs.data(), 4, r);
    std::vector<int> mults(roots.size(), 1);
    return merge_roots(std::move(roots), std::move(mults), RootMethod::closed_form);
}

RootSet solve_quartic(const std::array<double, 5>& coeffs) {
    double scale = 0.0;
    for (double c : coeffs) scale = std::max(scale, std::abs(c));
    if (scale == 0.0)
        throw std::invalid_argument("solve_quartic: identically zero polynomial");

    if (std::abs(coeffs[4]) < kDegenerateLead * scale)
        return solve_cubic({coeffs[0], coeffs[1], coeffs[2], coeffs[3]});

    // monic x^4 + A x^3 + B x^2 + C x + D, then depressed y^4 + p y^2 + q y + r
    double A = coeffs[3] / coeffs[4];
    double B = coeffs[2] / coeffs[4];
    double C = coeffs[1] / coeffs[4];
    double D = coeffs[0] / coeffs[4];
    double A2 = A * A;
    double p = B - 3.0 / 8.0 * A2;
    double q = C - 0.5 * A * B + A2 * A / 8.0;
    double r = D - 0.25 * A * C + A2 * B / 16.0 - 3.0 / 256.0 * A2 * A2;

    std::vector<double> ys;
    if (q == 0.0) {
        // biquadratic: z^2 + p z + r with z = y^2
        std::vector<double> zs;
        solve_monic_quadratic(p, r, zs);
        for (double z : zs) {
            if (z > 0.0) {
                ys.push_back(std::sqrt(z));
                ys.push_back(-std::sqrt(z));
            } else if (z == 0.0) {
                ys.push_back(0.0);
            }
        }
    } else if (r == 0.0) {
        // y (y^3 + p y + q)
        ys.push_back(0.0);
        solve_monic_cubic(0.0, p, q, ys);
    } else {
        // resolvent cubic z^3 - (p/2) z^2 - r z + (r p / 2 - q^2 / 8);
        // its largest real root yields two real quadratic factors
        std::vector<double> zs;
        solve_monic_cubic(-0.5 * p, -r, 0.5 * r * p - 0.125 * q * q, zs);
        double z = *std::max_element(zs.begin(), zs.end());
        double u = z * z - r;
        double v = 2.0 * z - p;
        // exact arithmetic guarantees u, v >= 0 here; clamp rounding noise
        u = u < 0.0 ? 0.0 : std::sqrt(u);
        v = v < 0.0 ? 0.0 : std::sqrt(v);
        double vs = (q < 0.0) ? -v : v;
        solve_monic_quadratic(vs, z - u, ys);
        solve_monic_quadratic(-vs, z + u, ys);
    }

    std::vector<double> roots;
    roots.reserve(ys.size());
    for (double y : ys) roots.push_back(polish_root(coeffs.data(), 5, y - 0.25 * A));
    std::vector<int> mults(roots.size(), 1);
    return merge_roots(std::move(roots), std::move(mults), RootMethod::closed_form);
}

RootSet find_real_roots(const RealPolynomial& p) {
    int deg = p.degree();
    if (deg < 0)
        throw std::invalid_argument("find_real_roots: identically zero polynomial");
    if (deg > 4)
        throw std::invalid_argument("find_real_roots: degree above 4 unsupported");

    auto at = [&](std::size_t i) {
        return i < p.coeffs.size() ? p.coeffs[i] : 0.0;
    };
    if (deg == 4) return solve_quartic({at(0), at(1), at(2), at(3), at(4)});
    return solve_cubic({at(0), at(1), at(2), at(3)});
}

double bracket_bisect(const std::function<double(double)>& f,
                      double lo, double hi, double tol) {
    if (!(lo < hi)) throw std::invalid_argument("bracket_bisect: lo >= hi");
    if (!(tol > 0.0)) throw std::invalid_argument("bracket_bisect: tol <= 0");
    double flo = f(lo);
    double fhi = f(hi);
    if (!(flo * fhi < 0.0))
        throw std::invalid_argument("bracket_bisect: no sign change on [lo, hi]");

    for (int it = 0; it < 200 && (hi - lo) > tol; ++it) {
        double mid = 0.5 * (lo + hi);
        double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((flo < 0.0) == (fm < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

RootSet scan_real_roots(const std::function<double(double)>& f,
                        double lo, double hi, int grid_cells) {
    if (!(lo < hi)) throw std::invalid_argument("scan_real_roots: lo >= hi");
    if (grid_cells < 1) throw std::invalid_argument("scan_real_roots: empty grid");

    double span = hi - lo;
    double tol = 1e-13 * std::max({1.0, std::abs(lo), std::abs(hi)});
    std::vector<double> roots;
    double x0 = lo;
    double f0 = f(x0);
    for (int i = 1; i <= grid_cells; ++i) {
        double x1 = lo + span * static_cast<double>(i) / grid_cells;
        double f1 = f(x1);
        if (f0 == 0.0)
            roots.push_back(x0);
        else if (f1 != 0.0 && (f0 < 0.0) != (f1 < 0.0))
            roots.push_back(bracket_bisect(f, x0, x1, tol));
        x0 = x1;
        f0 = f1;
    }
    if (f0 == 0.0) roots.push_back(x0);
    std::vector<int> mults(roots.size(), 1);
    return merge_roots(std::move(roots), std::move(mults), RootMethod::bisection);
}

}  // namespace wlanfair
