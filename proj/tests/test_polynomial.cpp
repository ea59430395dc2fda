#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "doctest.h"
#include "wlanfair/polynomial.hpp"
#include "wlanfair/rng.hpp"

using namespace wlanfair;

namespace {

// Expands scale * prod (x - r_i) * prod ((x - a)^2 + b^2) by convolution.
// Coefficients come out ascending, independent of the solvers under test.
std::vector<double> poly_from_roots(
    const std::vector<double>& real_roots,
    const std::vector<std::pair<double, double>>& complex_pairs, double scale) {
    std::vector<double> c{scale};
    auto mul = [&](const std::vector<double>& f) {
        std::vector<double> out(c.size() + f.size() - 1, 0.0);
        for (std::size_t i = 0; i < c.size(); ++i)
            for (std::size_t j = 0; j < f.size(); ++j)
                out[i + j] += c[i] * f[j];
        c = std::move(out);
    };
    for (double r : real_roots) mul({-r, 1.0});
    for (auto [a, b] : complex_pairs) mul({a * a + b * b, -2.0 * a, 1.0});
    return c;
}

// Distinct values in [-3, 3] separated by at least 0.05, so every real root
// is simple and visible to a sign-change scan.
std::vector<double> sample_separated(Xorshift64Star& rng, int count) {
    std::vector<double> vals;
    while (static_cast<int>(vals.size()) < count) {
        double v = -3.0 + 6.0 * rng.uniform();
        bool ok = true;
        for (double u : vals) ok = ok && std::abs(v - u) >= 0.05;
        if (ok) vals.push_back(v);
    }
    return vals;
}

void check_against_scan(const RootSet& closed, const RealPolynomial& poly) {
    RootSet scanned =
        scan_real_roots([&](double x) { return poly.eval(x); }, -4.0, 4.0, 2000);
    REQUIRE(closed.roots.size() == scanned.roots.size());
    for (std::size_t i = 0; i < closed.roots.size(); ++i) {
        double tol = 1e-7 * std::max(1.0, std::abs(scanned.roots[i]));
        CHECK(std::abs(closed.roots[i] - scanned.roots[i]) <= tol);
    }
    double bound = 1e-9 + 1e-12 * poly.max_abs_coeff();
    for (double r : closed.roots) CHECK(std::abs(poly.eval(r)) <= bound);
}

}  // namespace

TEST_CASE("polynomial evaluation, degree and derivative") {
    RealPolynomial p({1.0, -2.0, 0.0, 4.0});  // 1 - 2x + 4x^3
    CHECK(p.degree() == 3);
    CHECK(p.eval(0.0) == 1.0);
    CHECK(p.eval(2.0) == doctest::Approx(1.0 - 4.0 + 32.0));
    CHECK(p.max_abs_coeff() == 4.0);

    RealPolynomial d = p.derivative();  // -2 + 12x^2
    CHECK(d.coeffs == std::vector<double>{-2.0, 0.0, 12.0});

    CHECK(RealPolynomial({0.0, 0.0}).degree() == -1);
    CHECK(RealPolynomial({7.0}).derivative().coeffs == std::vector<double>{0.0});
}

TEST_CASE("cubic closed form: distinct integer roots") {
    RootSet rs = solve_cubic({-6.0, 11.0, -6.0, 1.0});
    REQUIRE(rs.roots.size() == 3);
    CHECK(rs.roots[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rs.roots[1] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(rs.roots[2] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(rs.multiplicities == std::vector<int>{1, 1, 1});
    CHECK(rs.method == RootMethod::closed_form);
}

TEST_CASE("cubic closed form: triple root at zero") {
    RootSet rs = solve_cubic({0.0, 0.0, 0.0, 1.0});
    REQUIRE(rs.roots.size() == 1);
    CHECK(rs.roots[0] == 0.0);
    CHECK(rs.multiplicities[0] == 3);
}

TEST_CASE("cubic with vanishing leading coefficients delegates down") {
    RootSet linear = solve_cubic({-2.0, 1.0, 0.0, 0.0});
    REQUIRE(linear.roots.size() == 1);
    CHECK(linear.roots[0] == doctest::Approx(2.0));

    RootSet quad = solve_cubic({2.0, -3.0, 1.0, 0.0});
    REQUIRE(quad.roots.size() == 2);
    CHECK(quad.roots[0] == doctest::Approx(1.0));
    CHECK(quad.roots[1] == doctest::Approx(2.0));

    CHECK_THROWS_AS(solve_cubic({0.0, 0.0, 0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("quartic closed form: distinct integer roots") {
    RootSet rs = solve_quartic({24.0, -50.0, 35.0, -10.0, 1.0});
    REQUIRE(rs.roots.size() == 4);
    for (int i = 0; i < 4; ++i)
        CHECK(rs.roots[static_cast<std::size_t>(i)] ==
              doctest::Approx(i + 1.0).epsilon(1e-10));
}

TEST_CASE("quartic closed form: no real roots") {
    RootSet rs = solve_quartic({1.0, 0.0, 0.0, 0.0, 1.0});  // x^4 + 1
    CHECK(rs.roots.empty());
}

TEST_CASE("quartic closed form: biquadratic") {
    RootSet rs = solve_quartic({4.0, 0.0, -5.0, 0.0, 1.0});
    REQUIRE(rs.roots.size() == 4);
    CHECK(rs.roots[0] == doctest::Approx(-2.0));
    CHECK(rs.roots[1] == doctest::Approx(-1.0));
    CHECK(rs.roots[2] == doctest::Approx(1.0));
    CHECK(rs.roots[3] == doctest::Approx(2.0));
}

TEST_CASE("nearby roots merge with summed multiplicity") {
    RootSet quad = find_real_roots(RealPolynomial({1.0, -2.0, 1.0}));
    REQUIRE(quad.roots.size() == 1);
    CHECK(quad.roots[0] == doctest::Approx(1.0));
    CHECK(quad.multiplicities[0] == 2);

    // (x - 1)^2 (x^2 + 1)
    RootSet rs = solve_quartic({1.0, -2.0, 2.0, -2.0, 1.0});
    REQUIRE(rs.roots.size() == 1);
    CHECK(rs.roots[0] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(rs.multiplicities[0] == 2);
}

TEST_CASE("find_real_roots rejects unusable input") {
    CHECK_THROWS_AS(find_real_roots(RealPolynomial({0.0, 0.0})),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        find_real_roots(RealPolynomial({1.0, 0.0, 0.0, 0.0, 0.0, 1.0})),
        std::invalid_argument);
    CHECK(find_real_roots(RealPolynomial({5.0})).roots.empty());
}

TEST_CASE("bracket_bisect converges and rejects bad brackets") {
    auto f = [](double x) { return x * x - 2.0; };
    double r = bracket_bisect(f, 0.0, 2.0, 1e-13);
    CHECK(std::abs(r - std::sqrt(2.0)) <= 1e-12);

    CHECK_THROWS_AS(bracket_bisect(f, 2.0, 0.0, 1e-13), std::invalid_argument);
    CHECK_THROWS_AS(bracket_bisect(f, 0.0, 2.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(bracket_bisect(f, 2.0, 3.0, 1e-13), std::invalid_argument);
}

TEST_CASE("scan_real_roots finds simple roots and exact node zeros") {
    auto cubic = [](double x) { return (x - 1.0) * (x - 2.0) * (x - 3.0); };
    RootSet rs = scan_real_roots(cubic, 0.0, 4.0, 1000);
    REQUIRE(rs.roots.size() == 3);
    CHECK(rs.roots[0] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(rs.roots[1] == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(rs.roots[2] == doctest::Approx(3.0).epsilon(1e-10));
    CHECK(rs.method == RootMethod::bisection);

    // 0 falls exactly on a grid node of [-1, 1] with an even cell count
    RootSet node = scan_real_roots([](double x) { return x; }, -1.0, 1.0, 10);
    REQUIRE(node.roots.size() == 1);
    CHECK(node.roots[0] == 0.0);

    CHECK_THROWS_AS(scan_real_roots(cubic, 1.0, 1.0, 10), std::invalid_argument);
    CHECK_THROWS_AS(scan_real_roots(cubic, 0.0, 1.0, 0), std::invalid_argument);
}

TEST_CASE("random cubics: closed form agrees with the sign scan") {
    Xorshift64Star rng(20240817);
    for (int iter = 0; iter < 300; ++iter) {
        double scale = std::pow(10.0, -2.0 + 5.0 * rng.uniform());
        if (rng.pick(2) == 0) scale = -scale;
        bool three_real = rng.pick(2) == 0;
        std::vector<double> coeffs;
        if (three_real) {
            coeffs = poly_from_roots(sample_separated(rng, 3), {}, scale);
        } else {
            double a = -3.0 + 6.0 * rng.uniform();
            double b = 0.3 + 2.0 * rng.uniform();
            coeffs = poly_from_roots(sample_separated(rng, 1), {{a, b}}, scale);
        }
        RealPolynomial poly(coeffs);
        RootSet closed = solve_cubic({coeffs[0], coeffs[1], coeffs[2], coeffs[3]});
        check_against_scan(closed, poly);
    }
}

TEST_CASE("random quartics: closed form agrees with the sign scan") {
    Xorshift64Star rng(994422);
    for (int iter = 0; iter < 300; ++iter) {
        double scale = std::pow(10.0, -2.0 + 5.0 * rng.uniform());
        if (rng.pick(2) == 0) scale = -scale;
        int real_count = 2 * rng.pick(3);  // 0, 2 or 4 real roots
        std::vector<std::pair<double, double>> pairs;
        for (int k = real_count; k < 4; k += 2) {
            double a = -3.0 + 6.0 * rng.uniform();
            double b = 0.3 + 2.0 * rng.uniform();
            pairs.push_back({a, b});
        }
        std::vector<double> coeffs =
            poly_from_roots(sample_separated(rng, real_count), pairs, scale);
        RealPolynomial poly(coeffs);
        RootSet closed = solve_quartic(
            {coeffs[0], coeffs[1], coeffs[2], coeffs[3], coeffs[4]});
        check_against_scan(closed, poly);
    }
}
