#include "wlanfair/analytic_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "wlanfair/errors.hpp"

namespace wlanfair {

double utilization(int up_stations, double ratio_down_up) {
    if (up_stations < 1)
        throw std::invalid_argument("utilization: need at least one uplink station");
    if (!(ratio_down_up > 0.0))
        throw std::invalid_argument("utilization: ratio must be positive");
    return up_stations * (1.0 + ratio_down_up);
}

double blocking_probability(double rho, int buffer_size) {
    if (!(rho > 0.0))
        throw std::invalid_argument("blocking_probability: rho must be positive");
    if (buffer_size < 1)
        throw std::invalid_argument("blocking_probability: buffer_size must be >= 1");

    double b = static_cast<double>(buffer_size);
    if (std::abs(rho - 1.0) < 1e-9) return 1.0 / (b + 1.0);
    if (rho < 1.0) {
        // (1 - rho) rho^B / (1 - rho^(B+1)); rho^B underflow decays to 0
        double rb = std::pow(rho, b);
        return (1.0 - rho) * rb / (1.0 - rb * rho);
    }
    // same quantity scaled by rho^-(B+1) so large rho^B never overflows
    double ri = std::pow(1.0 / rho, b + 1.0);
    return (1.0 - 1.0 / rho) / (1.0 - ri);
}

double padhye_rate(double loss_prob, double rtt) {
    if (!(loss_prob > 0.0) || loss_prob > 1.0)
        throw std::invalid_argument("padhye_rate: loss_prob must be in (0, 1]");
    if (!(rtt > 0.0)) throw std::invalid_argument("padhye_rate: rtt must be positive");
    return std::sqrt(3.0 / (2.0 * loss_prob)) / rtt;
}

double downlink_rate(double loss_prob, double extra, double rtt) {
    if (extra < 0.0)
        throw std::invalid_argument("downlink_rate: extra service must be >= 0");
    return padhye_rate(loss_prob, rtt) + extra / rtt;
}

double loss_from_ratio(const ScenarioParams& p, double extra, double ratio_down_up) {
    require_analytic(p);
    if (extra < 0.0)
        throw std::invalid_argument("loss_from_ratio: extra service must be >= 0");
    double span = static_cast<double>(p.up_stations) * p.max_window * ratio_down_up -
                  p.down_stations * extra;
    if (!(span > 0.0))
        throw std::invalid_argument(
            "loss_from_ratio: nonpositive downlink transmission rate");
    double d = static_cast<double>(p.down_stations);
    return 3.0 * d * d / (2.0 * span * span);
}

CubicCoeffs base_cubic_coeffs(const ScenarioParams& p, double extra) {
    require_analytic(p);
    if (extra < 0.0)
        throw std::invalid_argument("base_cubic_coeffs: extra service must be >= 0");
    double u = p.up_stations;
    double d = p.down_stations;
    double w = p.max_window;
    double e = extra;
    CubicCoeffs c;
    c.c3 = -2.0 * u * u * u * w * w;
    c.c2 = 4.0 * d * e * u * u * w - 2.0 * u * u * u * w * w + 2.0 * u * u * w * w;
    c.c1 = 3.0 * u * d * d - 2.0 * u * d * d * e * e + 4.0 * d * e * u * u * w -
           4.0 * d * e * u * w;
    c.c0 = 3.0 * u * d * d - 2.0 * u * d * d * e * e + 2.0 * d * d * e * e;
    return c;
}

namespace {

double eval_bracket(const CubicCoeffs& c, double r) {
    return ((c.c3 * r + c.c2) * r + c.c1) * r + c.c0;
}

// 3 D^2 / U^B; overflow of U^B is a numeric-range error, underflow of the
// quotient decays harmlessly toward zero.
double rhs_constant(const ScenarioParams& p) {
    double ub = std::pow(static_cast<double>(p.up_stations),
                         static_cast<double>(p.buffer_size));
    if (!std::isfinite(ub))
        throw NumericRangeError("U^B overflows for U=" +
                                std::to_string(p.up_stations) +
                                ", B=" + std::to_string(p.buffer_size));
    double d = p.down_stations;
    return 3.0 * d * d / ub;
}

}  // namespace

double rate_balance_residual(const ScenarioParams& p, double ratio_down_up) {
    require_analytic(p);
    if (ratio_down_up < 0.0)
        throw std::invalid_argument("rate_balance_residual: ratio must be >= 0");

    double r = ratio_down_up;
    double b = static_cast<double>(p.buffer_size);
    CubicCoeffs c = base_cubic_coeffs(p, extra_service(p));
    double bracket = eval_bracket(c, r);

    if (p.buffer_size <= 200) {
        double lhs = std::pow(1.0 + r, b) * bracket;
        double rhs = rhs_constant(p);
        if (!std::isfinite(lhs))
            throw NumericRangeError("(1+R)^B overflows the balance residual");
        return lhs - rhs;
    }

    // log-space assembly for large B: the product (1+R)^B * P(R) is often
    // representable when the power alone is not
    double lhs = 0.0;
    if (bracket != 0.0) {
        double log_lhs = b * std::log1p(r) + std::log(std::abs(bracket));
        lhs = std::copysign(std::exp(log_lhs), bracket);
        if (!std::isfinite(lhs))
            throw NumericRangeError("(1+R)^B P(R) overflows the balance residual");
    }
    double d = p.down_stations;
    double log_rhs = std::log(3.0 * d * d) -
                     b * std::log(static_cast<double>(p.up_stations));
    double rhs = std::exp(log_rhs);
    if (!std::isfinite(rhs))
        throw NumericRangeError("3 D^2 / U^B overflows the balance residual");
    return lhs - rhs;
}

RealPolynomial new_model_polynomial(const ScenarioParams& p) {
    require_analytic(p);
    double b = static_cast<double>(p.buffer_size);
    CubicCoeffs c = base_cubic_coeffs(p, extra_service(p));
    // B * P(R) + (1 + R) * P'(R), ascending
    return RealPolynomial({c.c1 + b * c.c0,
                           2.0 * c.c2 + c.c1 + b * c.c1,
                           3.0 * c.c3 + 2.0 * c.c2 + b * c.c2,
                           b * c.c3 + 3.0 * c.c3});
}

RealPolynomial old_model_polynomial(const ScenarioParams& p) {
    require_analytic(p);
    double b = static_cast<double>(p.buffer_size);
    CubicCoeffs c = base_cubic_coeffs(p, extra_service(p));
    // (1 + BR) * P(R) - 3 D^2 / U^B, ascending
    return RealPolynomial({c.c0 - rhs_constant(p),
                           c.c1 + b * c.c0,
                           c.c2 + b * c.c1,
                           c.c3 + b * c.c2,
                           b * c.c3});
}

const char* variant_name(ModelVariant v) {
    switch (v) {
        case ModelVariant::new_cubic: return "new_cubic";
        case ModelVariant::old_quartic: return "old_quartic";
        case ModelVariant::exact_transcendental: return "exact_transcendental";
    }
    return "?";
}

ModelSolution select_physical_root(const ScenarioParams& p, ModelVariant variant,
                                   const std::vector<double>& roots) {
    require_analytic(p);
    double extra = extra_service(p);
    double uw = static_cast<double>(p.up_stations) * p.max_window;
    double de = static_cast<double>(p.down_stations) * extra;

    ModelSolution sol;
    sol.variant = variant;
    sol.extra = extra;

    int best = -1;
    for (double r : roots) {
        RootCandidate cand;
        cand.value = r;
        if (r <= 1e-9) {
            cand.verdict = RootCandidate::Verdict::nonpositive;
        } else if (uw * r - de <= 0.0) {
            cand.verdict = RootCandidate::Verdict::nonpositive_downlink;
        } else {
            cand.verdict = RootCandidate::Verdict::accepted;
            try {
                cand.abs_residual = std::abs(rate_balance_residual(p, r));
            } catch (const NumericRangeError&) {
                // selection still works on magnitude order; ties fall back to R
                cand.abs_residual = std::numeric_limits<double>::infinity();
            }
            if (best < 0 ||
                cand.abs_residual < sol.candidates[best].abs_residual ||
                (cand.abs_residual == sol.candidates[best].abs_residual &&
                 r < sol.candidates[best].value)) {
                best = static_cast<int>(sol.candidates.size());
            }
        }
        sol.candidates.push_back(cand);
    }

    if (best < 0)
        throw NoPhysicalRootError(std::string("no physical root for variant ") +
                                  variant_name(variant));

    double r = sol.candidates[best].value;
    sol.ratio_down_up = r;
    sol.ratio_up_down = 1.0 / r;
    sol.rho = utilization(p.up_stations, r);
    sol.pr_raw = loss_from_ratio(p, extra, r);
    sol.pr_clamped = sol.pr_raw > 1.0;
    sol.loss_prob = sol.pr_clamped ? 1.0 : sol.pr_raw;
    try {
        sol.residual = rate_balance_residual(p, r);
    } catch (const NumericRangeError&) {
        sol.residual = std::numeric_limits<double>::infinity();
    }
    return sol;
}

ModelSolution solve_model(const ScenarioParams& p, ModelVariant variant) {
    require_analytic(p);

    std::vector<double> roots;
    switch (variant) {
        case ModelVariant::new_cubic:
            roots = find_real_roots(new_model_polynomial(p)).roots;
            break;
        case ModelVariant::old_quartic:
            roots = find_real_roots(old_model_polynomial(p)).roots;
            break;
        case ModelVariant::exact_transcendental: {
            double extra = extra_service(p);
            double uw = static_cast<double>(p.up_stations) * p.max_window;
            double de = static_cast<double>(p.down_stations) * extra;
            double hi = std::max(2.0, 2.0 * de / uw + 2.0);
            // 1e4 cells, each sign change bisected well below the 1e-10
            // acceptance tolerance
            auto f = [&](double r) { return rate_balance_residual(p, r); };
            roots = scan_real_roots(f, 1e-9, hi, 10000).roots;
            break;
        }
    }
    return select_physical_root(p, variant, roots);
}

}  // namespace wlanfair
