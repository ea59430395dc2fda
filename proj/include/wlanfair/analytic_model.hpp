#pragma once

#include <string>
#include <vector>

#include "wlanfair/polynomial.hpp"
#include "wlanfair/scenario.hpp"

namespace wlanfair {

// The model works in terms of R = (D * per-flow downlink rate) /
// (U * per-flow uplink rate), i.e. total downlink over total uplink.
// All reporting uses the reciprocal ratio_up_down = 1 / R.

// Queue load factor at the access point: rho = U * (1 + R).
double utilization(int up_stations, double ratio_down_up);

// Steady-state probability that a finite FIFO queue of size B is full at
// load rho (M/M/1/B). The removable singularity at rho = 1 is handled by
// the exact limit 1 / (B + 1) for |rho - 1| < 1e-9.
double blocking_probability(double rho, int buffer_size);

// Square-root throughput law for a window-limited TCP sender:
// (1 / rtt) * sqrt(3 / (2 * loss_prob)). Requires loss_prob in (0, 1].
double padhye_rate(double loss_prob, double rtt);

// Downlink flows additionally receive `extra` service per RTT:
// (1 / rtt) * (sqrt(3 / (2 * loss_prob)) + extra).
double downlink_rate(double loss_prob, double extra, double rtt);

// Loss probability implied by a rate ratio R: 3 D^2 / (2 (UwR - DE)^2).
// Rejects UwR - DE <= 0 (no positive downlink transmission rate).
double loss_from_ratio(const ScenarioParams& p, double extra, double ratio_down_up);

// Cubic bracket polynomial P(R) = c3 R^3 + c2 R^2 + c1 R + c0 common to
// both model variants; `extra` is passed explicitly so tests can probe it.
struct CubicCoeffs {
    double c0 = 0, c1 = 0, c2 = 0, c3 = 0;
};
CubicCoeffs base_cubic_coeffs(const ScenarioParams& p, double extra);

// Residual of the full balance relation
//   (1 + R)^B * P(R) - 3 D^2 / U^B
// whose zeros are the model's exact rate ratios. Requires R >= 0 (R = 0 is
// allowed for the degenerate-root check). Evaluated in log space for
// B > 200 to delay overflow; raises NumericRangeError past that.
double rate_balance_residual(const ScenarioParams& p, double ratio_down_up);

// Cubic obtained from the log-derivative of the balance relation:
// B * P(R) + (1 + R) * P'(R), ascending coefficients.
RealPolynomial new_model_polynomial(const ScenarioParams& p);

// Quartic obtained from the first-order expansion (1 + R)^B ~ 1 + BR:
// (1 + BR) * P(R) - 3 D^2 / U^B, ascending coefficients.
RealPolynomial old_model_polynomial(const ScenarioParams& p);

enum class ModelVariant { new_cubic, old_quartic, exact_transcendental };

const char* variant_name(ModelVariant v);

// Candidate root with the acceptance decision made for it.
struct RootCandidate {
    double value = 0;
    enum class Verdict {
        accepted,
        nonpositive,           // R <= 1e-9
        nonpositive_downlink,  // UwR - DE <= 0
    } verdict = Verdict::accepted;
    double abs_residual = 0;  // |balance residual|; meaningful for survivors
};

struct ModelSolution {
    ModelVariant variant = ModelVariant::new_cubic;
    double ratio_down_up = 0;   // accepted R
    double ratio_up_down = 0;   // 1 / R, the reported ratio
    double rho = 0;             // U * (1 + R)
    double extra = 0;           // E
    double loss_prob = 0;       // clamped to (0, 1]
    double pr_raw = 0;          // unclamped value
    bool pr_clamped = false;    // pr_raw > 1
    double residual = 0;        // signed balance residual at the root
    std::vector<RootCandidate> candidates;
};

// Filter and ranking shared by all variants: discard R <= 1e-9 and
// UwR - DE <= 0, then keep the smallest |balance residual|, ties broken by
// the smallest R. Throws NoPhysicalRootError when nothing survives.
// Exposed separately so the empty-survivor path is testable; no parameter
// set with U, D >= 1 is known to reach it through solve_model.
ModelSolution select_physical_root(const ScenarioParams& p, ModelVariant variant,
                                   const std::vector<double>& roots);

// End-to-end solve for one variant.
ModelSolution solve_model(const ScenarioParams& p, ModelVariant variant);

}  // namespace wlanfair
