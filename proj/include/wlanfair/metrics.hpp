#pragma once

#include <span>

namespace wlanfair {

// Jain fairness index (sum x)^2 / (n * sum x^2) over nonnegative
// throughputs, at least one positive. Lies in [1/n, 1]; invariant under
// scaling and permutation.
double jain_index(std::span<const double> throughputs);

// Uplink-over-downlink ratio with explicit markers: +infinity when only
// the downlink total is zero, NaN when both are. Serialized as "inf" and
// "nan" in CSV output. Negative inputs are rejected.
double throughput_ratio(double up_total, double down_total);

}  // namespace wlanfair
