#include "wlanfair/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace wlanfair {

double jain_index(std::span<const double> throughputs) {
    if (throughputs.empty())
        throw std::invalid_argument("jain_index: no throughputs");
    double sum = 0.0;
    double sumsq = 0.0;
    for (double x : throughputs) {
        if (x < 0.0 || !std::isfinite(x))
            throw std::invalid_argument("jain_index: throughputs must be finite and >= 0");
        sum += x;
        sumsq += x * x;
    }
    if (sumsq == 0.0)
        throw std::invalid_argument("jain_index: all throughputs are zero");
    return sum * sum / (static_cast<double>(throughputs.size()) * sumsq);
}

double throughput_ratio(double up_total, double down_total) {
    if (up_total < 0.0 || down_total < 0.0)
        throw std::invalid_argument("throughput_ratio: totals must be >= 0");
    if (down_total == 0.0) {
        if (up_total == 0.0) return std::numeric_limits<double>::quiet_NaN();
        return std::numeric_limits<double>::infinity();
    }
    return up_total / down_total;
}

}  // namespace wlanfair
