#include "wlanfair/scenario.hpp"

#include <stdexcept>

namespace wlanfair {

void validate_scenario(const ScenarioParams& p) {
    if (p.up_stations < 0 || p.down_stations < 0)
        throw std::invalid_argument("scenario: station counts must be nonnegative");
    if (p.up_stations + p.down_stations < 1)
        throw std::invalid_argument("scenario: need at least one station");
    if (p.buffer_size < 1)
        throw std::invalid_argument("scenario: buffer_size must be >= 1");
    if (p.max_window < 1)
        throw std::invalid_argument("scenario: max_window must be >= 1");
    if (!(p.rtt > 0.0))
        throw std::invalid_argument("scenario: rtt must be positive");
}

void require_analytic(const ScenarioParams& p) {
    validate_scenario(p);
    if (p.up_stations < 1 || p.down_stations < 1)
        throw std::invalid_argument(
            "scenario: the analytic model needs traffic in both directions");
}

double extra_service(const ScenarioParams& p) {
    require_analytic(p);
    double surplus = static_cast<double>(p.buffer_size) -
                     static_cast<double>(p.up_stations) * p.max_window;
    if (surplus <= 0.0) return 0.0;
    return 3.0 * surplus / (4.0 * p.down_stations);
}

}  // namespace wlanfair
