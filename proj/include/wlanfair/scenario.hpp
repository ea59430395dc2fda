#pragma once

namespace wlanfair {

// One WLAN configuration: U uplink (sending) stations, D downlink
// (receiving) stations behind a single access point whose wireless-side
// buffer holds `buffer_size` packets. `max_window` caps every TCP sender's
// congestion window, in packets.
struct ScenarioParams {
    int up_stations = 1;    // U
    int down_stations = 1;  // D
    int buffer_size = 50;   // B, packets
    int max_window = 42;    // w, packets
    double rtt = 0.1;       // seconds; cancels out of the throughput ratio
};

// Common invariants: U >= 0, D >= 0, U + D >= 1, B >= 1, w >= 1, rtt > 0.
void validate_scenario(const ScenarioParams& p);

// The analytic model additionally needs at least one station per direction.
void require_analytic(const ScenarioParams& p);

// Extra service rate available to each downlink flow once the buffer
// exceeds what the uplink flows can occupy: 3(B - Uw) / (4D) for B > Uw,
// else 0. Continuous in B at B = Uw.
double extra_service(const ScenarioParams& p);

}  // namespace wlanfair
