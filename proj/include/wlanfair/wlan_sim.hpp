#pragma once

#include <cstdint>
#include <deque>
#include <span>
#include <vector>

#include "wlanfair/rng.hpp"
#include "wlanfair/scenario.hpp"

namespace wlanfair {

// Simplified deterministic WLAN: one collision-free channel shared by the
// uplink stations and the access point. Per transmission opportunity the
// grant goes to one backlogged contender, uniformly at random. The only
// finite buffer is the AP's wireless-side FIFO, which carries downlink
// data and the ACKs returning to uplink senders; the wired side has
// unbounded bandwidth and a fixed one-way delay.

struct SimConfig {
    ScenarioParams scenario;
    std::uint64_t seed = 1;
    double duration = 100.0;      // seconds simulated
    double warmup = 0.0;          // arrivals at t <= warmup don't count
    double wireless_rate = 11e6;  // bits/s
    double wired_delay = 1e-3;    // seconds each way
    int data_frame = 1040;        // bytes
    int ack_frame = 40;           // bytes
};

// Station id for the channel grant: the AP is -1, uplink stations are
// their flow ids 0 .. U-1.
constexpr int kApStation = -1;

// Uniform pick among backlogged contenders. The contender list must be
// nonempty; its order does not affect the distribution but is kept
// deterministic by the caller.
int mac_grant(std::span<const int> contenders, Xorshift64Star& rng);

enum class FrameClass { data, ack };

struct ApFrame {
    FrameClass cls = FrameClass::data;
    int flow = 0;
    long seq = 0;  // data sequence number, or cumulative ack
};

// Drop-tail FIFO of fixed capacity with per-class drop counters.
class ApBuffer {
public:
    explicit ApBuffer(int capacity);

    bool enqueue(const ApFrame& f);  // false when full (frame dropped)
    ApFrame pop();                   // requires nonempty
    bool empty() const { return q_.empty(); }
    int occupancy() const { return static_cast<int>(q_.size()); }
    int capacity() const { return capacity_; }
    long drops(FrameClass cls) const;
    long max_occupancy() const { return max_occupancy_; }
    const std::deque<ApFrame>& frames() const { return q_; }

private:
    int capacity_;
    std::deque<ApFrame> q_;
    long drops_data_ = 0;
    long drops_ack_ = 0;
    long max_occupancy_ = 0;
};

// Sender-side congestion state: slow start, congestion avoidance, fast
// retransmit on the third duplicate ACK, multiplicative decrease on
// timeout. cwnd never exceeds max_window.
struct TcpFlowState {
    double cwnd = 1.0;
    double ssthresh = 0;   // set from max_window at init
    int max_window = 42;
    long snd_una = 0;      // lowest unacked sequence
    long snd_nxt = 0;      // next fresh sequence
    int dupacks = 0;
    bool in_recovery = false;
    long recovery_point = 0;
};

struct TcpEvent {
    enum class Kind { ack, dupack, timeout } kind = Kind::ack;
    long ackno = 0;  // cumulative: first missing sequence (ack only)
};

struct TcpActions {
    bool retransmit_lowest = false;
};

// Applies one event. An ack must advance snd_una and cannot cover unsent
// data; dupack and timeout require outstanding data. Violations throw
// std::logic_error: they indicate a simulator bug, not a protocol state.
TcpActions tcp_on_event(TcpFlowState& st, const TcpEvent& ev);

// Effective send window in packets: floor(min(cwnd, max_window)), >= 1.
int effective_window(const TcpFlowState& st);

struct FlowStats {
    int flow = 0;
    bool uplink = false;
    long delivered = 0;        // unique data packets inside the window
    double throughput = 0;     // packets/s over (warmup, duration]
    // copy accounting, for the conservation invariant
    long sent_copies = 0;
    long delivered_copies = 0;
    long dropped_copies = 0;
    long in_transit_copies = 0;
    long timeouts = 0;
    long fast_retransmits = 0;
};

struct SimResult {
    std::vector<FlowStats> per_flow;
    double up_total = 0;       // packets/s
    double down_total = 0;
    double ratio_up_down = 0;  // may be inf or nan (metrics markers)
    double jain = 0;           // NaN when every flow delivered nothing
    long ap_drops_data = 0;
    long ap_drops_ack = 0;
    long ap_max_occupancy = 0;
};

// Runs the scenario to completion. Identical configs give bit-identical
// results. Conservation (sent = delivered + dropped + in transit, per
// flow) is asserted before returning.
SimResult run_simulation(const SimConfig& cfg);

void validate_sim_config(const SimConfig& cfg);

}  // namespace wlanfair
