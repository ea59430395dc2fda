#include "wlanfair/wlan_sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <queue>
#include <set>
#include <stdexcept>
#include <vector>

#include "wlanfair/metrics.hpp"

namespace wlanfair {

int mac_grant(std::span<const int> contenders, Xorshift64Star& rng) {
    if (contenders.empty())
        throw std::invalid_argument("mac_grant: no contenders");
    return contenders[static_cast<std::size_t>(
        rng.pick(static_cast<int>(contenders.size())))];
}

ApBuffer::ApBuffer(int capacity) : capacity_(capacity) {
    if (capacity < 1)
        throw std::invalid_argument("ApBuffer: capacity must be >= 1");
}

bool ApBuffer::enqueue(const ApFrame& f) {
    if (static_cast<int>(q_.size()) >= capacity_) {
        (f.cls == FrameClass::data ? drops_data_ : drops_ack_)++;
        return false;
    }
    q_.push_back(f);
    max_occupancy_ = std::max(max_occupancy_, static_cast<long>(q_.size()));
    return true;
}

ApFrame ApBuffer::pop() {
    if (q_.empty()) throw std::logic_error("ApBuffer::pop on empty buffer");
    ApFrame f = q_.front();
    q_.pop_front();
    return f;
}

long ApBuffer::drops(FrameClass cls) const {
    return cls == FrameClass::data ? drops_data_ : drops_ack_;
}

int effective_window(const TcpFlowState& st) {
    double w = std::min(st.cwnd, static_cast<double>(st.max_window));
    return std::max(1, static_cast<int>(std::floor(w)));
}

TcpActions tcp_on_event(TcpFlowState& st, const TcpEvent& ev) {
    TcpActions act;
    double wmax = static_cast<double>(st.max_window);
    switch (ev.kind) {
        case TcpEvent::Kind::ack:
            if (ev.ackno <= st.snd_una)
                throw std::logic_error("tcp_on_event: ack does not advance snd_una");
            if (ev.ackno > st.snd_nxt)
                throw std::logic_error("tcp_on_event: ack covers unsent data");
            st.snd_una = ev.ackno;
            st.dupacks = 0;
            if (st.in_recovery && st.snd_una >= st.recovery_point)
                st.in_recovery = false;
            if (st.cwnd < st.ssthresh)
                st.cwnd += 1.0;  // slow start
            else
                st.cwnd += 1.0 / st.cwnd;  // congestion avoidance
            st.cwnd = std::min(st.cwnd, wmax);
            break;

        case TcpEvent::Kind::dupack:
            if (st.snd_nxt <= st.snd_una)
                throw std::logic_error("tcp_on_event: dupack with nothing outstanding");
            st.dupacks++;
            if (st.dupacks == 3 && !st.in_recovery) {
                st.ssthresh = std::max(st.cwnd / 2.0, 2.0);
                st.cwnd = std::min(st.ssthresh, wmax);
                st.in_recovery = true;
                st.recovery_point = st.snd_nxt;
                act.retransmit_lowest = true;
            }
            break;

        case TcpEvent::Kind::timeout:
            if (st.snd_nxt <= st.snd_una)
                throw std::logic_error("tcp_on_event: timeout with nothing outstanding");
            st.ssthresh = std::max(st.cwnd / 2.0, 2.0);
            st.cwnd = 1.0;
            st.dupacks = 0;
            st.in_recovery = false;
            act.retransmit_lowest = true;
            break;
    }
    return act;
}

void validate_sim_config(const SimConfig& cfg) {
    validate_scenario(cfg.scenario);
    if (!(cfg.duration > 0.0))
        throw std::invalid_argument("sim: duration must be positive");
    if (cfg.warmup < 0.0 || cfg.warmup >= cfg.duration)
        throw std::invalid_argument("sim: warmup must lie in [0, duration)");
    if (!(cfg.wireless_rate > 0.0))
        throw std::invalid_argument("sim: wireless_rate must be positive");
    if (cfg.wired_delay < 0.0)
        throw std::invalid_argument("sim: wired_delay must be >= 0");
    if (cfg.data_frame < 1 || cfg.ack_frame < 1)
        throw std::invalid_argument("sim: frame sizes must be >= 1 byte");
}

namespace {

// Time is integer nanoseconds so that event ordering is exact; ties are
// broken by insertion order.
struct Event {
    std::uint64_t t = 0;
    std::uint64_t order = 0;
    enum class Type {
        server_recv_data,  // uplink data reaches the wired server
        ap_ack_arrival,    // ack for an uplink flow reaches the AP buffer
        ap_data_arrival,   // downlink data reaches the AP buffer
        tx_complete,       // current channel transmission finishes
        server_recv_ack,   // ack for a downlink flow reaches the server
        rto,               // retransmission timer (payload: epoch)
    } type = Type::tx_complete;
    int flow = 0;
    std::int64_t a = 0;  // seq, ackno or epoch
};

struct EventLater {
    bool operator()(const Event& x, const Event& y) const {
        if (x.t != y.t) return x.t > y.t;
        return x.order > y.order;
    }
};

struct Flow {
    bool uplink = false;
    TcpFlowState tcp;
    std::deque<long> retx;  // sequences queued for retransmission
    std::uint64_t rto_epoch = 0;
    bool rto_armed = false;
    double srtt = 0.0;  // seconds, 0 until the first sample
    std::map<long, std::uint64_t> send_time;  // first transmissions only

    long rcv_next = 0;
    std::set<long> ooo;

    long delivered_window = 0;
    long data_sent = 0, data_delivered = 0, data_dropped = 0;
    long ack_sent = 0, ack_delivered = 0, ack_dropped = 0;
    long timeouts = 0, fast_retx = 0;
};

class Simulator {
public:
    explicit Simulator(const SimConfig& cfg)
        : cfg_(cfg),
          rng_(cfg.seed),
          buf_(cfg.scenario.buffer_size),
          end_ns_(to_ns(cfg.duration)),
          warmup_ns_(to_ns(cfg.warmup)),
          wired_ns_(to_ns(cfg.wired_delay)),
          air_data_ns_(airtime_ns(cfg.data_frame)),
          air_ack_ns_(airtime_ns(cfg.ack_frame)) {
        int n = cfg.scenario.up_stations + cfg.scenario.down_stations;
        flows_.resize(static_cast<std::size_t>(n));
        for (int f = 0; f < n; ++f) {
            Flow& fl = flows_[static_cast<std::size_t>(f)];
            fl.uplink = f < cfg.scenario.up_stations;
            fl.tcp.max_window = cfg.scenario.max_window;
            fl.tcp.ssthresh = cfg.scenario.max_window;
        }
    }

    SimResult run() {
        for (int f = 0; f < num_flows(); ++f)
            if (!flows_[static_cast<std::size_t>(f)].uplink) pump_downlink(f, 0);
        try_start_tx(0);

        while (!pq_.empty()) {
            Event e = pq_.top();
            if (e.t > end_ns_) break;
            pq_.pop();
            dispatch(e);
        }
        return finalize();
    }

private:
    static std::uint64_t to_ns(double seconds) {
        return static_cast<std::uint64_t>(std::llround(seconds * 1e9));
    }

    std::uint64_t airtime_ns(int bytes) const {
        return to_ns(static_cast<double>(bytes) * 8.0 / cfg_.wireless_rate);
    }

    int num_flows() const { return static_cast<int>(flows_.size()); }
    Flow& flow(int f) { return flows_[static_cast<std::size_t>(f)]; }

    void schedule(std::uint64_t t, Event::Type type, int f, std::int64_t a) {
        pq_.push(Event{t, order_seq_++, type, f, a});
    }

    void dispatch(const Event& e) {
        switch (e.type) {
            case Event::Type::server_recv_data: {
                // uplink data delivered; the server acks immediately
                Flow& fl = flow(e.flow);
                fl.data_delivered++;
                long ackno = receiver_on_data(e.flow, e.a, e.t);
                fl.ack_sent++;
                schedule(e.t + wired_ns_, Event::Type::ap_ack_arrival, e.flow, ackno);
                break;
            }
            case Event::Type::ap_ack_arrival: {
                if (buf_.enqueue({FrameClass::ack, e.flow, e.a})) {
                    try_start_tx(e.t);
                } else {
                    flow(e.flow).ack_dropped++;
                }
                break;
            }
            case Event::Type::ap_data_arrival: {
                if (buf_.enqueue({FrameClass::data, e.flow, e.a})) {
                    try_start_tx(e.t);
                } else {
                    flow(e.flow).data_dropped++;
                }
                break;
            }
            case Event::Type::tx_complete:
                on_tx_complete(e.t);
                break;
            case Event::Type::server_recv_ack: {
                flow(e.flow).ack_delivered++;
                on_ack_received(e.flow, e.a, e.t);
                break;
            }
            case Event::Type::rto:
                on_rto(e.flow, static_cast<std::uint64_t>(e.a), e.t);
                break;
        }
    }

    // ---- channel ----

    void prune_retx(Flow& fl) {
        while (!fl.retx.empty() && fl.retx.front() < fl.tcp.snd_una)
            fl.retx.pop_front();
    }

    bool uplink_backlogged(Flow& fl) {
        prune_retx(fl);
        if (!fl.retx.empty()) return true;
        return fl.tcp.snd_nxt - fl.tcp.snd_una < effective_window(fl.tcp);
    }

    void try_start_tx(std::uint64_t now) {
        if (channel_busy_) return;
        contenders_.clear();
        if (!buf_.empty()) contenders_.push_back(kApStation);
        for (int f = 0; f < cfg_.scenario.up_stations; ++f)
            if (uplink_backlogged(flow(f))) contenders_.push_back(f);
        if (contenders_.empty()) return;  // channel stays idle

        int who = mac_grant(contenders_, rng_);
        channel_busy_ = true;
        if (who == kApStation) {
            ApFrame fr = buf_.pop();
            tx_from_ap_ = true;
            tx_cls_ = fr.cls;
            tx_flow_ = fr.flow;
            tx_seq_ = fr.seq;
            std::uint64_t air =
                fr.cls == FrameClass::data ? air_data_ns_ : air_ack_ns_;
            schedule(now + air, Event::Type::tx_complete, 0, 0);
            return;
        }
        Flow& fl = flow(who);
        long seq;
        if (!fl.retx.empty()) {
            seq = fl.retx.front();
            fl.retx.pop_front();
            fl.send_time.erase(seq);  // retransmission: never sample its RTT
        } else {
            seq = fl.tcp.snd_nxt++;
            fl.send_time.emplace(seq, now);
        }
        fl.data_sent++;
        if (!fl.rto_armed) arm_rto(who, now);
        tx_from_ap_ = false;
        tx_cls_ = FrameClass::data;
        tx_flow_ = who;
        tx_seq_ = seq;
        schedule(now + air_data_ns_, Event::Type::tx_complete, 0, 0);
    }

    void on_tx_complete(std::uint64_t now) {
        channel_busy_ = false;
        if (tx_from_ap_) {
            if (tx_cls_ == FrameClass::ack) {
                // ack frame reaches its uplink sender directly
                flow(tx_flow_).ack_delivered++;
                on_ack_received(tx_flow_, tx_seq_, now);
            } else {
                // downlink data reaches its station; the ack rides the
                // uncontended reverse path to the server
                Flow& fl = flow(tx_flow_);
                fl.data_delivered++;
                long ackno = receiver_on_data(tx_flow_, tx_seq_, now);
                fl.ack_sent++;
                schedule(now + wired_ns_, Event::Type::server_recv_ack, tx_flow_,
                         ackno);
            }
        } else {
            // uplink data lands at the AP and relays onto the wired side
            schedule(now + wired_ns_, Event::Type::server_recv_data, tx_flow_,
                     tx_seq_);
        }
        try_start_tx(now);
    }

    // ---- receiver side (cumulative acks, one per arriving data packet) ----

    long receiver_on_data(int f, long seq, std::uint64_t now) {
        Flow& fl = flow(f);
        if (seq >= fl.rcv_next && fl.ooo.find(seq) == fl.ooo.end()) {
            if (now > warmup_ns_) fl.delivered_window++;
            if (seq == fl.rcv_next) {
                fl.rcv_next++;
                while (!fl.ooo.empty() && *fl.ooo.begin() == fl.rcv_next) {
                    fl.ooo.erase(fl.ooo.begin());
                    fl.rcv_next++;
                }
            } else {
                fl.ooo.insert(seq);
            }
        }
        return fl.rcv_next;
    }

    // ---- sender side ----

    void emit_downlink_data(int f, long seq, bool first, std::uint64_t now) {
        Flow& fl = flow(f);
        if (first)
            fl.send_time.emplace(seq, now);
        else
            fl.send_time.erase(seq);
        fl.data_sent++;
        if (!fl.rto_armed) arm_rto(f, now);
        schedule(now + wired_ns_, Event::Type::ap_data_arrival, f, seq);
    }

    void pump_downlink(int f, std::uint64_t now) {
        Flow& fl = flow(f);
        while (fl.tcp.snd_nxt - fl.tcp.snd_una < effective_window(fl.tcp)) {
            long seq = fl.tcp.snd_nxt++;
            emit_downlink_data(f, seq, true, now);
        }
    }

    void retransmit_lowest(int f, std::uint64_t now) {
        Flow& fl = flow(f);
        long seq = fl.tcp.snd_una;
        if (fl.uplink) {
            if (std::find(fl.retx.begin(), fl.retx.end(), seq) == fl.retx.end())
                fl.retx.push_back(seq);
        } else {
            emit_downlink_data(f, seq, false, now);
        }
    }

    void on_ack_received(int f, long ackno, std::uint64_t now) {
        Flow& fl = flow(f);
        TcpFlowState& st = fl.tcp;
        if (ackno > st.snd_una) {
            auto it = fl.send_time.find(ackno - 1);
            if (it != fl.send_time.end()) {
                double sample = static_cast<double>(now - it->second) * 1e-9;
                fl.srtt = fl.srtt == 0.0 ? sample : 0.875 * fl.srtt + 0.125 * sample;
            }
            fl.send_time.erase(fl.send_time.begin(),
                               fl.send_time.lower_bound(ackno));
            tcp_on_event(st, {TcpEvent::Kind::ack, ackno});
            prune_retx(fl);
            if (st.snd_nxt > st.snd_una || !fl.retx.empty())
                arm_rto(f, now);  // restart while data is outstanding
            else
                disarm_rto(fl);
        } else if (ackno == st.snd_una && st.snd_nxt > st.snd_una) {
            TcpActions act = tcp_on_event(st, {TcpEvent::Kind::dupack, 0});
            if (act.retransmit_lowest) {
                fl.fast_retx++;
                retransmit_lowest(f, now);
            }
        }
        // older acks carry no information under cumulative acking

        if (fl.uplink)
            try_start_tx(now);  // window may have opened
        else
            pump_downlink(f, now);
    }

    // ---- retransmission timer ----

    std::uint64_t rto_ns(const Flow& fl) const {
        double rto = std::max(1.0, 4.0 * fl.srtt);
        return to_ns(rto);
    }

    void arm_rto(int f, std::uint64_t now) {
        Flow& fl = flow(f);
        fl.rto_epoch++;
        fl.rto_armed = true;
        schedule(now + rto_ns(fl), Event::Type::rto, f,
                 static_cast<std::int64_t>(fl.rto_epoch));
    }

    void disarm_rto(Flow& fl) {
        fl.rto_armed = false;
        fl.rto_epoch++;
    }

    void on_rto(int f, std::uint64_t epoch, std::uint64_t now) {
        Flow& fl = flow(f);
        if (!fl.rto_armed || epoch != fl.rto_epoch) return;  // superseded
        if (fl.tcp.snd_nxt == fl.tcp.snd_una && fl.retx.empty()) {
            disarm_rto(fl);
            return;
        }
        fl.timeouts++;
        TcpActions act = tcp_on_event(fl.tcp, {TcpEvent::Kind::timeout, 0});
        fl.retx.clear();
        if (act.retransmit_lowest) retransmit_lowest(f, now);
        arm_rto(f, now);
        if (fl.uplink) try_start_tx(now);
    }

    // ---- end of run ----

    SimResult finalize() {
        int n = num_flows();
        std::vector<long> data_transit(static_cast<std::size_t>(n), 0);
        std::vector<long> ack_transit(static_cast<std::size_t>(n), 0);

        if (channel_busy_) {
            // the frame on the air; its tx_complete event carries no payload
            auto& bucket = (tx_from_ap_ && tx_cls_ == FrameClass::ack)
                               ? ack_transit
                               : data_transit;
            bucket[static_cast<std::size_t>(tx_flow_)]++;
        }
        while (!pq_.empty()) {
            Event e = pq_.top();
            pq_.pop();
            switch (e.type) {
                case Event::Type::server_recv_data:
                case Event::Type::ap_data_arrival:
                    data_transit[static_cast<std::size_t>(e.flow)]++;
                    break;
                case Event::Type::ap_ack_arrival:
                case Event::Type::server_recv_ack:
                    ack_transit[static_cast<std::size_t>(e.flow)]++;
                    break;
                case Event::Type::tx_complete:
                case Event::Type::rto:
                    break;
            }
        }
        for (const ApFrame& fr : buf_.frames()) {
            auto& bucket =
                fr.cls == FrameClass::data ? data_transit : ack_transit;
            bucket[static_cast<std::size_t>(fr.flow)]++;
        }

        SimResult res;
        double window = cfg_.duration - cfg_.warmup;
        std::vector<double> rates;
        for (int f = 0; f < n; ++f) {
            Flow& fl = flow(f);
            long dt = data_transit[static_cast<std::size_t>(f)];
            long at = ack_transit[static_cast<std::size_t>(f)];
            if (fl.data_sent != fl.data_delivered + fl.data_dropped + dt ||
                fl.ack_sent != fl.ack_delivered + fl.ack_dropped + at)
                throw std::logic_error("simulation accounting violated for flow " +
                                       std::to_string(f));

            FlowStats st;
            st.flow = f;
            st.uplink = fl.uplink;
            st.delivered = fl.delivered_window;
            st.throughput = static_cast<double>(fl.delivered_window) / window;
            st.sent_copies = fl.data_sent;
            st.delivered_copies = fl.data_delivered;
            st.dropped_copies = fl.data_dropped;
            st.in_transit_copies = dt;
            st.timeouts = fl.timeouts;
            st.fast_retransmits = fl.fast_retx;
            res.per_flow.push_back(st);

            (fl.uplink ? res.up_total : res.down_total) += st.throughput;
            rates.push_back(st.throughput);
        }
        res.ratio_up_down = throughput_ratio(res.up_total, res.down_total);
        bool any = false;
        for (double r : rates) any = any || r > 0.0;
        res.jain = any ? jain_index(rates)
                       : std::numeric_limits<double>::quiet_NaN();
        res.ap_drops_data = buf_.drops(FrameClass::data);
        res.ap_drops_ack = buf_.drops(FrameClass::ack);
        res.ap_max_occupancy = buf_.max_occupancy();
        return res;
    }

    SimConfig cfg_;
    Xorshift64Star rng_;
    ApBuffer buf_;
    std::uint64_t end_ns_, warmup_ns_, wired_ns_, air_data_ns_, air_ack_ns_;

    std::priority_queue<Event, std::vector<Event>, EventLater> pq_;
    std::uint64_t order_seq_ = 0;
    std::vector<Flow> flows_;
    std::vector<int> contenders_;

    bool channel_busy_ = false;
    bool tx_from_ap_ = false;
    FrameClass tx_cls_ = FrameClass::data;
    int tx_flow_ = 0;
    long tx_seq_ = 0;
};

}  // namespace

SimResult run_simulation(const SimConfig& cfg) {
    validate_sim_config(cfg);
    Simulator sim(cfg);
    return sim.run();
}

}  // namespace wlanfair
