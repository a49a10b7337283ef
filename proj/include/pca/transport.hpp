#pragma once

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <set>
#include <vector>

#include "pca/types.hpp"

namespace pca {

// Greedy window source: Reno-flavoured congestion control reduced to what the
// shared-link study needs. Slow start adds one packet per ack, congestion
// avoidance one packet per window, a loss halves the window and requeues the
// datagram ahead of new data. Retransmissions bypass the window check so a
// halved window cannot deadlock recovery.
class WindowSource {
public:
    WindowSource(FlowId flow, Bits datagram_bits = 12000)
        : flow_(flow), datagram_bits_(datagram_bits) {}

    FlowId flow() const { return flow_; }
    Bits datagram_bits() const { return datagram_bits_; }
    double window() const { return cwnd_; }
    double threshold() const { return ssthresh_; }
    bool in_slow_start() const { return slow_start_; }
    Count next_seq() const { return next_seq_; }
    std::size_t unacked() const { return unacked_.size(); }

    // Datagram sequence numbers to emit now: retransmissions first, then new
    // data while the window has room.
    std::vector<Count> emissions() {
        std::vector<Count> out;
        while (!retransmit_.empty()) {
            out.push_back(retransmit_.front());
            unacked_.insert(retransmit_.front());
            retransmit_.pop_front();
        }
        while (static_cast<double>(unacked_.size()) < std::floor(cwnd_)) {
            out.push_back(next_seq_);
            unacked_.insert(next_seq_);
            ++next_seq_;
        }
        return out;
    }

    // Cumulative ack: everything up to and including cum_seq has been
    // received in order. Duplicates and stale values are ignored.
    void on_ack(Count cum_seq) {
        if (cum_seq <= last_cum_ack_) return;
        last_cum_ack_ = cum_seq;
        while (!unacked_.empty() && *unacked_.begin() <= cum_seq)
            unacked_.erase(unacked_.begin());
        if (slow_start_) {
            cwnd_ += 1.0;
            if (cwnd_ >= ssthresh_) slow_start_ = false;
        } else {
            cwnd_ += 1.0 / std::floor(cwnd_);
        }
    }

    void on_loss(Count seq) {
        if (!unacked_.count(seq)) return;  // already delivered or re-queued
        unacked_.erase(seq);
        ssthresh_ = std::max(std::floor(cwnd_ / 2.0), 1.0);
        cwnd_ = ssthresh_;
        slow_start_ = false;
        retransmit_.push_back(seq);
    }

private:
    FlowId flow_;
    Bits datagram_bits_;
    double cwnd_ = 1.0;
    double ssthresh_ = 64.0;
    bool slow_start_ = true;
    Count next_seq_ = 0;
    Count last_cum_ack_ = -1;
    std::set<Count> unacked_;
    std::deque<Count> retransmit_;
};

// Constant bit rate source: one datagram every datagram_bits/rate seconds.
class CbrSource {
public:
    CbrSource(FlowId flow, double rate_bps, Bits datagram_bits = 12000)
        : flow_(flow), rate_bps_(rate_bps), datagram_bits_(datagram_bits) {}

    FlowId flow() const { return flow_; }
    Bits datagram_bits() const { return datagram_bits_; }

    // Emission interval; 0 means the source is silent.
    Ticks interval_ticks() const {
        if (rate_bps_ <= 0.0) return 0;
        const double seconds = static_cast<double>(datagram_bits_) / rate_bps_;
        return std::max<Ticks>(1, seconds_to_ticks(seconds));
    }

    Count take_seq() { return next_seq_++; }

private:
    FlowId flow_;
    double rate_bps_;
    Bits datagram_bits_;
    Count next_seq_ = 0;
};

struct Delivery {
    Ticks time = 0;
    FlowId flow = 0;
    Count seq = 0;
    Bits bits = 0;
};

// Receive side: logs every delivery and tracks the highest in-order sequence
// per flow, which is what the cumulative acks carry.
class SinkState {
public:
    // Returns the cumulative in-order sequence after this delivery.
    Count on_delivery(Ticks time, FlowId flow, Count seq, Bits bits) {
        log_.push_back({time, flow, seq, bits});
        PerFlow& state = flows_[flow];
        if (seq == state.highest_in_order + 1) {
            state.highest_in_order = seq;
            while (state.buffered.count(state.highest_in_order + 1)) {
                state.buffered.erase(state.highest_in_order + 1);
                ++state.highest_in_order;
            }
        } else if (seq > state.highest_in_order) {
            state.buffered.insert(seq);
        }
        return state.highest_in_order;
    }

    Count highest_in_order(FlowId flow) const {
        const auto it = flows_.find(flow);
        return it == flows_.end() ? -1 : it->second.highest_in_order;
    }

    const std::vector<Delivery>& log() const { return log_; }

private:
    struct PerFlow {
        Count highest_in_order = -1;
        std::set<Count> buffered;
    };
    std::vector<Delivery> log_;
    std::map<FlowId, PerFlow> flows_;
};

struct ThroughputPoint {
    double time_s = 0.0;  // window start
    double mbps = 0.0;
};

// Delivered bits per tumbling window, link-wide. Windows cover [0, duration).
inline std::vector<ThroughputPoint> measure_throughput(
    const std::vector<Delivery>& log, double window_s, double duration_s) {
    std::vector<ThroughputPoint> series;
    if (window_s <= 0.0 || duration_s <= 0.0 || log.empty()) return series;
    const std::size_t bins =
        static_cast<std::size_t>(std::ceil(duration_s / window_s - 1e-9));
    std::vector<double> bits(bins, 0.0);
    for (const Delivery& d : log) {
        const auto bin = static_cast<std::size_t>(ticks_to_seconds(d.time) / window_s);
        if (bin < bins) bits[bin] += static_cast<double>(d.bits);
    }
    series.reserve(bins);
    for (std::size_t i = 0; i < bins; ++i)
        series.push_back({static_cast<double>(i) * window_s,
                          bits[i] / window_s / 1e6});
    return series;
}

// Same, restricted to one flow.
inline std::vector<ThroughputPoint> measure_throughput(
    const std::vector<Delivery>& log, double window_s, double duration_s,
    FlowId flow) {
    std::vector<Delivery> filtered;
    for (const Delivery& d : log)
        if (d.flow == flow) filtered.push_back(d);
    return measure_throughput(filtered, window_s, duration_s);
}

}  // namespace pca
