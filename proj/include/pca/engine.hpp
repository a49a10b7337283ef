#pragma once

#include <map>
#include <memory>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "pca/queue.hpp"
#include "pca/transport.hpp"
#include "pca/types.hpp"

namespace pca {

enum class EventKind {
    frame_boundary,
    packet_arrival_at_queue,
    delivery_at_sink,
    ack_at_source,
    source_tick,
};

// Executed in (time, insertion counter) order; frame boundaries are inserted
// up front so they run before anything else scheduled at the same instant.
struct Event {
    Ticks time = 0;
    std::uint64_t counter = 0;
    EventKind kind = EventKind::frame_boundary;
    FlowId flow = -1;
    Count seq = 0;     // datagram seq / cumulative ack / frame index
    Bits bits = 0;
    bool loss_signal = false;  // ack_at_source doubling as a loss notice
};

struct EventAfter {
    bool operator()(const Event& a, const Event& b) const {
        if (a.time != b.time) return a.time > b.time;
        return a.counter > b.counter;
    }
};

struct FlowSpec {
    enum class Kind { window, cbr };
    Kind kind = Kind::window;
    double start_s = 0.0;
    double cbr_rate_mbps = 0.0;
    Bits datagram_bits = 12000;  // 1500-byte datagrams
};

struct RunConfig {
    FrameConfig frame;
    QueueSettings queue;
    std::optional<RaPerformanceTable> ra_table;
    double duration_s = 20.0;
    std::uint64_t seed = 1;
    std::vector<FlowSpec> flows;
    bool record_trace = true;
};

struct TraceRow {
    Ticks time = 0;
    const char* event = "";
    FlowId flow = -1;        // -1 renders as an empty field
    Count seq = -1;
    Bits bytes = -1;
    FrameIndex frame = -1;
    const char* detail = "";
};

struct FlowStats {
    Ticks first_delivery = -1;
    Bits delivered_bytes = 0;
    Count delivered_packets = 0;
    Count losses = 0;
    double total_delay_s = 0.0;  // enqueue-to-delivery over delivered packets
};

struct RunResult {
    std::vector<TraceRow> trace;
    std::vector<Delivery> deliveries;
    std::map<FlowId, FlowStats> flow_stats;
    Count total_departures = 0;
    Count total_losses = 0;
    double duration_s = 0.0;
};

inline Rng seed_rng(std::uint64_t seed) { return Rng(seed); }

namespace detail {

struct EventQueue {
    std::priority_queue<Event, std::vector<Event>, EventAfter> heap;
    std::uint64_t next_counter = 0;

    void push(Ticks time, EventKind kind, FlowId flow = -1, Count seq = 0,
              Bits bits = 0, bool loss_signal = false) {
        heap.push(Event{time, next_counter++, kind, flow, seq, bits, loss_signal});
    }
};

}  // namespace detail

// Runs one scenario. Departures leave the queue at frame boundaries, reach
// the sink rtt/2 later, and acks take another rtt/2 back. A loss is signalled
// to its source rtt/2 after the frame where it would have departed.
inline RunResult run(const RunConfig& cfg) {
    cfg.frame.validate();
    if (cfg.duration_s <= 0.0) throw ConfigError("duration must be > 0");
    const bool random_in_play =
        cfg.frame.freq_random > 0 || cfg.queue.switch_threshold > 0.0;
    if (random_in_play) {
        if (!cfg.ra_table)
            throw ConfigError("random access configured but no RA table loaded");
        if (cfg.queue.esn0_db < cfg.ra_table->esn0_rows_db.front())
            throw ConfigError("channel below table range");
    }
    if (cfg.queue.switch_threshold > 0.0 && cfg.frame.freq_random <= 0)
        throw ConfigError("random access configured but freqRandom_ is 0");
    if (cfg.queue.switch_threshold > 0.0 && cfg.frame.ra_block_count() < 1)
        throw ConfigError("random access configured but no RA block fits the frame");

    Rng rng = seed_rng(cfg.seed);
    PcaQueue queue(cfg.frame, cfg.queue,
                   cfg.ra_table ? &*cfg.ra_table : nullptr, &rng);
    SinkState sink;
    RunResult result;
    result.duration_s = cfg.duration_s;

    const Ticks duration = seconds_to_ticks(cfg.duration_s);
    const Ticks frame_ticks = cfg.frame.frame_ticks();
    const Ticks half_rtt = seconds_to_ticks(cfg.queue.rtt_s) / 2;

    detail::EventQueue events;
    for (Ticks t = frame_ticks; t <= duration; t += frame_ticks)
        events.push(t, EventKind::frame_boundary, -1, t / frame_ticks);

    std::vector<std::unique_ptr<WindowSource>> window_sources(cfg.flows.size());
    std::vector<std::unique_ptr<CbrSource>> cbr_sources(cfg.flows.size());
    for (std::size_t i = 0; i < cfg.flows.size(); ++i) {
        const FlowSpec& spec = cfg.flows[i];
        const auto flow = static_cast<FlowId>(i);
        const Ticks start = seconds_to_ticks(spec.start_s);
        if (spec.kind == FlowSpec::Kind::window) {
            window_sources[i] =
                std::make_unique<WindowSource>(flow, spec.datagram_bits);
            events.push(start, EventKind::source_tick, flow);
        } else {
            cbr_sources[i] = std::make_unique<CbrSource>(
                flow, spec.cbr_rate_mbps * 1e6, spec.datagram_bits);
            if (cbr_sources[i]->interval_ticks() > 0)
                events.push(start, EventKind::source_tick, flow);
        }
    }

    // First-enqueue time per (flow, seq); delay is measured from there.
    std::map<std::pair<FlowId, Count>, Ticks> first_enqueue;

    auto trace = [&](Ticks t, const char* event, FlowId flow, Count seq,
                     Bits bits, FrameIndex frame, const char* detail) {
        if (!cfg.record_trace) return;
        result.trace.push_back(
            {t, event, flow, seq, bits >= 0 ? bits / 8 : -1, frame, detail});
    };

    auto enqueue_datagram = [&](Ticks now, FlowId flow, Count seq, Bits bits) {
        if (!queue.enque(flow, bits, seq, now)) return;
        first_enqueue.emplace(std::make_pair(flow, seq), now);
        const PacketRecord& pkt = queue.packets().back();
        trace(now, "arrival", flow, seq, bits, queue.current_frame(),
              to_string(pkt.is_random ? Access::random : Access::dedicated));
    };

    auto pump_window_source = [&](Ticks now, std::size_t i) {
        for (Count seq : window_sources[i]->emissions())
            events.push(now, EventKind::packet_arrival_at_queue,
                        static_cast<FlowId>(i), seq,
                        window_sources[i]->datagram_bits());
    };

    while (!events.heap.empty() && events.heap.top().time <= duration) {
        const Event ev = events.heap.top();
        events.heap.pop();
        switch (ev.kind) {
        case EventKind::frame_boundary: {
            const FrameIndex f = ev.seq;
            trace(ev.time, "frame_boundary", -1, -1, -1, f, "");
            auto boundary = queue.on_frame_boundary(f);
            for (const PacketRecord& pkt : boundary.departures) {
                ++result.total_departures;
                trace(ev.time, "departure", pkt.appl_id, pkt.transport_seq,
                      pkt.size_bits, f,
                      to_string(pkt.is_random ? Access::random : Access::dedicated));
                events.push(ev.time + half_rtt, EventKind::delivery_at_sink,
                            pkt.appl_id, pkt.transport_seq, pkt.size_bits);
            }
            for (const PacketRecord& pkt : boundary.losses) {
                ++result.total_departures;
                ++result.total_losses;
                ++result.flow_stats[pkt.appl_id].losses;
                trace(ev.time, "loss", pkt.appl_id, pkt.transport_seq,
                      pkt.size_bits, f,
                      to_string(pkt.is_random ? Access::random : Access::dedicated));
                events.push(ev.time + half_rtt, EventKind::ack_at_source,
                            pkt.appl_id, pkt.transport_seq, 0, true);
            }
            break;
        }
        case EventKind::packet_arrival_at_queue:
            enqueue_datagram(ev.time, ev.flow, ev.seq, ev.bits);
            break;
        case EventKind::delivery_at_sink: {
            const Count cum = sink.on_delivery(ev.time, ev.flow, ev.seq, ev.bits);
            result.deliveries.push_back({ev.time, ev.flow, ev.seq, ev.bits});
            FlowStats& stats = result.flow_stats[ev.flow];
            if (stats.first_delivery < 0) stats.first_delivery = ev.time;
            stats.delivered_bytes += ev.bits / 8;
            ++stats.delivered_packets;
            const auto it = first_enqueue.find({ev.flow, ev.seq});
            if (it != first_enqueue.end())
                stats.total_delay_s += ticks_to_seconds(ev.time - it->second);
            trace(ev.time, "delivery", ev.flow, ev.seq, ev.bits, -1, "");
            if (window_sources[static_cast<std::size_t>(ev.flow)])
                events.push(ev.time + half_rtt, EventKind::ack_at_source,
                            ev.flow, cum);
            break;
        }
        case EventKind::ack_at_source: {
            const auto i = static_cast<std::size_t>(ev.flow);
            if (!window_sources[i]) break;
            if (ev.loss_signal)
                window_sources[i]->on_loss(ev.seq);
            else
                window_sources[i]->on_ack(ev.seq);
            pump_window_source(ev.time, i);
            break;
        }
        case EventKind::source_tick: {
            const auto i = static_cast<std::size_t>(ev.flow);
            if (window_sources[i]) {
                pump_window_source(ev.time, i);
            } else if (cbr_sources[i]) {
                enqueue_datagram(ev.time, ev.flow, cbr_sources[i]->take_seq(),
                                 cbr_sources[i]->datagram_bits());
                events.push(ev.time + cbr_sources[i]->interval_ticks(),
                            EventKind::source_tick, ev.flow);
            }
            break;
        }
        }
    }
    return result;
}

}  // namespace pca
