#pragma once

#include <algorithm>
#include <deque>
#include <unordered_map>
#include <vector>

#include "pca/frame_model.hpp"
#include "pca/ra_table.hpp"
#include "pca/rng.hpp"
#include "pca/types.hpp"

namespace pca {

// Emulates channel access as queueing delay. Time is cut into frames of T_F;
// the frame that is transmitted during [k*T_F, (k+1)*T_F) is delivered at the
// boundary (k+1)*T_F. Frame boundary k runs three steps:
//
//   1. departures: packets with frame_out == k leave the queue;
//   2. slot budgets for service frame k+1 (the window starting now) are
//      derived per flow from the frame geometry;
//   3. the packet list is swept in FIFO order and bits_next_frame is fixed
//      for every packet allowed to transmit in service frame k+1, i.e. those
//      with frame_in < k+1.
//
// Transmission is granted in whole units (dedicated slots, or PLDU
// allocations for random access). When a grant covers the rest of a packet,
// frame_out becomes k+1 and the flow's next queued packet inherits frame_in=k
// plus the padding surplus of the final unit, so back-to-back datagrams pack
// the frame like a byte stream. A fresh dedicated flow first spends
// ceil(rtt/T_F) frames on reservation negotiation; random access starts at
// the next frame. Random grants draw a loss against the RA performance table
// once per packet per frame; a lost packet still occupies its frames and is
// reported lost when it would have departed.
//
// A queue belongs to one simulation instance: callers serialize enque and
// on_frame_boundary by simulation time.
struct PacketRecord {
    FlowId appl_id = 0;
    Count pkt_seqno = 0;      // sequence within the connection (resets on reopen)
    Count transport_seq = 0;  // caller's datagram number, carried through
    FrameIndex frame_in = kFrameNever;
    FrameIndex frame_out = kFrameNever;
    bool establishing = false;  // connection setup pending when enqueued
    bool lost = false;
    bool is_random = false;
    Bits bits_to_send = 0;
    Bits bits_next_frame = 0;
    Count remaining_slots_det = 0;   // flow's dedicated slots left this frame
    Count remaining_allocs_rnd = 0;  // flow's PLDU allocations left this frame
    Count used_allocs_rnd = 0;       // PLDU allocations this packet uses next frame
    Bits size_bits = 0;
    Ticks enqueue_ticks = 0;
};

struct FlowRecord {
    FlowId appl_id = 0;
    Count pkt_seq = -1;        // last transmitted sequence number
    Ticks last_time_out = 0;   // when the flow's last packet departed
    Count next_seqno = 0;
    Count arrival_index = 0;   // fixed at first sight; tie-break for fair share
    Count queued = 0;          // packets not yet departed
};

enum class ConnState { fresh, open, reopened };

struct QueueSettings {
    double esn0_db = 0.0;
    double switch_threshold = 0.0;  // pkt_seqno below this uses random access
    double cut_connect_s = 3.0;
    double rtt_s = 0.0;
    std::size_t max_queue_packets = 0;  // 0 = unbounded
};

inline Access access_method_for(Count pkt_seqno, double switch_threshold) {
    return static_cast<double>(pkt_seqno) < switch_threshold ? Access::random
                                                             : Access::dedicated;
}

class PcaQueue {
public:
    struct BoundaryResult {
        std::vector<PacketRecord> departures;
        std::vector<PacketRecord> losses;
    };

    struct FlowBudget {
        Access access = Access::dedicated;
        Count quanta_left = 0;  // slots (dedicated) or PLDU allocations (random)
        Bits quantum = 0;       // bits per unit
        Count ra_block = -1;
        double loss_p = 0.0;
    };
    using BudgetMap = std::unordered_map<FlowId, FlowBudget>;

    PcaQueue(FrameConfig frame, QueueSettings settings,
             const RaPerformanceTable* table, Rng* rng)
        : frame_(frame), settings_(settings), table_(table), rng_(rng) {
        frame_.validate();
        establishment_frames_ =
            ceil_div(seconds_to_ticks(settings_.rtt_s), frame_.frame_ticks());
        cut_connect_ticks_ = seconds_to_ticks(settings_.cut_connect_s);
    }

    // A flow with traffic still in the queue is open by definition; once it
    // drains, the gap since its last departure decides.
    ConnState connection_check(FlowId flow, Ticks now) const {
        const auto it = flows_.find(flow);
        if (it == flows_.end()) return ConnState::fresh;
        if (it->second.queued > 0) return ConnState::open;
        if (now - it->second.last_time_out > cut_connect_ticks_)
            return ConnState::reopened;
        return ConnState::open;
    }

    // Registers one datagram. Returns false when a capacity bound is set and
    // the queue is full (the packet is dropped on arrival).
    bool enque(FlowId flow, Bits size_bits, Count transport_seq, Ticks now) {
        if (settings_.max_queue_packets > 0 &&
            packets_.size() >= settings_.max_queue_packets)
            return false;
        const ConnState state = connection_check(flow, now);
        FlowRecord& rec = flows_[flow];
        if (state == ConnState::fresh) {
            rec.appl_id = flow;
            rec.arrival_index = static_cast<Count>(flows_.size()) - 1;
            rec.last_time_out = now;
            arrival_order_.push_back(flow);
        } else if (state == ConnState::reopened) {
            rec.next_seqno = 0;
            rec.pkt_seq = -1;
        }
        PacketRecord pkt;
        pkt.appl_id = flow;
        pkt.pkt_seqno = rec.next_seqno++;
        pkt.transport_seq = transport_seq;
        pkt.is_random = access_method_for(pkt.pkt_seqno, settings_.switch_threshold) ==
                        Access::random;
        pkt.bits_to_send = size_bits;
        pkt.size_bits = size_bits;
        pkt.enqueue_ticks = now;
        auto& queue_positions = positions_[flow];
        const bool head_of_line = queue_positions.empty();
        if (head_of_line) {
            pkt.establishing = state != ConnState::open;
            pkt.frame_in = current_frame_;
            if (pkt.establishing && !pkt.is_random)
                pkt.frame_in += establishment_frames_;
        }
        queue_positions.push_back(packets_.size());
        packets_.push_back(pkt);
        ++rec.queued;
        return true;
    }

    // One frame boundary: departures for frame f, then the capacity
    // distribution for service frame f+1.
    BoundaryResult on_frame_boundary(FrameIndex f) {
        current_frame_ = f;
        BoundaryResult result = collect_departures(f);
        BudgetMap budgets = allocate_slots(f + 1);
        adapt_bits_next_frame(f, budgets);
        return result;
    }

    // Per-flow budgets for one service frame. Dedicated flows split the
    // dedicated slots max-min fair, capped by the antenna limit and by the
    // per-flow throughput cap; random flows each get up to their PLDU limit
    // on the RA block they are assigned round-robin by flow arrival order.
    BudgetMap allocate_slots(FrameIndex service_frame) {
        BudgetMap budgets;
        std::vector<FlowId> ded_active;
        std::vector<FlowId> rnd_active;
        for (FlowId flow : arrival_order_) {
            const auto pos = positions_.find(flow);
            if (pos == positions_.end() || pos->second.empty()) continue;
            const PacketRecord& head = packets_[pos->second.front()];
            if (head.frame_in >= service_frame) continue;
            (head.is_random ? rnd_active : ded_active).push_back(flow);
        }
        const Bits bit_cap = per_flow_frame_bit_cap(frame_);

        const Count ded_slots = frame_.slots_per_freq * frame_.freq_dedicated;
        const std::vector<Count> shares =
            fair_share(ded_slots, static_cast<Count>(ded_active.size()));
        for (std::size_t i = 0; i < ded_active.size(); ++i) {
            FlowBudget b;
            b.access = Access::dedicated;
            b.quantum = frame_.bits_per_slot_dedicated;
            Count cap = per_user_slot_limit(frame_, Access::dedicated);
            if (b.quantum > 0) cap = std::min(cap, bit_cap / b.quantum);
            b.quanta_left = std::min(shares[i], cap);
            budgets.emplace(ded_active[i], b);
        }

        if (!rnd_active.empty()) {
            const Count n_blocks = frame_.ra_block_count();
            std::vector<Count> users_per_block(
                static_cast<std::size_t>(std::max<Count>(n_blocks, 1)), 0);
            for (std::size_t i = 0; i < rnd_active.size(); ++i)
                if (n_blocks > 0) ++users_per_block[i % n_blocks];
            for (std::size_t i = 0; i < rnd_active.size(); ++i) {
                FlowBudget b;
                b.access = Access::random;
                b.quantum = frame_.bits_per_ra_allocation;
                Count cap = per_user_slot_limit(frame_, Access::random);
                if (b.quantum > 0) cap = std::min(cap, bit_cap / b.quantum);
                b.quanta_left = n_blocks > 0 ? cap : 0;
                if (n_blocks > 0) {
                    b.ra_block = static_cast<Count>(i) % n_blocks;
                    if (!table_)
                        throw ConfigError("random access requires a performance table");
                    b.loss_p = loss_probability(
                        *table_, settings_.esn0_db,
                        users_per_block[static_cast<std::size_t>(b.ra_block)]);
                }
                budgets.emplace(rnd_active[i], b);
            }
        }
        return budgets;
    }

    // Fixes bits_next_frame for service frame f+1.
    void adapt_bits_next_frame(FrameIndex f, BudgetMap& budgets) {
        const FrameIndex service_frame = f + 1;
        for (std::size_t i = 0; i < packets_.size(); ++i) {
            PacketRecord& pkt = packets_[i];
            if (pkt.frame_out != kFrameNever) continue;
            if (pkt.frame_in >= service_frame) continue;
            const Bits b_remaining = pkt.bits_to_send - pkt.bits_next_frame;
            if (b_remaining <= 0) {
                // Fully carried in the predecessor's final allocation.
                pkt.bits_to_send = 0;
                pkt.bits_next_frame = 0;
                finish_packet(i, f, -b_remaining);
                continue;
            }
            auto it = budgets.find(pkt.appl_id);
            FlowBudget* budget = it != budgets.end() ? &it->second : nullptr;
            const bool kind_matches =
                budget && (budget->access == Access::random) == pkt.is_random;
            Count granted = 0;
            Bits granted_bits = 0;
            if (kind_matches && budget->quantum > 0) {
                granted = std::min(ceil_div(b_remaining, budget->quantum),
                                   budget->quanta_left);
                granted_bits = granted * budget->quantum;
                budget->quanta_left -= granted;
            }
            if (pkt.is_random) {
                pkt.used_allocs_rnd = granted;
                pkt.remaining_allocs_rnd = kind_matches ? budget->quanta_left : 0;
                if (granted > 0 && budget->loss_p > 0.0 &&
                    draw_loss(budget->loss_p, *rng_))
                    pkt.lost = true;
            } else {
                pkt.remaining_slots_det = kind_matches ? budget->quanta_left : 0;
            }
            pkt.bits_to_send = b_remaining;
            if (granted_bits >= b_remaining) {
                pkt.bits_next_frame = b_remaining;
                finish_packet(i, f, granted_bits - b_remaining);
            } else {
                pkt.bits_next_frame = granted_bits;
            }
        }
    }

    FrameIndex current_frame() const { return current_frame_; }
    FrameIndex establishment_frames() const { return establishment_frames_; }
    const std::vector<PacketRecord>& packets() const { return packets_; }
    const FlowRecord* flow(FlowId id) const {
        const auto it = flows_.find(id);
        return it == flows_.end() ? nullptr : &it->second;
    }

private:
    void finish_packet(std::size_t index, FrameIndex f, Bits surplus) {
        PacketRecord& pkt = packets_[index];
        pkt.frame_out = f + 1;
        auto& queue_positions = positions_[pkt.appl_id];
        queue_positions.pop_front();  // this packet is its flow's head
        if (!queue_positions.empty()) {
            PacketRecord& next = packets_[queue_positions.front()];
            next.frame_in = f;
            next.bits_to_send -= surplus;
        }
    }

    BoundaryResult collect_departures(FrameIndex f) {
        BoundaryResult result;
        std::vector<PacketRecord> kept;
        kept.reserve(packets_.size());
        for (PacketRecord& pkt : packets_) {
            if (pkt.frame_out != f) {
                kept.push_back(pkt);
                continue;
            }
            FlowRecord& rec = flows_[pkt.appl_id];
            rec.pkt_seq = pkt.pkt_seqno;
            rec.last_time_out = f * frame_.frame_ticks();
            --rec.queued;
            (pkt.lost ? result.losses : result.departures).push_back(pkt);
        }
        packets_.swap(kept);
        rebuild_positions();
        return result;
    }

    void rebuild_positions() {
        for (auto& [flow, queue_positions] : positions_) queue_positions.clear();
        for (std::size_t i = 0; i < packets_.size(); ++i)
            positions_[packets_[i].appl_id].push_back(i);
    }

    FrameConfig frame_;
    QueueSettings settings_;
    const RaPerformanceTable* table_;
    Rng* rng_;
    FrameIndex establishment_frames_ = 0;
    Ticks cut_connect_ticks_ = 0;
    FrameIndex current_frame_ = 0;
    std::vector<PacketRecord> packets_;
    std::unordered_map<FlowId, FlowRecord> flows_;
    std::unordered_map<FlowId, std::deque<std::size_t>> positions_;
    std::vector<FlowId> arrival_order_;
};

}  // namespace pca
