#pragma once

#include <vector>

#include "pca/types.hpp"

namespace pca {

// Static geometry of the MF-TDMA frame: every T_F seconds one frame of
// N_S x (F_R + F_D) slots is scheduled, F_R frequencies carrying random
// access and F_D dedicated access. Random access is organised in RA blocks
// of ra_block_freqs frequencies; one PLDU occupies blocks_per_pldu slots of
// its RA block and carries bits_per_ra_allocation useful bits. A dedicated
// slot carries bits_per_slot_dedicated useful bits.
struct FrameConfig {
    double frame_duration = 0.0;       // T_F, seconds
    Count slots_per_freq = 0;          // N_S
    Count freq_random = 0;             // F_R
    Count freq_dedicated = 0;          // F_D
    double ra_block_freqs = 0.0;       // frequencies per RA block (may be fractional)
    Bits bits_per_slot_dedicated = 0;  // useful bits per dedicated slot
    Bits bits_per_ra_allocation = 0;   // useful bits per PLDU on an RA block
    Count blocks_per_pldu = 0;         // N_block
    bool antenna_limited = true;       // transmitter has a single antenna
    double max_throughput_bps = 0.0;   // per-flow authorized throughput

    Ticks frame_ticks() const { return seconds_to_ticks(frame_duration); }

    // Slots spanned by one RA block (fractional frequency counts are allowed;
    // the slot count is truncated).
    Count ra_block_slots() const {
        return floor_product(ra_block_freqs, static_cast<double>(slots_per_freq));
    }

    // RA blocks available per frame.
    Count ra_block_count() const {
        const Count nra = ra_block_slots();
        if (nra <= 0) return 0;
        return slots_per_freq * freq_random / nra;
    }

    void validate() const {
        if (frame_duration <= 0.0) throw ConfigError("frame_duration must be > 0");
        if (slots_per_freq < 0) throw ConfigError("slots_per_freq must be >= 0");
        if (freq_random < 0) throw ConfigError("freq_random must be >= 0");
        if (freq_dedicated < 0) throw ConfigError("freq_dedicated must be >= 0");
        if (max_throughput_bps < 0.0) throw ConfigError("max_throughput must be >= 0");
        if (freq_random > 0) {
            if (blocks_per_pldu < 1)
                throw ConfigError("blocks_per_pldu must be >= 1 when random frequencies exist");
            if (ra_block_freqs <= 0.0)
                throw ConfigError("ra_block_freqs must be > 0 when random frequencies exist");
        }
    }
};

// One flow's grant for one frame.
struct SlotBudget {
    Access access = Access::dedicated;
    Count slots_granted = 0;  // dedicated slots, or PLDU allocations for random
    Bits bits_granted = 0;
};

inline Count total_slots_per_frame(const FrameConfig& cfg) {
    return cfg.slots_per_freq * (cfg.freq_random + cfg.freq_dedicated);
}

// Most slots a single user can occupy in one frame. With a single antenna the
// user is confined to one frequency's worth of slots. For random access the
// result counts PLDU allocations (each occupying blocks_per_pldu slots).
inline Count per_user_slot_limit(const FrameConfig& cfg, Access access) {
    if (access == Access::dedicated) {
        return cfg.antenna_limited ? cfg.slots_per_freq
                                   : cfg.slots_per_freq * cfg.freq_dedicated;
    }
    if (cfg.blocks_per_pldu < 1)
        throw ConfigError("per_user_slot_limit: random access requires blocks_per_pldu >= 1");
    const Count slots = cfg.antenna_limited ? cfg.slots_per_freq
                                            : cfg.slots_per_freq * cfg.freq_random;
    return slots / cfg.blocks_per_pldu;
}

// Max-min fair integer split of slots_available among n_users. Shares differ
// by at most one; remainder slots go to earlier-arrived flows.
inline std::vector<Count> fair_share(Count slots_available, Count n_users) {
    std::vector<Count> shares;
    if (n_users <= 0) return shares;
    const Count base = slots_available / n_users;
    const Count remainder = slots_available % n_users;
    shares.assign(static_cast<std::size_t>(n_users), base);
    for (Count i = 0; i < remainder; ++i) shares[static_cast<std::size_t>(i)] += 1;
    return shares;
}

// Bits one flow may be granted in a single frame.
inline Bits per_flow_frame_bit_cap(const FrameConfig& cfg) {
    return floor_product(cfg.max_throughput_bps, cfg.frame_duration);
}

}  // namespace pca
