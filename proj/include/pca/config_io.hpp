#pragma once

#include <cctype>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <sstream>
#include <string>

#include "pca/frame_model.hpp"
#include "pca/queue.hpp"
#include "pca/types.hpp"

namespace pca {

struct ParsedConfig {
    FrameConfig frame;
    QueueSettings queue;

    bool operator==(const ParsedConfig& other) const {
        return frame.frame_duration == other.frame.frame_duration &&
               frame.slots_per_freq == other.frame.slots_per_freq &&
               frame.freq_random == other.frame.freq_random &&
               frame.freq_dedicated == other.frame.freq_dedicated &&
               frame.ra_block_freqs == other.frame.ra_block_freqs &&
               frame.bits_per_slot_dedicated == other.frame.bits_per_slot_dedicated &&
               frame.bits_per_ra_allocation == other.frame.bits_per_ra_allocation &&
               frame.blocks_per_pldu == other.frame.blocks_per_pldu &&
               frame.antenna_limited == other.frame.antenna_limited &&
               frame.max_throughput_bps == other.frame.max_throughput_bps &&
               queue.esn0_db == other.queue.esn0_db &&
               queue.switch_threshold == other.queue.switch_threshold &&
               queue.cut_connect_s == other.queue.cut_connect_s &&
               queue.rtt_s == other.queue.rtt_s;
    }
};

namespace detail {

inline const char* const kConfigKeys[] = {
    "cutConnect_",     "esN0_",           "switchAleaDet_", "frameDuration_",
    "nbSlotPerFreq_",  "sizeSlotRandom_", "sizeSlotDeter_", "rtt_",
    "freqRandom_",     "nbFreqPerRand_",  "freqDeter_",     "maxThroughtput_",
    "nbSlotRndFreqGroup_", "boolAntennaLimit_",
};

inline bool known_config_key(const std::string& key) {
    for (const char* k : kConfigKeys)
        if (key == k) return true;
    return false;
}

inline double config_number(const std::map<std::string, std::string>& kv,
                            const std::string& key) {
    const std::string& raw = kv.at(key);
    std::string lowered;
    for (char c : raw) lowered.push_back(static_cast<char>(std::tolower(c)));
    if (lowered == "inf" || lowered == "infinity")
        return std::numeric_limits<double>::infinity();
    try {
        std::size_t used = 0;
        const double v = std::stod(raw, &used);
        if (used != raw.size()) throw std::invalid_argument(raw);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("non-numeric value for " + key + ": '" + raw + "'");
    }
}

inline Count config_count(const std::map<std::string, std::string>& kv,
                          const std::string& key) {
    const double v = config_number(kv, key);
    const auto n = static_cast<Count>(v);
    if (static_cast<double>(n) != v)
        throw ConfigError(key + " must be an integer");
    return n;
}

inline void require_key(const std::map<std::string, std::string>& kv,
                        const std::string& key) {
    if (!kv.count(key)) throw ConfigError("missing required parameter " + key);
}

}  // namespace detail

// Parameter file: one `key value` pair per line, `#` comments allowed. Keys
// are the module's parameter names, including the historical spelling of
// maxThroughtput_. Parameters a configuration does not use may be omitted:
// a pure dedicated setup (switchAleaDet_ 0) needs no sizeSlotRandom_ or
// nbSlotRndFreqGroup_, a pure random one (switchAleaDet_ inf) no
// sizeSlotDeter_. maxThroughtput_ is given in Mbps.
inline ParsedConfig parse_config(std::istream& in) {
    std::map<std::string, std::string> kv;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream row(line);
        std::string key, value, extra;
        if (!(row >> key)) continue;
        if (!(row >> value))
            throw ConfigError("line " + std::to_string(line_no) +
                              ": expected 'key value'");
        if (row >> extra)
            throw ConfigError("line " + std::to_string(line_no) +
                              ": trailing content after value");
        if (!detail::known_config_key(key))
            throw ConfigError("unknown parameter " + key);
        if (kv.count(key)) throw ConfigError("duplicate parameter " + key);
        kv[key] = value;
    }

    for (const char* key : {"cutConnect_", "esN0_", "switchAleaDet_",
                            "frameDuration_", "nbSlotPerFreq_", "rtt_",
                            "freqRandom_", "freqDeter_", "maxThroughtput_",
                            "boolAntennaLimit_"})
        detail::require_key(kv, key);

    ParsedConfig cfg;
    cfg.queue.cut_connect_s = detail::config_number(kv, "cutConnect_");
    cfg.queue.esn0_db = detail::config_number(kv, "esN0_");
    cfg.queue.switch_threshold = detail::config_number(kv, "switchAleaDet_");
    cfg.queue.rtt_s = detail::config_number(kv, "rtt_");
    cfg.frame.frame_duration = detail::config_number(kv, "frameDuration_");
    cfg.frame.slots_per_freq = detail::config_count(kv, "nbSlotPerFreq_");
    cfg.frame.freq_random = detail::config_count(kv, "freqRandom_");
    cfg.frame.freq_dedicated = detail::config_count(kv, "freqDeter_");
    cfg.frame.max_throughput_bps =
        detail::config_number(kv, "maxThroughtput_") * 1e6;

    const Count antenna = detail::config_count(kv, "boolAntennaLimit_");
    if (antenna != 0 && antenna != 1)
        throw ConfigError("boolAntennaLimit_ must be 0 or 1");
    cfg.frame.antenna_limited = antenna == 1;

    if (cfg.frame.frame_duration <= 0.0)
        throw ConfigError("frameDuration_ must be > 0");
    if (cfg.queue.cut_connect_s < 0.0)
        throw ConfigError("cutConnect_ must be >= 0");
    if (cfg.queue.rtt_s < 0.0) throw ConfigError("rtt_ must be >= 0");
    if (cfg.queue.switch_threshold < 0.0)
        throw ConfigError("switchAleaDet_ must be >= 0 or inf");
    if (cfg.frame.max_throughput_bps < 0.0)
        throw ConfigError("maxThroughtput_ must be >= 0");

    const bool dedicated_in_play = !std::isinf(cfg.queue.switch_threshold);
    const bool random_in_play = cfg.queue.switch_threshold > 0.0;
    if (dedicated_in_play) {
        detail::require_key(kv, "sizeSlotDeter_");
        if (cfg.frame.freq_dedicated < 1)
            throw ConfigError("freqDeter_ must be >= 1 when dedicated access is used");
    }
    if (random_in_play) {
        detail::require_key(kv, "sizeSlotRandom_");
        detail::require_key(kv, "nbSlotRndFreqGroup_");
        detail::require_key(kv, "nbFreqPerRand_");
        if (cfg.frame.freq_random < 1)
            throw ConfigError("freqRandom_ must be >= 1 when random access is used");
    }
    if (kv.count("sizeSlotDeter_")) {
        cfg.frame.bits_per_slot_dedicated = detail::config_count(kv, "sizeSlotDeter_");
        if (dedicated_in_play && cfg.frame.bits_per_slot_dedicated < 1)
            throw ConfigError("sizeSlotDeter_ must be >= 1");
    }
    if (kv.count("sizeSlotRandom_")) {
        cfg.frame.bits_per_ra_allocation = detail::config_count(kv, "sizeSlotRandom_");
        if (random_in_play && cfg.frame.bits_per_ra_allocation < 1)
            throw ConfigError("sizeSlotRandom_ must be >= 1");
    }
    if (kv.count("nbSlotRndFreqGroup_")) {
        cfg.frame.blocks_per_pldu = detail::config_count(kv, "nbSlotRndFreqGroup_");
        if (random_in_play && cfg.frame.blocks_per_pldu < 1)
            throw ConfigError("nbSlotRndFreqGroup_ must be >= 1");
    }
    if (kv.count("nbFreqPerRand_"))
        cfg.frame.ra_block_freqs = detail::config_number(kv, "nbFreqPerRand_");
    if (random_in_play && cfg.frame.ra_block_freqs <= 0.0)
        throw ConfigError("nbFreqPerRand_ must be > 0 when random access is used");

    cfg.frame.validate();
    return cfg;
}

inline ParsedConfig parse_config(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in);
}

inline std::string serialize_config(const ParsedConfig& cfg) {
    std::ostringstream out;
    char buf[64];
    auto num = [&](double v) -> std::string {
        if (std::isinf(v)) return "inf";
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return buf;
    };
    out << "cutConnect_ " << num(cfg.queue.cut_connect_s) << "\n";
    out << "esN0_ " << num(cfg.queue.esn0_db) << "\n";
    out << "switchAleaDet_ " << num(cfg.queue.switch_threshold) << "\n";
    out << "frameDuration_ " << num(cfg.frame.frame_duration) << "\n";
    out << "nbSlotPerFreq_ " << cfg.frame.slots_per_freq << "\n";
    out << "sizeSlotRandom_ " << cfg.frame.bits_per_ra_allocation << "\n";
    out << "sizeSlotDeter_ " << cfg.frame.bits_per_slot_dedicated << "\n";
    out << "rtt_ " << num(cfg.queue.rtt_s) << "\n";
    out << "freqRandom_ " << cfg.frame.freq_random << "\n";
    out << "nbFreqPerRand_ " << num(cfg.frame.ra_block_freqs) << "\n";
    out << "freqDeter_ " << cfg.frame.freq_dedicated << "\n";
    out << "maxThroughtput_ " << num(cfg.frame.max_throughput_bps / 1e6) << "\n";
    out << "nbSlotRndFreqGroup_ " << cfg.frame.blocks_per_pldu << "\n";
    out << "boolAntennaLimit_ " << (cfg.frame.antenna_limited ? 1 : 0) << "\n";
    return out.str();
}

}  // namespace pca
