#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pca/config_io.hpp"
#include "pca/engine.hpp"
#include "pca/types.hpp"

namespace pca {

struct RunOptions {
    std::string config_path;
    std::string ra_table_path;  // empty = none
    std::uint64_t seed = 1;
    double duration_s = 20.0;
    int n_flows = 1;            // greedy window flows starting at t=0
    double cbr_mbps = 0.0;      // > 0 adds one constant bit rate flow
    std::string out_dir = ".";
};

struct SweepOptions {
    std::string config_path;
    std::string ra_table_path;
    std::vector<int> flows_list;
    int seeds = 1;
    double duration_s = 20.0;
    std::string out_dir = ".";
};

namespace detail {

inline std::string fmt_f(double v, int precision = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", precision, v);
    return buf;
}

inline std::string load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

inline RunConfig build_run_config(const std::string& config_path,
                                  const std::string& ra_table_path) {
    const ParsedConfig parsed = parse_config(load_file(config_path));
    RunConfig cfg;
    cfg.frame = parsed.frame;
    cfg.queue = parsed.queue;
    if (!ra_table_path.empty())
        cfg.ra_table = parse_ra_table(load_file(ra_table_path));
    return cfg;
}

inline void write_trace_csv(const std::string& path,
                            const std::vector<TraceRow>& trace) {
    std::ofstream out(path);
    out << "time_s,event,flow_id,seqno,bytes,frame_index,detail\n";
    for (const TraceRow& row : trace) {
        out << fmt_f(ticks_to_seconds(row.time)) << ',' << row.event << ',';
        if (row.flow >= 0) out << row.flow;
        out << ',';
        if (row.seq >= 0) out << row.seq;
        out << ',';
        if (row.bytes >= 0) out << row.bytes;
        out << ',';
        if (row.frame >= 0) out << row.frame;
        out << ',' << row.detail << '\n';
    }
}

inline void write_flows_csv(const std::string& path, const RunResult& result,
                            std::size_t n_flows) {
    std::ofstream out(path);
    out << "flow_id,first_delivery_s,delivered_bytes,losses,mean_delay_s\n";
    for (std::size_t i = 0; i < n_flows; ++i) {
        const auto it = result.flow_stats.find(static_cast<FlowId>(i));
        out << i << ',';
        if (it != result.flow_stats.end() && it->second.first_delivery >= 0)
            out << fmt_f(ticks_to_seconds(it->second.first_delivery));
        out << ',';
        out << (it != result.flow_stats.end() ? it->second.delivered_bytes : 0) << ',';
        out << (it != result.flow_stats.end() ? it->second.losses : 0) << ',';
        if (it != result.flow_stats.end() && it->second.delivered_packets > 0)
            out << fmt_f(it->second.total_delay_s /
                         static_cast<double>(it->second.delivered_packets));
        out << '\n';
    }
}

inline void write_summary_csv(const std::string& path, const RunResult& result) {
    std::ofstream out(path);
    out << "time_s,throughput_mbps\n";
    for (const ThroughputPoint& p :
         measure_throughput(result.deliveries, 1.0, result.duration_s))
        out << fmt_f(p.time_s) << ',' << fmt_f(p.mbps) << '\n';
}

inline double mean_link_throughput_mbps(const RunResult& result) {
    double bits = 0.0;
    for (const Delivery& d : result.deliveries) bits += static_cast<double>(d.bits);
    return bits / result.duration_s / 1e6;
}

inline double loss_rate(const RunResult& result) {
    if (result.total_departures == 0) return 0.0;
    return static_cast<double>(result.total_losses) /
           static_cast<double>(result.total_departures);
}

inline std::string access_mode_name(const QueueSettings& queue) {
    if (queue.switch_threshold == 0.0) return "dedicated";
    if (std::isinf(queue.switch_threshold)) return "random";
    return "mixed";
}

}  // namespace detail

inline int cmd_run(const RunOptions& opt) {
    try {
        RunConfig cfg = detail::build_run_config(opt.config_path, opt.ra_table_path);
        cfg.seed = opt.seed;
        cfg.duration_s = opt.duration_s;
        for (int i = 0; i < opt.n_flows; ++i)
            cfg.flows.push_back({FlowSpec::Kind::window, 0.0, 0.0, 12000});
        if (opt.cbr_mbps > 0.0)
            cfg.flows.push_back({FlowSpec::Kind::cbr, 0.0, opt.cbr_mbps, 12000});

        const RunResult result = run(cfg);

        namespace fs = std::filesystem;
        fs::create_directories(opt.out_dir);
        detail::write_trace_csv((fs::path(opt.out_dir) / "trace.csv").string(),
                                result.trace);
        detail::write_flows_csv((fs::path(opt.out_dir) / "flows.csv").string(),
                                result, cfg.flows.size());
        detail::write_summary_csv((fs::path(opt.out_dir) / "summary.csv").string(),
                                  result);
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "pca_sim run: " << e.what() << "\n";
        return 2;
    }
}

inline int cmd_sweep(const SweepOptions& opt) {
    try {
        if (opt.flows_list.empty()) throw ConfigError("empty flows list");
        if (opt.seeds < 1) throw ConfigError("seeds must be >= 1");
        const RunConfig base =
            detail::build_run_config(opt.config_path, opt.ra_table_path);
        const std::string access = detail::access_mode_name(base.queue);

        namespace fs = std::filesystem;
        fs::create_directories(opt.out_dir);
        std::ofstream out(fs::path(opt.out_dir) / "sweep.csv");
        out << "access_mode,n_flows,seed,mean_link_throughput_mbps,loss_rate\n";
        for (int n : opt.flows_list) {
            if (n < 1) throw ConfigError("flow counts must be >= 1");
            for (int seed = 1; seed <= opt.seeds; ++seed) {
                RunConfig cfg = base;
                cfg.seed = static_cast<std::uint64_t>(seed);
                cfg.duration_s = opt.duration_s;
                cfg.record_trace = false;
                for (int i = 0; i < n; ++i)
                    cfg.flows.push_back({FlowSpec::Kind::window, 0.0, 0.0, 12000});
                const RunResult result = run(cfg);
                out << access << ',' << n << ',' << seed << ','
                    << detail::fmt_f(detail::mean_link_throughput_mbps(result))
                    << ',' << detail::fmt_f(detail::loss_rate(result)) << '\n';
            }
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "pca_sim sweep: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace pca
