#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pca/runner.hpp"

namespace {

std::vector<int> parse_flows_list(const std::string& text) {
    std::vector<int> out;
    std::string token;
    std::istringstream in(text);
    while (std::getline(in, token, ',')) {
        if (token.empty()) continue;
        try {
            std::size_t used = 0;
            const int n = std::stoi(token, &used);
            if (used != token.size()) throw std::invalid_argument(token);
            out.push_back(n);
        } catch (const std::exception&) {
            throw pca::ConfigError("bad flow count '" + token + "' in flows list");
        }
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"MF-TDMA shared link access simulator"};
    app.require_subcommand(1);

    pca::RunOptions run_opt;
    auto* run_cmd = app.add_subcommand("run", "simulate one scenario");
    run_cmd->add_option("--config", run_opt.config_path, "parameter file")->required();
    run_cmd->add_option("--ra-table", run_opt.ra_table_path,
                        "random access performance table");
    run_cmd->add_option("--seed", run_opt.seed, "random seed");
    run_cmd->add_option("--duration", run_opt.duration_s, "simulated seconds");
    run_cmd->add_option("--flows", run_opt.n_flows, "greedy window flows at t=0");
    run_cmd->add_option("--cbr", run_opt.cbr_mbps, "add one CBR flow (Mbps)");
    run_cmd->add_option("--out", run_opt.out_dir, "output directory");

    pca::SweepOptions sweep_opt;
    std::string flows_list;
    auto* sweep_cmd = app.add_subcommand("sweep", "load sweep over flow counts");
    sweep_cmd->add_option("--config", sweep_opt.config_path, "parameter file")->required();
    sweep_cmd->add_option("--ra-table", sweep_opt.ra_table_path,
                          "random access performance table");
    sweep_cmd->add_option("--flows-list", flows_list, "comma-separated flow counts")
        ->required();
    sweep_cmd->add_option("--seeds", sweep_opt.seeds, "seeds per cell (1..N)");
    sweep_cmd->add_option("--out", sweep_opt.out_dir, "output directory");

    CLI11_PARSE(app, argc, argv);

    if (run_cmd->parsed()) return pca::cmd_run(run_opt);
    try {
        sweep_opt.flows_list = parse_flows_list(flows_list);
    } catch (const std::exception& e) {
        std::cerr << "pca_sim sweep: " << e.what() << "\n";
        return 2;
    }
    return pca::cmd_sweep(sweep_opt);
}
