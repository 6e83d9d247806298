// trivine: fit, sweep and simulate trivariate vine copula mixed models.

#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "trivine/run.hpp"

namespace {

using namespace trivine;

std::vector<Permutation> parse_perms(const std::vector<std::string>& items) {
    std::vector<Permutation> out;
    for (const auto& item : items) {
        if (item == "all") {
            for (const auto& p : enumerate_permutations()) out.push_back(p);
            continue;
        }
        std::size_t used = 0;
        int idx = 0;
        try {
            idx = std::stoi(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != item.size() || item.empty())
            throw std::invalid_argument("permutation must be 1, 2, 3 or all, got '" + item + "'");
        out.push_back(permutation_from_index(idx));
    }
    return out;
}

struct Options {
    std::string data, scenario, baseline = "default", json, report;
    std::vector<std::string> margins{"normal"}, families{"BVN"}, perms{"1"};
    bool truncate = false;
    int nq = 15, starts = 3, max_iter = 500, threads = 1;
    std::optional<std::uint64_t> seed;
};

void add_model_options(CLI::App* cmd, Options& o, bool multi) {
    cmd->add_option("--data", o.data, "CSV with columns study_id,tp,fp,fn,tn")->required();
    if (multi) {
        cmd->add_option("--margins", o.margins, "normal and/or beta")->delimiter(',');
        cmd->add_option("--families", o.families,
                        "family tokens: F (every edge), F1/F2 (truncated) or F1/F2/F3")
            ->delimiter(',');
        cmd->add_option("--perms", o.perms, "permutation indices 1-3 or all")->delimiter(',');
    } else {
        cmd->add_option("--margin", o.margins, "normal or beta")->expected(1);
        cmd->add_option("--families", o.families, "F (every edge), F1/F2 (truncated) or F1/F2/F3")->expected(1);
        cmd->add_option("--perm", o.perms, "permutation index 1-3")->expected(1);
    }
    cmd->add_flag("--truncate", o.truncate, "conditional edge set to independence");
    cmd->add_option("--nq", o.nq, "Gauss-Legendre nodes per dimension")->capture_default_str();
    cmd->add_option("--starts", o.starts, "optimizer starts per model")->capture_default_str();
    cmd->add_option("--max-iter", o.max_iter, "optimizer iteration limit")->capture_default_str();
    cmd->add_option("--seed", o.seed, "recorded in the output");
    cmd->add_option("--baseline", o.baseline, "Vuong baseline: default, none, or margin:families[:perm]")
        ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Trivariate vine copula mixed models for diagnostic test accuracy meta-analysis"};
    app.require_subcommand(1);
    Options o;

    auto* fit_cmd = app.add_subcommand("fit", "fit one model");
    add_model_options(fit_cmd, o, false);
    auto* sweep_cmd = app.add_subcommand("sweep", "fit every margin x family x permutation combination");
    add_model_options(sweep_cmd, o, true);
    auto* sim_cmd = app.add_subcommand("simulate", "run a simulation scenario");
    sim_cmd->add_option("--scenario", o.scenario, "scenario file (key = value lines)")->required();
    sim_cmd->add_option("--seed", o.seed, "random seed")->required();

    for (auto* cmd : {fit_cmd, sweep_cmd, sim_cmd}) {
        cmd->add_option("--json", o.json, "write the result document here");
        cmd->add_option("--report", o.report, "write the text report here (default: stdout)");
        cmd->add_option("--threads", o.threads, "worker threads")->capture_default_str();
    }

    CLI11_PARSE(app, argc, argv);

    RunConfig config;
    try {
        config.command = fit_cmd->parsed() ? Command::Fit : (sweep_cmd->parsed() ? Command::Sweep : Command::Simulate);
        config.data_path = o.data;
        config.scenario_path = o.scenario;
        config.margins.clear();
        for (const auto& m : o.margins) config.margins.push_back(parse_margin(m));
        config.families = o.families;
        config.perms = parse_perms(o.perms);
        config.truncate = o.truncate;
        config.nq = o.nq;
        config.starts = o.starts;
        config.max_iter = o.max_iter;
        config.seed = o.seed;
        config.baseline = o.baseline;
        config.json_path = o.json;
        config.report_path = o.report;
        config.threads = o.threads;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return run(config, std::cout, std::cerr);
}
