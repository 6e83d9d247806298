#include "trivine/run.hpp"

#include <fstream>
#include <iostream>
#include <stdexcept>

#include "trivine/special.hpp"

namespace trivine {

void validate(const RunConfig& c) {
    if (c.nq < 5) throw std::invalid_argument("nq must be at least 5");
    if (c.starts < 1) throw std::invalid_argument("starts must be at least 1");
    if (c.max_iter < 1) throw std::invalid_argument("max-iter must be at least 1");
    if (c.threads < 1) throw std::invalid_argument("threads must be at least 1");
    if (c.command == Command::Simulate) {
        if (c.scenario_path.empty()) throw std::invalid_argument("simulate needs a scenario file");
        if (!c.seed) throw std::invalid_argument("simulate needs --seed");
        return;
    }
    if (c.data_path.empty()) throw std::invalid_argument("no data file given");
    if (c.margins.empty() || c.families.empty() || c.perms.empty())
        throw std::invalid_argument("margin, family and permutation selections must be nonempty");
    if (c.command == Command::Fit && (c.margins.size() != 1 || c.families.size() != 1 || c.perms.size() != 1))
        throw std::invalid_argument("fit takes a single margin, family set and permutation; use sweep for more");
    for (const auto& f : c.families) parse_families(f);
    baseline_spec(c);
}

std::vector<ModelSpec> config_specs(const RunConfig& c) {
    std::vector<std::array<CopulaFamily, 3>> fams;
    for (const auto& f : c.families) fams.push_back(parse_families(f));
    return enumerate_specs(c.margins, fams, c.perms, c.truncate);
}

std::optional<ModelSpec> baseline_spec(const RunConfig& c) {
    if (c.baseline == "none") return std::nullopt;
    if (c.baseline == "default" || c.baseline.empty()) {
        ModelSpec s;
        s.margin = MarginKind::NormalLogit;
        s.perm = permutation_from_index(1);
        s.families = {CopulaFamily::BVN, CopulaFamily::BVN,
                      c.truncate ? CopulaFamily::Independence : CopulaFamily::BVN};
        return s;
    }
    return parse_model(c.baseline);
}

namespace {

Json config_json(const RunConfig& c) {
    Json j;
    j["command"] = c.command == Command::Fit ? "fit" : (c.command == Command::Sweep ? "sweep" : "simulate");
    Json m = Json::array();
    for (auto k : c.margins) m.push_back(std::string(margin_name(k)));
    j["margins"] = m;
    j["families"] = c.families;
    Json p = Json::array();
    for (const auto& x : c.perms) p.push_back(permutation_index(x));
    j["permutations"] = p;
    j["truncate"] = c.truncate;
    j["nq"] = c.nq;
    j["starts"] = c.starts;
    j["max_iter"] = c.max_iter;
    j["seed"] = c.seed ? Json(*c.seed) : Json(nullptr);
    j["baseline"] = c.baseline;
    return j;
}

}  // namespace

RunOutput run_fit(const RunConfig& config, const InputTable& input) {
    validate(config);
    const auto data = input.records();
    if (data.size() < 2) throw std::invalid_argument("at least two studies are needed for a fit");

    FitOptions opt;
    opt.nq = config.nq;
    opt.starts = config.starts;
    opt.max_iter = config.max_iter;

    const auto specs = config_specs(config);
    const auto results = sweep(data, specs, opt, config.threads);

    std::optional<FitResult> baseline;
    bool baseline_in_results = false;
    if (const auto b = baseline_spec(config)) {
        for (const auto& r : results)
            if (r.fit.spec == *b) {
                baseline = r.fit;
                baseline_in_results = true;
            }
        if (!baseline) {
            try {
                baseline = fit(data, *b, opt);
            } catch (const std::exception& e) {
                FitResult f;
                f.spec = *b;
                f.n_params = n_params(*b);
                f.message = e.what();
                f.loglik = f.aic = kNaN;
                baseline = f;
            }
        }
    }
    const FitResult* base = baseline && baseline->status != FitStatus::Failed ? &*baseline : nullptr;

    RunOutput out;
    out.warnings = input.warnings;
    Json doc;
    doc["schema"] = kFitSchema;
    doc["version"] = kSchemaVersion;
    doc["config"] = config_json(config);
    doc["n_studies"] = data.size();
    doc["warnings"] = input.warnings;
    Json res = Json::array();
    for (std::size_t i = 0; i < results.size(); ++i)
        res.push_back(fit_result_json(results[i].fit, static_cast<int>(i) + 1, base));
    doc["results"] = res;
    if (baseline && !baseline_in_results)
        doc["baseline"] = fit_result_json(*baseline, std::nullopt, nullptr);
    else
        doc["baseline"] = baseline ? Json(model_label(baseline->spec)) : Json(nullptr);
    check_aic_consistency(doc);
    out.document = std::move(doc);
    out.text = fit_text_report(results, base);
    return out;
}

RunOutput run_simulation(const RunConfig& config, SimScenario scenario) {
    if (config.seed) scenario.seed = *config.seed;
    const SimReport report = run_study(scenario, config.threads);
    RunOutput out;
    out.document = sim_report_json(report);
    out.text = sim_text_report(report);
    return out;
}

namespace {

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write '" + path + "'");
    f << content;
    if (!f) throw std::runtime_error("error writing '" + path + "'");
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    RunOutput result;
    try {
        validate(config);
        if (config.command == Command::Simulate) {
            result = run_simulation(config, read_scenario(config.scenario_path));
        } else {
            result = run_fit(config, read_input(config.data_path));
        }
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    for (const auto& w : result.warnings) err << "warning: " << w << '\n';
    try {
        const std::string json = result.document.dump(2) + "\n";
        if (!config.json_path.empty()) write_file(config.json_path, json);
        if (!config.report_path.empty()) write_file(config.report_path, result.text);
        if (config.report_path.empty()) out << result.text;
        if (config.json_path.empty() && !config.report_path.empty()) out << json;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace trivine
