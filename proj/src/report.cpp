#include "trivine/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>

#include "trivine/special.hpp"

namespace trivine {

std::string format_g6(double x) {
    if (std::isnan(x)) return "NA";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

namespace {

Json number(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

Json optional_number(const std::optional<double>& x) { return x ? number(*x) : Json(nullptr); }

Json param_block(const ModelSpec& spec, const ParamVector& p, bool available) {
    Json out = Json::object();
    const auto names = param_names(spec);
    for (int j = 0; j < 3; ++j) out[names[j]] = available ? number(p.pi[j]) : Json(nullptr);
    for (int j = 0; j < 3; ++j) out[names[3 + j]] = available ? number(p.disp[j]) : Json(nullptr);
    std::size_t k = 6;
    for (int e = 0; e < 3; ++e)
        if (spec.families[e] != CopulaFamily::Independence) out[names[k++]] = available ? number(p.tau[e]) : Json(nullptr);
    return out;
}

}  // namespace

Json spec_json(const ModelSpec& spec) {
    Json fam = Json::array();
    for (auto f : spec.families) fam.push_back(std::string(family_name(f)));
    return Json{{"label", model_label(spec)},
                {"margin", std::string(margin_name(spec.margin))},
                {"families", fam},
                {"permutation", permutation_index(spec.perm)},
                {"permutation_edges", permutation_label(spec.perm)},
                {"truncated", spec.truncated()}};
}

Json vuong_json(const VuongResult& v) {
    return Json{{"n", v.n},
                {"adjusted", v.adjusted},
                {"mean_d", number(v.mean_d)},
                {"sd", optional_number(v.sd)},
                {"z0", optional_number(v.z0)},
                {"p", optional_number(v.p)},
                {"defined", v.z0.has_value()}};
}

Json fit_result_json(const FitResult& fit, std::optional<int> rank, const FitResult* baseline) {
    Json r;
    if (rank) r["rank"] = *rank;
    r["model"] = model_label(fit.spec);
    r["spec"] = spec_json(fit.spec);
    r["status"] = std::string(status_name(fit.status));
    r["converged"] = fit.converged;
    r["message"] = fit.message;
    r["n_params"] = fit.n_params;
    const bool have = fit.status != FitStatus::Failed;
    r["loglik"] = have ? number(fit.loglik) : Json(nullptr);
    r["aic"] = have ? number(fit.aic) : Json(nullptr);
    r["iterations"] = fit.iterations;
    r["starts_run"] = fit.starts_run;
    r["grad_max"] = have ? number(fit.grad_max) : Json(nullptr);
    r["estimates"] = param_block(fit.spec, fit.estimates, have);
    r["se_available"] = fit.se_available;
    r["se"] = param_block(fit.spec, fit.se, have && fit.se_available);
    Json theta = Json::object();
    Json flags = Json::object();
    for (int e = 0; e < 3; ++e) {
        if (fit.spec.families[e] == CopulaFamily::Independence) continue;
        const std::string label = edge_label(fit.spec.perm, e);
        theta[label] = have ? number(fit.theta[e]) : Json(nullptr);
        flags[label] = fit.boundary[e];
    }
    r["theta"] = theta;
    r["boundary_flags"] = flags;
    if (std::any_of(fit.boundary.begin(), fit.boundary.end(), [](bool b) { return b; }))
        r["advice"] = "a tau estimate is near the edge of its range; consider a truncated vine or another family";
    Json per_study = Json::array();
    for (double x : fit.per_study_loglik) per_study.push_back(number(x));
    r["per_study_loglik"] = per_study;
    if (baseline && have && !baseline->per_study_loglik.empty() && !(baseline->spec == fit.spec)) {
        r["vuong"] = Json{{"baseline", model_label(baseline->spec)},
                          {"unadjusted", vuong_json(vuong(*baseline, fit, false))},
                          {"adjusted", vuong_json(vuong(*baseline, fit, true))}};
    }
    return r;
}

void check_aic_consistency(const Json& document) {
    auto check = [](const Json& r) {
        if (!r.contains("aic") || r["aic"].is_null() || r["loglik"].is_null()) return;
        const double ll = r["loglik"].get<double>();
        const double k = r["n_params"].get<double>();
        const double a = r["aic"].get<double>();
        if (std::abs(a - (-2.0 * ll + 2.0 * k)) > 1e-9 * std::max(1.0, std::abs(a)))
            throw std::logic_error("report: aic of " + r["model"].get<std::string>() + " is inconsistent with its loglik");
    };
    if (document.contains("results"))
        for (const auto& r : document["results"]) check(r);
    if (document.contains("baseline") && document["baseline"].is_object()) check(document["baseline"]);
}

namespace {

std::string est_cell(double est, double se, bool se_ok) {
    std::string s = format_g6(est);
    if (se_ok && std::isfinite(se)) s += " (" + format_g6(se) + ")";
    return s;
}

std::string table(const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> width;
    for (const auto& row : rows)
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (width.size() <= c) width.push_back(0);
            width[c] = std::max(width[c], row[c].size());
        }
    std::ostringstream out;
    for (const auto& row : rows) {
        std::string line;
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c > 0) line += "  ";
            const std::string& cell = row[c];
            if (c == 0)
                line += cell + std::string(width[c] - cell.size(), ' ');
            else
                line += std::string(width[c] - cell.size(), ' ') + cell;
        }
        while (!line.empty() && line.back() == ' ') line.pop_back();
        out << line << '\n';
    }
    return out.str();
}

}  // namespace

std::string fit_text_report(const std::vector<RankedFit>& results, const FitResult* baseline) {
    // Rank lookup: position in the ranked list, 1-based.
    std::map<std::pair<int, int>, std::vector<std::pair<int, const RankedFit*>>> groups;
    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& f = results[i].fit;
        groups[{permutation_index(f.spec.perm), static_cast<int>(f.spec.margin)}].push_back(
            {static_cast<int>(i) + 1, &results[i]});
    }
    std::ostringstream out;
    bool first = true;
    for (auto& [key, members] : groups) {
        std::sort(members.begin(), members.end(),
                  [](const auto& a, const auto& b) { return a.second->index < b.second->index; });
        const ModelSpec& s0 = members.front().second->fit.spec;
        if (!first) out << '\n';
        first = false;
        out << "permutation " << key.first << " (" << permutation_label(s0.perm) << "), " << margin_name(s0.margin)
            << " margins\n";

        std::vector<std::vector<std::string>> rows;
        std::vector<std::string> head{""};
        for (const auto& [rank, rf] : members) {
            const auto& f = rf->fit.spec.families;
            head.push_back(f[2] == CopulaFamily::Independence
                               ? std::string(family_name(f[0])) + "/" + std::string(family_name(f[1]))
                               : families_label(f));
        }
        rows.push_back(head);

        const std::vector<std::string> disp_names = param_names(s0);
        for (int g = 0; g < 2; ++g)
            for (int j = 0; j < 3; ++j) {
                std::vector<std::string> row{disp_names[3 * g + j]};
                for (const auto& [rank, rf] : members) {
                    const FitResult& f = rf->fit;
                    if (f.status == FitStatus::Failed) {
                        row.push_back("-");
                        continue;
                    }
                    row.push_back(g == 0 ? est_cell(f.estimates.pi[j], f.se.pi[j], f.se_available)
                                         : est_cell(f.estimates.disp[j], f.se.disp[j], f.se_available));
                }
                rows.push_back(row);
            }
        for (int e = 0; e < 3; ++e) {
            bool any = false;
            for (const auto& m : members) any = any || m.second->fit.spec.families[e] != CopulaFamily::Independence;
            if (!any) continue;
            std::vector<std::string> row{"tau" + edge_label(s0.perm, e)};
            for (const auto& [rank, rf] : members) {
                const FitResult& f = rf->fit;
                if (f.status == FitStatus::Failed || f.spec.families[e] == CopulaFamily::Independence)
                    row.push_back("-");
                else
                    row.push_back(est_cell(f.estimates.tau[e], f.se.tau[e], f.se_available) +
                                  (f.boundary[e] ? " *" : ""));
            }
            rows.push_back(row);
        }
        std::vector<std::string> ll{"loglik"}, aicr{"AIC"}, rank_row{"rank"}, status{"status"};
        std::vector<std::string> z{"vuong z0"}, p{"vuong p"}, za{"adj z0"}, pa{"adj p"};
        bool any_vuong = false;
        for (const auto& [rank, rf] : members) {
            const FitResult& f = rf->fit;
            const bool have = f.status != FitStatus::Failed;
            ll.push_back(have ? format_g6(f.loglik) : "-");
            aicr.push_back(have ? format_g6(f.aic) : "-");
            rank_row.push_back(std::to_string(rank));
            status.push_back(std::string(status_name(f.status)));
            if (baseline && have && !baseline->per_study_loglik.empty() && !(baseline->spec == f.spec)) {
                any_vuong = true;
                const VuongResult u = vuong(*baseline, f, false), a = vuong(*baseline, f, true);
                z.push_back(u.z0 ? format_g6(*u.z0) : "undefined");
                p.push_back(u.p ? format_g6(*u.p) : "undefined");
                za.push_back(a.z0 ? format_g6(*a.z0) : "undefined");
                pa.push_back(a.p ? format_g6(*a.p) : "undefined");
            } else {
                for (auto* v : {&z, &p, &za, &pa}) v->push_back("-");
            }
        }
        for (auto* r : {&ll, &aicr, &rank_row, &status}) rows.push_back(*r);
        if (any_vuong)
            for (auto* r : {&z, &p, &za, &pa}) rows.push_back(*r);
        out << table(rows);
    }
    if (baseline) out << "\nvuong baseline: " << model_label(baseline->spec) << " (z0 > 0 favours the column model)\n";
    bool flagged = false;
    for (const auto& r : results)
        for (bool b : r.fit.boundary) flagged = flagged || b;
    if (flagged) out << "* tau near the edge of its range; consider a truncated vine\n";
    return out.str();
}

Json sim_report_json(const SimReport& report) {
    const SimScenario& s = report.scenario;
    Json scen;
    scen["n_studies"] = s.n_studies;
    scen["replications"] = s.replications;
    scen["seed"] = s.seed;
    scen["true_model"] = spec_json(s.true_spec);
    scen["true_params"] = param_block(s.true_spec, s.true_params, true);
    scen["size_distribution"] = Json{{"shape", s.size.shape}, {"rate", s.size.rate}, {"lag", s.size.lag}};
    scen["nq"] = s.nq;
    scen["starts"] = s.starts;

    Json fits = Json::array();
    for (const auto& f : report.fits) {
        Json cells = Json::array();
        for (const auto& c : f.cells) {
            cells.push_back(Json{{"parameter", c.parameter},
                                 {"truth", number(c.truth)},
                                 {"count", c.count},
                                 {"bias", number(c.bias * kReportScale)},
                                 {"sd", c.sd ? number(*c.sd * kReportScale) : Json(nullptr)},
                                 {"rmse", number(c.rmse * kReportScale)},
                                 {"theoretical_sd", c.theo_sd ? number(*c.theo_sd * kReportScale) : Json(nullptr)}});
        }
        fits.push_back(Json{{"model", model_label(f.spec)},
                            {"spec", spec_json(f.spec)},
                            {"attempted", f.attempted},
                            {"converged", f.converged},
                            {"excluded", f.excluded},
                            {"cells", cells}});
    }
    return Json{{"schema", kSimSchema}, {"version", kSchemaVersion}, {"scale", kReportScale}, {"scenario", scen},
                {"fits", fits}};
}

std::string sim_text_report(const SimReport& report) {
    std::ostringstream out;
    out << "N = " << report.scenario.n_studies << ", B = " << report.scenario.replications
        << ", truth " << model_label(report.scenario.true_spec) << "; values x100\n";
    for (const auto& f : report.fits) {
        out << '\n' << model_label(f.spec) << ": " << f.converged << " of " << f.attempted << " replicates converged";
        if (f.excluded > 0) out << ", " << f.excluded << " excluded";
        out << '\n';
        std::vector<std::vector<std::string>> rows;
        std::vector<std::string> head{""}, bias{"bias"}, sd{"SD"}, rmse{"RMSE"}, theo{"sqrt avg var"};
        for (const auto& c : f.cells) {
            head.push_back(c.parameter);
            bias.push_back(format_g6(c.bias * kReportScale));
            sd.push_back(c.sd ? format_g6(*c.sd * kReportScale) : "NA");
            rmse.push_back(format_g6(c.rmse * kReportScale));
            theo.push_back(c.theo_sd ? format_g6(*c.theo_sd * kReportScale) : "NA");
        }
        rows = {head, bias, sd, rmse, theo};
        out << table(rows);
    }
    return out.str();
}

}  // namespace trivine
