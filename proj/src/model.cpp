#include "trivine/model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "trivine/special.hpp"

namespace trivine {

namespace {

std::vector<std::string> split(std::string_view text, char sep) {
    std::vector<std::string> parts;
    std::string current;
    for (char c : text) {
        if (c == sep) {
            parts.push_back(current);
            current.clear();
        } else if (c != ' ' && c != '\t') {
            current.push_back(c);
        }
    }
    parts.push_back(current);
    return parts;
}

}  // namespace

std::string families_label(const std::array<CopulaFamily, 3>& f) {
    return std::string(family_name(f[0])) + "/" + std::string(family_name(f[1])) + "/" +
           std::string(family_name(f[2]));
}

std::array<CopulaFamily, 3> parse_families(std::string_view token) {
    const auto parts = split(token, '/');
    if (parts.size() == 1) {
        const CopulaFamily f = parse_family(parts[0]);
        return {f, f, f};
    }
    if (parts.size() == 2) return {parse_family(parts[0]), parse_family(parts[1]), CopulaFamily::Independence};
    if (parts.size() == 3) return {parse_family(parts[0]), parse_family(parts[1]), parse_family(parts[2])};
    throw std::invalid_argument("families token must list 1, 2 or 3 families: '" + std::string(token) + "'");
}

std::string model_label(const ModelSpec& spec) {
    return std::string(margin_name(spec.margin)) + ":" + families_label(spec.families) + ":" +
           std::to_string(permutation_index(spec.perm));
}

ModelSpec parse_model(std::string_view text) {
    const auto parts = split(text, ':');
    if (parts.size() < 2 || parts.size() > 3)
        throw std::invalid_argument("model must be <margin>:<families>[:<perm>], got '" + std::string(text) + "'");
    ModelSpec spec;
    spec.margin = parse_margin(parts[0]);
    spec.families = parse_families(parts[1]);
    if (parts.size() == 3) spec.perm = permutation_from_index(std::stoi(parts[2]));
    return spec;
}

int n_params(const ModelSpec& spec) {
    int k = 6;
    for (CopulaFamily f : spec.families)
        if (f != CopulaFamily::Independence) ++k;
    return k;
}

void validate(const ModelSpec& spec, const ParamVector& p) {
    for (int j = 0; j < 3; ++j) validate(MarginSpec{spec.margin, p.pi[j], p.disp[j]});
    for (int e = 0; e < 3; ++e) {
        const CopulaFamily f = spec.families[e];
        if (f == CopulaFamily::Independence) continue;
        const auto [lo, hi] = tau_interval(f);
        if (!(p.tau[e] > lo && p.tau[e] < hi)) {
            std::ostringstream msg;
            msg << "tau " << p.tau[e] << " outside the admissible interval (" << lo << "," << hi << ") of "
                << family_name(f);
            throw std::domain_error(msg.str());
        }
    }
}

VineModel realize(const ModelSpec& spec, const ParamVector& p) {
    VineModel model;
    model.copula.perm = spec.perm;
    for (int e = 0; e < 3; ++e) {
        const CopulaFamily f = spec.families[e];
        model.copula.edges[e] = {f, f == CopulaFamily::Independence ? 0.0 : tau_to_theta(f, p.tau[e])};
    }
    for (int j = 0; j < 3; ++j) model.margins[j] = {spec.margin, p.pi[j], p.disp[j]};
    return model;
}

double tau_position(CopulaFamily family, double tau) {
    const auto [lo, hi] = tau_interval(family);
    return 2.0 * (tau - lo) / (hi - lo) - 1.0;
}

std::vector<double> pack(const ModelSpec& spec, const ParamVector& p) {
    validate(spec, p);
    std::vector<double> x;
    x.reserve(n_params(spec));
    for (int j = 0; j < 3; ++j) x.push_back(logit(p.pi[j]));
    for (int j = 0; j < 3; ++j)
        x.push_back(spec.margin == MarginKind::NormalLogit ? std::log(p.disp[j]) : logit(p.disp[j]));
    for (int e = 0; e < 3; ++e)
        if (spec.families[e] != CopulaFamily::Independence) x.push_back(std::atanh(tau_position(spec.families[e], p.tau[e])));
    return x;
}

ParamVector unpack(const ModelSpec& spec, std::span<const double> x) {
    if (static_cast<int>(x.size()) != n_params(spec)) throw std::invalid_argument("unpack: wrong vector length");
    ParamVector p;
    for (int j = 0; j < 3; ++j) p.pi[j] = inv_logit(x[j]);
    for (int j = 0; j < 3; ++j)
        p.disp[j] = spec.margin == MarginKind::NormalLogit ? std::exp(x[3 + j]) : inv_logit(x[3 + j]);
    std::size_t k = 6;
    for (int e = 0; e < 3; ++e) {
        const CopulaFamily f = spec.families[e];
        if (f == CopulaFamily::Independence) {
            p.tau[e] = 0.0;
            continue;
        }
        const auto [lo, hi] = tau_interval(f);
        p.tau[e] = lo + (hi - lo) * 0.5 * (std::tanh(x[k++]) + 1.0);
    }
    return p;
}

std::vector<double> unpack_jacobian(const ModelSpec& spec, std::span<const double> x) {
    const ParamVector p = unpack(spec, x);
    std::vector<double> d;
    d.reserve(x.size());
    for (int j = 0; j < 3; ++j) d.push_back(p.pi[j] * (1.0 - p.pi[j]));
    for (int j = 0; j < 3; ++j)
        d.push_back(spec.margin == MarginKind::NormalLogit ? p.disp[j] : p.disp[j] * (1.0 - p.disp[j]));
    std::size_t k = 6;
    for (int e = 0; e < 3; ++e) {
        const CopulaFamily f = spec.families[e];
        if (f == CopulaFamily::Independence) continue;
        const auto [lo, hi] = tau_interval(f);
        const double t = std::tanh(x[k++]);
        d.push_back((hi - lo) * 0.5 * (1.0 - t * t));
    }
    return d;
}

std::vector<std::string> param_names(const ModelSpec& spec) {
    std::vector<std::string> names;
    const char* disp = spec.margin == MarginKind::NormalLogit ? "sigma" : "gamma";
    for (int j = 0; j < 3; ++j) names.push_back("pi" + std::to_string(j + 1));
    for (int j = 0; j < 3; ++j) names.push_back(disp + std::to_string(j + 1));
    for (int e = 0; e < 3; ++e)
        if (spec.families[e] != CopulaFamily::Independence) names.push_back("tau" + edge_label(spec.perm, e));
    return names;
}

}  // namespace trivine
