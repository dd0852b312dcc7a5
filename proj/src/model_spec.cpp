#include "slm/model_spec.hpp"

#include <map>
#include <sstream>

#include "slm/duality.hpp"
#include "slm/errors.hpp"

namespace slm::model_spec {

namespace {

std::map<std::string, double> parse_kv(const std::string& body, const std::string& what) {
    std::map<std::string, double> kv;
    if (body.empty()) return kv;
    std::istringstream in(body);
    std::string item;
    while (std::getline(in, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            throw domain_error("model spec: expected key=value in '" + item + "'");
        const std::string key = item.substr(0, eq);
        double value;
        try {
            value = std::stod(item.substr(eq + 1));
        } catch (const std::exception&) {
            throw domain_error("model spec: non-numeric value for '" + key + "'");
        }
        if (kv.count(key)) throw domain_error("model spec: duplicate key '" + key + "'");
        kv[key] = value;
    }
    for (const auto& [key, value] : kv) {
        (void)value;
        if (what.find("|" + key + "|") == std::string::npos)
            throw domain_error("model spec: unknown key '" + key + "'");
    }
    return kv;
}

double take(const std::map<std::string, double>& kv, const std::string& key,
            double fallback) {
    const auto it = kv.find(key);
    return (it == kv.end()) ? fallback : it->second;
}

}  // namespace

models::TerminalLaw parse(const std::string& spec, double maturity) {
    const auto colon = spec.find(':');
    const std::string name = spec.substr(0, colon);
    const std::string body = (colon == std::string::npos) ? "" : spec.substr(colon + 1);

    if (name == "cev") {
        const auto kv = parse_kv(body, "|beta|sigma|s0|");
        models::CevParams p;
        p.beta = take(kv, "beta", 1.0);
        p.sigma = take(kv, "sigma", 1.0);
        p.s0 = take(kv, "s0", 1.0);
        p.T = maturity;
        return models::cev_terminal_law(p);
    }
    if (name == "bridge") {
        const auto kv = parse_kv(body, "|mu|");
        models::BridgeParams p;
        p.mu = take(kv, "mu", 0.0);
        p.T = maturity;
        return models::bridge_terminal_law(p);
    }
    if (name == "absorbed-bm") {
        const auto kv = parse_kv(body, "|sigma|");
        return duality::absorbed_bm_law(take(kv, "sigma", 1.0), maturity);
    }
    if (name == "lognormal") {
        const auto kv = parse_kv(body, "|sigma|");
        return models::lognormal_terminal_law(take(kv, "sigma", 0.2), maturity);
    }
    throw domain_error("model spec: unknown model '" + name + "'");
}

}  // namespace slm::model_spec
