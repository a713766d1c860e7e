#include "wcmdp/config.hpp"

#include <fstream>
#include <set>

#include <json.hpp>

namespace wcmdp {

RunConfig parse_config(const std::string& json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(std::string("config: invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ValidationError("config: top level must be an object");

    static const std::set<std::string> known = {
        "scenario", "K", "T", "p", "alpha", "beta", "gamma", "b_low", "b_high",
        "m0", "Gamma", "eta1", "eta2", "iters", "minibatch_I", "tail_eps",
        "seed", "N", "storage_cost", "processing_cost"};
    for (const auto& [key, value] : doc.items()) {
        (void)value;
        if (!known.contains(key)) throw ValidationError("config: unknown key \"" + key + "\"");
    }

    RunConfig cfg;
    auto get = [&](const char* key, auto& target) {
        if (doc.contains(key)) {
            try {
                target = doc.at(key).get<std::remove_reference_t<decltype(target)>>();
            } catch (const nlohmann::json::exception&) {
                throw ValidationError(std::string("config: bad value for \"") + key + "\"");
            }
        }
    };
    if (doc.contains("scenario"))
        cfg.params.scenario = scenario_from_string(doc.at("scenario").get<std::string>());
    get("K", cfg.params.K);
    get("T", cfg.params.T);
    get("p", cfg.params.p);
    get("alpha", cfg.params.alpha);
    get("beta", cfg.params.beta);
    get("gamma", cfg.params.gamma);
    get("b_low", cfg.params.b_low);
    get("b_high", cfg.params.b_high);
    get("m0", cfg.params.m0);
    get("Gamma", cfg.Gamma);
    get("eta1", cfg.eta1);
    get("eta2", cfg.eta2);
    get("iters", cfg.iters);
    get("minibatch_I", cfg.minibatch_I);
    get("tail_eps", cfg.tail_eps);
    get("seed", cfg.seed);
    get("N", cfg.N);

    validate(cfg.params);
    cfg.costs = CostModel::defaults(cfg.params);
    if (doc.contains("storage_cost"))
        cfg.costs.storage = doc.at("storage_cost").get<std::vector<double>>();
    if (doc.contains("processing_cost")) {
        auto vals = doc.at("processing_cost").get<std::vector<double>>();
        if (vals.size() != 2)
            throw ValidationError("processing_cost: must have exactly 2 entries");
        cfg.costs.processing = {vals[0], vals[1]};
    }
    validate_costs(cfg.costs, cfg.params);
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("config: cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_config(text);
}

}  // namespace wcmdp
