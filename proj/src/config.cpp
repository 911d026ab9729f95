// SPDX-License-Identifier: Apache-2.0

#include "sgrecon/config.hpp"
#include "sgrecon/rng.hpp"
#include "sgrecon/topology.hpp"

#include "json.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

namespace sgrecon {

using json = nlohmann::ordered_json;

namespace {

TechParams make_tech(double rho, double gamma0, double margin, double k, double gamma50, double l0,
                     double sigma_meas, double clip, double quant, double interf_scale)
{
    TechParams p;
    p.fading_rho = rho;
    p.gamma0_db = gamma0;
    p.margin_db = margin;
    p.per_k = k;
    p.gamma50_db = gamma50;
    p.latency_base_ms = l0;
    p.delta_rtx_ms = 0.8 * l0;
    p.jitter_sigma_ms = 0.05 * l0;
    p.meas_sigma_db = sigma_meas;
    p.meas_clip_db = clip;
    p.meas_quant_db = quant;
    p.interf_scale_db = interf_scale;
    return p;
}

// ---------------------------------------------------------------- to_json

json mixture_to_json(const Mixture& m)
{
    return json{{"modes", m.modes}, {"weights", m.weights}, {"sigmas", m.sigmas},
                {"clip", json::array({m.clip_lo, m.clip_hi})}};
}

json to_json(const GeneratorConfig& c)
{
    json j;
    j["seed_base"] = c.seed_base;
    j["dt_seconds"] = c.dt_seconds;
    j["t_train"] = c.t_train;
    j["t_val"] = c.t_val;
    j["t_test"] = c.t_test;
    j["burn_in"] = c.burn_in;
    j["mixing_alpha"] = c.mixing_alpha;
    j["ewma_beta"] = c.ewma_beta;
    j["per_eps"] = c.per_eps;
    j["r_max"] = c.r_max;
    j["delta_node_sigma_db"] = c.delta_node_sigma_db;
    j["eps_min"] = c.eps_min;
    j["eps0"] = c.eps0;

    json techs = json::object();
    for (Tech t : kAllTechs) {
        const auto& p = c.params(t);
        techs[std::string(to_string(t))] = json{
            {"fading_rho", p.fading_rho},           {"gamma0_db", p.gamma0_db},
            {"margin_db", p.margin_db},             {"per_k", p.per_k},
            {"gamma50_db", p.gamma50_db},           {"latency_base_ms", p.latency_base_ms},
            {"delta_rtx_ms", p.delta_rtx_ms},       {"jitter_sigma_ms", p.jitter_sigma_ms},
            {"meas_sigma_db", p.meas_sigma_db},     {"meas_clip_db", p.meas_clip_db},
            {"meas_quant_db", p.meas_quant_db},     {"interf_scale_db", p.interf_scale_db}};
    }
    j["technologies"] = techs;

    json sf = json::object();
    for (const auto& [k, v] : c.lora.sf_gamma50_db) {
        sf[std::to_string(k)] = v;
    }
    json node_sf = json::object();
    for (const auto& [k, v] : c.lora.node_sf) {
        node_sf[std::to_string(k)] = v;
    }
    j["lora"] = json{{"sf_gamma50_db", sf}, {"node_sf", node_sf}, {"default_sf", c.lora.default_sf}};

    const auto& tr = c.traffic;
    j["traffic"] = json{{"max_count", tr.max_count},
                        {"meter_period", tr.meter_period},
                        {"meter_extra_p", tr.meter_extra_p},
                        {"gateway_background_rate", tr.gateway_background_rate},
                        {"der_mean_on", tr.der_mean_on},
                        {"der_mean_off", tr.der_mean_off},
                        {"der_on_rate", tr.der_on_rate},
                        {"relay_event_p", tr.relay_event_p},
                        {"poll_period", tr.poll_period},
                        {"poll_background_rate", tr.poll_background_rate},
                        {"pmu_dropout_p", tr.pmu_dropout_p},
                        {"substation_rate", tr.substation_rate}};

    const auto& sh = c.shadowing;
    json scen = json::object();
    for (const auto& [name, s] : sh.scenarios) {
        scen[name] = json{{"sigma_db", s.sigma_db}, {"dcor_m", s.dcor_m}};
    }
    json tier_scen = json::object();
    json tier_speed = json::object();
    for (Tier t : kAllTiers) {
        tier_scen[std::string(to_string(t))] = sh.tier_scenario[index(t)];
        tier_speed[std::string(to_string(t))] = sh.tier_speed_mps[index(t)];
    }
    j["shadowing"] = json{{"scenarios", scen},
                          {"tier_scenario", tier_scen},
                          {"tier_speed_mps", tier_speed},
                          {"share_global", sh.share_global},
                          {"share_layer", sh.share_layer},
                          {"share_local", sh.share_local},
                          {"fiber_shadow_override", sh.fiber_shadow_override}};

    const auto& in = c.interference;
    j["interference"] = json{{"background_rho", in.background_rho},
                             {"plc_p_enter", in.plc_p_enter},
                             {"plc_p_exit", in.plc_p_exit},
                             {"plc_alpha", in.plc_alpha},
                             {"plc_scale_db", in.plc_scale_db},
                             {"impulse_clip_db", json::array({in.impulse_clip_lo_db, in.impulse_clip_hi_db})}};

    j["burst"] = json{{"p0", c.burst.p0},
                      {"c_slope", c.burst.c_slope},
                      {"scale_factor", c.burst.scale_factor},
                      {"decay", c.burst.decay}};

    const auto& a = c.attack;
    json eligible = json::array();
    for (Tech t : a.eligible_tech) {
        eligible.push_back(std::string(to_string(t)));
    }
    j["attack"] = json{{"target_attack_frac", a.target_attack_frac},
                       {"win_core_min", a.win_core_min},
                       {"win_core_max", a.win_core_max},
                       {"lead", a.lead},
                       {"tail", a.tail},
                       {"hyst", a.hyst},
                       {"ramp_frac", a.ramp_frac},
                       {"group_min", a.group_min},
                       {"group_max", a.group_max},
                       {"allow_overlap", a.allow_overlap},
                       {"attack_eligible_tech", eligible},
                       {"placement_budget_per_node", a.placement_budget_per_node},
                       {"shadow", mixture_to_json(a.shadow)},
                       {"kdrop", mixture_to_json(a.kdrop)},
                       {"alpha_a0", a.alpha_a0},
                       {"alpha_a1", a.alpha_a1},
                       {"sigma_s0", a.sigma_s0},
                       {"sigma_s1", a.sigma_s1},
                       {"alpha_floor", a.alpha_floor},
                       {"ge_p_gb", a.ge_p_gb},
                       {"ge_p_bg", a.ge_p_bg},
                       {"wifi_reflect_prob", a.wifi_reflect_prob},
                       {"wifi_reflect_k_db", a.wifi_reflect_k_db},
                       {"wifi_reflect_rel_amp", a.wifi_reflect_rel_amp}};

    j["features"] = json{{"rolling_window", c.features.rolling_window},
                         {"entropy_bins", c.features.entropy_bins},
                         {"std_floor", c.features.std_floor}};

    const auto& b = c.baseline;
    j["baseline"] = json{{"rounds", b.rounds},
                         {"local_epochs", b.local_epochs},
                         {"batch_size", b.batch_size},
                         {"learning_rate", b.learning_rate},
                         {"threshold", b.threshold},
                         {"class_balanced", b.class_balanced},
                         {"train_seed", b.train_seed ? json(*b.train_seed) : json(nullptr)}};

    const auto& v = c.validation;
    j["validation"] = json{{"sigma_rel_tol", v.sigma_rel_tol},
                           {"rho_lo", v.rho_lo},
                           {"rho_hi", v.rho_hi},
                           {"shadow_gate_nodes", v.shadow_gate_nodes},
                           {"shadow_min_rows", v.shadow_min_rows},
                           {"coverage_lo_factor", v.coverage_lo_factor},
                           {"coverage_hi_factor", v.coverage_hi_factor},
                           {"coverage_min_active", v.coverage_min_active},
                           {"shift_min_rows", v.shift_min_rows},
                           {"std_mean_tol", v.std_mean_tol},
                           {"std_std_tol", v.std_std_tol},
                           {"xcorr_sigmas", v.xcorr_sigmas},
                           {"causality_cut_points", v.causality_cut_points}};
    return j;
}

// -------------------------------------------------------------- from_json

// Objects whose keys are data (node ids, spreading factors); they replace the
// default wholesale instead of being merged key by key.
const std::set<std::string> kOpenMaps{"lora.sf_gamma50_db", "lora.node_sf"};

void merge_into(json& base, const json& patch, const std::string& path)
{
    if (!patch.is_object()) {
        throw ConfigError(path.empty() ? std::string("config document must be a JSON object")
                                       : "'" + path + "' must be an object");
    }
    for (auto it = patch.begin(); it != patch.end(); ++it) {
        const std::string key_path = path.empty() ? it.key() : path + "." + it.key();
        if (!base.contains(it.key())) {
            throw ConfigError("unknown config key '" + key_path + "'");
        }
        json& slot = base[it.key()];
        if (slot.is_object() && !kOpenMaps.contains(key_path)) {
            merge_into(slot, it.value(), key_path);
        } else {
            slot = it.value();
        }
    }
}

class Reader {
public:
    Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {}

    const json& at(const char* key) const
    {
        if (!j_.contains(key)) {
            throw ConfigError("missing config key '" + full(key) + "'");
        }
        return j_.at(key);
    }

    double number(const char* key) const
    {
        const json& v = at(key);
        if (!v.is_number()) {
            throw ConfigError("config key '" + full(key) + "' must be a number");
        }
        return v.get<double>();
    }

    std::int64_t integer(const char* key) const
    {
        const json& v = at(key);
        if (!v.is_number_integer()) {
            throw ConfigError("config key '" + full(key) + "' must be an integer");
        }
        return v.get<std::int64_t>();
    }

    int int32(const char* key) const
    {
        const auto v = integer(key);
        if (v < INT32_MIN || v > INT32_MAX) {
            throw ConfigError("config key '" + full(key) + "' is out of range");
        }
        return static_cast<int>(v);
    }

    bool boolean(const char* key) const
    {
        const json& v = at(key);
        if (!v.is_boolean()) {
            throw ConfigError("config key '" + full(key) + "' must be a boolean");
        }
        return v.get<bool>();
    }

    std::string string(const char* key) const
    {
        const json& v = at(key);
        if (!v.is_string()) {
            throw ConfigError("config key '" + full(key) + "' must be a string");
        }
        return v.get<std::string>();
    }

    std::vector<double> numbers(const char* key) const
    {
        const json& v = at(key);
        if (!v.is_array()) {
            throw ConfigError("config key '" + full(key) + "' must be an array of numbers");
        }
        std::vector<double> out;
        for (const auto& e : v) {
            if (!e.is_number()) {
                throw ConfigError("config key '" + full(key) + "' must be an array of numbers");
            }
            out.push_back(e.get<double>());
        }
        return out;
    }

    std::pair<double, double> range(const char* key) const
    {
        const auto values = numbers(key);
        if (values.size() != 2) {
            throw ConfigError("config key '" + full(key) + "' must be a [lo, hi] pair");
        }
        return {values[0], values[1]};
    }

    Reader child(const char* key) const
    {
        const json& v = at(key);
        if (!v.is_object()) {
            throw ConfigError("config key '" + full(key) + "' must be an object");
        }
        return Reader(v, full(key));
    }

    std::string full(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
    const json& raw() const { return j_; }

private:
    const json& j_;
    std::string path_;
};

Mixture read_mixture(const Reader& r)
{
    Mixture m;
    m.modes = r.numbers("modes");
    m.weights = r.numbers("weights");
    m.sigmas = r.numbers("sigmas");
    std::tie(m.clip_lo, m.clip_hi) = r.range("clip");
    return m;
}

int parse_int_key(const std::string& key, const std::string& path)
{
    try {
        std::size_t used = 0;
        const int v = std::stoi(key, &used);
        if (used != key.size()) {
            throw std::invalid_argument(key);
        }
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + path + "." + key + "' must be an integer key");
    }
}

GeneratorConfig from_json(const json& j)
{
    const Reader r(j, "");
    GeneratorConfig c;
    {
        const json& seed = r.at("seed_base");
        if (!seed.is_number_integer() || (seed.is_number_integer() && !seed.is_number_unsigned() && seed.get<std::int64_t>() < 0)) {
            throw ConfigError("config key 'seed_base' must be a non-negative integer");
        }
        c.seed_base = seed.get<std::uint64_t>();
    }
    c.dt_seconds = r.number("dt_seconds");
    c.t_train = r.integer("t_train");
    c.t_val = r.integer("t_val");
    c.t_test = r.integer("t_test");
    c.burn_in = r.integer("burn_in");
    c.mixing_alpha = r.number("mixing_alpha");
    c.ewma_beta = r.number("ewma_beta");
    c.per_eps = r.number("per_eps");
    c.r_max = r.number("r_max");
    c.delta_node_sigma_db = r.number("delta_node_sigma_db");
    c.eps_min = r.number("eps_min");
    c.eps0 = r.number("eps0");

    const Reader techs = r.child("technologies");
    for (Tech t : kAllTechs) {
        const Reader tp = techs.child(std::string(to_string(t)).c_str());
        auto& p = c.tech[index(t)];
        p.fading_rho = tp.number("fading_rho");
        p.gamma0_db = tp.number("gamma0_db");
        p.margin_db = tp.number("margin_db");
        p.per_k = tp.number("per_k");
        p.gamma50_db = tp.number("gamma50_db");
        p.latency_base_ms = tp.number("latency_base_ms");
        p.delta_rtx_ms = tp.number("delta_rtx_ms");
        p.jitter_sigma_ms = tp.number("jitter_sigma_ms");
        p.meas_sigma_db = tp.number("meas_sigma_db");
        p.meas_clip_db = tp.number("meas_clip_db");
        p.meas_quant_db = tp.number("meas_quant_db");
        p.interf_scale_db = tp.number("interf_scale_db");
    }

    const Reader lora = r.child("lora");
    for (auto it = lora.at("sf_gamma50_db").begin(); it != lora.at("sf_gamma50_db").end(); ++it) {
        if (!it.value().is_number()) {
            throw ConfigError("config key 'lora.sf_gamma50_db." + it.key() + "' must be a number");
        }
        c.lora.sf_gamma50_db[parse_int_key(it.key(), "lora.sf_gamma50_db")] = it.value().get<double>();
    }
    for (auto it = lora.at("node_sf").begin(); it != lora.at("node_sf").end(); ++it) {
        if (!it.value().is_number_integer()) {
            throw ConfigError("config key 'lora.node_sf." + it.key() + "' must be an integer");
        }
        c.lora.node_sf[parse_int_key(it.key(), "lora.node_sf")] = it.value().get<int>();
    }
    c.lora.default_sf = lora.int32("default_sf");

    const Reader tr = r.child("traffic");
    c.traffic.max_count = tr.int32("max_count");
    c.traffic.meter_period = tr.int32("meter_period");
    c.traffic.meter_extra_p = tr.number("meter_extra_p");
    c.traffic.gateway_background_rate = tr.number("gateway_background_rate");
    c.traffic.der_mean_on = tr.number("der_mean_on");
    c.traffic.der_mean_off = tr.number("der_mean_off");
    c.traffic.der_on_rate = tr.number("der_on_rate");
    c.traffic.relay_event_p = tr.number("relay_event_p");
    c.traffic.poll_period = tr.int32("poll_period");
    c.traffic.poll_background_rate = tr.number("poll_background_rate");
    c.traffic.pmu_dropout_p = tr.number("pmu_dropout_p");
    c.traffic.substation_rate = tr.number("substation_rate");

    const Reader sh = r.child("shadowing");
    const Reader scen = sh.child("scenarios");
    for (auto it = scen.raw().begin(); it != scen.raw().end(); ++it) {
        const Reader s = scen.child(it.key().c_str());
        c.shadowing.scenarios[it.key()] = ScenarioParams{s.number("sigma_db"), s.number("dcor_m")};
    }
    const Reader tier_scen = sh.child("tier_scenario");
    const Reader tier_speed = sh.child("tier_speed_mps");
    for (Tier t : kAllTiers) {
        const std::string name(to_string(t));
        c.shadowing.tier_scenario[index(t)] = tier_scen.string(name.c_str());
        c.shadowing.tier_speed_mps[index(t)] = tier_speed.number(name.c_str());
    }
    c.shadowing.share_global = sh.number("share_global");
    c.shadowing.share_layer = sh.number("share_layer");
    c.shadowing.share_local = sh.number("share_local");
    c.shadowing.fiber_shadow_override = sh.boolean("fiber_shadow_override");

    const Reader in = r.child("interference");
    c.interference.background_rho = in.number("background_rho");
    c.interference.plc_p_enter = in.number("plc_p_enter");
    c.interference.plc_p_exit = in.number("plc_p_exit");
    c.interference.plc_alpha = in.number("plc_alpha");
    c.interference.plc_scale_db = in.number("plc_scale_db");
    std::tie(c.interference.impulse_clip_lo_db, c.interference.impulse_clip_hi_db) = in.range("impulse_clip_db");

    const Reader bu = r.child("burst");
    c.burst.p0 = bu.number("p0");
    c.burst.c_slope = bu.number("c_slope");
    c.burst.scale_factor = bu.number("scale_factor");
    c.burst.decay = bu.number("decay");

    const Reader at = r.child("attack");
    auto& a = c.attack;
    a.target_attack_frac = at.number("target_attack_frac");
    a.win_core_min = at.int32("win_core_min");
    a.win_core_max = at.int32("win_core_max");
    a.lead = at.int32("lead");
    a.tail = at.int32("tail");
    a.hyst = at.int32("hyst");
    a.ramp_frac = at.number("ramp_frac");
    a.group_min = at.int32("group_min");
    a.group_max = at.int32("group_max");
    a.allow_overlap = at.boolean("allow_overlap");
    {
        const json& e = at.at("attack_eligible_tech");
        if (!e.is_array()) {
            throw ConfigError("config key 'attack.attack_eligible_tech' must be an array of technology names");
        }
        for (const auto& name : e) {
            const auto tech = name.is_string() ? tech_from_string(name.get<std::string>()) : std::nullopt;
            if (!tech) {
                throw ConfigError("config key 'attack.attack_eligible_tech' contains an unknown technology");
            }
            a.eligible_tech.push_back(*tech);
        }
    }
    a.placement_budget_per_node = at.int32("placement_budget_per_node");
    a.shadow = read_mixture(at.child("shadow"));
    a.kdrop = read_mixture(at.child("kdrop"));
    a.alpha_a0 = at.number("alpha_a0");
    a.alpha_a1 = at.number("alpha_a1");
    a.sigma_s0 = at.number("sigma_s0");
    a.sigma_s1 = at.number("sigma_s1");
    a.alpha_floor = at.number("alpha_floor");
    a.ge_p_gb = at.number("ge_p_gb");
    a.ge_p_bg = at.number("ge_p_bg");
    a.wifi_reflect_prob = at.number("wifi_reflect_prob");
    a.wifi_reflect_k_db = at.number("wifi_reflect_k_db");
    a.wifi_reflect_rel_amp = at.number("wifi_reflect_rel_amp");

    const Reader fe = r.child("features");
    c.features.rolling_window = fe.int32("rolling_window");
    c.features.entropy_bins = fe.int32("entropy_bins");
    c.features.std_floor = fe.number("std_floor");

    const Reader ba = r.child("baseline");
    c.baseline.rounds = ba.int32("rounds");
    c.baseline.local_epochs = ba.int32("local_epochs");
    c.baseline.batch_size = ba.int32("batch_size");
    c.baseline.learning_rate = ba.number("learning_rate");
    c.baseline.threshold = ba.number("threshold");
    c.baseline.class_balanced = ba.boolean("class_balanced");
    {
        const json& s = ba.at("train_seed");
        if (s.is_null()) {
            c.baseline.train_seed.reset();
        } else if (s.is_number_unsigned() || (s.is_number_integer() && s.get<std::int64_t>() >= 0)) {
            c.baseline.train_seed = s.get<std::uint64_t>();
        } else {
            throw ConfigError("config key 'baseline.train_seed' must be null or a non-negative integer");
        }
    }

    const Reader va = r.child("validation");
    auto& v = c.validation;
    v.sigma_rel_tol = va.number("sigma_rel_tol");
    v.rho_lo = va.number("rho_lo");
    v.rho_hi = va.number("rho_hi");
    v.shadow_gate_nodes.clear();
    for (double node : va.numbers("shadow_gate_nodes")) {
        v.shadow_gate_nodes.push_back(static_cast<int>(node));
    }
    v.shadow_min_rows = va.int32("shadow_min_rows");
    v.coverage_lo_factor = va.number("coverage_lo_factor");
    v.coverage_hi_factor = va.number("coverage_hi_factor");
    v.coverage_min_active = va.int32("coverage_min_active");
    v.shift_min_rows = va.int32("shift_min_rows");
    v.std_mean_tol = va.number("std_mean_tol");
    v.std_std_tol = va.number("std_std_tol");
    v.xcorr_sigmas = va.number("xcorr_sigmas");
    v.causality_cut_points = va.int32("causality_cut_points");
    return c;
}

// ------------------------------------------------------------- validation

void check_probability(std::vector<Violation>& out, const std::string& field, double p)
{
    if (!(p >= 0.0 && p <= 1.0)) {
        out.push_back({field, "must lie in [0, 1]"});
    }
}

void check_positive(std::vector<Violation>& out, const std::string& field, double v)
{
    if (!(v > 0.0)) {
        out.push_back({field, "must be > 0"});
    }
}

void check_mixture(std::vector<Violation>& out, const std::string& field, const Mixture& m)
{
    if (m.modes.empty()) {
        out.push_back({field + ".modes", "must not be empty"});
        return;
    }
    if (m.weights.size() != m.modes.size() || m.sigmas.size() != m.modes.size()) {
        out.push_back({field, "modes, weights and sigmas must have equal length"});
        return;
    }
    const double sum = std::accumulate(m.weights.begin(), m.weights.end(), 0.0);
    if (std::abs(sum - 1.0) > 1e-9) {
        out.push_back({field + ".weights", "weights sum != 1"});
    }
    for (double w : m.weights) {
        if (w < 0.0) {
            out.push_back({field + ".weights", "weights must be non-negative"});
            break;
        }
    }
    for (double s : m.sigmas) {
        if (s < 0.0) {
            out.push_back({field + ".sigmas", "sigmas must be non-negative"});
            break;
        }
    }
    if (!(m.clip_lo < m.clip_hi)) {
        out.push_back({field + ".clip", "clip range must satisfy lo < hi"});
    }
}

} // namespace

// ------------------------------------------------------------------ public

std::int64_t GeneratorConfig::split_length(Split split) const noexcept
{
    switch (split) {
    case Split::Train:
        return t_train;
    case Split::Val:
        return t_val;
    case Split::Test:
        return t_test;
    }
    return 0;
}

bool GeneratorConfig::is_eligible(Tech t) const noexcept
{
    if (t == Tech::Fiber) {
        return false;
    }
    for (Tech e : attack.eligible_tech) {
        if (e == t) {
            return true;
        }
    }
    return false;
}

double GeneratorConfig::gamma50_for(int node_id, Tech t) const
{
    if (t != Tech::LoRa) {
        return params(t).gamma50_db;
    }
    const auto sf_it = lora.node_sf.find(node_id);
    const int sf = sf_it == lora.node_sf.end() ? lora.default_sf : sf_it->second;
    const auto g_it = lora.sf_gamma50_db.find(sf);
    if (g_it == lora.sf_gamma50_db.end()) {
        throw ConfigError("no LoRa operating point for SF" + std::to_string(sf));
    }
    return g_it->second;
}

const ScenarioParams& GeneratorConfig::scenario_for(Tier tier) const
{
    const auto it = shadowing.scenarios.find(shadowing.tier_scenario[index(tier)]);
    if (it == shadowing.scenarios.end()) {
        throw ConfigError("unknown shadowing scenario '" + shadowing.tier_scenario[index(tier)] + "'");
    }
    return it->second;
}

GeneratorConfig default_config()
{
    GeneratorConfig c;
    //                                       rho    g0    m    k    g50    L0   sig clip  q    interf
    c.tech[index(Tech::ZigBee)] = make_tech(0.95,  12.0, 2.0, 1.0, -2.0, 15.0, 3.0, 6.0, 1.0, 3.0);
    c.tech[index(Tech::WiFi)]   = make_tech(0.90,  18.0, 3.0, 0.8,  4.0,  5.0, 1.0, 3.0, 0.5, 3.0);
    c.tech[index(Tech::LoRa)]   = make_tech(0.98,   0.0, 3.0, 0.9,  0.0, 400.0, 1.0, 3.0, 0.5, 1.0);
    c.tech[index(Tech::PLC)]    = make_tech(0.90,  15.0, 2.0, 0.9,  2.0, 20.0, 1.0, 3.0, 0.5, 2.0);
    c.tech[index(Tech::LTE)]    = make_tech(0.93,  20.0, 3.0, 0.7,  6.0, 30.0, 1.0, 3.0, 0.5, 2.0);
    c.tech[index(Tech::Fiber)]  = make_tech(0.999, 40.0, 0.0, 2.0,  0.0,  1.0, 1.0, 3.0, 0.5, 0.0);

    c.lora.sf_gamma50_db = {{7, -7.5}, {8, -10.0}, {9, -12.5}, {10, -15.0}, {11, -17.5}, {12, -20.0}};
    c.lora.node_sf = {{4, 9}, {5, 12}};
    c.lora.default_sf = 7;

    c.shadowing.scenarios = {
        {"InH_LOS", {3.0, 10.0}},  {"InH_NLOS", {8.03, 6.0}}, {"UMi_LOS", {4.0, 10.0}},
        {"UMi_NLOS", {7.82, 13.0}}, {"UMa_LOS", {4.0, 37.0}}, {"UMa_NLOS", {6.0, 50.0}},
        {"RMa_LOS", {4.0, 37.0}},  {"RMa_NLOS", {8.0, 120.0}},
    };
    c.shadowing.tier_scenario = {"InH_NLOS", "UMi_LOS", "UMa_LOS"};
    c.shadowing.tier_speed_mps = {0.239, 0.50, 0.30};

    c.attack.eligible_tech = {Tech::ZigBee, Tech::WiFi, Tech::LoRa, Tech::PLC, Tech::LTE};
    c.attack.shadow = Mixture{{10.0, 15.0, 35.0, 55.0}, {0.35, 0.35, 0.20, 0.10}, {3.0, 3.0, 3.0, 3.0}, 0.5, 67.0};
    c.attack.kdrop = Mixture{{3.0, 6.0, 10.0}, {0.5, 0.35, 0.15}, {1.0, 1.0, 1.0}, 0.5, 20.0};
    return c;
}

GeneratorConfig load_config(std::string_view document)
{
    json doc;
    std::string trimmed(document);
    if (trimmed.find_first_not_of(" \t\r\n") == std::string::npos) {
        doc = json::object();
    } else {
        try {
            doc = json::parse(trimmed);
        } catch (const json::parse_error& e) {
            throw ConfigError(std::string("config parse error: ") + e.what());
        }
    }
    json merged = to_json(default_config());
    merge_into(merged, doc, "");
    GeneratorConfig config;
    try {
        config = from_json(merged);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config type error: ") + e.what());
    }
    const auto violations = validate_config(config);
    if (!violations.empty()) {
        std::ostringstream msg;
        msg << "invalid config:";
        for (const auto& v : violations) {
            msg << "\n  " << v.field << ": " << v.message;
        }
        throw ConfigError(msg.str());
    }
    return config;
}

GeneratorConfig load_config_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot open config file '" + path + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return load_config(buffer.str());
}

std::string to_json_string(const GeneratorConfig& config)
{
    return to_json(config).dump(2) + "\n";
}

std::vector<Violation> validate_config(const GeneratorConfig& c)
{
    std::vector<Violation> out;
    if (!(c.dt_seconds > 0.0)) out.push_back({"dt_seconds", "must be > 0"});
    if (c.t_train < 1) out.push_back({"t_train", "must be >= 1"});
    if (c.t_val < 1) out.push_back({"t_val", "must be >= 1"});
    if (c.t_test < 1) out.push_back({"t_test", "must be >= 1"});
    if (c.burn_in < 0) out.push_back({"burn_in", "must be >= 0"});
    if (!(c.mixing_alpha >= 0.0 && c.mixing_alpha <= 1.0)) out.push_back({"mixing_alpha", "must lie in [0, 1]"});
    if (!(c.ewma_beta >= 0.0 && c.ewma_beta < 1.0)) out.push_back({"ewma_beta", "must lie in [0, 1)"});
    if (!(c.per_eps > 0.0 && c.per_eps < 0.5)) out.push_back({"per_eps", "must lie in (0, 0.5)"});
    check_positive(out, "r_max", c.r_max);
    if (c.delta_node_sigma_db < 0.0) out.push_back({"delta_node_sigma_db", "must be >= 0"});
    check_positive(out, "eps_min", c.eps_min);
    check_positive(out, "eps0", c.eps0);

    for (Tech t : kAllTechs) {
        const std::string f = "technologies." + std::string(to_string(t));
        const auto& p = c.params(t);
        if (!(p.fading_rho >= 0.0 && p.fading_rho < 1.0)) out.push_back({f + ".fading_rho", "must lie in [0, 1)"});
        check_positive(out, f + ".per_k", p.per_k);
        check_positive(out, f + ".delta_rtx_ms", p.delta_rtx_ms);
        if (p.latency_base_ms < 0.0) out.push_back({f + ".latency_base_ms", "must be >= 0"});
        if (p.jitter_sigma_ms < 0.0) out.push_back({f + ".jitter_sigma_ms", "must be >= 0"});
        if (p.meas_sigma_db < 0.0) out.push_back({f + ".meas_sigma_db", "must be >= 0"});
        check_positive(out, f + ".meas_clip_db", p.meas_clip_db);
        check_positive(out, f + ".meas_quant_db", p.meas_quant_db);
        if (p.interf_scale_db < 0.0) out.push_back({f + ".interf_scale_db", "must be >= 0"});
    }
    if (!c.lora.sf_gamma50_db.contains(c.lora.default_sf)) {
        out.push_back({"lora.default_sf", "has no entry in lora.sf_gamma50_db"});
    }
    for (const auto& [node, sf] : c.lora.node_sf) {
        if (!c.lora.sf_gamma50_db.contains(sf)) {
            out.push_back({"lora.node_sf." + std::to_string(node), "has no entry in lora.sf_gamma50_db"});
        }
    }

    const auto& tr = c.traffic;
    if (tr.max_count < 1) out.push_back({"traffic.max_count", "must be >= 1"});
    if (tr.meter_period < 1) out.push_back({"traffic.meter_period", "must be >= 1"});
    if (tr.poll_period < 1) out.push_back({"traffic.poll_period", "must be >= 1"});
    check_probability(out, "traffic.meter_extra_p", tr.meter_extra_p);
    check_probability(out, "traffic.relay_event_p", tr.relay_event_p);
    check_probability(out, "traffic.pmu_dropout_p", tr.pmu_dropout_p);
    if (!(tr.der_mean_on >= 1.0)) out.push_back({"traffic.der_mean_on", "must be >= 1"});
    if (!(tr.der_mean_off >= 1.0)) out.push_back({"traffic.der_mean_off", "must be >= 1"});
    for (auto [name, rate] : {std::pair{"traffic.gateway_background_rate", tr.gateway_background_rate},
                              std::pair{"traffic.der_on_rate", tr.der_on_rate},
                              std::pair{"traffic.poll_background_rate", tr.poll_background_rate},
                              std::pair{"traffic.substation_rate", tr.substation_rate}}) {
        if (rate < 0.0) out.push_back({name, "must be >= 0"});
    }

    const auto& sh = c.shadowing;
    for (const auto& [name, s] : sh.scenarios) {
        if (s.sigma_db < 0.0) out.push_back({"shadowing.scenarios." + name + ".sigma_db", "must be >= 0"});
        check_positive(out, "shadowing.scenarios." + name + ".dcor_m", s.dcor_m);
    }
    for (Tier t : kAllTiers) {
        const std::string name(to_string(t));
        if (!sh.scenarios.contains(sh.tier_scenario[index(t)])) {
            out.push_back({"shadowing.tier_scenario." + name, "names an unknown scenario"});
        }
        check_positive(out, "shadowing.tier_speed_mps." + name, sh.tier_speed_mps[index(t)]);
    }
    if (sh.share_global < 0.0 || sh.share_layer < 0.0 || sh.share_local < 0.0 ||
        std::abs(sh.share_global + sh.share_layer + sh.share_local - 1.0) > 1e-9) {
        out.push_back({"shadowing.share_*", "variance shares must be non-negative and sum to 1"});
    }

    const auto& in = c.interference;
    if (!(in.background_rho >= 0.0 && in.background_rho < 1.0)) out.push_back({"interference.background_rho", "must lie in [0, 1)"});
    check_probability(out, "interference.plc_p_enter", in.plc_p_enter);
    check_probability(out, "interference.plc_p_exit", in.plc_p_exit);
    if (!(in.plc_alpha > 0.0 && in.plc_alpha <= 2.0)) out.push_back({"interference.plc_alpha", "must lie in (0, 2]"});
    if (in.plc_scale_db < 0.0) out.push_back({"interference.plc_scale_db", "must be >= 0"});
    if (!(in.impulse_clip_lo_db < in.impulse_clip_hi_db)) out.push_back({"interference.impulse_clip_db", "clip range must satisfy lo < hi"});

    check_probability(out, "burst.p0", c.burst.p0);
    if (c.burst.c_slope < 0.0) out.push_back({"burst.c_slope", "must be >= 0"});
    if (c.burst.scale_factor < 0.0) out.push_back({"burst.scale_factor", "must be >= 0"});
    if (!(c.burst.decay >= 0.0 && c.burst.decay < 1.0)) out.push_back({"burst.decay", "must lie in [0, 1)"});

    const auto& a = c.attack;
    if (!(a.target_attack_frac > 0.0 && a.target_attack_frac < 1.0)) out.push_back({"attack.target_attack_frac", "must lie in (0, 1)"});
    if (a.win_core_min < 1) out.push_back({"attack.win_core_min", "must be >= 1"});
    if (a.win_core_min > a.win_core_max) out.push_back({"attack.win_core_max", "must be >= win_core_min"});
    if (a.lead < 0) out.push_back({"attack.lead", "must be >= 0"});
    if (a.tail < 0) out.push_back({"attack.tail", "must be >= 0"});
    if (a.hyst < 0) out.push_back({"attack.hyst", "must be >= 0"});
    if (!(a.ramp_frac > 0.0 && a.ramp_frac <= 1.0)) out.push_back({"attack.ramp_frac", "must lie in (0, 1]"});
    if (a.group_min < 1) out.push_back({"attack.group_min", "must be >= 1"});
    {
        int eligible_nodes = 0;
        for (const auto& node : default_inventory()) {
            if (c.is_eligible(node.tech)) {
                ++eligible_nodes;
            }
        }
        if (a.group_max < 1 || a.group_max > eligible_nodes) {
            out.push_back({"attack.group_max", "must lie in [1, " + std::to_string(eligible_nodes) + "] (eligible node count)"});
        } else if (a.group_max < a.group_min) {
            out.push_back({"attack.group_max", "must be >= group_min"});
        }
    }
    for (Tech t : a.eligible_tech) {
        if (t == Tech::Fiber) {
            out.push_back({"attack.attack_eligible_tech", "Fiber is never attack-eligible"});
        }
    }
    if (a.placement_budget_per_node < 1) out.push_back({"attack.placement_budget_per_node", "must be >= 1"});
    check_mixture(out, "attack.shadow", a.shadow);
    check_mixture(out, "attack.kdrop", a.kdrop);
    if (a.shadow.clip_lo < 0.0) out.push_back({"attack.shadow.clip", "lower clip must be >= 0"});
    if (a.kdrop.clip_lo < 0.0) out.push_back({"attack.kdrop.clip", "lower clip must be >= 0"});
    if (a.alpha_a0 < 0.0) out.push_back({"attack.alpha_a0", "must be >= 0"});
    if (a.alpha_a1 < 0.0) out.push_back({"attack.alpha_a1", "must be >= 0"});
    if (a.sigma_s0 < 0.0) out.push_back({"attack.sigma_s0", "must be >= 0"});
    if (a.sigma_s1 < 0.0) out.push_back({"attack.sigma_s1", "must be >= 0"});
    if (!(a.alpha_floor > 0.0 && a.alpha_floor <= 1.0)) out.push_back({"attack.alpha_floor", "must lie in (0, 1]"});
    check_probability(out, "attack.ge_p_gb", a.ge_p_gb);
    check_probability(out, "attack.ge_p_bg", a.ge_p_bg);
    check_probability(out, "attack.wifi_reflect_prob", a.wifi_reflect_prob);
    if (a.wifi_reflect_rel_amp < 0.0) out.push_back({"attack.wifi_reflect_rel_amp", "must be >= 0"});

    if (c.features.rolling_window < 2) out.push_back({"features.rolling_window", "must be >= 2"});
    if (c.features.entropy_bins < 2) out.push_back({"features.entropy_bins", "must be >= 2"});
    check_positive(out, "features.std_floor", c.features.std_floor);

    const auto& b = c.baseline;
    if (b.rounds < 1) out.push_back({"baseline.rounds", "must be >= 1"});
    if (b.local_epochs < 1) out.push_back({"baseline.local_epochs", "must be >= 1"});
    if (b.batch_size < 1) out.push_back({"baseline.batch_size", "must be >= 1"});
    check_positive(out, "baseline.learning_rate", b.learning_rate);
    if (!(b.threshold > 0.0 && b.threshold < 1.0)) out.push_back({"baseline.threshold", "must lie in (0, 1)"});

    const auto& v = c.validation;
    check_positive(out, "validation.sigma_rel_tol", v.sigma_rel_tol);
    if (!(v.rho_lo < v.rho_hi)) out.push_back({"validation.rho_hi", "must exceed rho_lo"});
    if (!(v.coverage_lo_factor < v.coverage_hi_factor)) out.push_back({"validation.coverage_hi_factor", "must exceed coverage_lo_factor"});
    if (v.shadow_min_rows < 2) out.push_back({"validation.shadow_min_rows", "must be >= 2"});
    check_positive(out, "validation.std_mean_tol", v.std_mean_tol);
    check_positive(out, "validation.std_std_tol", v.std_std_tol);
    check_positive(out, "validation.xcorr_sigmas", v.xcorr_sigmas);
    if (v.causality_cut_points < 1) out.push_back({"validation.causality_cut_points", "must be >= 1"});
    return out;
}

std::uint64_t derive_split_seed(std::uint64_t seed_base, Split split) noexcept
{
    // seed_base * 4 + split is injective below 2^62 and mix64 is a bijection.
    return mix64((seed_base << 2) | static_cast<std::uint64_t>(index(split)));
}

std::uint64_t derive_split_seed(const GeneratorConfig& config, Split split) noexcept
{
    return derive_split_seed(config.seed_base, split);
}

std::uint64_t derive_dataset_seed(std::uint64_t seed_base) noexcept
{
    return mix64((seed_base << 2) | 3ULL);
}

} // namespace sgrecon
