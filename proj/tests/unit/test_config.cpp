// SPDX-License-Identifier: Apache-2.0

#include "doctest.h"

#include "sgrecon/config.hpp"

#include "json.hpp"

#include <set>

using namespace sgrecon;

TEST_CASE("empty document yields documented defaults")
{
    const auto c = load_config("{}");
    CHECK(c == default_config());
    CHECK(c.dt_seconds == 1.0);
    CHECK(c.t_train == 20000);
    CHECK(c.t_val == 5000);
    CHECK(c.t_test == 5000);
    CHECK(c.burn_in == 500);
    CHECK(c.mixing_alpha == doctest::Approx(0.30));
    CHECK(c.attack.target_attack_frac == doctest::Approx(0.08));
    CHECK(c.attack.win_core_min == 30);
    CHECK(c.attack.win_core_max == 120);
    CHECK(c.attack.lead == 5);
    CHECK(c.attack.tail == 5);
    CHECK(c.attack.hyst == 5);
    CHECK(c.attack.ramp_frac == doctest::Approx(0.2));
    CHECK(c.attack.group_min == 1);
    CHECK(c.attack.group_max == 3);
    CHECK(c.attack.allow_overlap);
    CHECK(c.attack.ge_p_gb == doctest::Approx(0.05));
    CHECK(c.attack.ge_p_bg == doctest::Approx(0.25));
    CHECK(c.attack.alpha_a0 == doctest::Approx(0.05));
    CHECK(c.attack.alpha_a1 == doctest::Approx(0.01));
    CHECK(c.attack.sigma_s0 == doctest::Approx(0.2));
    CHECK(c.attack.sigma_s1 == doctest::Approx(0.03));
    CHECK(validate_config(c).empty());
}

TEST_CASE("technology defaults")
{
    const auto c = default_config();
    CHECK(c.params(Tech::ZigBee).fading_rho == doctest::Approx(0.95));
    CHECK(c.params(Tech::WiFi).fading_rho == doctest::Approx(0.90));
    CHECK(c.params(Tech::LoRa).fading_rho == doctest::Approx(0.98));
    CHECK(c.params(Tech::PLC).fading_rho == doctest::Approx(0.90));
    CHECK(c.params(Tech::LTE).fading_rho == doctest::Approx(0.93));
    CHECK(c.params(Tech::Fiber).fading_rho == doctest::Approx(0.999));
    CHECK(c.scenario_for(Tier::Han).sigma_db == doctest::Approx(8.03));
    CHECK(c.scenario_for(Tier::Han).dcor_m == doctest::Approx(6.0));
    CHECK(c.scenario_for(Tier::Nan).sigma_db == doctest::Approx(4.0));
    CHECK(c.scenario_for(Tier::Nan).dcor_m == doctest::Approx(10.0));
    CHECK(c.scenario_for(Tier::Wan).sigma_db == doctest::Approx(4.0));
    CHECK(c.scenario_for(Tier::Wan).dcor_m == doctest::Approx(37.0));
}

TEST_CASE("out-of-range attack fraction is rejected with the key name")
{
    try {
        load_config(R"({"attack": {"target_attack_frac": 1.5}})");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("target_attack_frac") != std::string::npos);
    }
}

TEST_CASE("unknown keys and malformed documents are rejected")
{
    CHECK_THROWS_AS(load_config(R"({"no_such_key": 1})"), ConfigError);
    CHECK_THROWS_AS(load_config(R"({"attack": {"bogus": 1}})"), ConfigError);
    CHECK_THROWS_AS(load_config("{ not json"), ConfigError);
    CHECK_THROWS_AS(load_config(R"({"t_train": "many"})"), ConfigError);
}

TEST_CASE("overrides echo on re-serialization")
{
    const auto c = load_config(R"({"attack": {"win_core_min": 30, "win_core_max": 120}})");
    const auto doc = nlohmann::json::parse(to_json_string(c));
    CHECK(doc["attack"]["win_core_min"] == 30);
    CHECK(doc["attack"]["win_core_max"] == 120);
    const auto c2 = load_config(R"({"attack": {"win_core_min": 40, "win_core_max": 90}})");
    const auto doc2 = nlohmann::json::parse(to_json_string(c2));
    CHECK(doc2["attack"]["win_core_min"] == 40);
    CHECK(doc2["attack"]["win_core_max"] == 90);
}

TEST_CASE("round trip is a fixpoint")
{
    auto c = default_config();
    c.seed_base = 987654321;
    c.mixing_alpha = 0.1 + 0.2; // not exactly representable as a short literal
    c.shadowing.fiber_shadow_override = true;
    c.baseline.train_seed = 77;
    const auto text = to_json_string(c);
    const auto back = load_config(text);
    CHECK(back == c);
    CHECK(to_json_string(back) == text);
}

TEST_CASE("validate_config names offending fields")
{
    auto c = default_config();
    c.attack.group_max = 0;
    auto v = validate_config(c);
    REQUIRE(v.size() == 1);
    CHECK(v[0].field.find("group_max") != std::string::npos);

    c = default_config();
    c.attack.shadow.weights = {0.5, 0.6};
    c.attack.shadow.modes = {10.0, 20.0};
    c.attack.shadow.sigmas = {1.0, 1.0};
    v = validate_config(c);
    REQUIRE_FALSE(v.empty());
    CHECK(v[0].message.find("sum") != std::string::npos);

    c = default_config();
    c.ewma_beta = 1.0;
    CHECK_FALSE(validate_config(c).empty());

    c = default_config();
    c.attack.win_core_min = 200;
    CHECK_FALSE(validate_config(c).empty());

    c = default_config();
    c.attack.ramp_frac = 0.0;
    CHECK_FALSE(validate_config(c).empty());

    c = default_config();
    c.attack.shadow.clip_lo = c.attack.shadow.clip_hi;
    CHECK_FALSE(validate_config(c).empty());

    c = default_config();
    c.burn_in = -1;
    CHECK_FALSE(validate_config(c).empty());
}

TEST_CASE("split seeds are deterministic and distinct")
{
    CHECK(derive_split_seed(42, Split::Train) == derive_split_seed(42, Split::Train));
    CHECK(derive_split_seed(42, Split::Train) != derive_split_seed(42, Split::Val));
    CHECK(derive_split_seed(42, Split::Train) != derive_split_seed(43, Split::Train));
    CHECK(derive_split_seed(default_config(), Split::Test) == derive_split_seed(42, Split::Test));

    std::set<std::uint64_t> seen;
    for (std::uint64_t s = 0; s <= 10000; ++s) {
        for (Split split : kAllSplits) {
            seen.insert(derive_split_seed(s, split));
        }
    }
    CHECK(seen.size() == 3 * 10001);
}

TEST_CASE("split seed is pure over repeated calls")
{
    std::set<std::uint64_t> values;
    for (int i = 0; i < 1000000; ++i) {
        values.insert(derive_split_seed(42, Split::Val));
    }
    CHECK(values.size() == 1);
}
