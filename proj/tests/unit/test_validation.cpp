// SPDX-License-Identifier: Apache-2.0

#include "doctest.h"

#include "sgrecon/channel.hpp"
#include "sgrecon/features.hpp"
#include "sgrecon/validation.hpp"

#include <cmath>

using namespace sgrecon;

TEST_CASE("shadow estimator calibration on a known AR(1)")
{
    RandomStream s(1);
    auto x = gen_ar1(0.9, 200000, s);
    for (auto& v : x) {
        v *= 5.0;
    }
    const std::vector<std::uint8_t> all(x.size(), 1);
    const auto st = estimate_shadow_stats(x, all, 0.5, 1.0);
    CHECK(std::abs(st.rho1 - 0.9) <= 0.01);
    CHECK(std::abs(st.sigma_db - 5.0) <= 0.1);
    CHECK(st.dcor_m == doctest::Approx(-0.5 / std::log(st.rho1)));
    CHECK(st.rows == x.size());
    CHECK(st.pairs == x.size() - 1);
}

TEST_CASE("run segmentation ignores pairs across excluded rows")
{
    RandomStream s(2);
    const auto x = gen_ar1(0.95, 100000, s);
    std::vector<std::uint8_t> q(x.size(), 1);
    auto masked = x;
    for (std::size_t t = 0; t < q.size(); t += 7) {
        q[t] = 0;
        masked[t] = 1e6; // must never be read
    }
    std::size_t pairs = 0;
    const double r = run_segmented_lag1(masked, q, &pairs);
    CHECK(std::abs(r - 0.95) <= 0.01);
    std::size_t expected = 0;
    for (std::size_t t = 1; t < q.size(); ++t) {
        expected += (q[t] && q[t - 1]) ? 1 : 0;
    }
    CHECK(pairs == expected);

    const std::vector<std::uint8_t> few(500, 1);
    CHECK_THROWS_AS(estimate_shadow_stats(std::span<const double>(x.data(), 500), few, 0.5, 1.0), std::invalid_argument);
}

TEST_CASE("coverage entries")
{
    const std::vector<double> tx{0, 1, 2, 0, 1, 1};
    const std::vector<double> lab{0, 1, 0, 0, 1, 0};
    const auto e = coverage_entry(3, Split::Train, true, tx, lab);
    CHECK(e.active == 4);
    CHECK(e.labeled == 2);
    CHECK(e.ratio == 0.5);
    const std::vector<double> zeros(6, 0.0);
    const auto idle = coverage_entry(3, Split::Train, true, zeros, zeros);
    CHECK(idle.active == 0);
    CHECK(idle.ratio == 0.0);
}

TEST_CASE("quantiles interpolate linearly")
{
    CHECK(quantile({4.0, 1.0, 3.0, 2.0}, 0.5) == doctest::Approx(2.5));
    CHECK(quantile({4.0, 1.0, 3.0, 2.0}, 0.0) == 1.0);
    CHECK(quantile({4.0, 1.0, 3.0, 2.0}, 1.0) == 4.0);
    CHECK(std::isnan(quantile({}, 0.5)));
}

TEST_CASE("shift entries")
{
    Table t;
    t.add("tx_count", {1, 1, 1, 1, 0, 1});
    t.add("attack_label", {0, 0, 1, 1, 0, 0});
    t.add("C", {1.0, 1.0, 0.5, 0.5, 1.0, 1.0});
    t.add("SNR", {10, 12, 2, 4, -50, 14});
    t.add("PER", {0.1, 0.1, 0.6, 0.8, 1.0, 0.1});
    t.add("L_ewma", {5, 5, 9, 11, 100, 5});
    const auto e = shift_entry(1, t, 2, true);
    CHECK_FALSE(e.skipped);
    CHECK(e.attack_rows == 2);
    CHECK(e.normal_rows == 3);
    CHECK(e.delta[1] == doctest::Approx(3.0 - 12.0));
    CHECK(e.delta[2] == doctest::Approx(0.7 - 0.1));
    CHECK(e.delta[3] == doctest::Approx(10.0 - 5.0));
    CHECK(e.delta[0] == doctest::Approx(20.0 * std::log10(0.5)));
    CHECK(e.gated);
    CHECK(e.passed);

    Table none = t;
    none.column("attack_label") = std::vector<double>(6, 0.0);
    CHECK(shift_entry(1, none, 2, true).skipped);
}

TEST_CASE("future randomization probe")
{
    RandomStream s(3);
    std::vector<double> x(500);
    for (auto& v : x) {
        v = s.normal();
    }
    const std::vector<std::int64_t> cuts{10, 100, 250, 400};
    const auto causal = [](const std::vector<double>& v) { return rolling_mean(v, 32); };
    RandomStream p1(4);
    CHECK(future_randomization_probe(causal, x, cuts, p1) == -1);

    // Negative control: window centred on t.
    const auto centred = [](const std::vector<double>& v) {
        std::vector<double> out(v.size());
        for (std::size_t t = 0; t < v.size(); ++t) {
            const std::size_t lo = t >= 16 ? t - 16 : 0;
            const std::size_t hi = std::min(v.size() - 1, t + 16);
            double sum = 0.0;
            for (std::size_t k = lo; k <= hi; ++k) {
                sum += v[k];
            }
            out[t] = sum / static_cast<double>(hi - lo + 1);
        }
        return out;
    };
    RandomStream p2(4);
    CHECK(future_randomization_probe(centred, x, cuts, p2) >= 0);
}

TEST_CASE("cross-split correlation bound")
{
    RandomStream a(5);
    RandomStream b(6);
    const auto sa = gen_ar1(0.97, 20000, a);
    const auto sb = gen_ar1(0.97, 5000, b);
    const std::vector<double> la(sa.size(), 0.0);
    const std::vector<double> lb(sb.size(), 0.0);
    const auto indep = cross_split_correlation(0, Split::Val, sa, la, sb, lb, 3.0);
    CHECK(indep.passed);
    CHECK(indep.pairs > 4000);
    CHECK(indep.bound == doctest::Approx(3.0 / std::sqrt(static_cast<double>(indep.pairs))));

    // A split that reuses the other's latent trace must fail.
    const std::vector<double> copy(sa.begin(), sa.begin() + 5000);
    CHECK_FALSE(cross_split_correlation(0, Split::Val, sa, la, copy, lb, 3.0).passed);
}

TEST_CASE("standardization audit detects a validation fit")
{
    RandomStream s(7);
    const auto make = [&](double shift) {
        Table t;
        std::vector<double> c(3000);
        std::vector<double> snr(3000);
        for (std::size_t k = 0; k < c.size(); ++k) {
            c[k] = std::exp(s.normal(0.0, 0.3));
            snr[k] = s.normal(10.0 + shift, 3.0);
        }
        t.add("C", c);
        t.add("SNR", snr);
        t.add("shadow_db", std::vector<double>(3000, 0.0));
        return t;
    };
    const std::vector<Table> train{make(0.0)};
    const std::vector<Table> val{make(1.0)};
    const auto fit = [](const Table& t) {
        Standardizer st(1e-8);
        std::vector<double> cdb(t.rows());
        for (std::size_t k = 0; k < cdb.size(); ++k) {
            cdb[k] = 20.0 * std::log10(t.column("C")[k]);
        }
        st.fit_node(0, {"C", "SNR", "C_db"}, {t.column("C"), t.column("SNR"), cdb});
        return st;
    };
    CHECK(standardization_audit(train, val, fit(train[0]).to_json(), 1e-9, 1e-6).empty());
    CHECK_FALSE(standardization_audit(train, val, fit(val[0]).to_json(), 1e-9, 1e-6).empty());
    CHECK_FALSE(standardization_audit(train, val, "{broken", 1e-9, 1e-6).empty());
}
