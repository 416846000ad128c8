#include <doctest.h>

#include <cmath>
#include <sstream>

#include "rfsqueeze/campaign.hpp"
#include "rfsqueeze/errors.hpp"
#include "rfsqueeze/trace_io.hpp"
#include "oracles.hpp"

using namespace rfs;

namespace {

SystemParams params_s(double s) { return SystemParams::from_saturation(s, 1.0); }

InstrumentModel frozen_model() {
    InstrumentModel m;
    m.drift_rate = 0.0;
    m.phase_walk_sigma = 0.0;
    m.phase_jitter_sigma = 0.0;
    m.irf_fwhm = 0.0;
    m.detector_rate = 2e5;
    m.histogram_period = 60.0;
    return m;
}

}  // namespace

TEST_CASE("zero detector rate and zero duration are rejected") {
    const auto p = params_s(0.1);
    const auto lo = LoConfig::matched(p, 0.0);
    InstrumentModel m = frozen_model();
    m.detector_rate = 0.0;
    CHECK_THROWS_AS(simulate_campaign(p, lo, m, 3600.0, 1), invalid_input);
    CHECK_THROWS_AS(simulate_campaign(p, lo, frozen_model(), 0.0, 1), invalid_input);
}

TEST_CASE("frozen-phase histogram matches the g2_total expectation within Poisson error") {
    const auto p = params_s(0.1);
    const auto lo = LoConfig::matched(p, 0.0);
    const auto m = frozen_model();
    const auto result = simulate_campaign(p, lo, m, 50 * m.histogram_period, 4242);

    const auto expected = homodyne_terms(p, result.tau).total(lo);
    const double w = result.tau[1] - result.tau[0];
    const double kappa2wt = result.kappa * result.kappa * w * m.histogram_period *
                            static_cast<double>(result.intervals.size());

    std::vector<double> totals(result.tau.size(), 0.0);
    for (const auto& iv : result.intervals)
        for (std::size_t t = 0; t < totals.size(); ++t) totals[t] += iv.counts[t];

    int outliers = 0;
    for (std::size_t t = 0; t < totals.size(); ++t) {
        const double mu = kappa2wt * expected[t];
        const double sigma = std::sqrt(std::max(mu, 1.0));
        if (std::abs(totals[t] - mu) > 3.0 * sigma) ++outliers;
    }
    // 3-sigma outliers should be rare (0.27% expected)
    CHECK(outliers < static_cast<int>(totals.size()) / 40);
}

TEST_CASE("identical seed and configuration reproduce the campaign byte for byte") {
    const auto p = params_s(0.1);
    const auto lo = LoConfig::matched(p, 0.3);
    InstrumentModel m = frozen_model();
    m.drift_rate = M_PI / 1800.0;
    m.phase_walk_sigma = 0.004;
    m.wandering_sigma = 0.1;
    m.nuisance.psb_wandering_gain = 200.0;

    const auto a = phase_bin(simulate_campaign(p, lo, m, 30 * m.histogram_period, 99), 8);
    const auto b = phase_bin(simulate_campaign(p, lo, m, 30 * m.histogram_period, 99), 8);

    std::ostringstream sa, sb;
    intervals_to_csv(sa, a);
    intervals_to_csv(sb, b);
    estimates_to_csv(sa, a);
    estimates_to_csv(sb, b);
    for (std::size_t i = 0; i < a.intervals.size(); ++i) {
        histogram_to_csv(sa, a, i);
        histogram_to_csv(sb, b, i);
    }
    CHECK(sa.str() == sb.str());

    const auto c = simulate_campaign(p, lo, m, 30 * m.histogram_period, 100);
    std::ostringstream sc;
    intervals_to_csv(sc, c);
    CHECK(sa.str() != sc.str());
}

TEST_CASE("doubling the duration shrinks the binned standard error") {
    const auto p = params_s(0.1);
    const auto lo = LoConfig::matched(p, 0.0);
    InstrumentModel m = frozen_model();
    m.drift_rate = M_PI / 600.0;  // sweep phases fast enough to fill bins

    double ratio_sum = 0.0;
    const int n_seeds = 20;
    for (int seed = 0; seed < n_seeds; ++seed) {
        const auto short_run =
            phase_bin(simulate_campaign(p, lo, m, 40 * m.histogram_period, 1000 + seed), 4);
        const auto long_run =
            phase_bin(simulate_campaign(p, lo, m, 80 * m.histogram_period, 2000 + seed), 4);
        ratio_sum += long_run.binned[0].variance_bootstrap_sigma /
                     short_run.binned[0].variance_bootstrap_sigma;
    }
    const double mean_ratio = ratio_sum / n_seeds;
    CHECK(mean_ratio == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(0.2));
}

TEST_CASE("phase binning is sign-invariant and fills bins uniformly under a sweep") {
    const auto p = params_s(0.1);
    const auto lo = LoConfig::matched(p, 0.0);
    InstrumentModel m = frozen_model();
    // one full 2 pi sweep over the run: folded phases cover [0, pi] twice
    const int n_intervals = 240;
    m.drift_rate = 2.0 * M_PI / (n_intervals * m.histogram_period);
    m.detector_rate = 5e6;  // negligible phase estimation error

    const auto result =
        phase_bin(simulate_campaign(p, lo, m, n_intervals * m.histogram_period, 7), 8);
    for (const auto& bin : result.binned)
        CHECK(std::abs(static_cast<double>(bin.n_intervals) - 30.0) <= 2.0);
}

TEST_CASE("an interval at the fringe maximum lands in the phi = 0 bin") {
    const auto p = params_s(0.1);
    const auto lo = LoConfig::matched(p, 0.0);  // start exactly in phase
    InstrumentModel m = frozen_model();
    m.detector_rate = 1e7;  // kill shot noise
    const auto result = phase_bin(simulate_campaign(p, lo, m, 5 * m.histogram_period, 3), 10);
    CHECK(result.binned.front().n_intervals == result.intervals.size());
}

TEST_CASE("shot-noise-limited phase estimation error stays below 0.05 rad near quadrature") {
    const auto p = params_s(0.1);
    const auto lo = LoConfig::matched(p, M_PI / 2);  // quadrature: steepest fringe slope
    InstrumentModel m = frozen_model();
    m.detector_rate = 1.6e5;

    const auto result = simulate_campaign(p, lo, m, 40 * m.histogram_period, 11);
    const double i_lo = result.fringe.min_intensity();
    const double i_hi = result.fringe.max_intensity();
    const double mid = 0.5 * (i_hi + i_lo), amp = 0.5 * (i_hi - i_lo);
    for (const auto& iv : result.intervals) {
        const double mean_i = 0.5 * (iv.intensity1 + iv.intensity2);
        const double phi_hat = std::acos(std::clamp((mean_i - mid) / amp, -1.0, 1.0));
        CHECK(std::abs(phi_hat - M_PI / 2) < 0.05);
    }
}

TEST_CASE("count conservation through binning and postselection") {
    const auto p = params_s(0.1);
    const auto lo = LoConfig::matched(p, 0.2);
    InstrumentModel m = frozen_model();
    m.drift_rate = M_PI / 900.0;
    m.nuisance.leakage_spikes = {{3, 0.5}, {7, 0.6}};

    auto result = phase_bin(simulate_campaign(p, lo, m, 20 * m.histogram_period, 21), 6);
    const std::uint64_t total = result.total_coincidences();
    std::uint64_t binned_sum = 0;
    for (const auto& bin : result.binned)
        for (auto c : bin.counts) binned_sum += c;
    CHECK(binned_sum == total);

    PostselectThresholds th;
    th.leakage_max = 0.1;
    const auto selected = postselect(result, th);
    CHECK(selected.accepted_count() == result.intervals.size() - 2);
    std::uint64_t accepted_binned = 0;
    for (const auto& bin : selected.binned)
        for (auto c : bin.counts) accepted_binned += c;
    CHECK(accepted_binned == selected.total_coincidences(true));
    CHECK(selected.total_coincidences(false) == total);
}

TEST_CASE("postselection semantics") {
    const auto p = params_s(0.1);
    const auto lo = LoConfig::matched(p, 0.0);
    InstrumentModel m = frozen_model();
    m.nuisance.leakage_spikes = {{2, 0.9}};
    const auto result = simulate_campaign(p, lo, m, 10 * m.histogram_period, 5);

    // thresholds at infinity accept everything
    const auto all = postselect(result, PostselectThresholds{});
    CHECK(all.accepted_count() == result.intervals.size());

    // the spiked interval is rejected, exactly once
    PostselectThresholds th;
    th.leakage_max = 0.5;
    const auto sel = postselect(result, th);
    CHECK(sel.accepted_count() == result.intervals.size() - 1);
    CHECK(!sel.intervals[2].accepted);
    CHECK(sel.intervals[2].reject_reason.find("leakage") != std::string::npos);

    // impossible thresholds reject everything
    PostselectThresholds none;
    none.psb_max = -1.0;
    CHECK_THROWS_AS(postselect(result, none), empty_acceptance);
}

TEST_CASE("postselection on wandering-correlated PSB improves the squeezing estimate") {
    const auto p = params_s(0.1);
    const auto lo = LoConfig::matched(p, 0.0);
    InstrumentModel m = frozen_model();
    m.wandering_sigma = 0.35;
    m.nuisance.psb_base = 1000.0;
    m.nuisance.psb_noise = 5.0;
    m.nuisance.psb_wandering_gain = 1000.0;
    m.detector_rate = 1e6;

    PostselectThresholds th;
    th.psb_max = 1150.0;  // keeps small-excursion intervals only

    int improved = 0;
    const int n_seeds = 20;
    for (int seed = 0; seed < n_seeds; ++seed) {
        const auto run =
            phase_bin(simulate_campaign(p, lo, m, 60 * m.histogram_period, 400 + seed), 4);
        const auto sel = postselect(run, th);
        // more negative = deeper squeezing recovered
        if (sel.binned[0].variance_estimate < run.binned[0].variance_estimate) ++improved;
    }
    CHECK(improved > n_seeds / 2);
}

TEST_CASE("degenerate fringe cannot be binned") {
    const auto p = params_s(0.1);
    InstrumentModel m = frozen_model();
    const auto result = simulate_campaign(p, {0.0, 0.0}, m, 5 * m.histogram_period, 1);
    CHECK_THROWS_AS(phase_bin(result, 4), cannot_bin);
}
