#include "rfsqueeze/campaign.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rfsqueeze/errors.hpp"
#include "rfsqueeze/rng.hpp"

namespace rfs {

double FringeReference::min_intensity() const {
    return *std::min_element(intensity.begin(), intensity.end());
}

double FringeReference::max_intensity() const {
    return *std::max_element(intensity.begin(), intensity.end());
}

double FringeReference::visibility() const {
    const double lo = min_intensity(), hi = max_intensity();
    return (hi + lo) > 0.0 ? (hi - lo) / (hi + lo) : 0.0;
}

std::uint64_t CampaignResult::total_coincidences(bool accepted_only) const {
    std::uint64_t sum = 0;
    for (const auto& iv : intervals) {
        if (accepted_only && !iv.accepted) continue;
        sum += std::accumulate(iv.counts.begin(), iv.counts.end(), std::uint64_t{0});
    }
    return sum;
}

std::size_t CampaignResult::accepted_count() const {
    return static_cast<std::size_t>(
        std::count_if(intervals.begin(), intervals.end(),
                      [](const IntervalRecord& iv) { return iv.accepted; }));
}

namespace {

std::vector<double> campaign_tau_grid(const SystemParams& params, const InstrumentModel& model) {
    const double span = 15.0 / params.gamma;
    const double w = model.bin_width > 0.0 ? model.bin_width : span / 400.0;
    const int n = std::max(2, static_cast<int>(std::round(span / w)));
    std::vector<double> tau(n);
    for (int k = 0; k < n; ++k) tau[k] = k * w;
    return tau;
}

HomodyneTerms convolved_terms(const SystemParams& params, const InstrumentModel& model,
                              std::span<const double> tau) {
    HomodyneTerms ht = homodyne_terms(params, tau);
    if (model.irf_fwhm == 0.0) return ht;

    const auto conv_real = [&](std::vector<double>& v) {
        if (!v.empty()) v = convolve_two_sided(tau, v, model.irf_fwhm);
    };
    const auto conv_complex = [&](std::vector<complexd>& v) {
        if (v.empty()) return;
        std::vector<double> re(v.size()), im(v.size());
        for (std::size_t k = 0; k < v.size(); ++k) {
            re[k] = v[k].real();
            im[k] = v[k].imag();
        }
        re = convolve_two_sided(tau, re, model.irf_fwhm);
        im = convolve_two_sided(tau, im, model.irf_fwhm);
        for (std::size_t k = 0; k < v.size(); ++k) v[k] = complexd(re[k], im[k]);
    };
    for (auto& term : ht.term) {
        conv_real(term.h0);
        conv_complex(term.h1);
        conv_complex(term.h2);
    }
    return ht;
}

// Convolved quadrature payload at tau = 0 as a function of phi, in the same
// harmonic form used by decompose_by_lo_order.
double model_quadrature_tau0(const HomodyneTerms& ht, double phi, double jitter_sigma) {
    const double m = ht.dipole_amplitude;
    const double a = 0.5 * (0.5 * ht.term[2].h0[0] - ht.rho_ee - m * m);
    const complexd b = 0.5 * (ht.term[2].h2[0] - m * m);
    const double att = std::exp(-2.0 * jitter_sigma * jitter_sigma);
    return a + att * std::real(std::exp(complexd(0.0, 2.0 * phi)) * b);
}

double dipole_phase_shift(const SystemParams& nominal, double delta) {
    return std::atan2(nominal.coherence_decay(), delta) -
           std::atan2(nominal.coherence_decay(), nominal.detuning);
}

void bin_intervals(CampaignResult& result, int n_bins);

}  // namespace

CampaignResult simulate_campaign(const SystemParams& params, const LoConfig& lo,
                                 const InstrumentModel& model, double duration,
                                 std::uint64_t seed) {
    params.validate();
    lo.validate();
    model.validate();
    if (!(model.detector_rate > 0.0)) throw invalid_input("detector rate must be > 0");
    if (duration < model.histogram_period)
        throw invalid_input("duration shorter than one histogram period");

    CampaignResult result;
    result.params = params;
    result.lo = lo;
    result.model = model;
    result.seed = seed;
    result.duration = duration;
    result.tau = campaign_tau_grid(params, model);

    const Liouvillian L = build_liouvillian(params);
    const DensityMatrix2 ss = steady_state(L);
    if (!(ss.rho_ee > 0.0)) throw invalid_input("campaign needs a driven emitter (rho_ee > 0)");
    result.kappa = model.detector_rate / ss.rho_ee;

    const HomodyneTerms nominal_terms = convolved_terms(params, model, result.tau);

    // Fringe calibration sweep (jitter-smeared model intensities, counts/s).
    const int n_ref = 256;
    result.fringe.phi.resize(n_ref);
    result.fringe.intensity.resize(n_ref);
    for (int i = 0; i < n_ref; ++i) {
        const double phi = 2.0 * M_PI * i / n_ref;
        result.fringe.phi[i] = phi;
        result.fringe.intensity[i] =
            result.kappa * nominal_terms.mean_intensity({lo.amplitude, phi},
                                                        model.phase_jitter_sigma);
    }

    Rng rng(seed);
    const double period = model.histogram_period;
    const std::size_t n_intervals = static_cast<std::size_t>(std::floor(duration / period));
    const double w = result.tau[1] - result.tau[0];
    const double kappa2wt = result.kappa * result.kappa * w * period;

    double phase = lo.phase;
    result.intervals.reserve(n_intervals);
    for (std::size_t k = 0; k < n_intervals; ++k) {
        IntervalRecord iv;
        iv.t_start = k * period;
        iv.phase_true = phase;

        iv.detuning = params.detuning;
        if (model.wandering_sigma > 0.0)
            iv.detuning = rng.normal(params.detuning, model.wandering_sigma);

        double phi_eff = phase;
        const HomodyneTerms* terms = &nominal_terms;
        HomodyneTerms wandered;
        if (iv.detuning != params.detuning) {
            SystemParams p = params;
            p.detuning = iv.detuning;
            wandered = convolved_terms(p, model, result.tau);
            terms = &wandered;
            phi_eff = phase - dipole_phase_shift(params, iv.detuning);
        }

        const LoConfig lo_now{lo.amplitude, phi_eff};
        const auto expected = terms->total(lo_now, model.phase_jitter_sigma);
        iv.counts.resize(expected.size());
        for (std::size_t t = 0; t < expected.size(); ++t)
            iv.counts[t] = rng.poisson(std::max(0.0, kappa2wt * expected[t]));

        const double rate =
            result.kappa * terms->mean_intensity(lo_now, model.phase_jitter_sigma);
        iv.intensity1 = static_cast<double>(rng.poisson(rate * period)) / period;
        iv.intensity2 = static_cast<double>(rng.poisson(rate * period)) / period;

        const auto& nu = model.nuisance;
        iv.psb_rate = nu.psb_base +
                      nu.psb_wandering_gain *
                          std::abs(iv.detuning - params.detuning) / params.gamma +
                      rng.normal(0.0, nu.psb_noise);
        iv.leakage = nu.leakage_base + rng.normal(0.0, nu.leakage_noise);
        for (const auto& [idx, value] : nu.leakage_spikes)
            if (idx == k) iv.leakage = value;

        result.intervals.push_back(std::move(iv));

        phase += model.drift_rate * period;
        if (model.phase_walk_sigma > 0.0)
            phase += rng.normal(0.0, model.phase_walk_sigma * std::sqrt(period));
    }
    return result;
}

namespace {

void bin_intervals(CampaignResult& result, int n_bins) {
    if (n_bins < 1) throw invalid_input("need at least one phase bin");
    const double vis = result.fringe.visibility();
    if (!(vis > 1e-9)) throw cannot_bin("fringe reference has no contrast");

    const double i_lo = result.fringe.min_intensity();
    const double i_hi = result.fringe.max_intensity();
    const double mid = 0.5 * (i_hi + i_lo);
    const double amp = 0.5 * (i_hi - i_lo);

    const std::size_t n_tau = result.tau.size();
    result.binned.assign(n_bins, {});
    for (int j = 0; j < n_bins; ++j) {
        auto& bin = result.binned[j];
        bin.phi_low = M_PI * j / n_bins;
        bin.phi_high = M_PI * (j + 1) / n_bins;
        bin.phi_center = 0.5 * (bin.phi_low + bin.phi_high);
        bin.counts.assign(n_tau, 0);
    }

    const HomodyneTerms terms = convolved_terms(result.params, result.model, result.tau);
    const double beta2 = result.lo.flux();
    if (!(beta2 > 0.0)) throw cannot_bin("quadrature binning needs a local oscillator");
    const double w = result.tau[1] - result.tau[0];
    const double period = result.model.histogram_period;
    const double kappa2wt = result.kappa * result.kappa * w * period;

    // Equal phase bins realized as intensity bins whose widths follow the
    // fringe derivative; inverting the fringe gives the folded phase in
    // [0, pi] directly (arccos cannot see the sign).
    std::vector<std::vector<double>> estimates(n_bins);
    for (const auto& iv : result.intervals) {
        if (!iv.accepted) continue;
        const double mean_i = 0.5 * (iv.intensity1 + iv.intensity2);
        const double c = std::clamp((mean_i - mid) / amp, -1.0, 1.0);
        const double phi_hat = std::acos(c);
        int j = std::min(n_bins - 1, static_cast<int>(phi_hat / M_PI * n_bins));

        auto& bin = result.binned[j];
        bin.n_intervals += 1;
        bin.exposure += period;
        for (std::size_t t = 0; t < n_tau; ++t) bin.counts[t] += iv.counts[t];

        // Model-subtraction estimate of the quadrature payload at tau = 0.
        const auto model_total =
            terms.total({result.lo.amplitude, phi_hat}, result.model.phase_jitter_sigma);
        const double q_model =
            model_quadrature_tau0(terms, phi_hat, result.model.phase_jitter_sigma);
        const double g2_measured = static_cast<double>(iv.counts[0]) / kappa2wt;
        estimates[j].push_back(q_model + (g2_measured - model_total[0]) / (4.0 * beta2));
    }

    Rng boot_rng = Rng(result.seed).fork(0xB007);
    for (int j = 0; j < n_bins; ++j) {
        auto& bin = result.binned[j];
        bin.g2.assign(n_tau, 0.0);
        if (bin.n_intervals == 0) continue;
        const double norm = result.kappa * result.kappa * w * bin.exposure;
        for (std::size_t t = 0; t < n_tau; ++t)
            bin.g2[t] = static_cast<double>(bin.counts[t]) / norm;

        const auto& est = estimates[j];
        bin.variance_estimate =
            std::accumulate(est.begin(), est.end(), 0.0) / static_cast<double>(est.size());

        // Bootstrap over intervals within the bin.
        const int n_boot = 200;
        std::vector<double> means;
        means.reserve(n_boot);
        for (int b = 0; b < n_boot; ++b) {
            double acc = 0.0;
            for (std::size_t r = 0; r < est.size(); ++r)
                acc += est[boot_rng.next_u64() % est.size()];
            means.push_back(acc / static_cast<double>(est.size()));
        }
        double mean = std::accumulate(means.begin(), means.end(), 0.0) / n_boot;
        double var = 0.0;
        for (double v : means) var += (v - mean) * (v - mean);
        bin.variance_bootstrap_sigma = std::sqrt(var / (n_boot - 1));
    }
}

}  // namespace

CampaignResult phase_bin(const CampaignResult& result, int n_bins) {
    CampaignResult out = result;
    bin_intervals(out, n_bins);
    return out;
}

CampaignResult postselect(const CampaignResult& result, const PostselectThresholds& thresholds) {
    CampaignResult out = result;
    for (auto& iv : out.intervals) {
        iv.accepted = true;
        iv.reject_reason.clear();
        if (iv.psb_rate > thresholds.psb_max) {
            iv.accepted = false;
            iv.reject_reason = "psb_rate above threshold";
        }
        if (iv.leakage > thresholds.leakage_max) {
            iv.accepted = false;
            iv.reject_reason += iv.reject_reason.empty() ? "leakage above threshold"
                                                         : "; leakage above threshold";
        }
    }
    if (out.accepted_count() == 0)
        throw empty_acceptance("postselection rejected every interval");
    if (!out.binned.empty()) bin_intervals(out, static_cast<int>(out.binned.size()));
    return out;
}

}  // namespace rfs
