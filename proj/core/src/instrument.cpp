#include "rfsqueeze/instrument.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "rfsqueeze/errors.hpp"

namespace rfs {

void InstrumentModel::validate() const {
    if (irf_fwhm < 0.0 || phase_jitter_sigma < 0.0 || wandering_sigma < 0.0 ||
        phase_walk_sigma < 0.0)
        throw invalid_input("instrument widths must be >= 0");
    if (drift_rate < 0.0) throw invalid_input("drift rate must be >= 0");
    if (bin_width < 0.0) throw invalid_input("bin width must be >= 0");
    if (detector_rate < 0.0) throw invalid_input("detector rate must be >= 0");
    if (histogram_period <= 0.0) throw invalid_input("histogram period must be > 0");
    if (gh_order < 2) throw invalid_input("Gauss-Hermite order must be >= 2");
}

GaussHermiteRule gauss_hermite(int n) {
    if (n < 1) throw invalid_input("Gauss-Hermite order must be >= 1");
    // Golub-Welsch on the Hermite Jacobi matrix (off-diagonal sqrt(k/2)).
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) {
        const double off = std::sqrt(0.5 * k);
        j(k, k - 1) = off;
        j(k - 1, k) = off;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(j);
    GaussHermiteRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const double sqrt_pi = std::sqrt(M_PI);
    for (int k = 0; k < n; ++k) {
        rule.nodes[k] = solver.eigenvalues()(k);
        const double v0 = solver.eigenvectors()(0, k);
        rule.weights[k] = sqrt_pi * v0 * v0;
    }
    return rule;
}

namespace {

double gh_average(const std::function<double(double)>& f, double mu, double sigma, int order) {
    const GaussHermiteRule rule = gauss_hermite(order);
    double sum = 0.0;
    const double scale = std::sqrt(2.0) * sigma;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k)
        sum += rule.weights[k] * f(mu + scale * rule.nodes[k]);
    return sum / std::sqrt(M_PI);
}

}  // namespace

double average_spectral_wandering(const std::function<double(double)>& f, double delta0,
                                  const InstrumentModel& model, double tol) {
    model.validate();
    if (model.wandering_sigma == 0.0) return f(delta0);

    const double full = gh_average(f, delta0, model.wandering_sigma, model.gh_order);
    const double check = gh_average(f, delta0, model.wandering_sigma, model.gh_order + 8);
    const double defect = std::abs(full - check);
    if (defect > tol * std::max(1.0, std::abs(full)))
        throw accuracy_error("spectral-wandering average not converged at this node count",
                             defect);
    return full;
}

std::vector<double> convolve_two_sided(std::span<const double> tau, std::span<const double> values,
                                       double fwhm) {
    if (tau.size() != values.size() || tau.size() < 2) throw invalid_input("bad trace for convolution");
    if (fwhm < 0.0) throw invalid_input("IRF FWHM must be >= 0");
    if (fwhm == 0.0) return {values.begin(), values.end()};

    const double dt = tau[1] - tau[0];
    for (std::size_t i = 1; i < tau.size(); ++i)
        if (std::abs((tau[i] - tau[i - 1]) - dt) > 1e-9 * dt)
            throw invalid_input("IRF convolution requires a uniform tau grid");

    const double span = tau.back() - tau.front();
    if (fwhm > span) throw accuracy_error("IRF FWHM exceeds the trace span", fwhm - span);

    const double sigma = fwhm / (2.0 * std::sqrt(2.0 * std::log(2.0)));
    const int half = static_cast<int>(std::ceil(6.0 * sigma / dt));

    // Discrete Gaussian kernel normalized to unit mass: the convolution then
    // preserves the histogram integral exactly up to edge treatment.
    std::vector<double> kernel(2 * half + 1);
    double mass = 0.0;
    for (int k = -half; k <= half; ++k) {
        const double x = k * dt;
        kernel[k + half] = std::exp(-0.5 * x * x / (sigma * sigma));
        mass += kernel[k + half];
    }
    for (auto& w : kernel) w /= mass;

    // Mirror about tau = 0 (histograms are two-sided); hold the final value
    // past the right edge where the trace has reached its asymptote.
    const auto sample = [&](long idx) -> double {
        const long n = static_cast<long>(values.size());
        if (idx < 0) idx = -idx;
        if (idx >= n) idx = n - 1;
        return values[static_cast<std::size_t>(idx)];
    };

    std::vector<double> out(values.size());
    for (long i = 0; i < static_cast<long>(values.size()); ++i) {
        double acc = 0.0;
        for (int k = -half; k <= half; ++k) acc += kernel[k + half] * sample(i + k);
        out[static_cast<std::size_t>(i)] = acc;
    }
    return out;
}

CorrelationTrace convolve_irf(const CorrelationTrace& trace, const InstrumentModel& model) {
    trace.validate();
    model.validate();
    CorrelationTrace out = trace;
    if (model.irf_fwhm == 0.0) return out;

    const auto re = trace.real_values();
    const auto conv = convolve_two_sided(trace.tau, re, model.irf_fwhm);
    for (std::size_t k = 0; k < conv.size(); ++k) out.values[k] = conv[k];
    return out;
}

QuadratureScan apply_phase_jitter(const QuadratureScan& scan, const InstrumentModel& model) {
    model.validate();
    if (scan.axis != ScanAxis::phase) throw invalid_input("phase jitter applies to phase scans");
    const std::size_t n = scan.grid.size();
    if (n < 4) throw invalid_input("phase scan too short");

    const double dphi = scan.grid[1] - scan.grid[0];
    for (std::size_t i = 1; i < n; ++i)
        if (std::abs((scan.grid[i] - scan.grid[i - 1]) - dphi) > 1e-9)
            throw invalid_input("phase jitter requires a uniform phase grid");
    if (std::abs(n * dphi - 2.0 * M_PI) > 1e-6)
        throw invalid_input("phase scan must cover one full period (endpoint exclusive)");

    if (model.phase_jitter_sigma == 0.0) return scan;

    // Discrete Fourier series; harmonic k attenuated by the Gaussian
    // characteristic function e^{-k^2 sigma^2 / 2}. The k = 0 term (circular
    // mean) is untouched.
    const std::size_t kmax = n / 2;
    QuadratureScan out = scan;
    std::fill(out.variance.begin(), out.variance.end(), 0.0);
    for (std::size_t k = 0; k <= kmax; ++k) {
        complexd coeff = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            coeff += scan.variance[i] * std::exp(complexd(0.0, -double(k) * scan.grid[i]));
        coeff /= static_cast<double>(n);
        const double att =
            std::exp(-0.5 * double(k) * double(k) * model.phase_jitter_sigma *
                     model.phase_jitter_sigma);
        for (std::size_t i = 0; i < n; ++i) {
            const complexd basis = std::exp(complexd(0.0, double(k) * scan.grid[i]));
            double contrib = (coeff * basis).real();
            if (k > 0 && !(2 * k == n)) contrib *= 2.0;  // conjugate pair
            out.variance[i] += att * contrib;
        }
    }
    return out;
}

namespace {

// tau = 0 value of the convolved quadrature autocorrelation split into its
// phi harmonics: N(phi) = a + Re(e^{2 i phi} b).
struct ConvolvedHarmonics {
    double a = 0.0;
    complexd b = 0.0;
};

ConvolvedHarmonics convolved_variance_harmonics(const SystemParams& params,
                                                const InstrumentModel& model) {
    const auto tau = default_tau_grid(params.gamma);
    const HomodyneTerms ht = homodyne_terms(params, tau);
    const double m = ht.dipole_amplitude;

    // term[2] carries h0 = 2 Re C_pm + 2 rho_ee and h2 = C_pp; the
    // fluctuation parts follow by removing the steady offsets.
    std::vector<double> a_trace(tau.size());
    std::vector<double> b_re(tau.size()), b_im(tau.size());
    for (std::size_t k = 0; k < tau.size(); ++k) {
        a_trace[k] = 0.5 * (0.5 * ht.term[2].h0[k] - ht.rho_ee - m * m);
        const complexd db = 0.5 * (ht.term[2].h2[k] - m * m);
        b_re[k] = db.real();
        b_im[k] = db.imag();
    }

    ConvolvedHarmonics h;
    if (model.irf_fwhm == 0.0) {
        h.a = a_trace[0];
        h.b = complexd(b_re[0], b_im[0]);
        return h;
    }
    h.a = convolve_two_sided(tau, a_trace, model.irf_fwhm)[0];
    h.b = complexd(convolve_two_sided(tau, b_re, model.irf_fwhm)[0],
                   convolve_two_sided(tau, b_im, model.irf_fwhm)[0]);
    return h;
}

}  // namespace

double degraded_variance(const SystemParams& params, double phi, const InstrumentModel& model) {
    params.validate();
    model.validate();
    const double jitter_att =
        std::exp(-2.0 * model.phase_jitter_sigma * model.phase_jitter_sigma);

    const auto value_at = [&](double delta) {
        SystemParams p = params;
        p.detuning = delta;
        const ConvolvedHarmonics h = convolved_variance_harmonics(p, model);
        // Wandering rotates the instantaneous dipole phase away from its
        // mean, arg(delta + i gamma_perp); the lab quadrature at phi sits at
        // phi - eta relative to the wandered dipole.
        const double eta = std::atan2(p.coherence_decay(), delta) -
                           std::atan2(params.coherence_decay(), params.detuning);
        const complexd e2 = std::exp(complexd(0.0, 2.0 * (phi - eta)));
        return h.a + jitter_att * std::real(e2 * h.b);
    };

    if (model.wandering_sigma == 0.0) return value_at(params.detuning);

    // Wide sub-linewidth wander pushes the integrand's poles toward the
    // quadrature contour; escalate the node count before giving up.
    InstrumentModel scaled = model;
    const int orders[] = {model.gh_order, 2 * model.gh_order + 9, 81, 121};
    for (std::size_t i = 0; i < std::size(orders); ++i) {
        scaled.gh_order = orders[i];
        try {
            return average_spectral_wandering(value_at, params.detuning, scaled);
        } catch (const accuracy_error&) {
            if (i + 1 == std::size(orders)) throw;
        }
    }
    return 0.0;  // unreachable
}

namespace {

double bisect(const std::function<double(double)>& f, double lo, double hi, double f_lo,
              double f_hi, int iters = 200) {
    for (int i = 0; i < iters && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((fm <= 0.0) == (f_lo <= 0.0)) {
            lo = mid;
            f_lo = fm;
        } else {
            hi = mid;
            f_hi = fm;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

CalibrationResult calibrate_imperfections(const SystemParams& params, double target_variance,
                                          CalibrationFree free_parameter,
                                          const InstrumentModel& pinned,
                                          std::span<const double> s_grid_for_curve) {
    params.validate();
    pinned.validate();

    const auto with_width = [&](double w) {
        InstrumentModel m = pinned;
        if (free_parameter == CalibrationFree::phase_jitter)
            m.phase_jitter_sigma = w;
        else
            m.irf_fwhm = w;
        return m;
    };
    const auto objective = [&](double w) {
        return degraded_variance(params, 0.0, with_width(w)) - target_variance;
    };

    const double hi_width = free_parameter == CalibrationFree::phase_jitter
                                ? 4.0
                                : 0.45 * 15.0 / params.gamma;
    const double f_lo = objective(0.0);
    const double f_hi = objective(hi_width);
    // Degradation is monotone: the objective runs from the pinned-only value
    // toward the fully-mixed (or fully-smeared) limit.
    if (f_lo > 0.0 || f_hi < 0.0) {
        if (std::abs(f_lo) < 1e-12) {
            // target equals the pinned-only value; zero extra width
        } else {
            throw no_solution("calibration target outside the achievable range", 0.0,
                              f_lo + target_variance, hi_width, f_hi + target_variance);
        }
    }

    const double width = std::abs(f_lo) < 1e-12
                             ? 0.0
                             : bisect(objective, 0.0, hi_width, f_lo, f_hi);

    CalibrationResult result;
    result.model = with_width(width);
    result.achieved = degraded_variance(params, 0.0, result.model);

    result.s_grid.assign(s_grid_for_curve.begin(), s_grid_for_curve.end());
    for (double s : result.s_grid) {
        SystemParams p = params;
        p.rabi = rabi_from_saturation(s, p.gamma);
        result.degraded_in_phase.push_back(degraded_variance(p, 0.0, result.model));
        result.degraded_out_of_phase.push_back(degraded_variance(p, M_PI / 2, result.model));
    }
    return result;
}

}  // namespace rfs
