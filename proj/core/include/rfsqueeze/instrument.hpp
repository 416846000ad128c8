#pragma once

#include <functional>
#include <span>
#include <vector>

#include "rfsqueeze/correlators.hpp"
#include "rfsqueeze/homodyne.hpp"
#include "rfsqueeze/quadrature.hpp"

namespace rfs {

// Per-interval nuisance channels used only for postselection: the
// phonon-sideband monitor rate and the laser-leakage fraction. Exogenous
// scalars, not physical models.
struct NuisanceConfig {
    double psb_base = 1000.0;        // counts/s
    double psb_noise = 20.0;         // Gaussian std per interval
    double psb_wandering_gain = 0.0; // counts/s per |detuning|/gamma excursion
    double leakage_base = 0.002;     // fraction
    double leakage_noise = 0.0005;
    std::vector<std::pair<std::size_t, double>> leakage_spikes;  // (interval, value)
};

// Everything between the ideal theory and the recorded histograms. Times are
// in the same unit as 1/gamma (seconds when gamma comes from the lifetime).
struct InstrumentModel {
    double irf_fwhm = 0.0;           // Gaussian detector response FWHM
    double phase_jitter_sigma = 0.0; // fast (intra-interval) phase noise, rad
    double wandering_sigma = 0.0;    // quasi-static detuning wander, rate units
    double drift_rate = M_PI / 1800.0;  // slow deterministic phase drift, rad/s
    double phase_walk_sigma = 0.0;   // Wiener component of the slow path, rad/sqrt(s)
    double detector_rate = 1.6e5;    // RF-only singles per detector, counts/s
    double histogram_period = 60.0;  // seconds between saved histograms
    double bin_width = 0.0;          // tau bin width; 0 = tau span / 400
    int gh_order = 21;               // Gauss-Hermite nodes for wandering averages
    NuisanceConfig nuisance;

    void validate() const;
};

// Gauss-Hermite rule (physicists' weight e^{-x^2}), nodes ascending.
struct GaussHermiteRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
GaussHermiteRule gauss_hermite(int n);

// E[f(delta)] with delta ~ Normal(delta0, sigma^2); compares two quadrature
// orders and throws accuracy_error when they disagree beyond tol.
double average_spectral_wandering(const std::function<double(double)>& f, double delta0,
                                  const InstrumentModel& model, double tol = 1e-6);

// Symmetric convolution with the Gaussian IRF after mirroring about tau = 0.
// Preserves the discrete integral; any positive width lifts g2(0) above zero.
CorrelationTrace convolve_irf(const CorrelationTrace& trace, const InstrumentModel& model);
std::vector<double> convolve_two_sided(std::span<const double> tau, std::span<const double> values,
                                       double fwhm);

// Circular-Gaussian smoothing of a full-period phase scan (Fourier-space
// attenuation e^{-k^2 sigma^2 / 2}); preserves the circular mean.
QuadratureScan apply_phase_jitter(const QuadratureScan& scan, const InstrumentModel& model);

// tau = 0 value of the IRF-convolved, jitter-smeared, wandering-averaged
// quadrature fluctuation autocorrelation: the variance the instrument sees.
double degraded_variance(const SystemParams& params, double phi, const InstrumentModel& model);

enum class CalibrationFree { phase_jitter, irf_fwhm };

struct CalibrationResult {
    InstrumentModel model;
    double achieved = 0.0;
    std::vector<double> s_grid;
    std::vector<double> degraded_in_phase;      // phi = 0
    std::vector<double> degraded_out_of_phase;  // phi = pi/2
};

// One-dimensional root-find on the free width so the degraded pipeline
// reproduces target_variance (normally ordered, at phi = 0) for the given
// system; the other widths stay pinned at their values in `pinned`.
// Throws no_solution with the bracket when the target is unreachable.
CalibrationResult calibrate_imperfections(const SystemParams& params, double target_variance,
                                          CalibrationFree free_parameter,
                                          const InstrumentModel& pinned,
                                          std::span<const double> s_grid_for_curve = {});

}  // namespace rfs
