#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "rfsqueeze/instrument.hpp"

namespace rfs {

// One saved histogram interval: coincidence counts per tau bin plus the
// measured singles intensities and nuisance channels used downstream.
struct IntervalRecord {
    double t_start = 0.0;
    double phase_true = 0.0;   // slow interferometer phase (diagnostic)
    double detuning = 0.0;     // wandered detuning for this interval
    double intensity1 = 0.0;   // measured mean singles rate, detector 1 (counts/s)
    double intensity2 = 0.0;
    double psb_rate = 0.0;
    double leakage = 0.0;
    std::vector<std::uint64_t> counts;
    bool accepted = true;
    std::string reject_reason;
};

struct FringeReference {
    std::vector<double> phi;
    std::vector<double> intensity;  // counts/s on one detector

    double min_intensity() const;
    double max_intensity() const;
    double visibility() const;
};

struct BinnedTrace {
    double phi_low = 0.0, phi_high = 0.0, phi_center = 0.0;
    std::size_t n_intervals = 0;
    double exposure = 0.0;  // seconds of accepted data
    std::vector<std::uint64_t> counts;
    std::vector<double> g2;            // counts / (kappa^2 w T), flux^2 units
    double variance_estimate = 0.0;    // quadrature payload at tau = 0
    double variance_bootstrap_sigma = 0.0;
};

struct CampaignResult {
    SystemParams params;
    LoConfig lo;
    InstrumentModel model;
    std::uint64_t seed = 0;
    double duration = 0.0;
    double kappa = 0.0;  // counts/s per unit flux on one detector

    std::vector<double> tau;  // bin centers, starting at 0
    std::vector<IntervalRecord> intervals;
    FringeReference fringe;
    std::vector<BinnedTrace> binned;  // filled by phase_bin

    std::uint64_t total_coincidences(bool accepted_only = false) const;
    std::size_t accepted_count() const;
};

// Simulates the Methods pipeline: slow phase drift plus Wiener walk, fast
// jitter folded in analytically, quasi-static spectral wandering, Poisson
// singles and coincidences per histogram period. Deterministic per
// (seed, configuration).
CampaignResult simulate_campaign(const SystemParams& params, const LoConfig& lo,
                                 const InstrumentModel& model, double duration,
                                 std::uint64_t seed);

// Sign-invariant intensity binning into n_bins equal phase bins on [0, pi]
// via the fringe-derivative rule; fills per-bin histograms and the
// model-subtraction quadrature variance estimates with bootstrap errors.
CampaignResult phase_bin(const CampaignResult& result, int n_bins);

struct PostselectThresholds {
    double psb_max = std::numeric_limits<double>::infinity();
    double leakage_max = std::numeric_limits<double>::infinity();
};

// Flags intervals failing a threshold and recomputes binned statistics from
// the accepted ones; throws empty_acceptance when nothing survives.
CampaignResult postselect(const CampaignResult& result, const PostselectThresholds& thresholds);

}  // namespace rfs
