#pragma once

#include <iosfwd>
#include <string>

#include "rfsqueeze/campaign.hpp"
#include "rfsqueeze/correlators.hpp"
#include "rfsqueeze/phase_space.hpp"
#include "rfsqueeze/quadrature.hpp"

namespace rfs {

// Round-trip-exact decimal formatting; all emitted files are reproducible
// byte-for-byte from (config, seed).
std::string format_double(double v);

// Header: tau_s,value,kind,phi_rad,beta2 (value is dimensionless; see kind).
void trace_to_csv(std::ostream& os, const CorrelationTrace& trace);

// Header: x_<unit>,variance  (phase scans: phi_rad; power scans: s).
void scan_to_csv(std::ostream& os, const QuadratureScan& scan);

// Header: x1,x2,w  (quadrature units; w normalized to unit integral).
void wigner_to_csv(std::ostream& os, const WignerGrid& grid);

// Dense little-endian layout: magic "RFSWIG01", then int64 n1, n2, doubles
// x1_0, x1_step, x2_0, x2_step, then n1*n2 float64 row-major (x1 outer).
void wigner_to_binary(std::ostream& os, const WignerGrid& grid);
WignerGrid wigner_from_binary(std::istream& is);

// Header: loop,x1,x2 (one row per vertex, loops indexed from 0).
void contours_to_csv(std::ostream& os, const std::vector<Polyline>& contours);

// Campaign pieces: per-interval histogram (tau_s,counts), interval table,
// fringe reference and binned outputs.
void histogram_to_csv(std::ostream& os, const CampaignResult& result, std::size_t interval);
void intervals_to_csv(std::ostream& os, const CampaignResult& result);
void fringe_to_csv(std::ostream& os, const FringeReference& fringe);
void binned_to_csv(std::ostream& os, const CampaignResult& result, std::size_t bin);
void estimates_to_csv(std::ostream& os, const CampaignResult& result);

}  // namespace rfs
