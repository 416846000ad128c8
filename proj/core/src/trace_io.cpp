#include "rfsqueeze/trace_io.hpp"

#include <cstdio>
#include <cstring>
#include <istream>
#include <ostream>

#include "rfsqueeze/errors.hpp"

namespace rfs {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void trace_to_csv(std::ostream& os, const CorrelationTrace& trace) {
    os << "tau_s,value,kind,phi_rad,beta2\n";
    const std::string kind = trace_kind_name(trace.kind);
    const std::string phi = trace.phase ? format_double(*trace.phase) : "";
    const std::string beta2 = trace.lo_flux ? format_double(*trace.lo_flux) : "";
    for (std::size_t k = 0; k < trace.tau.size(); ++k) {
        os << format_double(trace.tau[k]) << ',' << format_double(trace.values[k].real())
           << ',' << kind << ',' << phi << ',' << beta2 << '\n';
    }
}

void scan_to_csv(std::ostream& os, const QuadratureScan& scan) {
    os << (scan.axis == ScanAxis::phase ? "phi_rad" : "s") << ",variance\n";
    for (std::size_t k = 0; k < scan.grid.size(); ++k)
        os << format_double(scan.grid[k]) << ',' << format_double(scan.variance[k]) << '\n';
}

void wigner_to_csv(std::ostream& os, const WignerGrid& grid) {
    os << "x1,x2,w\n";
    for (std::size_t i = 0; i < grid.x1_axis.size(); ++i)
        for (std::size_t j = 0; j < grid.x2_axis.size(); ++j)
            os << format_double(grid.x1_axis[i]) << ',' << format_double(grid.x2_axis[j])
               << ',' << format_double(grid.at(i, j)) << '\n';
}

namespace {

template <typename T>
void write_raw(std::ostream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_raw(std::istream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    return v;
}

}  // namespace

void wigner_to_binary(std::ostream& os, const WignerGrid& grid) {
    os.write("RFSWIG01", 8);
    write_raw<std::int64_t>(os, static_cast<std::int64_t>(grid.x1_axis.size()));
    write_raw<std::int64_t>(os, static_cast<std::int64_t>(grid.x2_axis.size()));
    write_raw<double>(os, grid.x1_axis.front());
    write_raw<double>(os, grid.x1_axis.size() > 1 ? grid.x1_axis[1] - grid.x1_axis[0] : 0.0);
    write_raw<double>(os, grid.x2_axis.front());
    write_raw<double>(os, grid.x2_axis.size() > 1 ? grid.x2_axis[1] - grid.x2_axis[0] : 0.0);
    for (double v : grid.values) write_raw<double>(os, v);
}

WignerGrid wigner_from_binary(std::istream& is) {
    char magic[8];
    is.read(magic, 8);
    if (std::memcmp(magic, "RFSWIG01", 8) != 0) throw invalid_input("bad Wigner binary magic");
    const auto n1 = read_raw<std::int64_t>(is);
    const auto n2 = read_raw<std::int64_t>(is);
    const double x1_0 = read_raw<double>(is);
    const double x1_step = read_raw<double>(is);
    const double x2_0 = read_raw<double>(is);
    const double x2_step = read_raw<double>(is);
    WignerGrid grid;
    grid.x1_axis.resize(n1);
    grid.x2_axis.resize(n2);
    for (std::int64_t i = 0; i < n1; ++i) grid.x1_axis[i] = x1_0 + i * x1_step;
    for (std::int64_t j = 0; j < n2; ++j) grid.x2_axis[j] = x2_0 + j * x2_step;
    grid.cell_area = x1_step * x2_step;
    grid.values.resize(static_cast<std::size_t>(n1) * n2);
    for (auto& v : grid.values) v = read_raw<double>(is);
    if (!is) throw invalid_input("truncated Wigner binary");
    return grid;
}

void contours_to_csv(std::ostream& os, const std::vector<Polyline>& contours) {
    os << "loop,x1,x2\n";
    for (std::size_t l = 0; l < contours.size(); ++l)
        for (const auto& p : contours[l])
            os << l << ',' << format_double(p[0]) << ',' << format_double(p[1]) << '\n';
}

void histogram_to_csv(std::ostream& os, const CampaignResult& result, std::size_t interval) {
    const auto& iv = result.intervals.at(interval);
    os << "tau_s,counts\n";
    for (std::size_t k = 0; k < result.tau.size(); ++k)
        os << format_double(result.tau[k]) << ',' << iv.counts[k] << '\n';
}

void intervals_to_csv(std::ostream& os, const CampaignResult& result) {
    os << "t_start_s,phase_true_rad,detuning,intensity1_cps,intensity2_cps,psb_rate_cps,"
          "leakage,accepted,reject_reason\n";
    for (const auto& iv : result.intervals) {
        os << format_double(iv.t_start) << ',' << format_double(iv.phase_true) << ','
           << format_double(iv.detuning) << ',' << format_double(iv.intensity1) << ','
           << format_double(iv.intensity2) << ',' << format_double(iv.psb_rate) << ','
           << format_double(iv.leakage) << ',' << (iv.accepted ? 1 : 0) << ','
           << iv.reject_reason << '\n';
    }
}

void fringe_to_csv(std::ostream& os, const FringeReference& fringe) {
    os << "phi_rad,intensity_cps\n";
    for (std::size_t k = 0; k < fringe.phi.size(); ++k)
        os << format_double(fringe.phi[k]) << ',' << format_double(fringe.intensity[k]) << '\n';
}

void binned_to_csv(std::ostream& os, const CampaignResult& result, std::size_t bin) {
    const auto& b = result.binned.at(bin);
    os << "tau_s,counts,g2_flux2\n";
    for (std::size_t k = 0; k < result.tau.size(); ++k)
        os << format_double(result.tau[k]) << ',' << b.counts[k] << ','
           << format_double(b.g2[k]) << '\n';
}

void estimates_to_csv(std::ostream& os, const CampaignResult& result) {
    os << "bin,phi_center_rad,n_intervals,exposure_s,variance_estimate,bootstrap_sigma\n";
    for (std::size_t j = 0; j < result.binned.size(); ++j) {
        const auto& b = result.binned[j];
        os << j << ',' << format_double(b.phi_center) << ',' << b.n_intervals << ','
           << format_double(b.exposure) << ',' << format_double(b.variance_estimate) << ','
           << format_double(b.variance_bootstrap_sigma) << '\n';
    }
}

}  // namespace rfs
