#include "rfsqueeze/phase_space.hpp"

#include <cmath>
#include <map>
#include <tuple>
#include <utility>

#include "rfsqueeze/errors.hpp"

namespace rfs {

FieldModeState FieldModeState::dipole_aligned() const {
    if (std::abs(coh) == 0.0) return *this;
    return {p0, p1, std::abs(coh)};
}

void FieldModeState::validate(double tol) const {
    if (std::abs(p0 + p1 - 1.0) > tol) throw invalid_input("field populations must sum to 1");
    if (p0 < -tol || p1 < -tol) throw invalid_input("negative Fock population");
    if (std::norm(coh) > p0 * p1 + tol) throw invalid_input("field coherence exceeds positivity bound");
}

FieldModeState field_state_from_atom(const DensityMatrix2& rho) {
    rho.validate();
    FieldModeState f{rho.rho_gg, rho.rho_ee, rho.rho_ge};
    f.validate();
    return f;
}

double WignerGrid::integral() const {
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum * cell_area;
}

double WignerGrid::max_value() const {
    double m = values.empty() ? 0.0 : values[0];
    for (double v : values) m = std::max(m, v);
    return m;
}

std::array<double, 2> WignerGrid::marginal_moments(int axis) const {
    const std::size_t n1 = x1_axis.size(), n2 = x2_axis.size();
    const auto& coord = axis == 0 ? x1_axis : x2_axis;
    std::vector<double> marginal(coord.size(), 0.0);
    for (std::size_t i = 0; i < n1; ++i)
        for (std::size_t j = 0; j < n2; ++j) marginal[axis == 0 ? i : j] += at(i, j);

    double norm = 0.0, mean = 0.0, second = 0.0;
    for (std::size_t k = 0; k < coord.size(); ++k) {
        norm += marginal[k];
        mean += coord[k] * marginal[k];
        second += coord[k] * coord[k] * marginal[k];
    }
    mean /= norm;
    second /= norm;
    return {mean, second - mean * mean};
}

WignerGrid wigner(const FieldModeState& state, const WignerGridSpec& spec) {
    state.validate();
    if (spec.points_per_axis < 2 || !(spec.extent > 0.0))
        throw invalid_input("invalid Wigner grid spec");

    const int n = spec.points_per_axis;
    WignerGrid grid;
    grid.x1_axis.resize(n);
    grid.x2_axis.resize(n);
    const double step = 2.0 * spec.extent / (n - 1);
    for (int i = 0; i < n; ++i) {
        grid.x1_axis[i] = -spec.extent + i * step;
        grid.x2_axis[i] = grid.x1_axis[i];
    }
    grid.cell_area = step * step;
    grid.values.resize(static_cast<std::size_t>(n) * n);

    // Truncated-basis kernels: W00 = (2/pi) e^{-2 r^2},
    // W11 = (2/pi) e^{-2 r^2} (4 r^2 - 1), cross term 4 Re(coh * alpha).
    const double two_over_pi = 2.0 / M_PI;
    for (int i = 0; i < n; ++i) {
        const double x1 = grid.x1_axis[i];
        for (int j = 0; j < n; ++j) {
            const double x2 = grid.x2_axis[j];
            const double r2 = x1 * x1 + x2 * x2;
            const double cross =
                4.0 * (state.coh.real() * x1 - state.coh.imag() * x2);
            grid.values[static_cast<std::size_t>(i) * n + j] =
                two_over_pi * std::exp(-2.0 * r2) *
                (state.p0 + state.p1 * (4.0 * r2 - 1.0) + cross);
        }
    }

    const double defect = std::abs(grid.integral() - 1.0);
    if (defect > spec.norm_tol)
        throw accuracy_error("Wigner grid does not normalize within tolerance", defect);
    return grid;
}

namespace {

// Marching squares: edge ids identify interpolated crossing points so that
// segments sharing an edge stitch into closed loops exactly.
struct EdgeKey {
    int i, j, dir;  // dir 0: edge from (i,j) to (i+1,j); dir 1: to (i,j+1)
    bool operator<(const EdgeKey& o) const {
        return std::tie(i, j, dir) < std::tie(o.i, o.j, o.dir);
    }
};

PhasePoint interpolate(const WignerGrid& g, const EdgeKey& e, double level) {
    const double va = g.at(e.i, e.j);
    const double vb = e.dir == 0 ? g.at(e.i + 1, e.j) : g.at(e.i, e.j + 1);
    const double t = (level - va) / (vb - va);
    const double x1a = g.x1_axis[e.i], x2a = g.x2_axis[e.j];
    if (e.dir == 0) return {x1a + t * (g.x1_axis[e.i + 1] - x1a), x2a};
    return {x1a, x2a + t * (g.x2_axis[e.j + 1] - x2a)};
}

}  // namespace

std::vector<Polyline> half_max_contour(const WignerGrid& grid) {
    const double peak = grid.max_value();
    if (!(peak > 0.0)) throw invalid_input("contour needs a positive maximum");
    const double level = 0.5 * peak;

    const int n1 = static_cast<int>(grid.x1_axis.size());
    const int n2 = static_cast<int>(grid.x2_axis.size());

    // Collect crossing segments per cell as pairs of edge keys.
    std::vector<std::pair<EdgeKey, EdgeKey>> segments;
    for (int i = 0; i + 1 < n1; ++i) {
        for (int j = 0; j + 1 < n2; ++j) {
            const bool b00 = grid.at(i, j) >= level;
            const bool b10 = grid.at(i + 1, j) >= level;
            const bool b11 = grid.at(i + 1, j + 1) >= level;
            const bool b01 = grid.at(i, j + 1) >= level;
            const int mask = (b00 ? 1 : 0) | (b10 ? 2 : 0) | (b11 ? 4 : 0) | (b01 ? 8 : 0);
            if (mask == 0 || mask == 15) continue;

            const EdgeKey bottom{i, j, 0}, top{i, j + 1, 0}, left{i, j, 1}, right{i + 1, j, 1};
            auto emit = [&](EdgeKey a, EdgeKey b) { segments.emplace_back(a, b); };
            switch (mask) {
                case 1: case 14: emit(left, bottom); break;
                case 2: case 13: emit(bottom, right); break;
                case 3: case 12: emit(left, right); break;
                case 4: case 11: emit(right, top); break;
                case 6: case 9: emit(bottom, top); break;
                case 7: case 8: emit(top, left); break;
                case 5: case 10: {
                    // Saddle: split by the cell-center value.
                    const double center = 0.25 * (grid.at(i, j) + grid.at(i + 1, j) +
                                                  grid.at(i, j + 1) + grid.at(i + 1, j + 1));
                    const bool center_high = center >= level;
                    if ((mask == 5) == center_high) {
                        emit(left, top);
                        emit(bottom, right);
                    } else {
                        emit(left, bottom);
                        emit(right, top);
                    }
                    break;
                }
            }
        }
    }

    // Each interior crossing edge belongs to exactly two segments; walk
    // segment-to-segment until the loop closes.
    std::map<EdgeKey, std::vector<std::size_t>> incident;
    for (std::size_t k = 0; k < segments.size(); ++k) {
        incident[segments[k].first].push_back(k);
        incident[segments[k].second].push_back(k);
    }

    std::vector<bool> used(segments.size(), false);
    std::vector<Polyline> loops;
    for (std::size_t k0 = 0; k0 < segments.size(); ++k0) {
        if (used[k0]) continue;
        used[k0] = true;
        Polyline loop;
        const EdgeKey start = segments[k0].first;
        EdgeKey current = segments[k0].second;
        loop.push_back(interpolate(grid, start, level));
        loop.push_back(interpolate(grid, current, level));
        while (current < start || start < current) {
            bool advanced = false;
            for (std::size_t k : incident[current]) {
                if (used[k]) continue;
                used[k] = true;
                const auto& seg = segments[k];
                current = (!(seg.first < current) && !(current < seg.first)) ? seg.second
                                                                             : seg.first;
                loop.push_back(interpolate(grid, current, level));
                advanced = true;
                break;
            }
            if (!advanced) break;
        }
        if (loop.size() > 3) loops.push_back(std::move(loop));
    }
    return loops;
}

}  // namespace rfs
