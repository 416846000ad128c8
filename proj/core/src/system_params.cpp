#include "rfsqueeze/system_params.hpp"

#include <cmath>
#include <vector>

#include "rfsqueeze/errors.hpp"

namespace rfs {

double SystemParams::effective_saturation() const {
    const double gperp = coherence_decay();
    return rabi * rabi * gperp / (gamma * (gperp * gperp + detuning * detuning));
}

SystemParams SystemParams::from_saturation(double s, double gamma, double detuning,
                                           double dephasing) {
    SystemParams p;
    p.gamma = gamma;
    p.rabi = rabi_from_saturation(s, gamma);
    p.detuning = detuning;
    p.dephasing = dephasing;
    p.validate();
    return p;
}

SystemParams SystemParams::from_lifetime_ns(double lifetime_ns, double s, double detuning,
                                            double dephasing) {
    if (!(lifetime_ns > 0.0)) throw invalid_input("lifetime_ns must be positive");
    const double gamma = 1.0 / (lifetime_ns * 1e-9);  // 1/s
    return from_saturation(s, gamma, detuning * gamma, dephasing * gamma);
}

void SystemParams::validate() const {
    std::vector<std::string> bad;
    if (!(gamma > 0.0) || !std::isfinite(gamma)) bad.push_back("gamma must be finite and > 0");
    if (!(rabi >= 0.0) || !std::isfinite(rabi)) bad.push_back("rabi must be finite and >= 0");
    if (!std::isfinite(detuning)) bad.push_back("detuning must be finite");
    if (!(dephasing >= 0.0) || !std::isfinite(dephasing))
        bad.push_back("dephasing must be finite and >= 0");
    if (!bad.empty()) {
        std::string msg = "invalid SystemParams:";
        for (const auto& b : bad) msg += " " + b + ";";
        throw invalid_input(msg);
    }
}

double rabi_from_saturation(double s, double gamma) {
    if (!(s >= 0.0) || !std::isfinite(s)) throw invalid_input("saturation must be finite and >= 0");
    if (!(gamma > 0.0)) throw invalid_input("gamma must be > 0");
    return gamma * std::sqrt(0.5 * s);
}

}  // namespace rfs
