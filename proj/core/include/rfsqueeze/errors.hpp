#pragma once

#include <stdexcept>
#include <string>

namespace rfs {

// A precondition on a public operation failed (rejected input).
class invalid_input : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A requested numerical tolerance could not be met. Carries the measured defect.
class accuracy_error : public std::runtime_error {
public:
    accuracy_error(const std::string& what, double defect)
        : std::runtime_error(what), defect_(defect) {}
    double defect() const { return defect_; }

private:
    double defect_;
};

// The generator has no unique attracting fixed point (e.g. gamma = 0).
class no_unique_steady_state : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The dipole phase is undefined (zero steady-state coherence).
class undefined_phase : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The fringe reference has no usable contrast, phases cannot be assigned.
class cannot_bin : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Postselection rejected every interval.
class empty_acceptance : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A calibration target cannot be reached; carries the bracketing report.
class no_solution : public std::runtime_error {
public:
    no_solution(const std::string& what, double lo, double f_lo, double hi, double f_hi)
        : std::runtime_error(what), lo_(lo), f_lo_(f_lo), hi_(hi), f_hi_(f_hi) {}
    double bracket_lo() const { return lo_; }
    double bracket_hi() const { return hi_; }
    double value_at_lo() const { return f_lo_; }
    double value_at_hi() const { return f_hi_; }

private:
    double lo_, f_lo_, hi_, f_hi_;
};

}  // namespace rfs
