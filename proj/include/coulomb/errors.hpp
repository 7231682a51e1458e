#pragma once

#include <stdexcept>
#include <string>

namespace coulomb {

// Base class for everything thrown by this library.
class error : public std::runtime_error {
public:
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

// Argument outside the mathematical domain of an operation (z <= 0, z = 0, ...).
class domain_error : public error {
public:
    explicit domain_error(const std::string& what) : error(what) {}
};

// Evaluation requested at a pole (gamma at a non-positive integer, U's b=2
// expansion at a degenerate parameter).
class pole_error : public error {
public:
    explicit pole_error(const std::string& what) : error(what) {}
};

// A series or expansion failed to reach the requested tolerance. Carries the
// magnitude of the partial sum at the point of failure.
class convergence_error : public error {
public:
    convergence_error(const std::string& what, double partial_sum_magnitude,
                      double achieved_rel_error)
        : error(what),
          partial_sum_magnitude(partial_sum_magnitude),
          achieved_rel_error(achieved_rel_error) {}
    double partial_sum_magnitude;
    double achieved_rel_error;
};

// The extended-precision oracle cannot certify the requested accuracy with the
// given digit budget (cancellation ate the digits).
class precision_error : public error {
public:
    precision_error(const std::string& what, double lost_digits)
        : error(what), lost_digits(lost_digits) {}
    double lost_digits;
};

// A current-table invariant failed. Carries the worst relative deviation seen.
class invariant_violation : public error {
public:
    invariant_violation(const std::string& what, double worst_deviation)
        : error(what), worst_deviation(worst_deviation) {}
    double worst_deviation;
};

// Re[j_l,12] vanished: the continuity equation cannot be solved at this energy.
class degenerate_table_error : public error {
public:
    explicit degenerate_table_error(const std::string& what) : error(what) {}
};

// Derivative of an irregular solution requested inside the guard band around
// the singular point, where it diverges logarithmically.
class near_singularity_error : public error {
public:
    explicit near_singularity_error(const std::string& what) : error(what) {}
};

// Direct integrator failure (step too coarse, flux not conserved).
class integration_error : public error {
public:
    explicit integration_error(const std::string& what) : error(what) {}
};

}  // namespace coulomb
