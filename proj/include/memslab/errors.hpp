#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace memslab {

/// Invalid configuration or precondition violation (CLI exit code 2).
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

/// A fixed-point iteration failed to converge (CLI exit code 1).
class iteration_error : public std::runtime_error {
public:
    iteration_error(const std::string& what, std::vector<double> ratios)
        : std::runtime_error(what), ratio_history(std::move(ratios)) {}

    std::vector<double> ratio_history;
};

/// The gap dropped below the admissible lower bound kappa/2 while a solver
/// assumed it stayed above it. Carries the offending node and time.
class quench_imminent_error : public std::runtime_error {
public:
    quench_imminent_error(const std::string& what, int node, double time, double gap)
        : std::runtime_error(what), node_index(node), time(time), gap_value(gap) {}

    int node_index;
    double time;
    double gap_value;
};

/// A Picard iterate left the admissible ball (gap below kappa/2): the
/// requested horizon is too large for the available contraction estimates.
class horizon_error : public std::runtime_error {
public:
    horizon_error(const std::string& what, int node, double time, double gap)
        : std::runtime_error(what), node_index(node), time(time), gap_value(gap) {}

    int node_index;
    double time;
    double gap_value;
};

/// Dense linear algebra failure (eigendecomposition and fallback both failed,
/// or a time integrator under-flowed its step size).
class numeric_error : public std::runtime_error {
public:
    explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace memslab
