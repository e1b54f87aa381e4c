#pragma once

#include <optional>

#include <Eigen/Dense>

#include "ofo/network.hpp"

namespace ofo {

struct PowerFlowOptions {
    double tolerance = 1e-8; // infinity norm of the power mismatch, pu
    int max_iterations = 30;
};

struct PowerFlowSolution {
    Eigen::VectorXcd v;       // per-bus complex voltage, pu
    Eigen::VectorXd branch_p; // sending-end active power per branch, pu
    Eigen::VectorXd branch_q; // sending-end reactive power per branch, pu
    Eigen::VectorXd branch_s; // sending-end apparent power per branch, pu
    std::optional<std::pair<double, double>> pcc_flow; // (p, q) at the marked branch
    double mismatch_norm = 0.0;
    int iterations = 0;
};

/// Full Newton-Raphson AC power flow in polar coordinates. All non-slack
/// buses are PQ. Starts from `start` when given (warm start), otherwise flat.
/// Throws PlantDivergedError when the mismatch is still above tolerance after
/// max_iterations.
PowerFlowSolution solve_power_flow(const Network& network, const Eigen::VectorXd& u,
                                   const PowerFlowOptions& options = {},
                                   const Eigen::VectorXcd* start = nullptr);

/// Sending-end complex power of one branch given bus voltages.
Complex branch_sending_power(const Network& network, const Branch& branch,
                             const Eigen::VectorXcd& v);

} // namespace ofo
