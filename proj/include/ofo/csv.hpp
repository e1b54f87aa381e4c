#pragma once

#include <string>

#include "ofo/scenario.hpp"
#include "ofo/sweep.hpp"

namespace ofo {

/// Locale-independent formatting at 12 significant digits.
std::string format_g12(double value);

std::string qp_status_name(QpStatus status, bool softened);

/// trajectory.csv: k, per-bus vm, per-actuator p/q, pcc_p, pcc_q, phi,
/// sigma_norm, qp_status, violation_count. One row per recorded iteration.
void write_trajectory_csv(const std::string& path, const Trajectory& trajectory);

/// interfaces.csv: tick, link, direction, p, q.
void write_interfaces_csv(const std::string& path, const Trajectory& trajectory);

/// sweep.csv: alpha, beta, settled_at, converged; alpha-major row order.
void write_sweep_csv(const std::string& path, const SweepResult& sweep);

void write_summary(const std::string& path, const Scenario& scenario,
                   const Trajectory& trajectory);

} // namespace ofo
