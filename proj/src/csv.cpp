#include "ofo/csv.hpp"

#include <charconv>
#include <fstream>

#include "ofo/errors.hpp"

namespace ofo {

std::string format_g12(double value) {
    char buf[40];
    const auto res =
        std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 12);
    return std::string(buf, res.ptr);
}

std::string qp_status_name(QpStatus status, bool softened) {
    switch (status) {
        case QpStatus::optimal: return softened ? "optimal_softened" : "optimal";
        case QpStatus::infeasible: return "infeasible";
        case QpStatus::max_iter: return "max_iter";
    }
    return "unknown";
}

namespace {

std::ofstream open_or_throw(const std::string& path) {
    std::ofstream out(path, std::ios::binary); // binary: "\n" line ends everywhere
    if (!out) throw OfoError("cannot write output file: " + path);
    return out;
}

} // namespace

void write_trajectory_csv(const std::string& path, const Trajectory& trajectory) {
    std::ofstream out = open_or_throw(path);

    out << "k";
    for (const std::string& label : trajectory.vm_labels) out << "," << label;
    for (const std::string& label : trajectory.u_labels) out << "," << label;
    out << ",pcc_p,pcc_q,phi,sigma_norm,qp_status,violation_count\n";

    for (const TrajectoryRow& row : trajectory.rows) {
        out << row.k;
        for (int r : trajectory.vm_rows) out << "," << format_g12(row.y(r));
        for (Eigen::Index i = 0; i < row.u.size(); ++i) out << "," << format_g12(row.u(i));
        if (row.pcc)
            out << "," << format_g12(row.pcc->first) << "," << format_g12(row.pcc->second);
        else
            out << ",,";
        out << "," << format_g12(row.phi) << "," << format_g12(row.sigma_norm) << ","
            << (row.has_step ? qp_status_name(row.qp_status, row.softened) : "none") << ","
            << row.violation_count << "\n";
    }
}

void write_interfaces_csv(const std::string& path, const Trajectory& trajectory) {
    std::ofstream out = open_or_throw(path);
    out << "tick,link,direction,p,q\n";
    for (const InterfaceMessage& msg : trajectory.messages) {
        out << msg.tick << "," << msg.from_node << "->" << msg.to_node << ","
            << (msg.direction == InterfaceMessage::Direction::setpoint_down ? "setpoint_down"
                                                                            : "measurement_up")
            << "," << format_g12(msg.p) << "," << format_g12(msg.q) << "\n";
    }
}

void write_sweep_csv(const std::string& path, const SweepResult& sweep) {
    std::ofstream out = open_or_throw(path);
    out << "alpha,beta,settled_at,converged\n";
    for (const SweepCell& cell : sweep.cells) {
        out << format_g12(cell.alpha) << "," << format_g12(cell.beta) << ",";
        if (cell.settled_at) out << *cell.settled_at;
        out << "," << (cell.converged ? "true" : "false") << "\n";
    }
}

void write_summary(const std::string& path, const Scenario& scenario,
                   const Trajectory& trajectory) {
    std::ofstream out = open_or_throw(path);
    out << "scenario = " << scenario.name << "\n";
    out << "alpha = " << format_g12(scenario.alpha) << "\n";
    out << "beta = " << format_g12(scenario.beta) << "\n";
    out << "rows = " << trajectory.rows.size() << "\n";
    out << "diverged = " << (trajectory.diverged ? "true" : "false") << "\n";

    int violations = 0;
    for (const TrajectoryRow& row : trajectory.rows) violations += row.violation_count;
    out << "total_violations = " << violations << "\n";

    if (!trajectory.rows.empty()) {
        const TrajectoryRow& last = trajectory.rows.back();
        out << "final_phi = " << format_g12(last.phi) << "\n";
        if (last.pcc) {
            out << "final_pcc_p = " << format_g12(last.pcc->first) << "\n";
            out << "final_pcc_q = " << format_g12(last.pcc->second) << "\n";
        }
    }

    if (scenario.kind == Scenario::Kind::tracking) {
        const auto settled = detect_settled(trajectory, scenario);
        out << "settled_at = ";
        if (settled) out << *settled;
        else out << "none";
        out << "\n";
        out << "converged = " << (settled ? "true" : "false") << "\n";
    }
}

} // namespace ofo
