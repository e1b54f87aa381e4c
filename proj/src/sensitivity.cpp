#include "ofo/sensitivity.hpp"

#include <cmath>

#include "ofo/errors.hpp"
#include "pf_internal.hpp"

namespace ofo {

namespace {

// Derivatives of one branch's sending-end complex power with respect to the
// polar coordinates of its two terminal buses.
struct BranchFlowGradient {
    Complex d_theta_from, d_theta_to, d_vm_from, d_vm_to;
};

BranchFlowGradient branch_flow_gradient(const Network& network, const Branch& branch,
                                        const Eigen::VectorXcd& v) {
    const int f = network.bus_index(branch.from_bus);
    const int t = network.bus_index(branch.to_bus);
    const Complex ys = 1.0 / branch.z;
    const Complex ysh{0.0, branch.b_charging / 2.0};
    const double tap = branch.tap;
    const Complex yff = (ys + ysh) / (tap * tap);
    const Complex yft = -ys / tap;

    const Complex vf = v(f), vt = v(t);
    const Complex i_from = yff * vf + yft * vt;
    const Complex j{0.0, 1.0};

    BranchFlowGradient grad;
    grad.d_theta_from = j * (vf * std::conj(i_from) - std::conj(yff) * std::norm(vf));
    grad.d_theta_to = -j * vf * std::conj(yft) * std::conj(vt);
    grad.d_vm_from = (vf * std::conj(i_from) + std::conj(yff) * std::norm(vf)) / std::abs(vf);
    grad.d_vm_to = vf * std::conj(yft) * std::conj(vt) / std::abs(vt);
    return grad;
}

} // namespace

SensitivityMatrix compute_sensitivities(const Network& network, const PowerFlowSolution& sol,
                                        const MonitorSet& monitors) {
    const int n = static_cast<int>(network.buses.size());
    const int slack = network.slack_index();
    const int n_act = static_cast<int>(network.actuators.size());
    const int n_in = 2 * n_act;

    std::vector<int> pq;
    std::vector<int> unknown_of_bus(n, -1); // bus index -> position in pq list
    for (int i = 0; i < n; ++i) {
        if (i == slack) continue;
        unknown_of_bus[i] = static_cast<int>(pq.size());
        pq.push_back(i);
    }
    const int npq = static_cast<int>(pq.size());

    Eigen::VectorXd theta(n), vm(n);
    for (int i = 0; i < n; ++i) {
        vm(i) = std::abs(sol.v(i));
        theta(i) = std::arg(sol.v(i));
    }

    const Eigen::MatrixXcd y = build_admittance(network);
    const Eigen::VectorXcd s_calc = detail::calculated_injections(y, sol.v);
    const Eigen::MatrixXd jac =
        detail::polar_jacobian(y.real(), y.imag(), theta, vm, s_calc, pq);

    Eigen::PartialPivLU<Eigen::MatrixXd> lu(jac);
    if (lu.rcond() < 1e-10)
        throw IllConditionedError(
            "power-flow Jacobian numerically singular; operating point near voltage collapse");

    // state response dx = J^{-1} e for a unit change of each input component
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(2 * npq, n_in);
    for (int a = 0; a < n_act; ++a) {
        const int k = unknown_of_bus[network.bus_index(network.actuators[a].bus)];
        rhs(k, 2 * a) = 1.0;         // active power column
        rhs(npq + k, 2 * a + 1) = 1.0; // reactive power column
    }
    const Eigen::MatrixXd dx = lu.solve(rhs); // rows: [theta_pq; vm_pq]

    // chain rule rows for branch p/q/s outputs: gradient over the state vector
    auto state_row = [&](const BranchFlowGradient& g, const Branch& br, bool imag_part) {
        Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(2 * npq);
        const int f = network.bus_index(br.from_bus);
        const int t = network.bus_index(br.to_bus);
        auto put = [&](int bus, const Complex& d_theta, const Complex& d_vm) {
            const int k = unknown_of_bus[bus];
            if (k < 0) return; // slack coordinates are fixed
            row(k) += imag_part ? d_theta.imag() : d_theta.real();
            row(npq + k) += imag_part ? d_vm.imag() : d_vm.real();
        };
        put(f, g.d_theta_from, g.d_vm_from);
        put(t, g.d_theta_to, g.d_vm_to);
        return row;
    };

    SensitivityMatrix s;
    s.m.resize(monitors.size(), n_in);

    for (int r = 0; r < monitors.size(); ++r) {
        const MonitoredOutput& o = monitors.outputs[r];
        switch (o.kind) {
            case MonitoredOutput::Kind::bus_vm: {
                const int k = unknown_of_bus[o.index];
                s.m.row(r) = dx.row(npq + k);
                break;
            }
            case MonitoredOutput::Kind::branch_flow: {
                const Branch& br = network.branches[o.index];
                const BranchFlowGradient g = branch_flow_gradient(network, br, sol.v);
                const double p = sol.branch_p(o.index);
                const double q = sol.branch_q(o.index);
                const double sm = sol.branch_s(o.index);
                if (sm == 0.0) {
                    s.m.row(r).setZero(); // |S| not differentiable at the origin
                    break;
                }
                const Eigen::RowVectorXd dp = state_row(g, br, false);
                const Eigen::RowVectorXd dq = state_row(g, br, true);
                s.m.row(r) = ((p * dp + q * dq) / sm) * dx;
                break;
            }
            case MonitoredOutput::Kind::pcc_p: {
                const Branch& br = network.branches[o.index];
                s.m.row(r) = state_row(branch_flow_gradient(network, br, sol.v), br, false) * dx;
                break;
            }
            case MonitoredOutput::Kind::pcc_q: {
                const Branch& br = network.branches[o.index];
                s.m.row(r) = state_row(branch_flow_gradient(network, br, sol.v), br, true) * dx;
                break;
            }
        }
    }

    if (!s.m.allFinite())
        throw IllConditionedError("sensitivity extraction produced non-finite entries");

    s.row_labels = monitors.labels(network);
    s.col_labels.reserve(n_in);
    for (const Actuator& a : network.actuators) {
        s.col_labels.push_back("p_" + a.label);
        s.col_labels.push_back("q_" + a.label);
    }
    return s;
}

} // namespace ofo
