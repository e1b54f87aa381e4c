#include "ofo/powerflow.hpp"

#include <cmath>

#include "ofo/errors.hpp"
#include "pf_internal.hpp"

namespace ofo {

Complex branch_sending_power(const Network& network, const Branch& branch,
                             const Eigen::VectorXcd& v) {
    const int f = network.bus_index(branch.from_bus);
    const int t = network.bus_index(branch.to_bus);
    const Complex ys = 1.0 / branch.z;
    const Complex ysh{0.0, branch.b_charging / 2.0};
    const double tap = branch.tap;
    const Complex i_from = (ys + ysh) / (tap * tap) * v(f) - ys / tap * v(t);
    return v(f) * std::conj(i_from);
}

PowerFlowSolution solve_power_flow(const Network& network, const Eigen::VectorXd& u,
                                   const PowerFlowOptions& options,
                                   const Eigen::VectorXcd* start) {
    const int n = static_cast<int>(network.buses.size());
    const int slack = network.slack_index();
    const Eigen::MatrixXcd y = build_admittance(network);
    const Eigen::VectorXcd s_spec = bus_injections(network, u);

    // unknowns: angle and magnitude of every non-slack bus
    std::vector<int> pq;
    pq.reserve(n - 1);
    for (int i = 0; i < n; ++i)
        if (i != slack) pq.push_back(i);
    const int npq = static_cast<int>(pq.size());

    Eigen::VectorXd theta = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd vm(n);
    for (int i = 0; i < n; ++i) vm(i) = network.buses[i].v_nominal;
    if (start && start->size() == n) {
        for (int i = 0; i < n; ++i) {
            vm(i) = std::abs((*start)(i));
            theta(i) = std::arg((*start)(i));
        }
    }
    vm(slack) = network.buses[slack].v_nominal;
    theta(slack) = 0.0;

    const Eigen::MatrixXd g = y.real();
    const Eigen::MatrixXd b = y.imag();

    auto assemble_voltages = [&]() {
        Eigen::VectorXcd v(n);
        for (int i = 0; i < n; ++i) v(i) = std::polar(vm(i), theta(i));
        return v;
    };

    Eigen::VectorXcd v = assemble_voltages();
    double mismatch_norm = 0.0;
    int iter = 0;

    for (;; ++iter) {
        const Eigen::VectorXcd s_calc = detail::calculated_injections(y, v);
        Eigen::VectorXd f(2 * npq);
        for (int k = 0; k < npq; ++k) {
            const int i = pq[k];
            f(k) = s_spec(i).real() - s_calc(i).real();
            f(npq + k) = s_spec(i).imag() - s_calc(i).imag();
        }
        mismatch_norm = f.size() ? f.cwiseAbs().maxCoeff() : 0.0;
        if (mismatch_norm < options.tolerance) break;
        if (iter >= options.max_iterations)
            throw PlantDivergedError("power flow did not converge within " +
                                         std::to_string(options.max_iterations) + " iterations",
                                     mismatch_norm);

        const Eigen::MatrixXd jac = detail::polar_jacobian(g, b, theta, vm, s_calc, pq);
        const Eigen::VectorXd dx = jac.partialPivLu().solve(f);
        if (!dx.allFinite())
            throw PlantDivergedError("singular Jacobian during power flow", mismatch_norm);
        for (int k = 0; k < npq; ++k) {
            theta(pq[k]) += dx(k);
            vm(pq[k]) += dx(npq + k);
            if (vm(pq[k]) <= 1e-6)
                throw PlantDivergedError("voltage magnitude collapsed during power flow",
                                         mismatch_norm);
        }
        v = assemble_voltages();
    }

    PowerFlowSolution sol;
    sol.v = v;
    sol.mismatch_norm = mismatch_norm;
    sol.iterations = iter;

    const int nbr = static_cast<int>(network.branches.size());
    sol.branch_p.resize(nbr);
    sol.branch_q.resize(nbr);
    sol.branch_s.resize(nbr);
    for (int k = 0; k < nbr; ++k) {
        const Complex s = branch_sending_power(network, network.branches[k], v);
        sol.branch_p(k) = s.real();
        sol.branch_q(k) = s.imag();
        sol.branch_s(k) = std::abs(s);
    }
    if (network.pcc_branch)
        sol.pcc_flow = std::make_pair(sol.branch_p(*network.pcc_branch),
                                      sol.branch_q(*network.pcc_branch));
    return sol;
}

} // namespace ofo
