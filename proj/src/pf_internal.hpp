#pragma once

#include <vector>

#include <Eigen/Dense>

namespace ofo::detail {

// Complex power injected at every bus for voltages v: S = diag(v) * conj(Y v).
inline Eigen::VectorXcd calculated_injections(const Eigen::MatrixXcd& y,
                                              const Eigen::VectorXcd& v) {
    return v.array() * (y * v).array().conjugate();
}

// Jacobian of the calculated injections [P; Q] of the listed buses with
// respect to [theta; vm] of those same buses, polar formulation.
inline Eigen::MatrixXd polar_jacobian(const Eigen::MatrixXd& g, const Eigen::MatrixXd& b,
                                      const Eigen::VectorXd& theta, const Eigen::VectorXd& vm,
                                      const Eigen::VectorXcd& s_calc, const std::vector<int>& pq) {
    const int npq = static_cast<int>(pq.size());
    Eigen::MatrixXd jac(2 * npq, 2 * npq);
    for (int r = 0; r < npq; ++r) {
        const int i = pq[r];
        const double pi = s_calc(i).real();
        const double qi = s_calc(i).imag();
        for (int c = 0; c < npq; ++c) {
            const int j = pq[c];
            if (i == j) {
                jac(r, c) = -qi - b(i, i) * vm(i) * vm(i);
                jac(r, npq + c) = pi / vm(i) + g(i, i) * vm(i);
                jac(npq + r, c) = pi - g(i, i) * vm(i) * vm(i);
                jac(npq + r, npq + c) = qi / vm(i) - b(i, i) * vm(i);
            } else {
                const double tij = theta(i) - theta(j);
                const double ct = std::cos(tij), st = std::sin(tij);
                const double gij = g(i, j), bij = b(i, j);
                jac(r, c) = vm(i) * vm(j) * (gij * st - bij * ct);
                jac(r, npq + c) = vm(i) * (gij * ct + bij * st);
                jac(npq + r, c) = -vm(i) * vm(j) * (gij * ct + bij * st);
                jac(npq + r, npq + c) = vm(i) * (gij * st - bij * ct);
            }
        }
    }
    return jac;
}

} // namespace ofo::detail
