#include "ofo/objective.hpp"

#include "ofo/errors.hpp"

namespace ofo {

ObjectiveSpec ObjectiveSpec::congestion(const Network& network, double q_weight) {
    const auto n_act = static_cast<Eigen::Index>(network.actuators.size());
    ObjectiveSpec spec;
    spec.kind = Kind::congestion;
    spec.A = Eigen::MatrixXd::Identity(n_act, n_act);
    spec.B = q_weight * Eigen::MatrixXd::Identity(n_act, n_act);
    spec.p_nominal.resize(n_act);
    for (Eigen::Index a = 0; a < n_act; ++a) spec.p_nominal(a) = network.actuators[a].p_nominal;
    return spec;
}

ObjectiveSpec ObjectiveSpec::tracking(double p_set, double q_set) {
    ObjectiveSpec spec;
    spec.kind = Kind::tracking;
    spec.p_set = p_set;
    spec.q_set = q_set;
    return spec;
}

void ObjectiveSpec::validate() const {
    if (kind != Kind::congestion) return;
    auto check_psd = [](const Eigen::MatrixXd& m, const char* name) {
        if (!m.isApprox(m.transpose(), 1e-12))
            throw ParameterError(std::string("weight matrix ") + name + " is not symmetric");
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m, Eigen::EigenvaluesOnly);
        if (eig.info() != Eigen::Success || eig.eigenvalues().minCoeff() < -1e-12)
            throw ParameterError(std::string("weight matrix ") + name +
                                 " is not positive semidefinite");
    };
    check_psd(A, "A");
    check_psd(B, "B");
    if (p_nominal.size() != A.rows())
        throw ParameterError("p_nominal length does not match weight matrix A");
}

namespace {

// split a stacked (p, q)-per-actuator vector
void split_inputs(const Eigen::VectorXd& u, Eigen::VectorXd& p, Eigen::VectorXd& q) {
    const Eigen::Index n = u.size() / 2;
    p.resize(n);
    q.resize(n);
    for (Eigen::Index a = 0; a < n; ++a) {
        p(a) = u(2 * a);
        q(a) = u(2 * a + 1);
    }
}

} // namespace

double objective_value(const ObjectiveSpec& objective, const Eigen::VectorXd& u,
                       const Eigen::VectorXd& y, const MonitorSet& monitors) {
    if (objective.kind == ObjectiveSpec::Kind::congestion) {
        Eigen::VectorXd p, q;
        split_inputs(u, p, q);
        const Eigen::VectorXd dp = p - objective.p_nominal;
        return dp.dot(objective.A * dp) + q.dot(objective.B * q);
    }
    if (!monitors.pcc_p_row || !monitors.pcc_q_row)
        throw ParameterError("tracking objective requires a monitored PCC");
    const double ep = y(*monitors.pcc_p_row) - objective.p_set;
    const double eq = y(*monitors.pcc_q_row) - objective.q_set;
    return ep * ep + eq * eq;
}

CompositeGradient evaluate_gradient(const ObjectiveSpec& objective, const Eigen::VectorXd& u,
                                    const Eigen::VectorXd& y, const MonitorSet& monitors) {
    CompositeGradient grad;
    grad.du = Eigen::VectorXd::Zero(u.size());
    grad.dy = Eigen::VectorXd::Zero(y.size());

    if (objective.kind == ObjectiveSpec::Kind::congestion) {
        Eigen::VectorXd p, q;
        split_inputs(u, p, q);
        const Eigen::VectorXd gp = 2.0 * objective.A * (p - objective.p_nominal);
        const Eigen::VectorXd gq = 2.0 * objective.B * q;
        for (Eigen::Index a = 0; a < p.size(); ++a) {
            grad.du(2 * a) = gp(a);
            grad.du(2 * a + 1) = gq(a);
        }
        return grad;
    }

    if (!monitors.pcc_p_row || !monitors.pcc_q_row)
        throw ParameterError("tracking objective requires a monitored PCC");
    grad.dy(*monitors.pcc_p_row) = 2.0 * (y(*monitors.pcc_p_row) - objective.p_set);
    grad.dy(*monitors.pcc_q_row) = 2.0 * (y(*monitors.pcc_q_row) - objective.q_set);
    return grad;
}

} // namespace ofo
