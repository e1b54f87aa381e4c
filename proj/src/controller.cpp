#include "ofo/controller.hpp"

#include "ofo/errors.hpp"

namespace ofo {

void ControllerConfig::validate(Eigen::Index n_inputs) const {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw ParameterError("gain alpha must lie in (0, 1]");
    if (!(beta > 0.0 && beta <= 1.0))
        throw ParameterError("momentum weight beta must lie in (0, 1]");
    if (G.rows() != n_inputs || G.cols() != n_inputs)
        throw ParameterError("metric G dimensions do not match the input vector");
    objective.validate();
}

CompositeGradient momentum_combine(const CompositeGradient& current,
                                   const std::optional<CompositeGradient>& previous,
                                   double beta) {
    if (!(beta > 0.0 && beta <= 1.0))
        throw ParameterError("momentum weight beta must lie in (0, 1]");
    if (!previous || beta == 1.0) return current;
    CompositeGradient mixed;
    mixed.du = beta * current.du + (1.0 - beta) * previous->du;
    mixed.dy = beta * current.dy + (1.0 - beta) * previous->dy;
    return mixed;
}

std::pair<ControllerState, StepRecord> controller_step(const ControllerState& state,
                                                       const Eigen::VectorXd& y,
                                                       const SensitivityMatrix& sens,
                                                       const ControllerConfig& config,
                                                       const MonitorSet& monitors) {
    config.validate(state.u.size());

    const CompositeGradient current =
        evaluate_gradient(config.objective, state.u, y, monitors);
    const CompositeGradient descent =
        config.momentum_enabled ? momentum_combine(current, state.prev_gradient, config.beta)
                                : current;

    const QpProblem qp = build_projection_qp(descent, sens, state.u, y, config.limits,
                                             config.alpha, config.G);
    const ProjectionResult projected = solve_projection(qp);
    if (projected.solution.status == QpStatus::infeasible)
        throw OfoError("projection QP infeasible even after softening");

    StepRecord record;
    record.sigma = projected.solution.w;
    record.phi = objective_value(config.objective, state.u, y, monitors);
    record.active_set = projected.solution.active_set;
    record.qp_status = projected.solution.status;
    record.softened = projected.softened;
    record.kkt_residual = projected.solution.kkt_residual;

    ControllerState next;
    next.u = state.u + config.alpha * record.sigma;
    next.prev_gradient = current; // raw gradient, not the blended one
    next.k = state.k + 1;
    return {std::move(next), std::move(record)};
}

} // namespace ofo
