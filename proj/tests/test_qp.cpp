#include <doctest.h>

#include <limits>
#include <random>

#include "ofo/errors.hpp"
#include "ofo/projection.hpp"
#include "ofo/qp.hpp"
#include "qp_oracle.hpp"

using namespace ofo;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

QpProblem random_problem(std::mt19937& rng, int m, int rows) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    Eigen::MatrixXd mfac(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) mfac(i, j) = gauss(rng);

    QpProblem qp;
    qp.G = mfac.transpose() * mfac + 0.3 * Eigen::MatrixXd::Identity(m, m);
    qp.gradient_term.resize(m);
    for (int i = 0; i < m; ++i) qp.gradient_term(i) = gauss(rng);

    qp.ineq_A.resize(rows, m);
    for (int r = 0; r < rows; ++r)
        for (int j = 0; j < m; ++j) qp.ineq_A(r, j) = gauss(rng);

    // feasible by construction; roughly a third of the rows start binding-ish
    Eigen::VectorXd w_feas(m);
    for (int i = 0; i < m; ++i) w_feas(i) = 0.5 * gauss(rng);
    qp.ineq_b = qp.ineq_A * w_feas;
    for (int r = 0; r < rows; ++r)
        qp.ineq_b(r) += (unif(rng) < 0.35) ? 0.01 * unif(rng) : unif(rng);
    return qp;
}

double objective(const QpProblem& qp, const Eigen::VectorXd& w) {
    const Eigen::VectorXd d = w + qp.gradient_term;
    return d.dot(qp.G * d);
}

} // namespace

TEST_CASE("unconstrained minimizer is the negated gradient term") {
    QpProblem qp;
    qp.G.setIdentity(3, 3);
    qp.G(1, 1) = 4.0;
    qp.gradient_term.resize(3);
    qp.gradient_term << 1.0, -2.5, 0.25;
    qp.ineq_A.resize(0, 3);
    qp.ineq_b.resize(0);

    const QpSolution sol = solve_qp(qp);
    CHECK(sol.status == QpStatus::optimal);
    for (int i = 0; i < 3; ++i) CHECK(sol.w(i) == -qp.gradient_term(i));
    CHECK(sol.kkt_residual == 0.0);
}

TEST_CASE("scalar clipped at its bound with hand-checked KKT") {
    QpProblem qp;
    qp.G.setIdentity(1, 1);
    qp.gradient_term.resize(1);
    qp.gradient_term << -2.0; // unconstrained minimizer w = 2
    qp.ineq_A.resize(1, 1);
    qp.ineq_A << 1.0;
    qp.ineq_b.resize(1);
    qp.ineq_b << 1.0;

    const QpSolution sol = solve_qp(qp);
    CHECK(sol.status == QpStatus::optimal);
    CHECK(sol.w(0) == doctest::Approx(1.0).epsilon(1e-12));
    REQUIRE(sol.active_set.size() == 1);
    CHECK(sol.active_set[0] == 0);
    // stationarity: 2*(w + g) + lambda = 0 => lambda = 2
    CHECK(sol.multipliers(0) == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(sol.kkt_residual < 1e-8);
}

TEST_CASE("zero gradient with slack constraints stays at the origin") {
    QpProblem qp;
    qp.G.setIdentity(4, 4);
    qp.gradient_term.setZero(4);
    qp.ineq_A = Eigen::MatrixXd::Random(6, 4);
    qp.ineq_b = Eigen::VectorXd::Constant(6, 0.5);

    const QpSolution sol = solve_qp(qp);
    CHECK(sol.status == QpStatus::optimal);
    CHECK(sol.w.lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("infeasible constraint sets are reported") {
    QpProblem qp;
    qp.G.setIdentity(2, 2);
    qp.gradient_term.setZero(2);
    qp.ineq_A.resize(2, 2);
    qp.ineq_A << 1.0, 0.0, -1.0, 0.0; // w0 <= -1 and w0 >= 1
    qp.ineq_b.resize(2);
    qp.ineq_b << -1.0, -1.0;

    const QpSolution sol = solve_qp(qp);
    CHECK(sol.status == QpStatus::infeasible);
}

TEST_CASE("invalid metric matrices are rejected at construction") {
    QpProblem qp;
    qp.G.setZero(2, 2); // singular
    qp.gradient_term.setZero(2);
    qp.ineq_A.resize(0, 2);
    qp.ineq_b.resize(0);
    CHECK_THROWS_AS(qp.validate(), ParameterError);

    qp.G.setIdentity(2, 2);
    qp.G(0, 1) = 0.5; // asymmetric
    CHECK_THROWS_AS(qp.validate(), ParameterError);
}

TEST_CASE("random problems agree with the dual projected-gradient oracle") {
    std::mt19937 rng(2024);
    for (int trial = 0; trial < 60; ++trial) {
        CAPTURE(trial);
        const QpProblem qp = random_problem(rng, 5, 12);
        const QpSolution sol = solve_qp(qp);
        REQUIRE(sol.status == QpStatus::optimal);
        CHECK(sol.kkt_residual < 1e-8);

        const test::OracleResult oracle = test::solve_qp_dual_pg(qp, 1e-10);
        REQUIRE(oracle.converged);
        CHECK((sol.w - oracle.w).lpNorm<Eigen::Infinity>() < 1e-6);
    }
}

TEST_CASE("KKT certificate holds on every optimal return") {
    std::mt19937 rng(99);
    for (int trial = 0; trial < 120; ++trial) {
        CAPTURE(trial);
        const QpProblem qp = random_problem(rng, 2 + trial % 8, 4 + trial % 20);
        const QpSolution sol = solve_qp(qp);
        REQUIRE(sol.status == QpStatus::optimal);
        CHECK(sol.kkt_residual < 1e-8);
        if (qp.ineq_A.rows() > 0)
            CHECK((qp.ineq_A * sol.w - qp.ineq_b).maxCoeff() < 1e-9);
    }
}

TEST_CASE("consistent metric rescaling leaves the minimizer unchanged") {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        CAPTURE(trial);
        const QpProblem qp = random_problem(rng, 4, 10);
        const QpSolution base = solve_qp(qp);
        REQUIRE(base.status == QpStatus::optimal);

        // rescale the metric and rebuild the gradient term with it: the
        // underlying gradient h = G g scales along, so the term is unchanged
        // and the objective is just multiplied by c
        for (double c : {0.05, 3.0, 400.0}) {
            QpProblem scaled = qp;
            scaled.G = c * qp.G;
            const Eigen::VectorXd h_scaled = c * (qp.G * qp.gradient_term);
            scaled.gradient_term = Eigen::LLT<Eigen::MatrixXd>(scaled.G).solve(h_scaled);
            const QpSolution sol = solve_qp(scaled);
            REQUIRE(sol.status == QpStatus::optimal);
            CHECK((sol.w - base.w).lpNorm<Eigen::Infinity>() < 1e-10);
        }
    }
}

TEST_CASE("adding a constraint never decreases the optimum") {
    std::mt19937 rng(17);
    for (int trial = 0; trial < 15; ++trial) {
        CAPTURE(trial);
        const QpProblem full = random_problem(rng, 4, 12);
        double previous = -1.0;
        for (int rows = 0; rows <= full.ineq_A.rows(); rows += 3) {
            QpProblem sub = full;
            sub.ineq_A = full.ineq_A.topRows(rows);
            sub.ineq_b = full.ineq_b.head(rows);
            const QpSolution sol = solve_qp(sub);
            REQUIRE(sol.status == QpStatus::optimal);
            const double value = objective(sub, sol.w);
            CHECK(value >= previous - 1e-10);
            previous = value;
        }
    }
}

namespace {

// tiny projection setup: 2 inputs, 1 monitored output with sensitivity row s
SensitivityMatrix row_sensitivity(double s0, double s1) {
    SensitivityMatrix sens;
    sens.m.resize(1, 2);
    sens.m << s0, s1;
    return sens;
}

ConstraintSpec box_limits(double u0_max, double y_lo, double y_hi) {
    ConstraintSpec limits;
    limits.u_min = Eigen::VectorXd::Constant(2, -1.0);
    limits.u_max.resize(2);
    limits.u_max << u0_max, 1.0;
    limits.y_min = Eigen::VectorXd::Constant(1, y_lo);
    limits.y_max = Eigen::VectorXd::Constant(1, y_hi);
    return limits;
}

} // namespace

TEST_CASE("projection rows encode residual capacity at a binding bound") {
    CompositeGradient grad;
    grad.du.resize(2);
    grad.du << -1.0, 0.0; // pushes u0 further up
    grad.dy = Eigen::VectorXd::Zero(1);

    const SensitivityMatrix sens = row_sensitivity(0.0, 0.0);
    Eigen::VectorXd u(2), y(1);
    u << 0.5, 0.0; // u0 exactly at its bound
    y << 0.0;
    const ConstraintSpec limits = box_limits(0.5, -kInf, kInf);

    const QpProblem qp = build_projection_qp(grad, sens, u, y, limits, 0.8,
                                             Eigen::MatrixXd::Identity(2, 2));
    CHECK(qp.input_row_count == 4);
    CHECK(qp.ineq_b(0) == 0.0); // zero residual capacity on u0's upper bound

    const ProjectionResult res = solve_projection(qp);
    CHECK(res.solution.status == QpStatus::optimal);
    CHECK(res.solution.w(0) <= 1e-12); // cannot move further up
}

TEST_CASE("violated output band forces the step back inside within one gain step") {
    CompositeGradient grad;
    grad.du = Eigen::VectorXd::Zero(2);
    grad.dy = Eigen::VectorXd::Zero(1);

    const SensitivityMatrix sens = row_sensitivity(0.5, 0.25);
    Eigen::VectorXd u(2), y(1);
    u << 0.0, 0.0;
    y << 1.07; // 0.02 above the 1.05 ceiling
    const ConstraintSpec limits = box_limits(1.0, 0.95, 1.05);

    const double alpha = 0.8;
    const QpProblem qp = build_projection_qp(grad, sens, u, y, limits, alpha,
                                             Eigen::MatrixXd::Identity(2, 2));
    // the upper output row carries the (negative) residual margin
    CHECK(qp.ineq_b(qp.input_row_count) == doctest::Approx(-0.02));

    const ProjectionResult res = solve_projection(qp);
    REQUIRE(res.solution.status == QpStatus::optimal);
    CHECK_FALSE(res.softened);
    const double linearized = y(0) + alpha * sens.m.row(0).dot(res.solution.w);
    CHECK(linearized <= 1.05 + 1e-9);
}

TEST_CASE("zero gradient with slack limits projects to zero") {
    CompositeGradient grad;
    grad.du = Eigen::VectorXd::Zero(2);
    grad.dy = Eigen::VectorXd::Zero(1);
    const SensitivityMatrix sens = row_sensitivity(0.3, -0.2);
    Eigen::VectorXd u(2), y(1);
    u << 0.1, -0.2;
    y << 1.0;
    const QpProblem qp = build_projection_qp(grad, sens, u, y, box_limits(1.0, 0.95, 1.05),
                                             0.5, Eigen::MatrixXd::Identity(2, 2));
    const ProjectionResult res = solve_projection(qp);
    CHECK(res.solution.w.lpNorm<Eigen::Infinity>() < 1e-12);
}

TEST_CASE("gain outside (0,1] is rejected") {
    CompositeGradient grad;
    grad.du = Eigen::VectorXd::Zero(2);
    grad.dy = Eigen::VectorXd::Zero(1);
    const SensitivityMatrix sens = row_sensitivity(0.1, 0.1);
    const Eigen::VectorXd u = Eigen::VectorXd::Zero(2);
    const Eigen::VectorXd y = Eigen::VectorXd::Zero(1);
    const ConstraintSpec limits = box_limits(1.0, -1.0, 1.0);
    const Eigen::MatrixXd g2 = Eigen::MatrixXd::Identity(2, 2);
    CHECK_THROWS_AS(build_projection_qp(grad, sens, u, y, limits, 0.0, g2), ParameterError);
    CHECK_THROWS_AS(build_projection_qp(grad, sens, u, y, limits, 1.2, g2), ParameterError);
    CHECK_NOTHROW(build_projection_qp(grad, sens, u, y, limits, 1.0, g2));
}

TEST_CASE("conflicting output bands fall back to the softened problem") {
    CompositeGradient grad;
    grad.du = Eigen::VectorXd::Zero(2);
    grad.dy = Eigen::VectorXd::Zero(1);
    const SensitivityMatrix sens = row_sensitivity(1.0, 0.0);
    Eigen::VectorXd u(2), y(1);
    u << 0.0, 0.0;
    y << 0.0;
    // band [0.6, -0.6] is unsatisfiable: the two output rows contradict
    const ConstraintSpec limits = box_limits(1.0, 0.6, -0.6);

    const QpProblem qp = build_projection_qp(grad, sens, u, y, limits, 1.0,
                                             Eigen::MatrixXd::Identity(2, 2));
    const ProjectionResult res = solve_projection(qp);
    CHECK(res.softened);
    CHECK(res.solution.status == QpStatus::optimal);
    // input boxes stay hard under softening
    CHECK(res.solution.w(0) <= 1.0 + 1e-9);
    CHECK(res.solution.w(0) >= -1.0 - 1e-9);
}
