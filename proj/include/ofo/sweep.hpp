#pragma once

#include <optional>
#include <vector>

#include "ofo/scenario.hpp"

namespace ofo {

struct SweepCell {
    double alpha = 0.0;
    double beta = 0.0;
    std::optional<int> settled_at;
    bool converged = false;
};

/// Grid of settle results, alpha-major (all betas of the first alpha first).
struct SweepResult {
    std::vector<double> alphas;
    std::vector<double> betas;
    std::vector<SweepCell> cells;

    const SweepCell& at(std::size_t alpha_idx, std::size_t beta_idx) const {
        return cells[alpha_idx * betas.size() + beta_idx];
    }
};

/// Run the base scenario once per (alpha, beta) pair with everything else
/// identical. Cells are independent and deterministic; they execute in
/// parallel worker threads.
SweepResult parameter_sweep(const Scenario& base, const std::vector<double>& alphas,
                            const std::vector<double>& betas);

/// Default grids echoing the studied parameter ranges.
std::vector<double> default_sweep_alphas(); // 0.009 .. 0.090, step 0.009
std::vector<double> default_sweep_betas();  // 0.4 .. 1.0, step 0.1

} // namespace ofo
