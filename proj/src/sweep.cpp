#include "ofo/sweep.hpp"

#include <atomic>
#include <mutex>
#include <thread>

#include "ofo/errors.hpp"

namespace ofo {

std::vector<double> default_sweep_alphas() {
    std::vector<double> alphas;
    for (int i = 1; i <= 10; ++i) alphas.push_back(i * 0.009);
    return alphas;
}

std::vector<double> default_sweep_betas() {
    std::vector<double> betas;
    for (int i = 4; i <= 10; ++i) betas.push_back(i * 0.1);
    return betas;
}

SweepResult parameter_sweep(const Scenario& base, const std::vector<double>& alphas,
                            const std::vector<double>& betas) {
    if (alphas.empty() || betas.empty())
        throw ParameterError("sweep grids must be non-empty");

    SweepResult result;
    result.alphas = alphas;
    result.betas = betas;
    result.cells.resize(alphas.size() * betas.size());

    auto run_cell = [&](std::size_t ai, std::size_t bi) {
        Scenario cell = base;
        cell.alpha = alphas[ai];
        cell.beta = betas[bi];
        const Trajectory traj = run_scenario(cell);
        SweepCell out;
        out.alpha = alphas[ai];
        out.beta = betas[bi];
        out.settled_at = detect_settled(traj, cell);
        out.converged = out.settled_at.has_value();
        result.cells[ai * betas.size() + bi] = out;
    };

    const std::size_t total = result.cells.size();
    const std::size_t workers =
        std::max<std::size_t>(1, std::min<std::size_t>(std::thread::hardware_concurrency(), total));

    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::exception_ptr failure;
    std::mutex failure_mutex;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            for (;;) {
                const std::size_t idx = next.fetch_add(1);
                if (idx >= total) return;
                try {
                    run_cell(idx / betas.size(), idx % betas.size());
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
    return result;
}

} // namespace ofo
