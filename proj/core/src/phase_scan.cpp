#include "crowdflow/phase_scan.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <thread>

namespace crowdflow {

std::vector<double> rate_samples(double step) {
  if (!(step > 0.0 && step <= 0.5)) throw std::invalid_argument("rate step must lie in (0, 1/2]");
  const int n = static_cast<int>(std::lround(1.0 / step));
  std::vector<double> r(n + 1);
  for (int i = 0; i <= n; ++i) r[i] = static_cast<double>(i) / n;
  return r;
}

namespace {

struct Sample {
  double j;
  double mean;
  bool converged;
};

}  // namespace

PhaseGrid scan_phase_diagram(double epsilon, const PhaseScanConfig& config,
                             const std::function<void(int, int)>& progress) {
  if (config.cells < 1) throw std::invalid_argument("phase scan needs at least one cell");
  PhaseGrid grid;
  grid.epsilon = epsilon;
  grid.alphas = rate_samples(config.step);
  grid.betas = grid.alphas;
  const int na = static_cast<int>(grid.alphas.size());
  const int nb = static_cast<int>(grid.betas.size());
  grid.flux.resize(na, nb);
  grid.mean_density.resize(na, nb);
  grid.phase.resize(na, nb);
  grid.converged.resize(na, nb);

  const Mesh mesh = build_interval_mesh(config.cells);
  const VelocityField velocity = resolve_constant(mesh, {1.0, 0.0});

  std::atomic<int> next_row{0};
  std::atomic<int> rows_done{0};
  std::mutex progress_mutex;
  std::exception_ptr failure;
  std::mutex failure_mutex;

  const auto worker = [&] {
    try {
      for (int i = next_row++; i < na; i = next_row++) {
        std::optional<DgFunction> warm;
        for (int k = 0; k < nb; ++k) {
          ModelParams params = make_interval_params(epsilon, grid.alphas[i], grid.betas[k]);
          params.tau = config.tau;
          DgSolver solver(mesh, params, velocity, config.solver);
          auto result = warm ? solver.solve_stationary(*warm) : solver.solve_stationary();
          if (warm && !result.second.converged) result = solver.solve_stationary();
          const auto& [rho, report] = result;
          const double mean = integrate(rho);
          grid.flux(i, k) = report.flux.mean_flux;
          grid.mean_density(i, k) = mean;
          grid.converged(i, k) = report.converged;
          grid.phase(i, k) = classify(report.flux.mean_flux, mean, config.classification_tol);
          if (report.converged)
            warm = rho;
          else
            warm.reset();
        }
        const int done = ++rows_done;
        if (progress) {
          std::lock_guard lock(progress_mutex);
          progress(done, na);
        }
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next_row = na;
    }
  };

  int jobs = config.jobs > 0 ? config.jobs : static_cast<int>(std::thread::hardware_concurrency());
  jobs = std::clamp(jobs, 1, na);
  std::vector<std::thread> threads;
  for (int t = 1; t < jobs; ++t) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();
  if (failure) std::rethrow_exception(failure);
  return grid;
}

void write_phase_csv(const PhaseGrid& grid, std::ostream& out) {
  out << "alpha,beta,j,phase,converged\n";
  char buf[160];
  for (std::size_t i = 0; i < grid.alphas.size(); ++i)
    for (std::size_t k = 0; k < grid.betas.size(); ++k) {
      std::snprintf(buf, sizeof buf, "%.15g,%.15g,%.15g,%s,%d\n", grid.alphas[i], grid.betas[k],
                    grid.flux(i, k), phase_name(grid.phase(i, k)), grid.converged(i, k) ? 1 : 0);
      out << buf;
    }
}

}  // namespace crowdflow
