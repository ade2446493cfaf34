#include "flocksim/transforms.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

namespace flocksim {

namespace {

// The FFTW planner is not thread-safe; plan creation is serialized globally.
// Each thread keeps its own plans (and the scratch the planner measured on),
// so concurrent workers never share execution state.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct PlanEntry {
  fftw_plan plan = nullptr;
  ~PlanEntry() {
    if (plan != nullptr) {
      std::lock_guard<std::mutex> lock(planner_mutex());
      fftw_destroy_plan(plan);
    }
  }
};

fftw_plan plan_for(const TorusGrid& grid, int sign) {
  thread_local std::map<std::tuple<int, int, int>, PlanEntry> cache;
  const auto key = std::make_tuple(grid.dim(), grid.points_per_dim(), sign);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second.plan;

  std::vector<fftw_complex> a(grid.node_count()), b(grid.node_count());
  fftw_plan plan = nullptr;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    const int n = grid.points_per_dim();
    // FFTW_UNALIGNED lets us execute on std::vector storage later.
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    if (grid.dim() == 1) {
      plan = fftw_plan_dft_1d(n, a.data(), b.data(), sign, flags);
    } else {
      plan = fftw_plan_dft_2d(n, n, a.data(), b.data(), sign, flags);
    }
  }
  cache[key].plan = plan;
  return plan;
}

std::vector<std::complex<double>> execute(const TorusGrid& grid, int sign,
                                          std::vector<std::complex<double>> in) {
  std::vector<std::complex<double>> out(grid.node_count());
  fftw_plan plan = plan_for(grid, sign);
  fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(in.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

}  // namespace

std::vector<std::complex<double>> dft_forward(const TorusGrid& grid,
                                              const std::vector<double>& values) {
  std::vector<std::complex<double>> in(grid.node_count());
  for (std::size_t i = 0; i < in.size(); ++i) in[i] = values[i];
  auto out = execute(grid, FFTW_FORWARD, std::move(in));
  const double scale = 1.0 / static_cast<double>(grid.node_count());
  for (auto& c : out) c *= scale;
  return out;
}

std::vector<std::complex<double>> dft_backward(
    const TorusGrid& grid, const std::vector<std::complex<double>>& modes) {
  return execute(grid, FFTW_BACKWARD, modes);
}

}  // namespace flocksim
