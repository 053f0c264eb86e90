#include "levykin/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <utility>

#include "levykin/errors.hpp"

namespace levykin::spectral {
namespace {

struct Buffer {
  explicit Buffer(std::size_t n) : data(fftw_alloc_complex(n)) {}
  ~Buffer() { fftw_free(data); }
  Buffer(const Buffer&) = delete;
  Buffer& operator=(const Buffer&) = delete;
  fftw_complex* data;
};

struct Plan {
  fftw_plan plan = nullptr;
  ~Plan() {
    if (plan) fftw_destroy_plan(plan);
  }
};

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// FFTW's planner is not re-entrant; execution with the new-array interface is.
fftw_plan cached_plan(std::size_t n, int sign) {
  static std::map<std::pair<std::size_t, int>, std::unique_ptr<Plan>> plans;
  std::lock_guard lock(planner_mutex());
  auto& slot = plans[{n, sign}];
  if (!slot) {
    Buffer in(n), out(n);
    slot = std::make_unique<Plan>();
    slot->plan = fftw_plan_dft_1d(static_cast<int>(n), in.data, out.data,
                                  sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
    if (!slot->plan) throw NumericalError("FFTW failed to create a plan");
  }
  return slot->plan;
}

// e^{i V xi_j}: with xi_j = j pi / V this is (-1)^j exactly.
double edge_phase(std::size_t j, std::size_t n) {
  const std::size_t idx = j < n / 2 ? j : n - j;
  return idx % 2 == 0 ? 1.0 : -1.0;
}

}  // namespace

void dft(std::span<const cplx> in, std::span<cplx> out, int sign) {
  const std::size_t n = in.size();
  if (out.size() != n) throw ValidationError("dft: size mismatch");
  fftw_plan plan = cached_plan(n, sign);
  Buffer a(n), b(n);
  for (std::size_t i = 0; i < n; ++i) {
    a.data[i][0] = in[i].real();
    a.data[i][1] = in[i].imag();
  }
  fftw_execute_dft(plan, a.data, b.data);
  for (std::size_t i = 0; i < n; ++i) out[i] = {b.data[i][0], b.data[i][1]};
}

std::vector<cplx> forward(const VelocityGrid& grid, std::span<const cplx> g) {
  const std::size_t n = grid.size();
  if (g.size() != n) throw ValidationError("spectral::forward: size mismatch");
  std::vector<cplx> out(n);
  dft(g, out, -1);
  const double h = grid.spacing();
  for (std::size_t j = 0; j < n; ++j) out[j] *= h * edge_phase(j, n);
  return out;
}

std::vector<cplx> forward(const VelocityGrid& grid, std::span<const double> g) {
  std::vector<cplx> c(g.begin(), g.end());
  return forward(grid, std::span<const cplx>(c));
}

std::vector<cplx> inverse(const VelocityGrid& grid, std::span<const cplx> ghat) {
  const std::size_t n = grid.size();
  if (ghat.size() != n) throw ValidationError("spectral::inverse: size mismatch");
  std::vector<cplx> in(n), out(n);
  const double scale = 1.0 / (static_cast<double>(n) * grid.spacing());
  for (std::size_t j = 0; j < n; ++j) in[j] = ghat[j] * (scale * edge_phase(j, n));
  dft(in, out, +1);
  return out;
}

std::vector<double> inverse_real(const VelocityGrid& grid, std::span<const cplx> ghat) {
  auto c = inverse(grid, ghat);
  std::vector<double> r(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) r[i] = c[i].real();
  return r;
}

std::vector<double> apply_symbol(const VelocityGrid& grid, std::span<const double> g,
                                 const std::function<cplx(double)>& symbol) {
  auto hat = forward(grid, g);
  for (std::size_t j = 0; j < hat.size(); ++j) hat[j] *= symbol(grid.dual_mode(j));
  return inverse_real(grid, hat);
}

std::vector<cplx> derivative(const VelocityGrid& grid, std::span<const cplx> g, int order) {
  auto hat = forward(grid, g);
  const std::size_t n = grid.size();
  for (std::size_t j = 0; j < n; ++j) {
    if (order % 2 == 1 && j == n / 2) {
      hat[j] = 0.0;
      continue;
    }
    hat[j] *= std::pow(cplx(0.0, grid.dual_mode(j)), order);
  }
  return inverse(grid, hat);
}

std::vector<double> derivative(const VelocityGrid& grid, std::span<const double> g, int order) {
  std::vector<cplx> c(g.begin(), g.end());
  auto d = derivative(grid, std::span<const cplx>(c), order);
  std::vector<double> r(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) r[i] = d[i].real();
  return r;
}

}  // namespace levykin::spectral
