#include "levykin/numerics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>

#include "levykin/errors.hpp"

namespace levykin::numerics {

double riemann_zeta(double s) {
  if (s == 1.0) throw ValidationError("riemann_zeta: pole at s = 1");
  return std::riemann_zeta(s);
}

double hurwitz_zeta(double s, double a) {
  if (!(s > 1.0) || !(a > 0.0)) throw ValidationError("hurwitz_zeta: requires s > 1 and a > 0");
  // Euler-Maclaurin with the head summed directly until a + N >= 16.
  constexpr double kShift = 16.0;
  const int head = a < kShift ? static_cast<int>(std::ceil(kShift - a)) : 0;
  double sum = 0.0;
  for (int k = head - 1; k >= 0; --k) sum += std::pow(a + k, -s);
  const double x = a + head;
  sum += std::pow(x, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(x, -s);
  // B_{2j}/(2j)!
  static constexpr double kBernoulli[] = {1.0 / 12.0,         -1.0 / 720.0,        1.0 / 30240.0,
                                          -1.0 / 1209600.0,   1.0 / 47900160.0,    -691.0 / 1307674368000.0,
                                          1.0 / 74724249600.0};
  double rising = s;  // s (s+1) ... (s+2j-2)
  double power = std::pow(x, -s - 1.0);
  for (std::size_t j = 0; j < std::size(kBernoulli); ++j) {
    sum += kBernoulli[j] * rising * power;
    rising *= (s + 2.0 * j + 1.0) * (s + 2.0 * j + 2.0);
    power /= x * x;
  }
  return sum;
}

std::vector<double> fd_weights(int order, std::span<const double> stencil, double x0) {
  const auto n = stencil.size();
  if (order < 0 || n <= static_cast<std::size_t>(order)) {
    throw ValidationError("fd_weights: stencil too small for the requested derivative order");
  }
  const auto m = static_cast<std::size_t>(order);
  // Fornberg (1988), recursive in stencil size.
  std::vector<std::vector<double>> c(n, std::vector<double>(m + 1, 0.0));
  double c1 = 1.0;
  double c4 = stencil[0] - x0;
  c[0][0] = 1.0;
  for (std::size_t i = 1; i < n; ++i) {
    const std::size_t mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = stencil[i] - x0;
    for (std::size_t j = 0; j < i; ++j) {
      const double c3 = stencil[i] - stencil[j];
      c2 *= c3;
      if (j == i - 1) {
        for (std::size_t k = mn; k >= 1; --k) {
          c[i][k] = c1 * (static_cast<double>(k) * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        }
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (std::size_t k = mn; k >= 1; --k) {
        c[j][k] = (c4 * c[j][k] - static_cast<double>(k) * c[j][k - 1]) / c3;
      }
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = c[i][m];
  return w;
}

FiniteDifference::FiniteDifference(int order, int accuracy, double spacing, std::size_t size)
    : order_(order), size_(size) {
  if (order < 1 || accuracy < 2 || accuracy % 2 != 0) {
    throw ValidationError("FiniteDifference: order >= 1 and even accuracy >= 2 required");
  }
  width_ = static_cast<std::size_t>(2 * ((order + 1) / 2) - 1 + accuracy);
  if (size < width_) throw ValidationError("FiniteDifference: grid smaller than stencil");
  const auto half = static_cast<std::ptrdiff_t>(width_ / 2);

  std::vector<double> offsets(width_);
  weights_.resize(width_);
  for (std::size_t r = 0; r < width_; ++r) {
    for (std::size_t j = 0; j < width_; ++j) offsets[j] = static_cast<double>(j) - static_cast<double>(r);
    auto w = fd_weights(order, offsets, 0.0);
    const double scale = std::pow(spacing, -order);
    for (double& x : w) x *= scale;
    weights_[r] = std::move(w);
  }
  first_.resize(size);
  row_.resize(size);
  const auto last_start = static_cast<std::ptrdiff_t>(size - width_);
  for (std::size_t i = 0; i < size; ++i) {
    const auto start = std::clamp(static_cast<std::ptrdiff_t>(i) - half, std::ptrdiff_t{0}, last_start);
    first_[i] = start;
    row_[i] = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(i) - start);
  }
}

std::vector<double> FiniteDifference::apply(std::span<const double> values) const {
  if (values.size() != size_) throw ValidationError("FiniteDifference: size mismatch");
  std::vector<double> out(size_);
  for (std::size_t i = 0; i < size_; ++i) {
    const auto& w = weights_[row_[i]];
    const double* v = values.data() + first_[i];
    double acc = 0.0;
    for (std::size_t j = 0; j < width_; ++j) acc += w[j] * v[j];
    out[i] = acc;
  }
  return out;
}

LagrangeStencil lagrange_stencil(double x, double x0, double dx, std::size_t size, std::size_t width) {
  if (width == 0 || width > size) throw ValidationError("lagrange_stencil: bad stencil width");
  const double u = (x - x0) / dx;
  const auto base = static_cast<std::ptrdiff_t>(std::floor(u)) - static_cast<std::ptrdiff_t>(width) / 2 + 1;
  const auto start = std::clamp(base, std::ptrdiff_t{0}, static_cast<std::ptrdiff_t>(size - width));
  LagrangeStencil st;
  st.start = static_cast<std::size_t>(start);
  st.weights.assign(width, 1.0);
  const double local = u - static_cast<double>(start);
  for (std::size_t a = 0; a < width; ++a) {
    double w = 1.0;
    for (std::size_t b = 0; b < width; ++b) {
      if (a != b) w *= (local - static_cast<double>(b)) / (static_cast<double>(a) - static_cast<double>(b));
    }
    st.weights[a] = w;
  }
  return st;
}

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw ValidationError("fit_line: need >= 2 paired samples");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw ValidationError("fit_line: abscissae are all equal");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.slope * x[i] + fit.intercept);
    ss += r * r;
  }
  fit.rms_residual = std::sqrt(ss / n);
  return fit;
}

namespace {
std::atomic<int> g_threads{1};
}

void set_thread_count(int threads) {
  if (threads < 1) throw ValidationError("thread count must be >= 1");
  g_threads.store(threads);
}

int thread_count() { return g_threads.load(); }

}  // namespace levykin::numerics
