#include <cmath>
#include <cstddef>
#include <cstdint>

#include "pilotwave/kernels.hpp"
#include "point_math.hpp"

namespace pilotwave::kern {
namespace {

void envelope_grid(const double* theta, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = detail::envelope(theta[i]);
}

void grating_grid(const double* theta, const double* phi, int n_slits,
                  double* out, std::size_t n) {
  if (n_slits == 1) {
    envelope_grid(theta, out, n);
    return;
  }
  for (std::size_t i = 0; i < n; ++i)
    out[i] = detail::envelope(theta[i]) * detail::interference(phi[i], n_slits);
}

void sed_transform_grid(const double* intensity, double beta_e0, double* out,
                        std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    out[i] = detail::sed_transform(intensity[i], beta_e0);
}

void weighted_sq_residual(const double* model, const double* data,
                          const double* w, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double r = model[i] - data[i];
    out[i] = w[i] * (r * r);
  }
}

void trap_count(const double* x, std::size_t n, const double* thresholds,
                std::size_t n_bins, std::uint64_t* counts) {
  for (std::size_t j = 0; j < n_bins; ++j) {
    const double thr = thresholds[j];
    std::uint64_t c = 0;
    for (std::size_t i = 0; i < n; ++i) c += (x[i] <= thr) ? 1u : 0u;
    counts[j] += c;
  }
}

double max_value(const double* x, std::size_t n) {
  double m = x[0];
  for (std::size_t i = 1; i < n; ++i)
    if (x[i] > m) m = x[i];
  return m;
}

}  // namespace

const Kernels& scalar_kernels() {
  static const Kernels k{envelope_grid,        grating_grid, sed_transform_grid,
                         weighted_sq_residual, trap_count,   max_value,
                         "scalar"};
  return k;
}

}  // namespace pilotwave::kern
