#pragma once

#include <cstddef>
#include <cstdint>

namespace pilotwave::kern {

// Grid kernels used by the hot paths. Every entry has a scalar reference
// implementation; SIMD backends must match it elementwise. trap_count,
// weighted_sq_residual and max_value are pure compares / exactly rounded
// arithmetic in a fixed order, so those three are bit-identical across
// backends; the transcendental kernels agree to a small mixed tolerance.
struct Kernels {
  // out[i] = single-slit envelope sin^2(theta)/theta^2, limit 1 at theta -> 0.
  void (*envelope_grid)(const double* theta, double* out, std::size_t n);

  // out[i] = envelope(theta[i]) * sin^2(n phi)/(n sin phi)^2, the
  // interference factor taking its limit 1 at phi -> m*pi. n_slits >= 1;
  // phi is ignored for n_slits == 1.
  void (*grating_grid)(const double* theta, const double* phi, int n_slits,
                       double* out, std::size_t n);

  // out[i] = 1 - exp(-beta_e0 * intensity[i]).
  void (*sed_transform_grid)(const double* intensity, double beta_e0,
                             double* out, std::size_t n);

  // out[i] = w[i] * (model[i] - data[i])^2.
  void (*weighted_sq_residual)(const double* model, const double* data,
                               const double* w, double* out, std::size_t n);

  // counts[j] += |{ i : x[i] <= thresholds[j] }|.
  void (*trap_count)(const double* x, std::size_t n, const double* thresholds,
                     std::size_t n_bins, std::uint64_t* counts);

  // Maximum element; x must be non-empty and free of NaNs.
  double (*max_value)(const double* x, std::size_t n);

  const char* name;
};

// Scalar reference backend; always available.
const Kernels& scalar_kernels();

// AVX2 backend, or nullptr when unsupported by the build or the CPU.
const Kernels* avx2_kernels();

// Backend picked at startup: the widest supported one, overridable with
// PILOTWAVE_KERNELS=scalar|avx2 (an unavailable request falls back to scalar).
const Kernels& active();

}  // namespace pilotwave::kern
