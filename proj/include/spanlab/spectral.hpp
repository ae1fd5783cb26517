#pragma once

#include <functional>
#include <span>
#include <vector>

#include "spanlab/curve.hpp"

namespace spanlab {

/// Sparse Fourier series f(t) = sum_n c_n e^{int}, modes strictly increasing.
struct Spectrum {
  std::vector<int> modes;
  std::vector<cplx> coefs;

  std::size_t size() const { return modes.size(); }
  bool empty() const { return modes.empty(); }
  double max_abs() const;
  cplx at(int mode) const;
};

Spectrum single_mode(int mode, cplx coef);
/// Spectrum of a trigonometric-polynomial curve, optionally shifted and scaled:
/// (gamma(t) - shift) / scale.
Spectrum curve_spectrum(const BoundaryCurve& curve, cplx shift = 0.0, double scale = 1.0);
/// Spectrum of gamma'(t).
Spectrum tangent_spectrum(const BoundaryCurve& curve);

Spectrum convolve(const Spectrum& a, const Spectrum& b);
Spectrum scaled(Spectrum s, cplx factor);
/// Drops zero coefficients and those below relative * max_abs().
void prune(Spectrum& s, double relative);

/// sum_n a_n conj(b_n)
cplx spectral_inner(const Spectrum& a, const Spectrum& b);

/// Coefficients of a smooth periodic function from M equispaced samples (FFT).
Spectrum spectrum_from_samples(std::span<const cplx> samples);

/// Samples f at M = start, 2*start, ... nodes until every coefficient with
/// |n| >= M/4 is below tail_tolerance * max, then prunes at the same level.
/// Throws QuadratureNonconvergence past max_nodes.
Spectrum adaptive_spectrum(const std::function<cplx(double)>& f, int start, int max_nodes,
                           double tail_tolerance);

}  // namespace spanlab
