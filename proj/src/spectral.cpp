#include "spanlab/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

#include "spanlab/error.hpp"

namespace spanlab {

double Spectrum::max_abs() const {
  double m = 0.0;
  for (const cplx& c : coefs) m = std::max(m, std::abs(c));
  return m;
}

cplx Spectrum::at(int mode) const {
  auto it = std::lower_bound(modes.begin(), modes.end(), mode);
  if (it == modes.end() || *it != mode) return 0.0;
  return coefs[it - modes.begin()];
}

Spectrum single_mode(int mode, cplx coef) {
  Spectrum s;
  if (coef != 0.0) {
    s.modes.push_back(mode);
    s.coefs.push_back(coef);
  }
  return s;
}

Spectrum curve_spectrum(const BoundaryCurve& curve, cplx shift, double scale) {
  Spectrum s;
  for (int k = -curve.degree(); k <= curve.degree(); ++k) {
    cplx c = curve.coefficient(k);
    if (k == 0) c -= shift;
    if (c != 0.0) {
      s.modes.push_back(k);
      s.coefs.push_back(c / scale);
    }
  }
  return s;
}

Spectrum tangent_spectrum(const BoundaryCurve& curve) {
  Spectrum s;
  for (int k = -curve.degree(); k <= curve.degree(); ++k) {
    const cplx c = curve.coefficient(k);
    if (k != 0 && c != 0.0) {
      s.modes.push_back(k);
      s.coefs.push_back(cplx(0.0, k) * c);
    }
  }
  return s;
}

Spectrum convolve(const Spectrum& a, const Spectrum& b) {
  if (a.empty() || b.empty()) return {};
  if (a.size() == 1 || b.size() == 1) {
    const Spectrum& one = a.size() == 1 ? a : b;
    const Spectrum& other = a.size() == 1 ? b : a;
    Spectrum out;
    out.modes.reserve(other.size());
    out.coefs.reserve(other.size());
    for (std::size_t i = 0; i < other.size(); ++i) {
      const cplx c = one.coefs[0] * other.coefs[i];
      if (c != 0.0) {
        out.modes.push_back(one.modes[0] + other.modes[i]);
        out.coefs.push_back(c);
      }
    }
    return out;
  }
  const int lo = a.modes.front() + b.modes.front();
  const int hi = a.modes.back() + b.modes.back();
  std::vector<cplx> dense(static_cast<std::size_t>(hi - lo + 1), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      dense[a.modes[i] + b.modes[j] - lo] += a.coefs[i] * b.coefs[j];
    }
  }
  Spectrum out;
  for (std::size_t n = 0; n < dense.size(); ++n) {
    if (dense[n] != 0.0) {
      out.modes.push_back(lo + static_cast<int>(n));
      out.coefs.push_back(dense[n]);
    }
  }
  return out;
}

Spectrum scaled(Spectrum s, cplx factor) {
  for (cplx& c : s.coefs) c *= factor;
  return s;
}

void prune(Spectrum& s, double relative) {
  const double cut = relative * s.max_abs();
  std::size_t w = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!std::isfinite(s.coefs[i].real()) || !std::isfinite(s.coefs[i].imag())) {
      throw Error(ErrorKind::QuadratureNonconvergence, "non-finite boundary trace coefficient");
    }
    if (s.coefs[i] != 0.0 && std::abs(s.coefs[i]) > cut) {
      s.modes[w] = s.modes[i];
      s.coefs[w] = s.coefs[i];
      ++w;
    }
  }
  s.modes.resize(w);
  s.coefs.resize(w);
}

cplx spectral_inner(const Spectrum& a, const Spectrum& b) {
  cplx sum = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a.modes[i] < b.modes[j]) {
      ++i;
    } else if (a.modes[i] > b.modes[j]) {
      ++j;
    } else {
      sum += a.coefs[i] * std::conj(b.coefs[j]);
      ++i;
      ++j;
    }
  }
  return sum;
}

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

Spectrum spectrum_from_samples(std::span<const cplx> samples) {
  const int m = static_cast<int>(samples.size());
  if (m < 2) throw Error(ErrorKind::InvalidArgument, "need at least two samples");
  auto* buf = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * m));
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = fftw_plan_dft_1d(m, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
  }
  for (int i = 0; i < m; ++i) {
    buf[i][0] = samples[i].real();
    buf[i][1] = samples[i].imag();
  }
  fftw_execute(plan);
  // mode n in [-m/2, m/2): index n mod m
  Spectrum s;
  for (int n = -m / 2; n < m - m / 2; ++n) {
    const int idx = (n + m) % m;
    const cplx c(buf[idx][0] / m, buf[idx][1] / m);
    if (c != 0.0) {
      s.modes.push_back(n);
      s.coefs.push_back(c);
    }
  }
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(buf);
  return s;
}

Spectrum adaptive_spectrum(const std::function<cplx(double)>& f, int start, int max_nodes,
                           double tail_tolerance) {
  int m = 16;
  while (m < start) m *= 2;
  std::vector<cplx> samples;
  for (; m <= max_nodes; m *= 2) {
    samples.resize(m);
    for (int i = 0; i < m; ++i) samples[i] = f(2.0 * std::numbers::pi * i / m);
    Spectrum s = spectrum_from_samples(samples);
    const double peak = s.max_abs();
    double tail = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (std::abs(s.modes[i]) >= m / 4) tail = std::max(tail, std::abs(s.coefs[i]));
    }
    if (tail <= tail_tolerance * peak) {
      prune(s, tail_tolerance);
      return s;
    }
  }
  throw Error(ErrorKind::QuadratureNonconvergence,
              "boundary trace is not resolved with " + std::to_string(max_nodes) + " nodes");
}

}  // namespace spanlab
