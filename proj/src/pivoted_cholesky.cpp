#include "spanlab/pivoted_cholesky.hpp"

#include <cmath>
#include <numeric>

#include "spanlab/error.hpp"

namespace spanlab {

PivotedCholesky pivoted_cholesky(const Eigen::MatrixXcd& a, double relative_drop) {
  const int n = static_cast<int>(a.rows());
  if (a.cols() != n) throw Error(ErrorKind::InvalidArgument, "matrix must be square");
  PivotedCholesky out;
  out.pivots.resize(n);
  std::iota(out.pivots.begin(), out.pivots.end(), 0);
  if (n == 0) return out;

  Eigen::MatrixXcd w = a;
  std::vector<double> diag(n);
  for (int i = 0; i < n; ++i) diag[i] = w(i, i).real();
  double top = 0.0;
  for (double d : diag) top = std::max(top, d);
  if (!(top > 0.0)) return out;
  const double cut = relative_drop * top;

  Eigen::MatrixXcd l = Eigen::MatrixXcd::Zero(n, n);
  std::vector<int>& p = out.pivots;
  int r = 0;
  for (; r < n; ++r) {
    int best = r;
    for (int i = r + 1; i < n; ++i) {
      if (diag[p[i]] > diag[p[best]]) best = i;
    }
    if (!(diag[p[best]] > cut)) break;
    if (best != r) {
      std::swap(p[r], p[best]);
      l.row(r).swap(l.row(best));
    }
    const double pivot = std::sqrt(diag[p[r]]);
    l(r, r) = pivot;
    for (int i = r + 1; i < n; ++i) {
      std::complex<double> v = w(p[i], p[r]);
      for (int k = 0; k < r; ++k) v -= l(i, k) * std::conj(l(r, k));
      l(i, r) = v / pivot;
      diag[p[i]] -= std::norm(l(i, r));
    }
  }
  out.rank = r;
  out.factor = l.topLeftCorner(r, r);
  if (r > 0) {
    out.max_pivot = out.factor(0, 0).real();
    out.min_pivot = out.factor(0, 0).real();
    for (int i = 1; i < r; ++i) {
      out.max_pivot = std::max(out.max_pivot, out.factor(i, i).real());
      out.min_pivot = std::min(out.min_pivot, out.factor(i, i).real());
    }
  }
  return out;
}

void forward_solve(const Eigen::MatrixXcd& l, int rank, std::complex<double>* x) {
  for (int i = 0; i < rank; ++i) {
    std::complex<double> v = x[i];
    for (int k = 0; k < i; ++k) v -= l(i, k) * x[k];
    x[i] = v / l(i, i);
  }
}

void backward_solve_adjoint(const Eigen::MatrixXcd& l, int rank, std::complex<double>* x) {
  for (int i = rank - 1; i >= 0; --i) {
    std::complex<double> v = x[i];
    for (int k = i + 1; k < rank; ++k) v -= std::conj(l(k, i)) * x[k];
    x[i] = v / std::conj(l(i, i));
  }
}

}  // namespace spanlab
