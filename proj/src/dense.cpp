#include "wick/dense.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapack.h>

#include <unsupported/Eigen/MatrixFunctions>

namespace wick {

CMatrix dense_expm(const CMatrix& A, Complex zeta) {
  if (zeta == Complex(0.0)) return CMatrix::Identity(A.rows(), A.cols());
  const CMatrix z = zeta * A;
  return z.exp();
}

std::vector<Complex> dense_eigenvalues(const CMatrix& A) {
  if (A.rows() != A.cols()) throw ContractViolation("eigenvalues need a square matrix");
  CMatrix a = A;  // column major, overwritten
  const lapack_int n = static_cast<lapack_int>(a.rows());
  std::vector<Complex> w(static_cast<std::size_t>(n)), work(1);
  std::vector<double> rwork(static_cast<std::size_t>(2 * std::max<lapack_int>(n, 1)));
  Complex dummy;
  lapack_int one = 1, lwork = -1, info = 0;
  LAPACK_zgeev("N", "N", &n, a.data(), &n, w.data(), &dummy, &one, &dummy, &one, work.data(), &lwork,
               rwork.data(), &info);
  lwork = static_cast<lapack_int>(work[0].real());
  work.resize(static_cast<std::size_t>(std::max<lapack_int>(lwork, 1)));
  LAPACK_zgeev("N", "N", &n, a.data(), &n, w.data(), &dummy, &one, &dummy, &one, work.data(), &lwork,
               rwork.data(), &info);
  if (info != 0) throw InternalConsistency("zgeev failed with info " + std::to_string(info));
  return w;
}

std::vector<Complex> dense_eigenvalues_refined(const CMatrix& A) {
  if (A.rows() != A.cols()) throw ContractViolation("eigenvalues need a square matrix");
  CMatrix a = A;
  const lapack_int n = static_cast<lapack_int>(a.rows());
  std::vector<Complex> w(static_cast<std::size_t>(n)), work(1);
  std::vector<double> rwork(static_cast<std::size_t>(2 * std::max<lapack_int>(n, 1)));
  CMatrix vl(n, n), vr(n, n);
  lapack_int lwork = -1, info = 0;
  LAPACK_zgeev("V", "V", &n, a.data(), &n, w.data(), vl.data(), &n, vr.data(), &n, work.data(), &lwork,
               rwork.data(), &info);
  lwork = static_cast<lapack_int>(work[0].real());
  work.resize(static_cast<std::size_t>(std::max<lapack_int>(lwork, 1)));
  LAPACK_zgeev("V", "V", &n, a.data(), &n, w.data(), vl.data(), &n, vr.data(), &n, work.data(), &lwork,
               rwork.data(), &info);
  if (info != 0) throw InternalConsistency("zgeev failed with info " + std::to_string(info));
  const CMatrix av = A * vr;
  for (lapack_int i = 0; i < n; ++i) {
    const Complex den = vl.col(i).dot(vr.col(i));
    if (std::abs(den) > 1e-8) w[static_cast<std::size_t>(i)] = vl.col(i).dot(av.col(i)) / den;
  }
  return w;
}

double weighted_opnorm(const RVector& w, const CMatrix& B) {
  const RVector s = w.cwiseSqrt();
  const CMatrix b = s.cast<Complex>().asDiagonal() * B * s.cwiseInverse().cast<Complex>().asDiagonal();
  Eigen::BDCSVD<CMatrix> svd(b);
  return svd.singularValues()(0);
}

double weighted_norm(const RVector& w, const CVector& v) { return std::sqrt((w.array() * v.cwiseAbs2().array()).sum()); }

CMatrix weighted_adjoint(const RVector& w, const CMatrix& B) {
  return w.cwiseInverse().cast<Complex>().asDiagonal() * B.adjoint() * w.cast<Complex>().asDiagonal();
}

double multiset_distance(std::vector<Complex> a, std::vector<Complex> b) {
  if (a.size() != b.size()) return INFINITY;
  double worst = 0.0;
  for (const auto& x : a) {
    auto it = std::min_element(b.begin(), b.end(),
                               [&](Complex p, Complex q) { return std::abs(p - x) < std::abs(q - x); });
    worst = std::max(worst, std::abs(*it - x));
    b.erase(it);
  }
  return worst;
}

double sector_angular_excess(const std::vector<Complex>& z, double alpha, double zero_floor) {
  double worst = 0.0;
  for (const auto& x : z)
    if (std::abs(x) > zero_floor) worst = std::max(worst, alpha - std::abs(std::arg(x)));
  return worst;
}

}  // namespace wick
