#include "wick/lattice.hpp"

#include <cmath>
#include <cstdio>
#include <random>

namespace wick {

TorusGrid::TorusGrid(std::vector<int> s, std::vector<double> p) : sizes(std::move(s)), periods(std::move(p)) {
  if (sizes.size() != periods.size() || sizes.empty()) throw ContractViolation("grid sizes and periods disagree");
  for (int n : sizes)
    if (n < 3) throw ContractViolation("grid needs at least 3 nodes per direction");
}

double TorusGrid::cell_volume() const {
  double v = 1.0;
  for (int mu = 0; mu < dim(); ++mu) v *= spacing(mu);
  return v;
}

int TorusGrid::total() const {
  int n = 1;
  for (int s : sizes) n *= s;
  return n;
}

// Last coordinate fastest.
int TorusGrid::index(std::span<const int> m) const {
  int i = 0;
  for (int mu = 0; mu < dim(); ++mu) {
    const int n = sizes[mu];
    i = i * n + ((m[mu] % n) + n) % n;
  }
  return i;
}

std::vector<int> TorusGrid::multi(int i) const {
  std::vector<int> m(sizes.size());
  for (int mu = dim() - 1; mu >= 0; --mu) {
    m[mu] = i % sizes[mu];
    i /= sizes[mu];
  }
  return m;
}

std::vector<double> TorusGrid::coords(int i) const {
  const auto m = multi(i);
  std::vector<double> y(m.size());
  for (int mu = 0; mu < dim(); ++mu) y[mu] = m[mu] * spacing(mu);
  return y;
}

int TorusGrid::shifted(int i, int mu, int step) const {
  auto m = multi(i);
  m[mu] += step;
  return index(m);
}

namespace {

struct Row {
  std::vector<std::pair<int, double>> e;
  void add(int j, double v) { e.emplace_back(j, v); }
};

void push_square(std::vector<Eigen::Triplet<double>>& t, double c, const Row& r) {
  for (const auto& [p, a] : r.e)
    for (const auto& [q, b] : r.e) t.emplace_back(p, q, c * a * b);
}

// Average over the edge endpoints of the centred difference along b.
void add_transverse(Row& r, const TorusGrid& g, int i0, int i1, int b, double coef) {
  const double k = coef / (4.0 * g.spacing(b));
  for (int i : {i0, i1}) {
    r.add(g.shifted(i, b, +1), k);
    r.add(g.shifted(i, b, -1), -k);
  }
}

double density(const AdmSample& s) { return s.lapse * std::sqrt(s.ghat.determinant()); }

}  // namespace

LatticeForms assemble_forms(const TorusGrid& grid, const AdmField& adm) {
  if (grid.dim() != adm.dim()) throw ContractViolation("grid dimension differs from the field");
  const int D = grid.dim(), d = D - 1, M = grid.total();
  LatticeForms f;
  f.grid = grid;
  const auto kmax = adm.max_wavenumbers();
  for (int mu = 0; mu < D; ++mu)
    if (grid.sizes[mu] < 4 * kmax[mu]) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "under-resolved: direction %d has %d nodes for wavenumber %d", mu, grid.sizes[mu],
                    kmax[mu]);
      f.warnings.emplace_back(buf);
    }
  const double vol = grid.cell_volume();
  f.weights.resize(M);
  f.wv.resize(M);
  std::vector<Eigen::Triplet<double>> tp, tq;
  for (int i = 0; i < M; ++i) {
    const auto y = grid.coords(i);
    const AdmSample s = sample_adm(adm, y);
    if (!(s.lapse > 0.0)) throw InvalidGeometry("lapse not positive on the grid");
    f.weights[i] = density(s) * vol;
    f.wv[i] = f.weights[i] * s.potential;
    for (int k = 0; k < D; ++k) {
      auto ym = y;
      ym[k] += 0.5 * grid.spacing(k);
      const AdmSample e = sample_adm(adm, ym);
      const double rho = density(e);
      const int j = grid.shifted(i, k, +1);
      Row r;
      r.add(j, 1.0 / grid.spacing(k));
      r.add(i, -1.0 / grid.spacing(k));
      if (k == 0) {
        for (int a = 0; a < d; ++a) add_transverse(r, grid, i, j, a + 1, -e.shift[a]);
        push_square(tp, rho / (e.lapse * e.lapse) * vol, r);
      } else {
        // LDL^T of rho ghat^{-1}; edge direction a takes pivot a and the
        // columns b > a.
        const int a = k - 1;
        const RMatrix m = rho * e.ghat.inverse();
        RMatrix L = RMatrix::Identity(d, d);
        RVector piv(d);
        for (int c = 0; c < d; ++c) {
          double dc = m(c, c);
          for (int q = 0; q < c; ++q) dc -= L(c, q) * L(c, q) * piv[q];
          piv[c] = dc;
          for (int r2 = c + 1; r2 < d; ++r2) {
            double v = m(r2, c);
            for (int q = 0; q < c; ++q) v -= L(r2, q) * L(c, q) * piv[q];
            L(r2, c) = v / dc;
          }
        }
        if (!(piv[a] > 0.0)) throw InvalidGeometry("spatial metric not positive definite on the grid");
        for (int b = a + 1; b < d; ++b) add_transverse(r, grid, i, j, b + 1, L(b, a));
        push_square(tq, piv[a] * vol, r);
      }
    }
  }
  f.P.resize(M, M);
  f.Q.resize(M, M);
  f.P.setFromTriplets(tp.begin(), tp.end());
  f.Q.setFromTriplets(tq.begin(), tq.end());
  f.P.prune(0.0);
  f.Q.prune(0.0);
  return f;
}

LatticeOperator assemble_delta_theta(const LatticeForms& f, std::optional<double> theta) {
  const int M = f.grid.total();
  Complex cp, cq;
  if (theta) {
    if (!(*theta > 0.0 && *theta <= kPi)) throw ContractViolation("theta must lie in (0, pi]");
    cp = kI * std::exp(Complex(0.0, *theta));
    cq = -kI * std::exp(Complex(0.0, -*theta));
  } else {
    cp = -1.0;
    cq = 1.0;
  }
  SpMatR wv(M, M);
  std::vector<Eigen::Triplet<double>> t;
  for (int i = 0; i < M; ++i) t.emplace_back(i, i, f.wv[i]);
  wv.setFromTriplets(t.begin(), t.end());
  const SpMatR q = f.Q + wv;
  SpMatC wa = f.P.cast<Complex>() * cp + q.cast<Complex>() * cq;
  LatticeOperator op;
  op.grid = f.grid;
  op.weights = f.weights;
  op.theta = theta;
  op.warnings = f.warnings;
  op.matrix = f.weights.cwiseInverse().cast<Complex>().asDiagonal() * wa;
  op.matrix.prune(Complex(0.0));
  op.matrix.makeCompressed();
  return op;
}

LatticeOperator assemble_delta_theta(const TorusGrid& grid, const AdmField& adm, std::optional<double> theta) {
  return assemble_delta_theta(assemble_forms(grid, adm), theta);
}

void apply_serial(const SpMatC& A, const CVector& x, CVector& y) {
  y.resize(A.rows());
  for (Eigen::Index r = 0; r < A.outerSize(); ++r) {
    Complex s = 0.0;
    for (SpMatC::InnerIterator it(A, r); it; ++it) s += it.value() * x[it.index()];
    y[r] = s;
  }
}

void apply(const SpMatC& A, const CVector& x, CVector& y) {
  y.resize(A.rows());
  const Eigen::Index n = A.outerSize();
#pragma omp parallel for schedule(static)
  for (Eigen::Index r = 0; r < n; ++r) {
    Complex s = 0.0;
    for (SpMatC::InnerIterator it(A, r); it; ++it) s += it.value() * x[it.index()];
    y[r] = s;
  }
}

Complex weighted_inner(const RVector& w, const CVector& u, const CVector& v) {
  Complex s = 0.0;
  for (Eigen::Index i = 0; i < w.size(); ++i) s += w[i] * std::conj(u[i]) * v[i];
  return s;
}

namespace {

SpMatC weighted(const LatticeOperator& a) { return a.weights.cast<Complex>().asDiagonal() * a.matrix; }

double max_abs(const SpMatC& m) {
  double s = 0.0;
  for (Eigen::Index r = 0; r < m.outerSize(); ++r)
    for (SpMatC::InnerIterator it(m, r); it; ++it) s = std::max(s, std::abs(it.value()));
  return s;
}

}  // namespace

double weighted_adjoint_deviation(const LatticeOperator& a, const LatticeOperator& b) {
  const SpMatC wa = weighted(a);
  const SpMatC wbh = SpMatC(weighted(b).adjoint());
  return max_abs(wa - wbh) / std::max(1e-300, max_abs(wa));
}

double weighted_hermitian_deviation(const LatticeOperator& a) { return weighted_adjoint_deviation(a, a); }

double distance_to_complement_sector(Complex z, double alpha) {
  const double r = std::abs(z);
  if (r == 0.0) return 0.0;
  const double phi = std::abs(std::arg(z));
  if (phi >= alpha) return 0.0;
  const double gap = alpha - phi;
  return gap >= kPi / 2 ? r : r * std::sin(gap);
}

NumericalRangeReport numerical_range_probe(const LatticeOperator& op, int samples, unsigned seed,
                                           const std::vector<CVector>& extra, double tol) {
  NumericalRangeReport rep;
  rep.alpha = op.lorentzian() ? kPi / 2 : kPi / 2 + theta_tilde(*op.theta);
  const int M = op.size();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  std::vector<CVector> vecs = extra;
  for (int s = 0; s < samples; ++s) {
    CVector v(M);
    for (int i = 0; i < M; ++i) v[i] = Complex(nd(rng), nd(rng));
    vecs.push_back(std::move(v));
  }
  CVector av;
  for (const auto& v : vecs) {
    apply(op.matrix, v, av);
    const Complex q = weighted_inner(op.weights, v, av) / weighted_inner(op.weights, v, v).real();
    rep.quotients.push_back(q);
    const double dist = distance_to_complement_sector(q, rep.alpha);
    rep.max_distance = std::max(rep.max_distance, dist);
    if (std::abs(q) > 0.0) rep.max_relative = std::max(rep.max_relative, dist / std::abs(q));
  }
  rep.pass = rep.max_relative <= tol;
  return rep;
}

void export_triplets(const LatticeOperator& op, std::ostream& os) {
  char buf[128];
  for (Eigen::Index r = 0; r < op.matrix.outerSize(); ++r)
    for (SpMatC::InnerIterator it(op.matrix, r); it; ++it) {
      std::snprintf(buf, sizeof buf, "%ld %ld %.17g %.17g\n", static_cast<long>(r), static_cast<long>(it.index()),
                    it.value().real(), it.value().imag());
      os << buf;
    }
  for (Eigen::Index i = 0; i < op.weights.size(); ++i) {
    std::snprintf(buf, sizeof buf, "w %ld %.17g\n", static_cast<long>(i), op.weights[i]);
    os << buf;
  }
}

CMatrix to_dense(const LatticeOperator& op) { return CMatrix(op.matrix); }

Complex flat_symbol(const TorusGrid& g, std::span<const int> k, double V, std::optional<double> theta) {
  auto sym = [&](int mu) {
    return 4 * std::pow(std::sin(kPi * k[mu] / g.sizes[mu]), 2) / std::pow(g.spacing(mu), 2);
  };
  double sx = V;
  for (int mu = 1; mu < g.dim(); ++mu) sx += sym(mu);
  if (!theta) return sx - sym(0);
  return kI * std::exp(Complex(0, *theta)) * sym(0) - kI * std::exp(Complex(0, -*theta)) * sx;
}

std::vector<Complex> flat_spectrum(const TorusGrid& g, double V, std::optional<double> theta) {
  std::vector<Complex> out;
  for (int i = 0; i < g.total(); ++i) out.push_back(flat_symbol(g, g.multi(i), V, theta));
  return out;
}

CVector fourier_mode(const TorusGrid& g, std::span<const int> k) {
  CVector v(g.total());
  for (int i = 0; i < g.total(); ++i) {
    const auto m = g.multi(i);
    double ph = 0.0;
    for (int mu = 0; mu < g.dim(); ++mu) ph += double(k[mu]) * m[mu] / g.sizes[mu];
    v[i] = std::exp(Complex(0, 2 * kPi * ph));
  }
  return v;
}

}  // namespace wick
