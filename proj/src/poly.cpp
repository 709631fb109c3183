#include "wick/poly.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace wick {

namespace {

// Largest dense key table we are willing to allocate.
constexpr std::int64_t kMaxDenseTable = std::int64_t{1} << 24;

void enumerate_degree(int nvars, int degree, int var, Exponent& cur, std::vector<Exponent>& out) {
  if (var == nvars - 1) {
    cur[static_cast<std::size_t>(var)] = static_cast<std::uint8_t>(degree);
    out.push_back(cur);
    cur[static_cast<std::size_t>(var)] = 0;
    return;
  }
  for (int k = degree; k >= 0; --k) {
    cur[static_cast<std::size_t>(var)] = static_cast<std::uint8_t>(k);
    enumerate_degree(nvars, degree - k, var + 1, cur, out);
  }
  cur[static_cast<std::size_t>(var)] = 0;
}

}  // namespace

MonomialBasis::MonomialBasis(int nvars, int max_degree) : nvars_(nvars), max_degree_(max_degree) {
  if (nvars < 1 || nvars > kMaxVars) throw ContractViolation("polynomial variable count out of range");
  if (max_degree < 0 || max_degree > 250) throw ContractViolation("polynomial degree out of range");
  offsets_.push_back(0);
  Exponent cur{};
  for (int d = 0; d <= max_degree; ++d) {
    enumerate_degree(nvars, d, 0, cur, exps_);
    offsets_.push_back(exps_.size());
  }
  degrees_.resize(exps_.size());
  keys_.resize(exps_.size());
  for (std::size_t i = 0; i < exps_.size(); ++i) {
    degrees_[i] = exponent_degree(exps_[i], nvars);
    keys_[i] = key_of(exps_[i]);
  }
  std::int64_t span = 1;
  for (int v = 0; v < nvars; ++v) {
    span *= (max_degree + 1);
    if (span > kMaxDenseTable) throw SizeLimitExceeded("monomial key table too large for this degree and variable count");
  }
  table_.assign(static_cast<std::size_t>(span), -1);
  for (std::size_t i = 0; i < exps_.size(); ++i) table_[static_cast<std::size_t>(keys_[i])] = static_cast<std::int64_t>(i);
}

std::shared_ptr<const MonomialBasis> MonomialBasis::get(int nvars, int max_degree) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const MonomialBasis>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{nvars, max_degree}];
  if (!slot) slot = std::make_shared<const MonomialBasis>(nvars, max_degree);
  return slot;
}

std::int64_t MonomialBasis::key_of(const Exponent& e) const {
  std::int64_t key = 0;
  std::int64_t stride = 1;
  for (int v = 0; v < nvars_; ++v) {
    key += e[static_cast<std::size_t>(v)] * stride;
    stride *= (max_degree_ + 1);
  }
  return key;
}

std::size_t MonomialBasis::index_of(const Exponent& e) const {
  if (exponent_degree(e, nvars_) > max_degree_) throw ContractViolation("monomial degree exceeds truncation");
  auto idx = index_of_key(key_of(e));
  if (idx < 0) throw InternalConsistency("monomial missing from basis");
  return static_cast<std::size_t>(idx);
}

double exponent_factorial(const Exponent& e, int nvars) {
  double f = 1.0;
  for (int v = 0; v < nvars; ++v)
    for (int k = 2; k <= e[static_cast<std::size_t>(v)]; ++k) f *= k;
  return f;
}

Exponent exponent_from_indices(std::span<const int> indices, int nvars) {
  Exponent e{};
  for (int i : indices) {
    if (i < 0 || i >= nvars) throw ContractViolation("tensor index out of range");
    ++e[static_cast<std::size_t>(i)];
  }
  return e;
}

int exponent_degree(const Exponent& e, int nvars) {
  int d = 0;
  for (int v = 0; v < nvars; ++v) d += e[static_cast<std::size_t>(v)];
  return d;
}

TaylorPoly::TaylorPoly(int nvars, int max_degree) : TaylorPoly(MonomialBasis::get(nvars, max_degree)) {}

TaylorPoly::TaylorPoly(std::shared_ptr<const MonomialBasis> basis)
    : basis_(std::move(basis)), coeffs_(basis_->size(), Complex(0.0)) {}

TaylorPoly TaylorPoly::constant(int nvars, int max_degree, Complex value) {
  TaylorPoly p(nvars, max_degree);
  p.coeffs_[0] = value;
  return p;
}

TaylorPoly TaylorPoly::variable(int nvars, int max_degree, int var) {
  TaylorPoly p(nvars, max_degree);
  if (max_degree >= 1) {
    Exponent e{};
    e[static_cast<std::size_t>(var)] = 1;
    p.set_coeff(e, 1.0);
  }
  return p;
}

Complex TaylorPoly::coeff(const Exponent& e) const {
  if (exponent_degree(e, nvars()) > max_degree()) return 0.0;
  return coeffs_[basis_->index_of(e)];
}

void TaylorPoly::set_coeff(const Exponent& e, Complex v) { coeffs_[basis_->index_of(e)] = v; }

static void check_same(const TaylorPoly& a, const TaylorPoly& b) {
  if (a.basis_ptr() != b.basis_ptr()) throw ContractViolation("polynomials live in different bases");
}

TaylorPoly& TaylorPoly::operator+=(const TaylorPoly& o) {
  check_same(*this, o);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  return *this;
}

TaylorPoly& TaylorPoly::operator-=(const TaylorPoly& o) {
  check_same(*this, o);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  return *this;
}

TaylorPoly& TaylorPoly::operator*=(Complex s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

TaylorPoly& TaylorPoly::operator+=(Complex s) {
  coeffs_[0] += s;
  return *this;
}

void TaylorPoly::accumulate_product_degree(const TaylorPoly& a, const TaylorPoly& b, int degree,
                                           TaylorPoly& out) {
  check_same(a, b);
  check_same(a, out);
  const auto& B = *a.basis_;
  for (int da = 0; da <= degree; ++da) {
    const int db = degree - da;
    for (std::size_t i = B.degree_begin(da); i < B.degree_end(da); ++i) {
      const Complex ca = a.coeffs_[i];
      if (ca == Complex(0.0)) continue;
      const auto ka = B.key(i);
      for (std::size_t j = B.degree_begin(db); j < B.degree_end(db); ++j) {
        const Complex cb = b.coeffs_[j];
        if (cb == Complex(0.0)) continue;
        out.coeffs_[static_cast<std::size_t>(B.index_of_key(ka + B.key(j)))] += ca * cb;
      }
    }
  }
}

TaylorPoly operator*(const TaylorPoly& a, const TaylorPoly& b) {
  check_same(a, b);
  TaylorPoly out(a.basis_);
  const auto& B = *a.basis_;
  const int K = B.max_degree();
  for (std::size_t i = 0; i < B.size(); ++i) {
    const Complex ca = a.coeffs_[i];
    if (ca == Complex(0.0)) continue;
    const auto ka = B.key(i);
    const std::size_t jend = B.degree_end(K - B.degree(i));
    for (std::size_t j = 0; j < jend; ++j) {
      const Complex cb = b.coeffs_[j];
      if (cb == Complex(0.0)) continue;
      out.coeffs_[static_cast<std::size_t>(B.index_of_key(ka + B.key(j)))] += ca * cb;
    }
  }
  return out;
}

TaylorPoly TaylorPoly::derivative(int var) const {
  TaylorPoly out(basis_);
  const auto& B = *basis_;
  const auto v = static_cast<std::size_t>(var);
  std::int64_t stride = 1;
  for (int k = 0; k < var; ++k) stride *= (B.max_degree() + 1);
  for (std::size_t i = 0; i < B.size(); ++i) {
    const int p = B.exponent(i)[v];
    if (p == 0 || coeffs_[i] == Complex(0.0)) continue;
    out.coeffs_[static_cast<std::size_t>(B.index_of_key(B.key(i) - stride))] += static_cast<double>(p) * coeffs_[i];
  }
  return out;
}

TaylorPoly TaylorPoly::homogeneous_part(int degree) const { return degree_range(degree, degree); }

TaylorPoly TaylorPoly::degree_range(int lo, int hi) const {
  TaylorPoly out(basis_);
  lo = std::max(lo, 0);
  hi = std::min(hi, max_degree());
  if (lo > hi) return out;
  for (std::size_t i = basis_->degree_begin(lo); i < basis_->degree_end(hi); ++i) out.coeffs_[i] = coeffs_[i];
  return out;
}

TaylorPoly TaylorPoly::with_max_degree(int max_degree) const {
  TaylorPoly out(nvars(), max_degree);
  const auto& B = *basis_;
  const int top = std::min(max_degree, this->max_degree());
  for (std::size_t i = 0; i < B.degree_end(top); ++i) out.set_coeff(B.exponent(i), coeffs_[i]);
  return out;
}

namespace {

template <class T>
Complex evaluate_impl(const MonomialBasis& B, std::span<const Complex> coeffs, std::span<const T> point) {
  const int n = B.nvars();
  const int K = B.max_degree();
  if (static_cast<int>(point.size()) != n) throw ContractViolation("evaluation point has wrong dimension");
  std::vector<std::vector<T>> pw(static_cast<std::size_t>(n), std::vector<T>(static_cast<std::size_t>(K + 1)));
  for (int v = 0; v < n; ++v) {
    pw[v][0] = T(1);
    for (int k = 1; k <= K; ++k) pw[v][k] = pw[v][k - 1] * point[v];
  }
  Complex sum = 0.0;
  for (std::size_t i = 0; i < B.size(); ++i) {
    if (coeffs[i] == Complex(0.0)) continue;
    Complex m = coeffs[i];
    const auto& e = B.exponent(i);
    for (int v = 0; v < n; ++v) m *= pw[v][e[static_cast<std::size_t>(v)]];
    sum += m;
  }
  return sum;
}

}  // namespace

Complex TaylorPoly::evaluate(std::span<const double> point) const {
  return evaluate_impl<double>(*basis_, coeffs_, point);
}

Complex TaylorPoly::evaluate(std::span<const Complex> point) const {
  return evaluate_impl<Complex>(*basis_, coeffs_, point);
}

TaylorPoly TaylorPoly::reciprocal() const {
  const Complex c0 = coeffs_[0];
  if (c0 == Complex(0.0)) throw ContractViolation("reciprocal of a polynomial with zero constant term");
  // r = 1/c0 * sum_k (-u)^k with u = p/c0 - 1, which has no constant term.
  TaylorPoly u = *this * (1.0 / c0);
  u.coeffs_[0] = 0.0;
  TaylorPoly r = TaylorPoly::constant(nvars(), max_degree(), 1.0);
  TaylorPoly term = r;
  for (int k = 1; k <= max_degree(); ++k) {
    term = term * u;
    term *= -1.0;
    r += term;
  }
  return r * (1.0 / c0);
}

TaylorPoly TaylorPoly::sqrt() const {
  const Complex c0 = coeffs_[0];
  if (c0 == Complex(0.0)) throw ContractViolation("square root of a polynomial with zero constant term");
  TaylorPoly u = *this * (1.0 / c0);
  u.coeffs_[0] = 0.0;
  // binomial series (1+u)^{1/2}
  TaylorPoly r = TaylorPoly::constant(nvars(), max_degree(), 1.0);
  TaylorPoly term = r;
  double binom = 1.0;
  for (int k = 1; k <= max_degree(); ++k) {
    binom *= (0.5 - (k - 1)) / k;
    term = term * u;
    r += term * Complex(binom);
  }
  return r * std::sqrt(c0);
}

double TaylorPoly::max_abs() const {
  double m = 0.0;
  for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

double TaylorPoly::max_abs_degree(int degree) const {
  double m = 0.0;
  for (std::size_t i = basis_->degree_begin(degree); i < basis_->degree_end(degree); ++i)
    m = std::max(m, std::abs(coeffs_[i]));
  return m;
}

TaylorPoly lift_to_sum(const TaylorPoly& p) {
  const int n = p.nvars();
  std::vector<std::vector<double>> map(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(2 * n), 0.0));
  for (int i = 0; i < n; ++i) {
    map[i][i] = 1.0;
    map[i][n + i] = 1.0;
  }
  return substitute_linear(p, 2 * n, map);
}

TaylorPoly substitute_linear(const TaylorPoly& p, int out_vars, const std::vector<std::vector<double>>& map) {
  const int n = p.nvars();
  const int K = p.max_degree();
  if (static_cast<int>(map.size()) != n) throw ContractViolation("linear map has wrong row count");
  std::vector<TaylorPoly> images;
  images.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    TaylorPoly img(out_vars, K);
    if (static_cast<int>(map[i].size()) != out_vars) throw ContractViolation("linear map has wrong column count");
    for (int j = 0; j < out_vars; ++j)
      if (map[i][j] != 0.0) img += TaylorPoly::variable(out_vars, K, j) * Complex(map[i][j]);
    images.push_back(std::move(img));
  }
  // powers[i][k] = images[i]^k
  std::vector<std::vector<TaylorPoly>> powers(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    powers[i].push_back(TaylorPoly::constant(out_vars, K, 1.0));
    for (int k = 1; k <= K; ++k) powers[i].push_back(powers[i].back() * images[i]);
  }
  TaylorPoly out(out_vars, K);
  const auto& B = p.basis();
  for (std::size_t idx = 0; idx < B.size(); ++idx) {
    if (p[idx] == Complex(0.0)) continue;
    const auto& e = B.exponent(idx);
    TaylorPoly m = TaylorPoly::constant(out_vars, K, p[idx]);
    for (int i = 0; i < n; ++i)
      if (e[static_cast<std::size_t>(i)] > 0) m = m * powers[i][e[static_cast<std::size_t>(i)]];
    out += m;
  }
  return out;
}

PolyMatrix poly_matmul(const PolyMatrix& a, const PolyMatrix& b) {
  const std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
  PolyMatrix out(n, std::vector<TaylorPoly>(m));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      TaylorPoly acc(a[i][0].basis_ptr());
      for (std::size_t l = 0; l < k; ++l) acc += a[i][l] * b[l][j];
      out[i][j] = std::move(acc);
    }
  return out;
}

PolyMatrix poly_inverse(const PolyMatrix& m) {
  const std::size_t n = m.size();
  if (n == 0) return {};
  const auto basis = m[0][0].basis_ptr();
  const int K = basis->max_degree();
  // Invert the constant part by Gauss-Jordan with partial pivoting.
  std::vector<std::vector<Complex>> a(n, std::vector<Complex>(2 * n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a[i][j] = m[i][j].constant_term();
    a[i][n + i] = 1.0;
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    if (std::abs(a[piv][c]) < 1e-300) throw InvalidGeometry("singular matrix in polynomial inverse");
    std::swap(a[c], a[piv]);
    const Complex inv = 1.0 / a[c][c];
    for (auto& x : a[c]) x *= inv;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      const Complex f = a[r][c];
      if (f == Complex(0.0)) continue;
      for (std::size_t j = 0; j < 2 * n; ++j) a[r][j] -= f * a[c][j];
    }
  }
  PolyMatrix c0inv(n, std::vector<TaylorPoly>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      c0inv[i][j] = TaylorPoly(basis);
      c0inv[i][j] += a[i][n + j];
    }
  // m = C0 (I + U) with U = C0^{-1}(m - C0) nilpotent in degree; Neumann series.
  PolyMatrix u = poly_matmul(c0inv, m);
  for (std::size_t i = 0; i < n; ++i) u[i][i] += Complex(-1.0);
  PolyMatrix sum(n, std::vector<TaylorPoly>(n, TaylorPoly(basis)));
  PolyMatrix term(n, std::vector<TaylorPoly>(n, TaylorPoly(basis)));
  for (std::size_t i = 0; i < n; ++i) {
    sum[i][i] += Complex(1.0);
    term[i][i] += Complex(1.0);
  }
  for (int k = 1; k <= K; ++k) {
    term = poly_matmul(term, u);
    for (auto& row : term)
      for (auto& t : row) t *= -1.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) sum[i][j] += term[i][j];
  }
  return poly_matmul(sum, c0inv);
}

}  // namespace wick
