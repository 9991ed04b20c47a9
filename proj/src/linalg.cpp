#include "qnr/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "qnr/config.hpp"
#include "qnr/error.hpp"
#include "qnr/random.hpp"

namespace qnr {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotUnit: return "NotUnit";
    case ErrorKind::DimTooSmall: return "DimTooSmall";
    case ErrorKind::QOutOfRange: return "QOutOfRange";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::UnknownName: return "UnknownName";
    case ErrorKind::Unbounded: return "Unbounded";
    case ErrorKind::PredicateUnmet: return "PredicateUnmet";
    case ErrorKind::ArityMismatch: return "ArityMismatch";
    case ErrorKind::DivisionDomain: return "DivisionDomain";
    case ErrorKind::UnknownFigure: return "UnknownFigure";
    case ErrorKind::GenerationFailed: return "GenerationFailed";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

namespace {

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

void require_same_dim(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "matrix dimensions differ: " +
                                                  std::to_string(a.dim()) + " vs " +
                                                  std::to_string(b.dim()));
  }
}

// In-place cyclic Jacobi on a Hermitian matrix. Each rotation first removes the
// phase of the pivot with a diagonal unitary, then applies a real Givens rotation.
void jacobi(ComplexMatrix& m, ComplexMatrix* vectors) {
  const std::size_t n = m.dim();
  const double scale = m.frobenius_norm();
  if (scale == 0.0) return;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += std::norm(m(p, q));
    if (std::sqrt(off) <= 1e-16 * scale) break;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = m(p, q);
        const double r = std::abs(apq);
        if (r <= 1e-300) continue;
        const double app = m(p, p).real();
        const double aqq = m(q, q).real();
        if (r < 1e-18 * (std::abs(app) + std::abs(aqq))) {
          m(p, q) = m(q, p) = 0.0;
          continue;
        }
        const Complex e = apq / r;
        const Complex ec = std::conj(e);
        const double tau = (aqq - app) / (2.0 * r);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        for (std::size_t k = 0; k < n; ++k) {
          const Complex mkp = m(k, p);
          const Complex mkq = m(k, q);
          m(k, p) = c * mkp - s * ec * mkq;
          m(k, q) = s * mkp + c * ec * mkq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const Complex mpk = m(p, k);
          const Complex mqk = m(q, k);
          m(p, k) = c * mpk - s * e * mqk;
          m(q, k) = s * mpk + c * e * mqk;
        }
        m(p, q) = m(q, p) = 0.0;
        m(p, p) = m(p, p).real();
        m(q, q) = m(q, q).real();

        if (vectors != nullptr) {
          ComplexMatrix& v = *vectors;
          for (std::size_t k = 0; k < n; ++k) {
            const Complex vkp = v(k, p);
            const Complex vkq = v(k, q);
            v(k, p) = c * vkp - s * ec * vkq;
            v(k, q) = s * vkp + c * ec * vkq;
          }
        }
      }
    }
  }
}

ComplexMatrix symmetrized(const ComplexMatrix& a) {
  const std::size_t n = a.dim();
  ComplexMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) = a(i, i).real();
    for (std::size_t j = i + 1; j < n; ++j) {
      const Complex v = 0.5 * (a(i, j) + std::conj(a(j, i)));
      m(i, j) = v;
      m(j, i) = std::conj(v);
    }
  }
  return m;
}

void require_hermitian(const ComplexMatrix& a) {
  const double tol = kTol.hermitian * std::max(1.0, a.max_abs());
  if (!is_hermitian(a, tol)) {
    throw Error(ErrorKind::NotHermitian,
                "matrix is not Hermitian (max |A - A*| = " +
                    std::to_string(max_abs_diff(a, a.adjoint())) + ")");
  }
}

}  // namespace

ComplexVector::ComplexVector(std::vector<Complex> entries) : data_(std::move(entries)) {}

ComplexVector::ComplexVector(std::initializer_list<Complex> entries) : data_(entries) {}

double ComplexVector::norm() const {
  double sum = 0.0;
  for (const Complex& z : data_) sum += std::norm(z);
  return std::sqrt(sum);
}

ComplexVector ComplexVector::normalized() const {
  const double n = norm();
  if (n == 0.0) throw Error(ErrorKind::InvalidInput, "cannot normalize the zero vector");
  ComplexVector out(*this);
  for (Complex& z : out.data_) z /= n;
  return out;
}

Complex inner(const ComplexVector& u, const ComplexVector& v) {
  if (u.size() != v.size()) throw Error(ErrorKind::DimensionMismatch, "vector sizes differ");
  Complex sum = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) sum += u[i] * std::conj(v[i]);
  return sum;
}

ComplexMatrix::ComplexMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {}

ComplexMatrix::ComplexMatrix(std::size_t dim, std::vector<Complex> entries)
    : dim_(dim), data_(std::move(entries)) {
  if (dim_ == 0) throw Error(ErrorKind::InvalidInput, "matrix dimension must be positive");
  if (data_.size() != dim_ * dim_) {
    throw Error(ErrorKind::DimensionMismatch,
                "expected " + std::to_string(dim_ * dim_) + " entries, got " +
                    std::to_string(data_.size()));
  }
  if (!std::all_of(data_.begin(), data_.end(), finite)) {
    throw Error(ErrorKind::NonFinite, "matrix entries must be finite");
  }
}

ComplexMatrix ComplexMatrix::from_rows(
    std::initializer_list<std::initializer_list<Complex>> rows) {
  const std::size_t n = rows.size();
  std::vector<Complex> entries;
  entries.reserve(n * n);
  for (const auto& row : rows) {
    if (row.size() != n) throw Error(ErrorKind::DimensionMismatch, "matrix rows must be square");
    entries.insert(entries.end(), row.begin(), row.end());
  }
  return ComplexMatrix(n, std::move(entries));
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
  ComplexMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const Complex> values) {
  ComplexMatrix m(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) out(j, i) = std::conj((*this)(i, j));
  return out;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix out(dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) out(j, i) = (*this)(i, j);
  return out;
}

ComplexMatrix ComplexMatrix::conjugate() const {
  ComplexMatrix out(*this);
  for (Complex& z : out.data_) z = std::conj(z);
  return out;
}

Complex ComplexMatrix::trace() const {
  Complex sum = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) sum += (*this)(i, i);
  return sum;
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const Complex& z : data_) m = std::max(m, std::abs(z));
  return m;
}

double ComplexMatrix::frobenius_norm() const {
  double sum = 0.0;
  for (const Complex& z : data_) sum += std::norm(z);
  return std::sqrt(sum);
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  require_same_dim(*this, other);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  require_same_dim(*this, other);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex scale) {
  for (Complex& z : data_) z *= scale;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a, b);
  const std::size_t n = a.dim();
  ComplexMatrix out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const Complex aik = a(i, k);
      for (std::size_t j = 0; j < n; ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

ComplexVector operator*(const ComplexMatrix& a, const ComplexVector& x) {
  if (a.dim() != x.size()) throw Error(ErrorKind::DimensionMismatch, "matrix-vector size mismatch");
  const std::size_t n = a.dim();
  ComplexVector out(n);
  for (std::size_t i = 0; i < n; ++i) {
    Complex sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) sum += a(i, j) * x[j];
    out[i] = sum;
  }
  return out;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a, b);
  double m = 0.0;
  for (std::size_t i = 0; i < a.entries().size(); ++i)
    m = std::max(m, std::abs(a.entries()[i] - b.entries()[i]));
  return m;
}

bool is_hermitian(const ComplexMatrix& a, double tol) {
  const std::size_t n = a.dim();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      if (std::abs(a(i, j) - std::conj(a(j, i))) > tol) return false;
  return true;
}

bool is_normal(const ComplexMatrix& a, double tol) {
  const ComplexMatrix h = a.adjoint();
  return max_abs_diff(a * h, h * a) <= tol;
}

std::pair<ComplexMatrix, ComplexMatrix> hermitian_parts(const ComplexMatrix& a) {
  const std::size_t n = a.dim();
  ComplexMatrix re(n), im(n);
  const Complex half_over_i(0.0, -0.5);  // 1/(2i)
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const Complex aij = a(i, j);
      const Complex aji_conj = std::conj(a(j, i));
      re(i, j) = 0.5 * (aij + aji_conj);
      im(i, j) = half_over_i * (aij - aji_conj);
    }
  return {std::move(re), std::move(im)};
}

ComplexMatrix rotated_real_part(const ComplexMatrix& a, double theta) {
  const std::size_t n = a.dim();
  const Complex rot = std::polar(1.0, theta);
  ComplexMatrix out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out(i, i) = (rot * a(i, i)).real();
    for (std::size_t j = i + 1; j < n; ++j) {
      const Complex v = 0.5 * (rot * a(i, j) + std::conj(rot * a(j, i)));
      out(i, j) = v;
      out(j, i) = std::conj(v);
    }
  }
  return out;
}

HermitianEigen hermitian_eigen(const ComplexMatrix& a) {
  require_hermitian(a);
  const std::size_t n = a.dim();
  ComplexMatrix m = symmetrized(a);
  ComplexMatrix v = ComplexMatrix::identity(n);
  jacobi(m, &v);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return m(x, x).real() > m(y, y).real();
  });
  HermitianEigen out{std::vector<double>(n), ComplexMatrix(n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = m(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& a) {
  require_hermitian(a);
  ComplexMatrix m = symmetrized(a);
  jacobi(m, nullptr);
  std::vector<double> values(m.dim());
  for (std::size_t i = 0; i < m.dim(); ++i) values[i] = m(i, i).real();
  std::sort(values.begin(), values.end(), std::greater<>());
  return values;
}

double largest_hermitian_eigenvalue(const ComplexMatrix& a) {
  return hermitian_eigenvalues(a).front();
}

double spectral_norm(const ComplexMatrix& a) {
  return std::sqrt(std::max(0.0, largest_hermitian_eigenvalue(a.adjoint() * a)));
}

double classical_numerical_radius(const ComplexMatrix& a, int angles) {
  if (angles < 64) throw Error(ErrorKind::InvalidInput, "classical_numerical_radius needs angles >= 64");
  auto g = [&](double theta) { return largest_hermitian_eigenvalue(rotated_real_part(a, theta)); };

  const double step = 2.0 * std::numbers::pi / angles;
  double best = -std::numeric_limits<double>::infinity();
  double best_theta = 0.0;
  for (int k = 0; k < angles; ++k) {
    const double theta = k * step;
    const double v = g(theta);
    if (v > best) {
      best = v;
      best_theta = theta;
    }
  }

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = best_theta - step;
  double hi = best_theta + step;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = g(x1);
  double f2 = g(x2);
  for (int it = 0; it < 80 && hi - lo > 1e-13; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = g(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = g(x1);
    }
    best = std::max({best, f1, f2});
  }
  return std::max(best, 0.0);
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b, int sign) {
  require_same_dim(a, b);
  if (sign != 1 && sign != -1) throw Error(ErrorKind::InvalidInput, "commutator sign must be +1 or -1");
  ComplexMatrix ab = a * b;
  ComplexMatrix ba = b * a;
  ba *= static_cast<double>(sign);
  return ab + ba;
}

ComplexMatrix random_matrix(std::size_t dim, Seed seed) {
  if (dim == 0) throw Error(ErrorKind::InvalidInput, "matrix dimension must be positive");
  CounterRng rng(seed);
  std::vector<Complex> entries(dim * dim);
  for (Complex& z : entries) z = rng.complex_normal();
  return ComplexMatrix(dim, std::move(entries));
}

ComplexMatrix random_hermitian(std::size_t dim, Seed seed) {
  const ComplexMatrix g = random_matrix(dim, seed);
  return hermitian_parts(g).first;
}

ComplexMatrix random_unitary(std::size_t dim, Seed seed) {
  ComplexMatrix q = random_matrix(dim, seed);
  // Modified Gram-Schmidt on columns, applied twice.
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t k = 0; k < dim; ++k) {
      for (std::size_t j = 0; j < k; ++j) {
        Complex proj = 0.0;
        for (std::size_t i = 0; i < dim; ++i) proj += std::conj(q(i, j)) * q(i, k);
        for (std::size_t i = 0; i < dim; ++i) q(i, k) -= proj * q(i, j);
      }
      double norm = 0.0;
      for (std::size_t i = 0; i < dim; ++i) norm += std::norm(q(i, k));
      norm = std::sqrt(norm);
      for (std::size_t i = 0; i < dim; ++i) q(i, k) /= norm;
    }
  }
  return q;
}

}  // namespace qnr
