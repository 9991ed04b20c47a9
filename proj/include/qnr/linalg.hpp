#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

namespace qnr {

using Complex = std::complex<double>;

struct Seed {
  std::uint64_t value = 0;
  friend bool operator==(Seed, Seed) = default;
};

class ComplexVector {
 public:
  ComplexVector() = default;
  explicit ComplexVector(std::size_t dim) : data_(dim) {}
  explicit ComplexVector(std::vector<Complex> entries);
  ComplexVector(std::initializer_list<Complex> entries);

  std::size_t size() const noexcept { return data_.size(); }
  Complex& operator[](std::size_t i) { return data_[i]; }
  const Complex& operator[](std::size_t i) const { return data_[i]; }
  std::span<Complex> entries() noexcept { return data_; }
  std::span<const Complex> entries() const noexcept { return data_; }
  auto begin() const noexcept { return data_.begin(); }
  auto end() const noexcept { return data_.end(); }

  double norm() const;
  ComplexVector normalized() const;

 private:
  std::vector<Complex> data_;
};

// <u, v> = sum_i u_i conj(v_i); linear in the first slot.
Complex inner(const ComplexVector& u, const ComplexVector& v);

// Dense square matrix, row-major.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  explicit ComplexMatrix(std::size_t dim);
  ComplexMatrix(std::size_t dim, std::vector<Complex> entries);

  static ComplexMatrix from_rows(std::initializer_list<std::initializer_list<Complex>> rows);
  static ComplexMatrix identity(std::size_t dim);
  static ComplexMatrix diagonal(std::span<const Complex> values);

  std::size_t dim() const noexcept { return dim_; }
  Complex& operator()(std::size_t i, std::size_t j) { return data_[i * dim_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * dim_ + j]; }
  std::span<const Complex> entries() const noexcept { return data_; }

  ComplexMatrix adjoint() const;
  ComplexMatrix transpose() const;
  ComplexMatrix conjugate() const;
  Complex trace() const;
  double max_abs() const;
  double frobenius_norm() const;

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(Complex scale);

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
  friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
  friend ComplexVector operator*(const ComplexMatrix& a, const ComplexVector& x);
  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<Complex> data_;
};

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);
bool is_hermitian(const ComplexMatrix& a, double tol);
bool is_normal(const ComplexMatrix& a, double tol);

// (Re(A), Im(A)) with Re(A) = (A + A*)/2 and Im(A) = (A - A*)/(2i).
std::pair<ComplexMatrix, ComplexMatrix> hermitian_parts(const ComplexMatrix& a);

// Re(e^{i theta} A) without forming the intermediate product.
ComplexMatrix rotated_real_part(const ComplexMatrix& a, double theta);

struct HermitianEigen {
  std::vector<double> values;  // descending
  ComplexMatrix vectors;       // column k pairs with values[k]
};

// Cyclic Jacobi. Throws NotHermitian when max |A - A*| exceeds the tolerance.
HermitianEigen hermitian_eigen(const ComplexMatrix& a);
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& a);
double largest_hermitian_eigenvalue(const ComplexMatrix& a);

double spectral_norm(const ComplexMatrix& a);

// w(A) = max_theta lambda_max(Re(e^{i theta} A)); grid scan plus golden-section refinement.
double classical_numerical_radius(const ComplexMatrix& a, int angles = 256);

// AB + sign * BA.
ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b, int sign);

ComplexMatrix random_matrix(std::size_t dim, Seed seed);
ComplexMatrix random_hermitian(std::size_t dim, Seed seed);
ComplexMatrix random_unitary(std::size_t dim, Seed seed);

}  // namespace qnr
