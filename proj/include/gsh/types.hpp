#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace gsh {

using cplx = std::complex<double>;

inline constexpr int kMaxDim = 3;

/// A d-dimensional multi-index, d in {1,2,3}.
class MultiIndex {
 public:
  MultiIndex() : dim_(1), v_{0, 0, 0} {}
  explicit MultiIndex(int n0) : dim_(1), v_{n0, 0, 0} { check(); }
  MultiIndex(int n0, int n1) : dim_(2), v_{n0, n1, 0} { check(); }
  MultiIndex(int n0, int n1, int n2) : dim_(3), v_{n0, n1, n2} { check(); }
  explicit MultiIndex(std::span<const int> v) : dim_(static_cast<int>(v.size())), v_{0, 0, 0} {
    if (dim_ < 1 || dim_ > kMaxDim) throw std::invalid_argument("MultiIndex: dim must be 1..3");
    for (int k = 0; k < dim_; ++k) v_[k] = v[k];
    check();
  }

  int dim() const { return dim_; }
  int operator[](int k) const { return v_[k]; }
  int& operator[](int k) { return v_[k]; }

  /// Total degree n_1 + ... + n_d (the eigenvalue of the total number operator).
  long total() const {
    long s = 0;
    for (int k = 0; k < dim_; ++k) s += v_[k];
    return s;
  }

  bool operator==(const MultiIndex& o) const {
    if (dim_ != o.dim_) return false;
    for (int k = 0; k < dim_; ++k)
      if (v_[k] != o.v_[k]) return false;
    return true;
  }

 private:
  void check() const {
    for (int k = 0; k < dim_; ++k)
      if (v_[k] < 0) throw std::invalid_argument("MultiIndex: entries must be nonnegative");
  }
  int dim_;
  std::array<int, kMaxDim> v_;
};

/// A box of multi-indices {0..N_1-1} x ... x {0..N_d-1}, enumerated
/// lexicographically (first axis most significant).
class Box {
 public:
  Box() : dim_(1), n_{1, 1, 1} {}
  explicit Box(std::span<const int> orders) : dim_(static_cast<int>(orders.size())), n_{1, 1, 1} {
    if (dim_ < 1 || dim_ > kMaxDim) throw std::invalid_argument("Box: dim must be 1..3");
    for (int k = 0; k < dim_; ++k) {
      if (orders[k] < 1) throw std::invalid_argument("Box: orders must be >= 1");
      n_[k] = orders[k];
    }
  }
  explicit Box(int n0) : Box(std::array<int, 1>{n0}) {}
  Box(int n0, int n1) : Box(std::array<int, 2>{n0, n1}) {}
  Box(int n0, int n1, int n2) : Box(std::array<int, 3>{n0, n1, n2}) {}

  int dim() const { return dim_; }
  int order(int axis) const { return n_[axis]; }
  int max_order() const {
    int m = 0;
    for (int k = 0; k < dim_; ++k) m = std::max(m, n_[k] - 1);
    return m;
  }
  std::size_t size() const {
    std::size_t s = 1;
    for (int k = 0; k < dim_; ++k) s *= static_cast<std::size_t>(n_[k]);
    return s;
  }

  bool contains(const MultiIndex& n) const {
    if (n.dim() != dim_) return false;
    for (int k = 0; k < dim_; ++k)
      if (n[k] >= n_[k]) return false;
    return true;
  }

  std::size_t flat(const MultiIndex& n) const {
    if (!contains(n)) throw std::out_of_range("Box::flat: index outside box");
    std::size_t f = 0;
    for (int k = 0; k < dim_; ++k) f = f * n_[k] + n[k];
    return f;
  }

  MultiIndex unflat(std::size_t f) const {
    MultiIndex m;
    std::array<int, kMaxDim> v{0, 0, 0};
    for (int k = dim_ - 1; k >= 0; --k) {
      v[k] = static_cast<int>(f % n_[k]);
      f /= n_[k];
    }
    return MultiIndex(std::span<const int>(v.data(), dim_));
  }

  /// Box over the concatenated axes of *this and other.
  Box concat(const Box& other) const {
    if (dim_ + other.dim_ > kMaxDim) throw std::invalid_argument("Box::concat: dim > 3");
    std::array<int, kMaxDim> v{1, 1, 1};
    for (int k = 0; k < dim_; ++k) v[k] = n_[k];
    for (int k = 0; k < other.dim_; ++k) v[dim_ + k] = other.n_[k];
    return Box(std::span<const int>(v.data(), dim_ + other.dim_));
  }

  bool operator==(const Box& o) const {
    if (dim_ != o.dim_) return false;
    for (int k = 0; k < dim_; ++k)
      if (n_[k] != o.n_[k]) return false;
    return true;
  }

 private:
  int dim_;
  std::array<int, kMaxDim> n_;
};

enum class FieldKind { test, dual };

/// Dense complex coefficient array over a box of multi-indices; the Hermite
/// representation of a test function (falloff) or dual element (growth).
struct CoefficientField {
  Box box;
  FieldKind kind = FieldKind::test;
  std::vector<cplx> data;

  CoefficientField() = default;
  CoefficientField(Box b, FieldKind k) : box(b), kind(k), data(b.size(), cplx{0.0, 0.0}) {}

  cplx& at(const MultiIndex& n) { return data[box.flat(n)]; }
  const cplx& at(const MultiIndex& n) const { return data[box.flat(n)]; }

  /// Unit coefficient field e_n.
  static CoefficientField unit(Box b, const MultiIndex& n, FieldKind k = FieldKind::test) {
    CoefficientField f(b, k);
    f.at(n) = cplx{1.0, 0.0};
    return f;
  }

  void require_finite() const {
    for (const auto& z : data)
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw std::domain_error("CoefficientField: non-finite entry");
  }
};

/// Complex samples of a function on a tensor grid.
struct SampledFunction {
  int dim = 1;
  std::array<std::vector<double>, kMaxDim> grid;
  std::vector<cplx> values;  // row-major over the tensor grid

  std::size_t grid_size() const {
    std::size_t s = 1;
    for (int k = 0; k < dim; ++k) s *= grid[k].size();
    return s;
  }
  void validate() const {
    if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("SampledFunction: dim must be 1..3");
    for (int k = 0; k < dim; ++k) {
      if (grid[k].empty()) throw std::invalid_argument("SampledFunction: empty grid axis");
      for (std::size_t i = 1; i < grid[k].size(); ++i)
        if (!(grid[k][i] > grid[k][i - 1]))
          throw std::invalid_argument("SampledFunction: grid not strictly increasing");
    }
    if (values.size() != grid_size())
      throw std::invalid_argument("SampledFunction: value shape does not match grid");
  }
};

}  // namespace gsh
