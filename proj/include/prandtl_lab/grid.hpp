#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace prandtl_lab {

// Scalar samples on a tensor grid. The first index runs along the periodic
// direction (x or xi), the second along the bounded direction (y or eta);
// storage is contiguous in the second index so each column is a span.
class Field {
 public:
  Field() = default;
  Field(std::size_t n_periodic, std::size_t n_normal, std::string name = {},
        double fill = 0.0);

  std::size_t n_periodic() const noexcept { return n_periodic_; }
  std::size_t n_normal() const noexcept { return n_normal_; }
  std::size_t size() const noexcept { return values_.size(); }

  double& operator()(std::size_t i, std::size_t j) noexcept {
    return values_[i * n_normal_ + j];
  }
  double operator()(std::size_t i, std::size_t j) const noexcept {
    return values_[i * n_normal_ + j];
  }

  std::span<double> column(std::size_t i) noexcept {
    return {values_.data() + i * n_normal_, n_normal_};
  }
  std::span<const double> column(std::size_t i) const noexcept {
    return {values_.data() + i * n_normal_, n_normal_};
  }

  std::vector<double>& values() noexcept { return values_; }
  const std::vector<double>& values() const noexcept { return values_; }

  const std::string& name() const noexcept { return name_; }
  Field& rename(std::string name) {
    name_ = std::move(name);
    return *this;
  }

  bool same_shape(const Field& other) const noexcept {
    return n_periodic_ == other.n_periodic_ && n_normal_ == other.n_normal_;
  }
  bool all_finite() const noexcept;
  double max_abs() const noexcept;

  Field& operator+=(const Field& rhs);
  Field& operator-=(const Field& rhs);
  Field& operator*=(double s);

 private:
  std::size_t n_periodic_ = 0;
  std::size_t n_normal_ = 0;
  std::vector<double> values_;
  std::string name_;
};

Field operator+(Field lhs, const Field& rhs);
Field operator-(Field lhs, const Field& rhs);
Field operator*(Field lhs, double s);
Field operator*(double s, Field rhs);
// Pointwise product and quotient.
Field hadamard(const Field& a, const Field& b);
Field pointwise_divide(const Field& a, const Field& b);

// Uniform periodic direction of length `length` sampled at n points.
struct PeriodicAxis {
  double length = 0.0;
  std::size_t n = 0;

  double spacing() const noexcept { return length / static_cast<double>(n); }
  double node(std::size_t i) const noexcept { return spacing() * static_cast<double>(i); }
};

// Bounded direction with arbitrary strictly increasing nodes. Finite
// difference weights are precomputed: 3-point stencils at interior nodes,
// one-sided second-order stencils at both ends.
class NormalAxis {
 public:
  NormalAxis() = default;
  explicit NormalAxis(std::vector<double> nodes);

  static NormalAxis uniform(double lo, double hi, std::size_t intervals);

  std::size_t size() const noexcept { return nodes_.size(); }
  std::size_t intervals() const noexcept { return nodes_.size() - 1; }
  const std::vector<double>& nodes() const noexcept { return nodes_; }
  double node(std::size_t j) const noexcept { return nodes_[j]; }
  double front() const noexcept { return nodes_.front(); }
  double back() const noexcept { return nodes_.back(); }
  bool is_uniform() const noexcept { return uniform_; }

  struct Stencil {
    std::size_t start = 0;
    std::array<double, 4> w{};
    std::size_t len = 0;
  };
  const Stencil& first(std::size_t j) const { return d1_[j]; }
  const Stencil& second(std::size_t j) const { return d2_[j]; }

 private:
  std::vector<double> nodes_;
  std::vector<Stencil> d1_;
  std::vector<Stencil> d2_;
  bool uniform_ = false;
};

// Discrete half-plane: periodic x of length Lx, y in [0, Ymax].
struct Grid2D {
  PeriodicAxis x;
  NormalAxis y;

  static Grid2D uniform(double Lx, std::size_t Nx, double Ymax, std::size_t Ny);
  static Grid2D with_nodes(double Lx, std::size_t Nx, std::vector<double> y_nodes);

  double Lx() const noexcept { return x.length; }
  std::size_t Nx() const noexcept { return x.n; }
  double Ymax() const noexcept { return y.back(); }
  std::size_t Ny() const noexcept { return y.intervals(); }

  Field make_field(std::string name = {}, double fill = 0.0) const {
    return Field(x.n, y.size(), std::move(name), fill);
  }
  bool matches(const Field& f) const noexcept {
    return f.n_periodic() == x.n && f.n_normal() == y.size();
  }
};

// Crocco rectangle: periodic xi of length Lxi, eta uniform on [0, 1].
struct CroccoGrid {
  PeriodicAxis xi;
  NormalAxis eta;

  static CroccoGrid uniform(double Lxi, std::size_t Nxi, std::size_t Neta);

  std::size_t Nxi() const noexcept { return xi.n; }
  std::size_t Neta() const noexcept { return eta.intervals(); }
  double deta() const noexcept { return 1.0 / static_cast<double>(Neta()); }

  Field make_field(std::string name = {}, double fill = 0.0) const {
    return Field(xi.n, eta.size(), std::move(name), fill);
  }
  bool matches(const Field& f) const noexcept {
    return f.n_periodic() == xi.n && f.n_normal() == eta.size();
  }
};

bool is_power_of_two(std::size_t n) noexcept;

// Finite-difference weights for the m-th derivative at x0 on the given nodes
// (Fornberg's recursion).
std::vector<double> fd_weights(double x0, std::span<const double> x, int m);

// Spectral derivative of the given order along the periodic direction. The
// Nyquist mode is dropped for odd orders.
Field periodic_derivative(const PeriodicAxis& axis, const Field& f, int order);

// Finite-difference derivative (order 1 or 2) along the bounded direction.
Field normal_derivative(const NormalAxis& axis, const Field& f, int order);

// Composite trapezoid antiderivative along the bounded direction, zero at the
// first node.
Field cumulative_integral(const NormalAxis& axis, const Field& f);

inline Field d_x(const Grid2D& g, const Field& f) { return periodic_derivative(g.x, f, 1); }
inline Field d_xx(const Grid2D& g, const Field& f) { return periodic_derivative(g.x, f, 2); }
inline Field d_y(const Grid2D& g, const Field& f) { return normal_derivative(g.y, f, 1); }
inline Field d_yy(const Grid2D& g, const Field& f) { return normal_derivative(g.y, f, 2); }
inline Field cumulative_integral_y(const Grid2D& g, const Field& f) {
  return cumulative_integral(g.y, f);
}

inline Field d_xi(const CroccoGrid& g, const Field& f) { return periodic_derivative(g.xi, f, 1); }
inline Field d_eta(const CroccoGrid& g, const Field& f) { return normal_derivative(g.eta, f, 1); }
inline Field d_etaeta(const CroccoGrid& g, const Field& f) {
  return normal_derivative(g.eta, f, 2);
}

// Same finite-difference operators on a single column.
void normal_derivative_column(const NormalAxis& axis, std::span<const double> f,
                              std::span<double> out, int order);

// Thomas algorithm for a tridiagonal system; sub[0] and sup[n-1] are unused.
// Throws std::runtime_error on a zero pivot.
void solve_tridiagonal(std::span<const double> sub, std::span<const double> diag,
                       std::span<const double> sup, std::span<double> rhs);

}  // namespace prandtl_lab
