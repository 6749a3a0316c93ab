#include "prandtl_lab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "prandtl_lab/parallel.hpp"
#include "prandtl_lab/spectral.hpp"

namespace prandtl_lab {

Field::Field(std::size_t n_periodic, std::size_t n_normal, std::string name, double fill)
    : n_periodic_(n_periodic),
      n_normal_(n_normal),
      values_(n_periodic * n_normal, fill),
      name_(std::move(name)) {}

bool Field::all_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

double Field::max_abs() const noexcept {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

Field& Field::operator+=(const Field& rhs) {
  if (!same_shape(rhs)) throw std::invalid_argument("field shape mismatch");
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += rhs.values_[k];
  return *this;
}

Field& Field::operator-=(const Field& rhs) {
  if (!same_shape(rhs)) throw std::invalid_argument("field shape mismatch");
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= rhs.values_[k];
  return *this;
}

Field& Field::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

Field operator+(Field lhs, const Field& rhs) { return lhs += rhs; }
Field operator-(Field lhs, const Field& rhs) { return lhs -= rhs; }
Field operator*(Field lhs, double s) { return lhs *= s; }
Field operator*(double s, Field rhs) { return rhs *= s; }

Field hadamard(const Field& a, const Field& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("field shape mismatch");
  Field out = a;
  for (std::size_t k = 0; k < out.size(); ++k) out.values()[k] *= b.values()[k];
  return out;
}

Field pointwise_divide(const Field& a, const Field& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("field shape mismatch");
  Field out = a;
  for (std::size_t k = 0; k < out.size(); ++k) out.values()[k] /= b.values()[k];
  return out;
}

std::vector<double> fd_weights(double x0, std::span<const double> x, int m) {
  const std::size_t n = x.size();
  const int mm = m;
  // c[i][k]: weight of node i for derivative order k.
  std::vector<std::vector<double>> c(n, std::vector<double>(mm + 1, 0.0));
  double c1 = 1.0;
  double c4 = x[0] - x0;
  c[0][0] = 1.0;
  for (std::size_t i = 1; i < n; ++i) {
    const int mn = std::min(static_cast<int>(i), mm);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - x0;
    for (std::size_t j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = c[i][mm];
  return w;
}

NormalAxis::NormalAxis(std::vector<double> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.size() < 5) throw std::invalid_argument("grid too coarse");
  for (std::size_t j = 1; j < nodes_.size(); ++j)
    if (!(nodes_[j] > nodes_[j - 1]))
      throw std::invalid_argument("normal-axis nodes must be strictly increasing");

  const std::size_t n = nodes_.size();
  const double h0 = nodes_[1] - nodes_[0];
  uniform_ = true;
  for (std::size_t j = 1; j < n; ++j)
    if (std::abs((nodes_[j] - nodes_[j - 1]) - h0) > 1e-12 * std::max(1.0, std::abs(h0)))
      uniform_ = false;

  d1_.resize(n);
  d2_.resize(n);
  auto make = [&](std::size_t j, std::size_t start, std::size_t len, int order) {
    Stencil s;
    s.start = start;
    s.len = len;
    const auto w = fd_weights(nodes_[j], std::span<const double>(nodes_.data() + start, len), order);
    std::copy(w.begin(), w.end(), s.w.begin());
    return s;
  };
  for (std::size_t j = 0; j < n; ++j) {
    if (j == 0) {
      d1_[j] = make(j, 0, 3, 1);
      d2_[j] = make(j, 0, 4, 2);
    } else if (j == n - 1) {
      d1_[j] = make(j, n - 3, 3, 1);
      d2_[j] = make(j, n - 4, 4, 2);
    } else {
      d1_[j] = make(j, j - 1, 3, 1);
      d2_[j] = make(j, j - 1, 3, 2);
    }
  }
}

NormalAxis NormalAxis::uniform(double lo, double hi, std::size_t intervals) {
  if (intervals < 4) throw std::invalid_argument("grid too coarse");
  std::vector<double> nodes(intervals + 1);
  const double h = (hi - lo) / static_cast<double>(intervals);
  for (std::size_t j = 0; j <= intervals; ++j) nodes[j] = lo + h * static_cast<double>(j);
  nodes.back() = hi;
  return NormalAxis(std::move(nodes));
}

bool is_power_of_two(std::size_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

Grid2D Grid2D::uniform(double Lx, std::size_t Nx, double Ymax, std::size_t Ny) {
  if (!(Ymax > 0.0)) throw std::invalid_argument("Ymax must be positive");
  return with_nodes(Lx, Nx, NormalAxis::uniform(0.0, Ymax, Ny).nodes());
}

Grid2D Grid2D::with_nodes(double Lx, std::size_t Nx, std::vector<double> y_nodes) {
  if (Nx < 8 || !is_power_of_two(Nx))
    throw std::invalid_argument("Nx must be a power of two and at least 8");
  if (!(Lx > 0.0)) throw std::invalid_argument("Lx must be positive");
  if (y_nodes.size() < 5) throw std::invalid_argument("grid too coarse");
  if (y_nodes.front() != 0.0) throw std::invalid_argument("y nodes must start at 0");
  Grid2D g;
  g.x = PeriodicAxis{Lx, Nx};
  g.y = NormalAxis(std::move(y_nodes));
  return g;
}

CroccoGrid CroccoGrid::uniform(double Lxi, std::size_t Nxi, std::size_t Neta) {
  if (Nxi < 8 || !is_power_of_two(Nxi))
    throw std::invalid_argument("Nxi must be a power of two and at least 8");
  if (!(Lxi > 0.0)) throw std::invalid_argument("Lxi must be positive");
  CroccoGrid g;
  g.xi = PeriodicAxis{Lxi, Nxi};
  g.eta = NormalAxis::uniform(0.0, 1.0, Neta);
  return g;
}

Field periodic_derivative(const PeriodicAxis& axis, const Field& f, int order) {
  if (f.n_periodic() != axis.n) throw std::invalid_argument("field/grid mismatch");
  if (!f.all_finite()) throw std::domain_error("non-finite field");
  if (order == 0) return f;
  FourierField spec = forward_fft(f);
  const double k0 = 2.0 * std::numbers::pi / axis.length;
  const std::size_t nyquist = axis.n / 2;
  const std::complex<double> i_unit(0.0, 1.0);
  for (std::size_t k = 0; k < spec.modes(); ++k) {
    std::complex<double> factor = std::pow(i_unit * (k0 * static_cast<double>(k)), order);
    if (k == nyquist && order % 2 == 1) factor = 0.0;
    for (std::size_t j = 0; j < spec.n_normal; ++j) spec.at(k, j) *= factor;
  }
  return inverse_fft(spec, f.name().empty() ? std::string{} : "d(" + f.name() + ")");
}

void normal_derivative_column(const NormalAxis& axis, std::span<const double> f,
                              std::span<double> out, int order) {
  const std::size_t n = axis.size();
  for (std::size_t j = 0; j < n; ++j) {
    const auto& s = order == 1 ? axis.first(j) : axis.second(j);
    double acc = 0.0;
    for (std::size_t q = 0; q < s.len; ++q) acc += s.w[q] * f[s.start + q];
    out[j] = acc;
  }
}

Field normal_derivative(const NormalAxis& axis, const Field& f, int order) {
  if (f.n_normal() != axis.size()) throw std::invalid_argument("field/grid mismatch");
  if (order != 1 && order != 2) throw std::invalid_argument("derivative order must be 1 or 2");
  if (!f.all_finite()) throw std::domain_error("non-finite field");
  Field out(f.n_periodic(), f.n_normal());
  parallel_for(f.n_periodic(), [&](std::size_t i) {
    normal_derivative_column(axis, f.column(i), out.column(i), order);
  });
  return out;
}

Field cumulative_integral(const NormalAxis& axis, const Field& f) {
  if (f.n_normal() != axis.size()) throw std::invalid_argument("field/grid mismatch");
  Field out(f.n_periodic(), f.n_normal());
  const auto& y = axis.nodes();
  for (std::size_t i = 0; i < f.n_periodic(); ++i) {
    auto src = f.column(i);
    auto dst = out.column(i);
    dst[0] = 0.0;
    for (std::size_t j = 1; j < y.size(); ++j)
      dst[j] = dst[j - 1] + 0.5 * (y[j] - y[j - 1]) * (src[j] + src[j - 1]);
  }
  return out;
}

void solve_tridiagonal(std::span<const double> sub, std::span<const double> diag,
                       std::span<const double> sup, std::span<double> rhs) {
  const std::size_t n = diag.size();
  std::vector<double> c(n);
  double beta = diag[0];
  if (beta == 0.0) throw std::runtime_error("singular tridiagonal system");
  rhs[0] /= beta;
  for (std::size_t j = 1; j < n; ++j) {
    c[j] = sup[j - 1] / beta;
    beta = diag[j] - sub[j] * c[j];
    if (beta == 0.0) throw std::runtime_error("singular tridiagonal system");
    rhs[j] = (rhs[j] - sub[j] * rhs[j - 1]) / beta;
  }
  for (std::size_t j = n - 1; j-- > 0;) rhs[j] -= c[j + 1] * rhs[j + 1];
}

}  // namespace prandtl_lab
