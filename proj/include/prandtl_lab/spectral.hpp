#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "prandtl_lab/grid.hpp"

namespace prandtl_lab {

// Half-spectrum (k = 0..n/2) of every periodic row of a Field, stored as
// coeffs[k * n_normal + j]. Uses unnormalized FFTW conventions; inverse()
// divides by n.
struct FourierField {
  std::size_t n = 0;
  std::size_t n_normal = 0;
  std::vector<std::complex<double>> coeffs;

  std::size_t modes() const noexcept { return n / 2 + 1; }
  std::complex<double>& at(std::size_t k, std::size_t j) { return coeffs[k * n_normal + j]; }
  const std::complex<double>& at(std::size_t k, std::size_t j) const {
    return coeffs[k * n_normal + j];
  }
};

FourierField forward_fft(const Field& f);
Field inverse_fft(const FourierField& spec, std::string name = {});

// Multiplies mode k by multiplier[k] and transforms back.
Field apply_multiplier(const FourierField& spec, const std::vector<double>& multiplier,
                       std::string name = {});

// Evaluates the trigonometric interpolant of one column-position j at an
// arbitrary periodic coordinate s in [0, length).
double trig_interpolate(const FourierField& spec, double length, std::size_t j, double s);

}  // namespace prandtl_lab
