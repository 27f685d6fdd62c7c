#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "fracground/error.hpp"

namespace fracground {

/// M >= 8 of the form 2^a or 3*2^a.
bool is_fft_friendly(int m) noexcept;

/// Periodic box [-L/2, L/2)^N sampled on a uniform M^N grid.
///
/// Samples are stored row-major with axis 0 slowest. Grid point i along an
/// axis sits at x = -L/2 + i*h, so the origin is index M/2.
class Box {
 public:
  static Box make(int dimension, double side_length, int points_per_dim);

  int dimension() const noexcept { return dimension_; }
  double side_length() const noexcept { return side_length_; }
  int points_per_dim() const noexcept { return points_; }

  std::size_t size() const noexcept { return size_; }
  double spacing() const noexcept { return side_length_ / points_; }
  double cell_volume() const noexcept;
  double volume() const noexcept;

  /// Coordinate of grid index i along any axis.
  double coordinate(int i) const noexcept { return -0.5 * side_length_ + i * spacing(); }
  /// Signed mode number in [-M/2, M/2) for FFT index m.
  int mode(int m) const noexcept { return m < points_ / 2 ? m : m - points_; }
  /// Angular wavenumber 2*pi*mode(m)/L.
  double wavenumber(int m) const noexcept;

  /// Multi-index of a flat offset; unused trailing axes are zero.
  std::array<int, 3> unflatten(std::size_t flat) const noexcept;
  std::size_t flatten(std::span<const int> index) const noexcept;

  /// |k|^2 for every flat spectral index.
  std::vector<double> wavenumber_sq() const;

  friend bool operator==(const Box&, const Box&) = default;

 private:
  Box(int n, double l, int m);

  int dimension_ = 1;
  double side_length_ = 1.0;
  int points_ = 8;
  std::size_t size_ = 8;
};

/// Real samples on a Box. All values are finite.
class Field {
 public:
  Field(Box box, std::vector<double> values);

  static Field zeros(const Box& box);
  static Field constant(const Box& box, double value);
  /// Samples f at every grid point; f receives the point's N coordinates.
  static Field sample(const Box& box, const std::function<double(std::span<const double>)>& f);

  const Box& box() const noexcept { return box_; }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  std::size_t size() const noexcept { return values_.size(); }

  double max_abs() const noexcept;

  Field operator+(const Field& other) const;
  Field operator-(const Field& other) const;
  Field operator*(double alpha) const;
  friend Field operator*(double alpha, const Field& f) { return f * alpha; }
  /// Pointwise product.
  Field hadamard(const Field& other) const;

 private:
  Box box_;
  std::vector<double> values_;
};

/// Spectral coefficients u_hat_k = h^N * sum_j u_j exp(-i k.(x_j - x_0)).
///
/// Phases are referenced to the first grid point. With this scaling
/// ||u||^2_{L2} = (1/L^N) sum_k |u_hat_k|^2.
class SpectralField {
 public:
  SpectralField(Box box, std::vector<std::complex<double>> coefficients);

  const Box& box() const noexcept { return box_; }
  std::span<const std::complex<double>> coefficients() const noexcept { return coefficients_; }
  std::complex<double> operator[](std::size_t i) const noexcept { return coefficients_[i]; }

  /// (1/L^N) sum_k w_k |u_hat_k|^2.
  double weighted_energy(std::span<const double> weights) const;
  double energy() const;

  /// Multiplies every coefficient by a real symbol.
  SpectralField scaled(std::span<const double> symbol) const;

 private:
  Box box_;
  std::vector<std::complex<double>> coefficients_;
};

SpectralField transform(const Field& field);
Field inverse_transform(const SpectralField& spec);

/// (h^N sum |u_i|^q)^(1/q); q = infinity gives max |u_i|.
double lebesgue_norm(const Field& field, double q);

/// h^N sum a_i b_i.
double inner_product(const Field& a, const Field& b);

/// Periodic translation by whole cells: result[i] = u[i - shift].
Field translate(const Field& u, std::span<const int> shift);

/// Throws Error{shape} when the boxes differ.
void require_same_box(const Box& a, const Box& b, const char* what);

void write_field(std::ostream& out, const Field& field);
void write_field(const std::string& path, const Field& field);
Field read_field(std::istream& in);
Field read_field(const std::string& path);

}  // namespace fracground
