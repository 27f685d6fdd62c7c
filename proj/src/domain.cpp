#include "fracground/domain.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <ostream>
#include <sstream>

namespace fracground {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_field: return "invalid-field";
    case ErrorKind::parameter: return "parameter";
    case ErrorKind::shape: return "shape";
    case ErrorKind::constants_undefined: return "constants-undefined";
    case ErrorKind::accuracy: return "accuracy";
    case ErrorKind::oracle_too_large: return "oracle-too-large";
    case ErrorKind::not_applicable: return "not-applicable";
    case ErrorKind::degenerate_direction: return "degenerate-direction";
    case ErrorKind::no_root: return "no-root";
    case ErrorKind::degenerate_model: return "degenerate-model";
    case ErrorKind::overflow: return "overflow";
    case ErrorKind::hypothesis: return "hypothesis";
    case ErrorKind::config: return "config";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

// ---------------------------------------------------------------- Box

bool is_fft_friendly(int m) noexcept {
  if (m < 8) return false;
  if (m % 3 == 0) m /= 3;
  return (m & (m - 1)) == 0;
}

Box::Box(int n, double l, int m)
    : dimension_(n), side_length_(l), points_(m) {
  size_ = 1;
  for (int a = 0; a < n; ++a) size_ *= static_cast<std::size_t>(m);
}

Box Box::make(int dimension, double side_length, int points_per_dim) {
  if (dimension < 1 || dimension > 3)
    throw Error(ErrorKind::parameter, "box dimension must be 1, 2 or 3");
  if (!(side_length > 0.0) || !std::isfinite(side_length))
    throw Error(ErrorKind::parameter, "box side length must be positive and finite");
  if (!is_fft_friendly(points_per_dim))
    throw Error(ErrorKind::parameter, "points per dimension must be >= 8 and a power of two or three times one");
  return Box(dimension, side_length, points_per_dim);
}

double Box::cell_volume() const noexcept { return std::pow(spacing(), dimension_); }
double Box::volume() const noexcept { return std::pow(side_length_, dimension_); }

double Box::wavenumber(int m) const noexcept {
  return 2.0 * std::numbers::pi * mode(m) / side_length_;
}

std::array<int, 3> Box::unflatten(std::size_t flat) const noexcept {
  std::array<int, 3> idx{0, 0, 0};
  for (int a = dimension_ - 1; a >= 0; --a) {
    idx[a] = static_cast<int>(flat % static_cast<std::size_t>(points_));
    flat /= static_cast<std::size_t>(points_);
  }
  return idx;
}

std::size_t Box::flatten(std::span<const int> index) const noexcept {
  std::size_t flat = 0;
  for (int a = 0; a < dimension_; ++a) flat = flat * points_ + static_cast<std::size_t>(index[a]);
  return flat;
}

std::vector<double> Box::wavenumber_sq() const {
  std::vector<double> k1(points_);
  for (int m = 0; m < points_; ++m) k1[m] = wavenumber(m) * wavenumber(m);
  std::vector<double> out(size_);
  for (std::size_t i = 0; i < size_; ++i) {
    const auto idx = unflatten(i);
    double sum = 0.0;
    for (int a = 0; a < dimension_; ++a) sum += k1[idx[a]];
    out[i] = sum;
  }
  return out;
}

void require_same_box(const Box& a, const Box& b, const char* what) {
  if (!(a == b)) throw Error(ErrorKind::shape, std::string(what) + ": box mismatch");
}

// ---------------------------------------------------------------- Field

Field::Field(Box box, std::vector<double> values) : box_(box), values_(std::move(values)) {
  if (values_.size() != box_.size())
    throw Error(ErrorKind::invalid_field, "field has " + std::to_string(values_.size()) +
                                              " values, box needs " + std::to_string(box_.size()));
  for (double v : values_)
    if (!std::isfinite(v)) throw Error(ErrorKind::invalid_field, "field contains non-finite values");
}

Field Field::zeros(const Box& box) { return Field(box, std::vector<double>(box.size(), 0.0)); }

Field Field::constant(const Box& box, double value) {
  return Field(box, std::vector<double>(box.size(), value));
}

Field Field::sample(const Box& box, const std::function<double(std::span<const double>)>& f) {
  std::vector<double> values(box.size());
  std::array<double, 3> x{};
  for (std::size_t i = 0; i < box.size(); ++i) {
    const auto idx = box.unflatten(i);
    for (int a = 0; a < box.dimension(); ++a) x[a] = box.coordinate(idx[a]);
    values[i] = f(std::span<const double>(x.data(), box.dimension()));
  }
  return Field(box, std::move(values));
}

double Field::max_abs() const noexcept {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

Field Field::operator+(const Field& other) const {
  require_same_box(box_, other.box_, "field addition");
  std::vector<double> out(values_);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += other.values_[i];
  return Field(box_, std::move(out));
}

Field Field::operator-(const Field& other) const {
  require_same_box(box_, other.box_, "field subtraction");
  std::vector<double> out(values_);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= other.values_[i];
  return Field(box_, std::move(out));
}

Field Field::operator*(double alpha) const {
  std::vector<double> out(values_);
  for (double& v : out) v *= alpha;
  return Field(box_, std::move(out));
}

Field Field::hadamard(const Field& other) const {
  require_same_box(box_, other.box_, "pointwise product");
  std::vector<double> out(values_);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= other.values_[i];
  return Field(box_, std::move(out));
}

// ---------------------------------------------------------------- spectral

SpectralField::SpectralField(Box box, std::vector<std::complex<double>> coefficients)
    : box_(box), coefficients_(std::move(coefficients)) {
  if (coefficients_.size() != box_.size())
    throw Error(ErrorKind::invalid_field, "spectral field size does not match its box");
  for (const auto& c : coefficients_)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
      throw Error(ErrorKind::invalid_field, "spectral field contains non-finite values");
}

double SpectralField::weighted_energy(std::span<const double> weights) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < coefficients_.size(); ++i) sum += weights[i] * std::norm(coefficients_[i]);
  return sum / box_.volume();
}

double SpectralField::energy() const {
  double sum = 0.0;
  for (const auto& c : coefficients_) sum += std::norm(c);
  return sum / box_.volume();
}

SpectralField SpectralField::scaled(std::span<const double> symbol) const {
  std::vector<std::complex<double>> out(coefficients_);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= symbol[i];
  return SpectralField(box_, std::move(out));
}

namespace {

struct FftwFree {
  void operator()(fftw_complex* p) const noexcept { fftw_free(p); }
};
using FftwBuffer = std::unique_ptr<fftw_complex[], FftwFree>;

FftwBuffer allocate(std::size_t n) {
  auto* p = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
  if (p == nullptr) throw std::bad_alloc();
  return FftwBuffer(p);
}

struct PlanPair {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

// Planning is not thread safe in FFTW; execution on fresh, fftw_malloc'd
// arrays through fftw_execute_dft is.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  PlanPair get(int dimension, int points) {
    std::lock_guard lock(mutex_);
    const auto key = std::make_pair(dimension, points);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    std::size_t n = 1;
    std::vector<int> dims(dimension, points);
    for (int a = 0; a < dimension; ++a) n *= points;
    auto in = allocate(n);
    auto out = allocate(n);
    PlanPair pair;
    pair.forward = fftw_plan_dft(dimension, dims.data(), in.get(), out.get(), FFTW_FORWARD, FFTW_ESTIMATE);
    pair.backward = fftw_plan_dft(dimension, dims.data(), in.get(), out.get(), FFTW_BACKWARD, FFTW_ESTIMATE);
    plans_.emplace(key, pair);
    return pair;
  }

 private:
  PlanCache() = default;
  std::mutex mutex_;
  std::map<std::pair<int, int>, PlanPair> plans_;
};

}  // namespace

SpectralField transform(const Field& field) {
  const Box& box = field.box();
  const std::size_t n = box.size();
  const auto plans = PlanCache::instance().get(box.dimension(), box.points_per_dim());
  auto in = allocate(n);
  auto out = allocate(n);
  const auto values = field.values();
  for (std::size_t i = 0; i < n; ++i) {
    in[i][0] = values[i];
    in[i][1] = 0.0;
  }
  fftw_execute_dft(plans.forward, in.get(), out.get());
  const double scale = box.cell_volume();
  std::vector<std::complex<double>> coeffs(n);
  for (std::size_t i = 0; i < n; ++i) coeffs[i] = {out[i][0] * scale, out[i][1] * scale};
  return SpectralField(box, std::move(coeffs));
}

Field inverse_transform(const SpectralField& spec) {
  const Box& box = spec.box();
  const std::size_t n = box.size();
  const auto plans = PlanCache::instance().get(box.dimension(), box.points_per_dim());
  auto in = allocate(n);
  auto out = allocate(n);
  const auto coeffs = spec.coefficients();
  for (std::size_t i = 0; i < n; ++i) {
    in[i][0] = coeffs[i].real();
    in[i][1] = coeffs[i].imag();
  }
  fftw_execute_dft(plans.backward, in.get(), out.get());
  const double scale = 1.0 / box.volume();
  std::vector<double> values(n);
  for (std::size_t i = 0; i < n; ++i) values[i] = out[i][0] * scale;
  return Field(box, std::move(values));
}

// ---------------------------------------------------------------- norms

double lebesgue_norm(const Field& field, double q) {
  if (std::isinf(q) && q > 0) return field.max_abs();
  if (!(q >= 1.0)) throw Error(ErrorKind::parameter, "lebesgue_norm needs q >= 1");
  const auto values = field.values();
  double sum = 0.0;
  if (q == 2.0) {
    for (double v : values) sum += v * v;
    return std::sqrt(sum * field.box().cell_volume());
  }
  for (double v : values) sum += std::pow(std::abs(v), q);
  return std::pow(sum * field.box().cell_volume(), 1.0 / q);
}

double inner_product(const Field& a, const Field& b) {
  require_same_box(a.box(), b.box(), "inner_product");
  const auto av = a.values();
  const auto bv = b.values();
  double sum = 0.0;
  for (std::size_t i = 0; i < av.size(); ++i) sum += av[i] * bv[i];
  return sum * a.box().cell_volume();
}

Field translate(const Field& u, std::span<const int> shift) {
  const Box& box = u.box();
  const int m = box.points_per_dim();
  if (static_cast<int>(shift.size()) != box.dimension())
    throw Error(ErrorKind::shape, "translation vector has the wrong dimension");
  std::vector<double> out(box.size());
  const auto values = u.values();
  std::array<int, 3> src{};
  for (std::size_t i = 0; i < box.size(); ++i) {
    const auto idx = box.unflatten(i);
    for (int a = 0; a < box.dimension(); ++a) src[a] = ((idx[a] - shift[a]) % m + m) % m;
    out[i] = values[box.flatten(src)];
  }
  return Field(box, std::move(out));
}

// ---------------------------------------------------------------- file I/O

void write_field(std::ostream& out, const Field& field) {
  const Box& box = field.box();
  out << "fracground-field v1 N=" << box.dimension() << " L=" << std::setprecision(17)
      << box.side_length() << " M=" << box.points_per_dim() << '\n';
  for (double v : field.values()) out << v << '\n';
}

void write_field(const std::string& path, const Field& field) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::io, "cannot open " + path + " for writing");
  write_field(out, field);
}

Field read_field(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw Error(ErrorKind::io, "empty field file");
  std::istringstream hs(header);
  std::string magic, version, n_tok, l_tok, m_tok;
  hs >> magic >> version >> n_tok >> l_tok >> m_tok;
  if (magic != "fracground-field" || version != "v1" || n_tok.rfind("N=", 0) != 0 ||
      l_tok.rfind("L=", 0) != 0 || m_tok.rfind("M=", 0) != 0)
    throw Error(ErrorKind::io, "bad field header: " + header);
  Box box = Box::make(std::stoi(n_tok.substr(2)), std::stod(l_tok.substr(2)), std::stoi(m_tok.substr(2)));
  std::vector<double> values;
  values.reserve(box.size());
  std::string line;
  while (values.size() < box.size() && std::getline(in, line)) {
    if (line.empty()) continue;
    values.push_back(std::stod(line));
  }
  if (values.size() != box.size()) throw Error(ErrorKind::io, "field file is truncated");
  return Field(box, std::move(values));
}

Field read_field(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open " + path);
  return read_field(in);
}

}  // namespace fracground
