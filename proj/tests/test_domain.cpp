#include <sstream>

#include "doctest.h"
#include "support.hpp"

using namespace fgtest;

TEST_CASE("box validation") {
  CHECK_NOTHROW(Box::make(1, 2.0, 16));
  CHECK_NOTHROW(Box::make(3, 20.0, 48));
  for (auto [n, l, m] : {std::tuple{0, 1.0, 16}, {4, 1.0, 16}, {1, 0.0, 16}, {1, -2.0, 16}, {1, 1.0, 4}, {1, 1.0, 10},
                         {2, 1.0, 40}})
    CHECK_THROWS_AS(Box::make(n, l, m), Error);
  const Box box = Box::make(2, 10.0, 32);
  CHECK(box.size() == 1024);
  CHECK(box.spacing() == doctest::Approx(10.0 / 32));
  CHECK(box.coordinate(16) == 0.0);
  CHECK(box.mode(16) == -16);
  CHECK(box.mode(15) == 15);
}

TEST_CASE("non-finite samples are rejected") {
  const Box box = Box::make(1, 1.0, 8);
  std::vector<double> v(8, 0.0);
  v[3] = std::nan("");
  try {
    Field f(box, v);
    FAIL("expected invalid_field");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::invalid_field);
  }
}

TEST_CASE("constant field has only the zero mode") {
  const Box box = Box::make(2, 3.0, 16);
  const SpectralField s = transform(Field::constant(box, 1.0));
  CHECK(std::abs(s[0] - std::complex<double>(box.volume(), 0.0)) < 1e-12);
  for (std::size_t k = 1; k < box.size(); ++k) CHECK(std::abs(s[k]) < 1e-12);
}

TEST_CASE("single cosine mode has two coefficients") {
  const Box box = Box::make(1, 7.0, 32);
  const SpectralField s = transform(cosine_mode(box));
  int nonzero = 0;
  for (std::size_t k = 0; k < box.size(); ++k) {
    if (std::abs(s[k]) > 1e-10) {
      ++nonzero;
      CHECK(std::abs(box.mode(static_cast<int>(k))) == 1);
      CHECK(std::abs(s[k]) == doctest::Approx(3.5));  // h * M/2
    }
  }
  CHECK(nonzero == 2);
}

TEST_CASE("round trip, Plancherel and Hermitian symmetry on seeded fields") {
  std::mt19937_64 rng(2024);
  for (int n = 1; n <= 3; ++n) {
    const Box box = Box::make(n, 5.0, n == 3 ? 16 : 32);
    for (int trial = 0; trial < 5; ++trial) {
      const Field u = random_field(box, rng);
      const SpectralField s = transform(u);
      const Field back = inverse_transform(s);
      double worst = 0.0;
      for (std::size_t i = 0; i < u.size(); ++i) worst = std::max(worst, std::abs(back[i] - u[i]));
      CHECK(worst <= 1e-12 * u.max_abs());
      const double l2 = inner_product(u, u);
      CHECK(rel(s.energy(), l2) < 1e-10);
      // u_hat(-k) = conj(u_hat(k)).
      const int m = box.points_per_dim();
      for (std::size_t k = 0; k < box.size(); k += 7) {
        const auto idx = box.unflatten(k);
        std::array<int, 3> neg{};
        for (int a = 0; a < n; ++a) neg[a] = (m - idx[a]) % m;
        const auto kneg = box.flatten(std::span<const int>(neg.data(), n));
        CHECK(std::abs(s[kneg] - std::conj(s[k])) < 1e-9 * box.volume());
      }
    }
  }
}

TEST_CASE("lebesgue norms") {
  const Box small = Box::make(1, 2.0, 16);
  CHECK(lebesgue_norm(Field::constant(small, 1.0), 2.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  const Box b = Box::make(1, 6.0, 64);
  CHECK(lebesgue_norm(cosine_mode(b), 2.0) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-13));
  // int exp(-x^2) dx = sqrt(pi), so ||exp(-x^2/2)||_2 = pi^{1/4}.
  const Box wide = Box::make(1, 40.0, 512);
  CHECK(rel(lebesgue_norm(gaussian(wide, 1.0), 2.0), std::pow(kPi, 0.25)) < 1e-10);
  CHECK(lebesgue_norm(cosine_mode(b), std::numeric_limits<double>::infinity()) == doctest::Approx(1.0));
  CHECK_THROWS_AS(lebesgue_norm(cosine_mode(b), 0.5), Error);
}

TEST_CASE("norm homogeneity and translation invariance") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> alpha(-5.0, 5.0);
  std::uniform_int_distribution<int> shift(-20, 20);
  const Box box = Box::make(2, 4.0, 32);
  for (int trial = 0; trial < 20; ++trial) {
    const Field u = random_field(box, rng);
    const double a = alpha(rng);
    for (double q : {1.0, 2.0, 3.5, 6.0}) {
      const double nu = lebesgue_norm(u, q);
      CHECK(std::abs(lebesgue_norm(u * a, q) - std::abs(a) * nu) <= 1e-12 * std::abs(a) * nu);
      const int z[2] = {shift(rng), shift(rng)};
      CHECK(lebesgue_norm(translate(u, z), q) == doctest::Approx(nu).epsilon(1e-14));
    }
  }
}

TEST_CASE("translate moves samples by whole cells") {
  const Box box = Box::make(1, 8.0, 16);
  std::vector<double> v(16);
  for (int i = 0; i < 16; ++i) v[i] = i;
  const int z[1] = {3};
  const Field t = translate(Field(box, v), z);
  for (int i = 0; i < 16; ++i) CHECK(t[i] == static_cast<double>((i - 3 + 16) % 16));
}

TEST_CASE("inner product") {
  const Box box = Box::make(1, 5.0, 64);
  std::mt19937_64 rng(3);
  const Field u = random_field(box, rng);
  CHECK(inner_product(u, u) == doctest::Approx(std::pow(lebesgue_norm(u, 2.0), 2)).epsilon(1e-13));
  const Field c = cosine_mode(box);
  const Field s = Field::sample(box, [&](std::span<const double> x) { return std::sin(2.0 * kPi * x[0] / 5.0); });
  CHECK(std::abs(inner_product(c, s)) < 1e-12);
  CHECK(inner_product(u, Field::zeros(box)) == 0.0);
  CHECK_THROWS_AS(inner_product(u, Field::zeros(Box::make(1, 5.0, 32))), Error);
}

TEST_CASE("field file round trip") {
  std::mt19937_64 rng(11);
  const Box box = Box::make(2, 3.5, 16);
  const Field u = random_field(box, rng);
  std::stringstream io;
  write_field(io, u);
  std::string header;
  std::getline(io, header);
  CHECK(header == "fracground-field v1 N=2 L=3.5 M=16");
  io.seekg(0);
  const Field back = read_field(io);
  CHECK(back.box() == box);
  for (std::size_t i = 0; i < u.size(); ++i) CHECK(back[i] == u[i]);

  std::stringstream bad("not-a-field\n1\n");
  CHECK_THROWS_AS(read_field(bad), Error);
}
