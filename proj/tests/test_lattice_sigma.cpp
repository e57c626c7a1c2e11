#include <doctest.h>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "zeropack/lattice_sigma.hpp"

using namespace zeropack;

namespace {

std::vector<Lattice> sample_lattices() {
  std::vector<Lattice> out;
  for (double theta : {0.4, 0.9, oracle::kPi / 3.0, 1.3, oracle::kPi / 2.0, 2.0, 2.6}) {
    out.push_back(lattice_normalize(theta, 1.0));
  }
  out.push_back(make_lattice(cplx{0.7, 0.2}, cplx{-0.1, 1.1}));
  out.push_back(make_lattice(cplx{1.3, 0.0}, cplx{0.9, 0.4}));
  out.push_back(lattice_normalize(1.1, 2.0));
  return out;
}

}  // namespace

TEST_CASE("theta series agrees with the Jacobi triple product") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (const cplx tau : {cplx{0.5, 0.866}, cplx{0.0, 1.0}, cplx{-0.3, 0.6}, cplx{0.2, 2.5}}) {
    for (int k = 0; k < 10; ++k) {
      const cplx v{2.0 * u(rng), 0.5 * u(rng)};
      const cplx a = theta1(v, tau).value;
      const cplx b = oracle::theta1_product(v, tau);
      CHECK(std::abs(a - b) <= 1e-13 * std::max(1.0, std::abs(b)));
    }
  }
  CHECK(std::abs(theta1(0.0, cplx{0, 1}).value) == 0.0);
  CHECK_THROWS_AS(theta1(0.1, cplx{0.3, -0.1}), InvalidLatticeError);
}

TEST_CASE("Legendre relation") {
  for (const Lattice& lat : sample_lattices()) {
    CHECK(std::abs(lat.legendre_defect()) < 1e-12);
  }
}

TEST_CASE("eta values are lattice invariants") {
  // Changing basis (omega1, omega2) -> (omega1, omega1 + omega2) keeps the
  // lattice; eta is additive, so eta(omega1 + omega2) = eta1 + eta2.
  const Lattice lat = lattice_normalize(1.2, 1.0);
  const Lattice other = make_lattice(lat.omega1, lat.omega1 + lat.omega2);
  CHECK(std::abs(other.eta1 - lat.eta1) < 1e-12);
  CHECK(std::abs(other.eta2 - (lat.eta1 + lat.eta2)) < 1e-12);
}

TEST_CASE("sigma agrees with the Weierstrass product") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-0.7, 0.7);
  for (double theta : {oracle::kPi / 3.0, 2.0 * oracle::kPi / 5.0, oracle::kPi / 2.0}) {
    const Lattice lat = lattice_normalize(theta, 1.0);
    for (int k = 0; k < 4; ++k) {
      const cplx z{u(rng), u(rng)};
      const cplx a = sigma(z, lat);
      const cplx b = oracle::sigma_product(z, lat.omega1, lat.omega2);
      CHECK(std::abs(a - b) <= 1e-8 * std::abs(b));
    }
  }
}

TEST_CASE("sigma is odd, normalized and vanishes on the lattice") {
  const Lattice lat = lattice_normalize(1.0, 1.0);
  const cplx z{0.31, -0.17};
  CHECK(std::abs(sigma(-z, lat) + sigma(z, lat)) < 1e-15);
  const double h = 1e-5;
  CHECK(std::abs((sigma(h, lat) - sigma(-h, lat)) / (2 * h) - 1.0) < 1e-9);
  CHECK(std::abs(sigma(2.0 * lat.omega1, lat)) < 1e-12);
  CHECK(std::abs(sigma(2.0 * lat.omega1 - 2.0 * lat.omega2, lat)) < 1e-12);
}

TEST_CASE("sigma quasi-periodicity") {
  // sigma(z + 2 omega_j) = -e^{2 eta_j (z + omega_j)} sigma(z)
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (const Lattice& lat : sample_lattices()) {
    for (int k = 0; k < 10; ++k) {
      const cplx z{u(rng), u(rng)};
      for (const auto& [w, eta] : {std::pair{lat.omega1, lat.eta1}, std::pair{lat.omega2, lat.eta2}}) {
        const cplx lhs = sigma(z + 2.0 * w, lat);
        const cplx rhs = -std::exp(2.0 * eta * (z + w)) * sigma(z, lat);
        CHECK(std::abs(lhs - rhs) <= 1e-10 * std::abs(rhs));
      }
    }
  }
}

TEST_CASE("lattice validation") {
  CHECK_THROWS_AS(lattice_normalize(0.0, 1.0), InvalidLatticeError);
  CHECK_THROWS_AS(lattice_normalize(oracle::kPi, 1.0), InvalidLatticeError);
  CHECK_THROWS_AS(lattice_normalize(1.0, -1.0), InvalidArgumentError);
  CHECK_THROWS_AS(make_lattice(cplx{0, 1}, 1.0), InvalidLatticeError);
  const Lattice lat = lattice_normalize(oracle::kPi / 3.0, 1.0);
  CHECK(std::imag(std::conj(lat.omega1) * lat.omega2) == doctest::Approx(oracle::kPi / 8.0));
  CHECK(lat.theta == doctest::Approx(oracle::kPi / 3.0));
}

TEST_CASE("candidate is doubly periodic") {
  for (double beta : {1.0, 2.0, 0.5}) {
    const auto cand = abrikosov_candidate(lattice_normalize(1.1, beta), beta);
    CHECK(cand.periodicity_residual(1000) < 1e-10);
  }
  // A lattice normalized for another beta is rejected.
  CHECK_THROWS_AS(abrikosov_candidate(lattice_normalize(1.1, 1.0), 2.0), NormalizationError);
}

TEST_CASE("golden triangular value") {
  const auto cand = abrikosov_candidate(lattice_normalize(oracle::kPi / 3.0, 1.0), 1.0);
  const CellAverage avg = cell_average(cand, {128, 128});
  CHECK(std::abs(avg.scaled_value - 0.061203) < 5e-4);
  CHECK(avg.scaled_value == doctest::Approx(1.0 - avg.optimal_scale * avg.mean_g).epsilon(1e-14));
  CHECK(avg.scaled_value <= avg.unscaled_value);
  // Resolution invariance.
  const double fine = cell_average_density(cand, {256, 256}, true);
  CHECK(std::abs(fine - avg.scaled_value) < 1e-6);
}

TEST_CASE("square lattice is worse than triangular") {
  const double tri = cell_average_density(abrikosov_candidate(lattice_normalize(oracle::kPi / 3.0, 1.0), 1.0),
                                          {64, 64}, true);
  const double sq = cell_average_density(abrikosov_candidate(lattice_normalize(oracle::kPi / 2.0, 1.0), 1.0),
                                         {64, 64}, true);
  CHECK(tri < sq);
}

TEST_CASE("cell average edge cases") {
  auto cand = abrikosov_candidate(lattice_normalize(1.0, 1.0), 1.0);
  CHECK_THROWS_AS(cell_average(cand, {8, 64}), ResolutionError);
  cand.scale = 0.0;
  CHECK(cell_average_density(cand, {16, 16}, false) == 1.0);
}

TEST_CASE("theta scan rows and CSV") {
  const auto rows = theta_scan(0.9, 1.2, 2, 1.0, {32, 32});
  REQUIRE(rows.size() == 2);
  CHECK(rows.front().theta == 0.9);
  CHECK(rows.back().theta == 1.2);
  std::ostringstream os;
  write_theta_scan_csv(os, rows);
  const std::string csv = os.str();
  CHECK(csv.rfind("theta,value\n0.9,", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
  CHECK_THROWS_AS(theta_scan(0.9, 1.2, 1, 1.0, {32, 32}), InvalidArgumentError);
  CHECK_THROWS_AS(theta_scan(1.2, 0.9, 5, 1.0, {32, 32}), InvalidArgumentError);
  // Worker count does not change the result.
  const auto a = theta_scan(0.8, 1.4, 5, 1.0, {32, 32}, 1);
  const auto b = theta_scan(0.8, 1.4, 5, 1.0, {32, 32}, 3);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].value == b[i].value);
}

TEST_CASE("beta = 2 scan is finite and positive") {
  for (const auto& row : theta_scan(0.9, 1.3, 3, 2.0, {64, 64})) {
    CHECK(std::isfinite(row.value));
    CHECK(row.value > 0.0);
  }
}
