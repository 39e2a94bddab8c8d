#include <cmath>
#include <complex>
#include <random>

#include "doctest.h"
#include "ionramp/observe.hpp"
#include "oracle.hpp"

using namespace ionramp;
using cd = std::complex<double>;

namespace {

Eigen::VectorXcd random_state(std::size_t dim, std::mt19937& rng) {
  std::normal_distribution<double> g;
  Eigen::VectorXcd psi(static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < psi.size(); ++i) psi(i) = cd(g(rng), g(rng));
  return psi.normalized();
}

Eigen::VectorXcd basis_vector(const FockBasis& basis, const Occupation& occ) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis.size()));
  v(static_cast<Eigen::Index>(basis.index_of(occ))) = 1.0;
  return v;
}

}  // namespace

TEST_CASE("correlation matches explicit ladder operators") {
  std::mt19937 rng(11);
  for (auto [sites, bosons] : {std::pair{4, 1}, std::pair{4, 2}, std::pair{5, 3}, std::pair{3, 4}}) {
    const FockBasis basis(sites, bosons);
    for (int trial = 0; trial < 3; ++trial) {
      const auto psi = random_state(basis.size(), rng);
      const Eigen::MatrixXd c = correlation_matrix(psi, basis);
      for (int k = 0; k < sites; ++k) {
        for (int l = 0; l < sites; ++l) {
          const double expected = oracle::correlation(basis, psi, k, l);
          CHECK(std::abs(c(k, l) - expected) < 1e-13);
          CHECK(std::abs(correlation(psi, basis, k, l) - expected) < 1e-13);
        }
      }
    }
  }
}

TEST_CASE("correlation properties") {
  std::mt19937 rng(3);
  const FockBasis basis(6, 2);
  const auto psi = random_state(basis.size(), rng);
  const Eigen::MatrixXd c = correlation_matrix(psi, basis);
  CHECK((c - c.transpose()).cwiseAbs().maxCoeff() == 0.0);
  for (int k = 0; k < 6; ++k) {
    CHECK(c(k, k) >= 0.0);
    for (int l = 0; l < 6; ++l) CHECK(c(k, l) * c(k, l) <= c(k, k) * c(l, l) + 1e-15);
  }
  // A global phase leaves every entry unchanged.
  const Eigen::VectorXcd rotated = psi * std::polar(1.0, 0.77);
  CHECK((correlation_matrix(rotated, basis) - c).cwiseAbs().maxCoeff() < 1e-15);

  CHECK_THROWS_AS(correlation(psi, basis, 0, 6), std::out_of_range);
  CHECK_THROWS_AS(correlation(Eigen::VectorXcd::Zero(3), basis, 0, 1), std::invalid_argument);
}

TEST_CASE("Bell state correlations and fidelity") {
  const FockBasis basis(6, 2);
  const auto bell = bell_state(basis, 1, 4);
  const Eigen::VectorXcd psi = bell.amplitudes.cast<cd>();
  const Eigen::MatrixXd c = correlation_matrix(psi, basis);
  CHECK(c(1, 1) == doctest::Approx(0.5));
  CHECK(c(4, 4) == doctest::Approx(0.5));
  CHECK(c(1, 4) == doctest::Approx(0.5));
  CHECK(c(0, 1) == 0.0);
  CHECK(c(2, 3) == 0.0);
  CHECK(fidelity(psi, bell) == doctest::Approx(1.0));

  // Opposite relative phase: orthogonal to the target, negative coherence.
  Eigen::VectorXcd minus = psi;
  minus(static_cast<Eigen::Index>(basis.localized_index(4))) *= -1.0;
  CHECK(fidelity(minus, bell) < 1e-15);
  CHECK(correlation(minus, basis, 1, 4) == doctest::Approx(-0.5));

  // A relative phase pi/2 drops the fidelity to 1/sqrt(2).
  Eigen::VectorXcd quarter = psi;
  quarter(static_cast<Eigen::Index>(basis.localized_index(4))) *= cd(0, 1);
  CHECK(fidelity(quarter, bell) == doctest::Approx(1 / std::sqrt(2.0)));

  CHECK_THROWS_AS(bell_state(basis, 2, 2), std::invalid_argument);
  CHECK_THROWS_AS(bell_state(basis, 2, 6), std::out_of_range);
}

TEST_CASE("W state") {
  const FockBasis basis(8, 2);
  const auto w = w_state(basis, 6, 2, 4);
  CHECK(w.sites == std::vector<int>{2, 4, 6});
  CHECK(w.amplitudes.norm() == doctest::Approx(1.0));
  const Eigen::VectorXcd psi = w.amplitudes.cast<cd>();
  const Eigen::MatrixXd c = correlation_matrix(psi, basis);
  CHECK(c(2, 6) == doctest::Approx(1.0 / 3));
  CHECK(c(4, 4) == doctest::Approx(1.0 / 3));
}

TEST_CASE("occupations") {
  const FockBasis basis(4, 3);
  const auto psi = basis_vector(basis, {2, 0, 1, 0});
  const Eigen::VectorXd n = occupations(psi, basis);
  CHECK(n(0) == 2.0);
  CHECK(n(2) == 1.0);
  CHECK(occupation(psi, basis, 1) == 0.0);

  std::mt19937 rng(5);
  const auto mixed = random_state(basis.size(), rng);
  CHECK(occupations(mixed, basis).sum() == doctest::Approx(3.0));
}

TEST_CASE("ground manifold overlap") {
  Eigen::MatrixXd manifold = Eigen::MatrixXd::Zero(4, 2);
  manifold(0, 0) = 1;
  manifold(1, 1) = 1;
  Eigen::VectorXcd psi(4);
  psi << cd(0.6, 0), cd(0, 0.6), cd(0.4, 0), cd(0, std::sqrt(1 - 0.72 - 0.16));
  CHECK(ground_manifold_overlap(psi, manifold) == doctest::Approx(std::sqrt(0.72)));

  const Eigen::MatrixXd single = manifold.leftCols(1);
  CHECK(ground_manifold_overlap(psi, single) == doctest::Approx(0.6));

  // Invariant under a rotation inside the manifold.
  Eigen::MatrixXd rotated = manifold * Eigen::Rotation2Dd(0.3).toRotationMatrix();
  CHECK(ground_manifold_overlap(psi, rotated) == doctest::Approx(std::sqrt(0.72)));

  Eigen::MatrixXd skewed = manifold;
  skewed(0, 1) = 0.5;
  CHECK_THROWS_AS(ground_manifold_overlap(psi, skewed), std::invalid_argument);
}

TEST_CASE("energy expectation") {
  const FockBasis basis(2, 1);
  const auto h = hamiltonian(ModelParams<double>{2, 1, 1.0, Eigen::Vector2d(0, 0)}, basis);
  Eigen::VectorXcd psi(2);
  psi << 1 / std::sqrt(2.0), -1 / std::sqrt(2.0);
  CHECK(energy(psi, h) == doctest::Approx(-1.0));
  psi(1) = cd(0, 1 / std::sqrt(2.0));
  CHECK(std::abs(energy(psi, h)) < 1e-15);
}

TEST_CASE("cmax") {
  const std::vector<double> series{0.1, 0.48, 0.3};
  CHECK(cmax<double>(series) == 0.48);
  CHECK_THROWS_AS(cmax<double>(std::span<const double>{}), std::invalid_argument);
}

TEST_CASE("single boson reduces to amplitude products") {
  const FockBasis basis(5, 1);
  const Eigen::VectorXcd uniform = Eigen::VectorXcd::Constant(5, 1 / std::sqrt(5.0));
  const Eigen::MatrixXd c = correlation_matrix(uniform, basis);
  CHECK((c.array() - 0.2).abs().maxCoeff() < 1e-15);

  std::mt19937 rng(17);
  const auto psi = random_state(basis.size(), rng);
  for (int k = 0; k < 5; ++k) {
    for (int l = 0; l < 5; ++l) {
      Occupation ok(5, 0), ol(5, 0);
      ok[static_cast<std::size_t>(k)] = 1;
      ol[static_cast<std::size_t>(l)] = 1;
      const cd dk = psi(static_cast<Eigen::Index>(basis.index_of(ok)));
      const cd dl = psi(static_cast<Eigen::Index>(basis.index_of(ol)));
      CHECK(correlation(psi, basis, k, l) == doctest::Approx(std::real(std::conj(dk) * dl)));
    }
  }
}

TEST_CASE("single Fock state") {
  const FockBasis basis(6, 2);
  const auto psi = basis_vector(basis, {0, 2, 0, 0, 0, 0});
  const Eigen::MatrixXd c = correlation_matrix(psi, basis);
  CHECK(c(1, 1) == 1.0);
  Eigen::MatrixXd rest = c;
  rest(1, 1) = 0;
  CHECK(rest.cwiseAbs().maxCoeff() == 0.0);
  CHECK(occupation(psi, basis, 1) == 2.0);
  CHECK(fidelity(psi, bell_state(basis, 1, 4)) == doctest::Approx(1 / std::sqrt(2.0)));

  const auto bell = bell_state(basis, 1, 4);
  CHECK(bell.amplitudes.norm() == doctest::Approx(1.0));
  CHECK(bell.amplitudes(static_cast<Eigen::Index>(basis.index_of(Occupation{0, 0, 0, 0, 2, 0}))) ==
        doctest::Approx(1 / std::sqrt(2.0)));
  const Eigen::VectorXcd b = bell.amplitudes.cast<cd>();
  CHECK(occupation(b, basis, 1) == doctest::Approx(1.0));
  CHECK(occupation(b, basis, 4) == doctest::Approx(1.0));
}

TEST_CASE("overlap bounds") {
  Eigen::MatrixXd manifold = Eigen::MatrixXd::Zero(3, 1);
  manifold(2, 0) = 1;
  Eigen::VectorXcd inside = Eigen::VectorXcd::Zero(3);
  inside(2) = cd(0, 1);
  CHECK(ground_manifold_overlap(inside, manifold) == doctest::Approx(1.0));
  Eigen::VectorXcd outside = Eigen::VectorXcd::Zero(3);
  outside(0) = 1;
  CHECK(ground_manifold_overlap(outside, manifold) == 0.0);
}
