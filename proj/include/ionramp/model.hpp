#ifndef IONRAMP_MODEL_HPP
#define IONRAMP_MODEL_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ionramp/fock.hpp"
#include "ionramp/types.hpp"

namespace ionramp {

// Open chain of L sites with uniform hopping and per-site interaction.
// Energies are in units with hbar = 1.
template <typename Scalar = double>
struct ModelParams {
  int sites = 0;
  int bosons = 0;
  Scalar hopping = 0;
  Vector<Scalar> interaction;
};

// H = J sum_<ij> (b_i^dag b_j + h.c.) + sum_i U_i n_i (n_i - 1).
//
// The interaction carries no factor 1/2. Hopping is stored sparse and
// symmetric; the interaction part is a diagonal in the Fock basis.
template <typename Scalar = double>
struct Hamiltonian {
  SparseMatrix<Scalar> hopping;
  Vector<Scalar> diagonal;

  Eigen::Index dimension() const { return diagonal.size(); }

  Matrix<Scalar> dense() const {
    Matrix<Scalar> h = Matrix<Scalar>(hopping);
    h.diagonal() += diagonal;
    return h;
  }

  template <typename Derived>
  auto apply(const Eigen::MatrixBase<Derived>& x) const {
    using Result = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Derived::ColsAtCompileTime>;
    Result y = hopping * x;
    y += diagonal.asDiagonal() * x;
    return y;
  }
};

/// Nearest-neighbour hopping J sum_i (b_i^dag b_{i+1} + h.c.) on the open chain.
/// <m| b_i^dag b_j |n> = sqrt((n_i + 1) n_j), with m obtained from n by moving one boson j -> i.
template <typename Scalar = double>
SparseMatrix<Scalar> build_hopping(const FockBasis& basis, Scalar hopping) {
  const auto dim = static_cast<Eigen::Index>(basis.size());
  if (hopping == Scalar(0)) return SparseMatrix<Scalar>(dim, dim);
  std::vector<Eigen::Triplet<Scalar>> entries;
  entries.reserve(basis.size() * static_cast<std::size_t>(2 * std::max(basis.sites() - 1, 0)));

  Occupation moved(static_cast<std::size_t>(basis.sites()));
  for (std::size_t from = 0; from < basis.size(); ++from) {
    const auto occ = basis.state(from);
    for (int left = 0; left + 1 < basis.sites(); ++left) {
      const int right = left + 1;
      if (occ[static_cast<std::size_t>(right)] == 0) continue;
      // b_left^dag b_right; the Hermitian partner is inserted as the transposed entry.
      std::copy(occ.begin(), occ.end(), moved.begin());
      moved[static_cast<std::size_t>(right)] -= 1;
      moved[static_cast<std::size_t>(left)] += 1;
      const auto to = basis.index_of(moved);
      const Scalar amplitude =
          hopping * std::sqrt(static_cast<Scalar>((occ[static_cast<std::size_t>(left)] + 1) *
                                                  occ[static_cast<std::size_t>(right)]));
      entries.emplace_back(static_cast<Eigen::Index>(to), static_cast<Eigen::Index>(from), amplitude);
      entries.emplace_back(static_cast<Eigen::Index>(from), static_cast<Eigen::Index>(to), amplitude);
    }
  }

  SparseMatrix<Scalar> h(dim, dim);
  h.setFromTriplets(entries.begin(), entries.end());
  h.makeCompressed();
  return h;
}

/// Diagonal of n_site (n_site - 1) over the basis.
template <typename Scalar = double>
Vector<Scalar> interaction_diagonal(const FockBasis& basis, int site) {
  if (site < 0 || site >= basis.sites()) {
    throw std::out_of_range("interaction_diagonal: site " + std::to_string(site) + " outside chain of " +
                            std::to_string(basis.sites()));
  }
  Vector<Scalar> d(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t s = 0; s < basis.size(); ++s) {
    const int n = basis.occupation(s, site);
    d(static_cast<Eigen::Index>(s)) = static_cast<Scalar>(n * (n - 1));
  }
  return d;
}

// sum_i weights_i n_i (n_i - 1)
template <typename Scalar = double, typename Derived>
Vector<Scalar> interaction_energy(const FockBasis& basis, const Eigen::MatrixBase<Derived>& weights) {
  if (weights.size() != basis.sites()) {
    throw std::invalid_argument("interaction vector has " + std::to_string(weights.size()) +
                                " entries, chain has " + std::to_string(basis.sites()) + " sites");
  }
  Vector<Scalar> d = Vector<Scalar>::Zero(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t s = 0; s < basis.size(); ++s) {
    Scalar e = 0;
    for (int i = 0; i < basis.sites(); ++i) {
      const int n = basis.occupation(s, i);
      e += static_cast<Scalar>(weights(i)) * static_cast<Scalar>(n * (n - 1));
    }
    d(static_cast<Eigen::Index>(s)) = e;
  }
  return d;
}

template <typename Scalar = double>
Hamiltonian<Scalar> hamiltonian(const ModelParams<Scalar>& params, const FockBasis& basis) {
  if (params.sites != basis.sites() || params.bosons != basis.bosons()) {
    throw std::invalid_argument("model parameters do not match the basis (L, N)");
  }
  if (params.interaction.size() != params.sites) {
    throw std::invalid_argument("interaction vector length " + std::to_string(params.interaction.size()) +
                                " does not match L = " + std::to_string(params.sites));
  }
  return {build_hopping<Scalar>(basis, params.hopping), interaction_energy<Scalar>(basis, params.interaction)};
}

template <typename Scalar = double>
struct GroundState {
  Scalar energy = 0;
  Vector<Scalar> state;
  // Orthonormal columns spanning all eigenvectors within the degeneracy tolerance of `energy`.
  Matrix<Scalar> manifold;
  Vector<Scalar> spectrum;
};

namespace detail {

// Fix the arbitrary eigenvector sign: the first largest-magnitude component is positive.
template <typename Derived>
void canonicalize_sign(Eigen::MatrixBase<Derived>& v) {
  Eigen::Index at = 0;
  v.cwiseAbs().maxCoeff(&at);
  if (v(at) < 0) v = -v;
}

}  // namespace detail

// Ground data from an ascending spectrum and its eigenvectors.
template <typename Scalar = double>
GroundState<Scalar> ground_state_from_spectrum(const Vector<Scalar>& values, const Matrix<Scalar>& vectors,
                                               std::optional<Scalar> degeneracy_tol = {}) {
  if (values.size() == 0) throw std::invalid_argument("ground_state: empty spectrum");
  const Scalar tol = degeneracy_tol.value_or(Scalar(1e-8) * values.cwiseAbs().maxCoeff());

  Eigen::Index count = 1;
  while (count < values.size() && values(count) - values(0) <= tol) ++count;

  GroundState<Scalar> gs;
  gs.energy = values(0);
  gs.spectrum = values;
  gs.manifold = vectors.leftCols(count);
  for (Eigen::Index c = 0; c < count; ++c) {
    auto col = gs.manifold.col(c);
    detail::canonicalize_sign(col);
  }
  gs.state = gs.manifold.col(0);
  return gs;
}

/// Lowest eigenpair of a Hermitian Hamiltonian plus its (near-)degenerate ground manifold.
/// The default tolerance is 1e-8 * max|E|.
template <typename Scalar = double>
GroundState<Scalar> ground_state(const Hamiltonian<Scalar>& h, std::optional<Scalar> degeneracy_tol = {}) {
  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> solver(h.dense());
  if (solver.info() != Eigen::Success) throw NumericalError("ground_state: eigensolver failed");
  return ground_state_from_spectrum<Scalar>(solver.eigenvalues(), solver.eigenvectors(), degeneracy_tol);
}

}  // namespace ionramp

#endif  // IONRAMP_MODEL_HPP
