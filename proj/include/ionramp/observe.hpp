#ifndef IONRAMP_OBSERVE_HPP
#define IONRAMP_OBSERVE_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ionramp/fock.hpp"
#include "ionramp/model.hpp"
#include "ionramp/types.hpp"

namespace ionramp {

namespace detail {

inline void check_site(const FockBasis& basis, int site) {
  if (site < 0 || site >= basis.sites()) {
    throw std::out_of_range("site " + std::to_string(site) + " outside chain of " + std::to_string(basis.sites()));
  }
}

template <typename Derived>
void check_state(const FockBasis& basis, const Eigen::MatrixBase<Derived>& psi) {
  if (psi.size() != static_cast<Eigen::Index>(basis.size())) {
    throw std::invalid_argument("state dimension " + std::to_string(psi.size()) + " does not match basis size " +
                                std::to_string(basis.size()));
  }
}

}  // namespace detail

/// N-boson coherence C_kl = <{(b_k^dag)^N (b_l)^N + h.c.}/2> / N!.
///
/// (b_l)^N annihilates every Fock state except the one with all N bosons on l,
/// where it yields sqrt(N!) times the vacuum; likewise for (b_k^dag)^N. The
/// expectation therefore collapses to Re(conj(d_k) d_l) with d_s the amplitude
/// of the state localized on s. For k != l this is the same operator as
/// (b_k^dag b_l)^N; for k == l it is the normal-ordered <n(n-1)...(n-N+1)>/N!.
template <typename Derived>
auto correlation(const Eigen::MatrixBase<Derived>& psi, const FockBasis& basis, int k, int l) {
  detail::check_state(basis, psi);
  detail::check_site(basis, k);
  detail::check_site(basis, l);
  const auto dk = psi(static_cast<Eigen::Index>(basis.localized_index(k)));
  const auto dl = psi(static_cast<Eigen::Index>(basis.localized_index(l)));
  return std::real(std::conj(dk) * dl);
}

template <typename Derived>
auto correlation_matrix(const Eigen::MatrixBase<Derived>& psi, const FockBasis& basis) {
  detail::check_state(basis, psi);
  using Real = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
  const int sites = basis.sites();
  ComplexVector<Real> localized(sites);
  for (int s = 0; s < sites; ++s) {
    localized(s) = static_cast<std::complex<Real>>(psi(static_cast<Eigen::Index>(basis.localized_index(s))));
  }
  Matrix<Real> c(sites, sites);
  for (int k = 0; k < sites; ++k) {
    for (int l = k; l < sites; ++l) {
      c(k, l) = std::real(std::conj(localized(k)) * localized(l));
      c(l, k) = c(k, l);
    }
  }
  return c;
}

/// <n_site>
template <typename Derived>
auto occupation(const Eigen::MatrixBase<Derived>& psi, const FockBasis& basis, int site) {
  detail::check_state(basis, psi);
  detail::check_site(basis, site);
  using Real = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
  Real n = 0;
  for (std::size_t s = 0; s < basis.size(); ++s) {
    n += std::norm(psi(static_cast<Eigen::Index>(s))) * static_cast<Real>(basis.occupation(s, site));
  }
  return n;
}

template <typename Derived>
auto occupations(const Eigen::MatrixBase<Derived>& psi, const FockBasis& basis) {
  detail::check_state(basis, psi);
  using Real = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
  Vector<Real> n = Vector<Real>::Zero(basis.sites());
  for (std::size_t s = 0; s < basis.size(); ++s) {
    const Real p = std::norm(psi(static_cast<Eigen::Index>(s)));
    for (int i = 0; i < basis.sites(); ++i) n(i) += p * static_cast<Real>(basis.occupation(s, i));
  }
  return n;
}

template <typename Scalar = double>
struct TargetState {
  enum class Kind { Bell, W, Custom };
  Kind kind = Kind::Custom;
  std::vector<int> sites;
  Vector<Scalar> amplitudes;
};

/// Equal-amplitude, equal-phase superposition of the states with all N bosons on one of `sites`.
template <typename Scalar = double>
TargetState<Scalar> localized_superposition(const FockBasis& basis, std::span<const int> sites,
                                            typename TargetState<Scalar>::Kind kind = TargetState<Scalar>::Kind::Custom) {
  if (sites.empty()) throw std::invalid_argument("target state needs at least one site");
  std::vector<int> sorted(sites.begin(), sites.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::invalid_argument("target state sites must be distinct");
  }
  for (int s : sorted) detail::check_site(basis, s);

  TargetState<Scalar> target;
  target.kind = kind;
  target.sites = sorted;
  target.amplitudes = Vector<Scalar>::Zero(static_cast<Eigen::Index>(basis.size()));
  const Scalar a = Scalar(1) / std::sqrt(static_cast<Scalar>(sorted.size()));
  for (int s : sorted) target.amplitudes(static_cast<Eigen::Index>(basis.localized_index(s))) = a;
  return target;
}

// (|..N_a..> + |..N_b..>) / sqrt(2)
template <typename Scalar = double>
TargetState<Scalar> bell_state(const FockBasis& basis, int a, int b) {
  const int sites[] = {a, b};
  return localized_superposition<Scalar>(basis, sites, TargetState<Scalar>::Kind::Bell);
}

template <typename Scalar = double>
TargetState<Scalar> w_state(const FockBasis& basis, int a, int b, int c) {
  const int sites[] = {a, b, c};
  return localized_superposition<Scalar>(basis, sites, TargetState<Scalar>::Kind::W);
}

/// |<target|psi>|
template <typename Derived, typename Scalar>
auto fidelity(const Eigen::MatrixBase<Derived>& psi, const TargetState<Scalar>& target) {
  if (psi.size() != target.amplitudes.size()) throw std::invalid_argument("fidelity: dimension mismatch");
  return std::abs(target.amplitudes.template cast<typename Derived::Scalar>().dot(psi));
}

/// sqrt(sum_g |<g|psi>|^2) over orthonormal columns g of `manifold`.
template <typename Derived, typename Scalar>
auto ground_manifold_overlap(const Eigen::MatrixBase<Derived>& psi, const Matrix<Scalar>& manifold,
                             Scalar orthonormality_tol = Scalar(1e-8)) {
  if (psi.size() != manifold.rows()) throw std::invalid_argument("ground_manifold_overlap: dimension mismatch");
  const Matrix<Scalar> gram = manifold.transpose() * manifold;
  const Scalar defect = (gram - Matrix<Scalar>::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
  if (!(defect <= orthonormality_tol)) {
    throw std::invalid_argument("ground_manifold_overlap: manifold is not orthonormal");
  }
  using Real = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
  Real weight = 0;
  for (Eigen::Index g = 0; g < manifold.cols(); ++g) {
    weight += std::norm(manifold.col(g).template cast<typename Derived::Scalar>().dot(psi));
  }
  return std::sqrt(weight);
}

template <typename Scalar>
Scalar cmax(std::span<const Scalar> series) {
  if (series.empty()) throw std::invalid_argument("cmax: empty series");
  return *std::max_element(series.begin(), series.end());
}

/// Re <psi|H|psi>
template <typename Derived, typename Scalar>
auto energy(const Eigen::MatrixBase<Derived>& psi, const Hamiltonian<Scalar>& h) {
  const auto hpsi = h.apply(psi.derived());
  return std::real(psi.dot(hpsi));
}

}  // namespace ionramp

#endif  // IONRAMP_OBSERVE_HPP
