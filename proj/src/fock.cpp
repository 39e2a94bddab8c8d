#include "ionramp/fock.hpp"

#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ionramp {

std::size_t dimension(int sites, int bosons) {
  if (sites < 1) throw std::invalid_argument("dimension: need at least one site");
  if (bosons < 0) throw std::invalid_argument("dimension: boson number must be non-negative");

  // binomial(L-1+N, N) built up as prod_{k=1..N} (L-1+k)/k; every partial product is exact.
  std::size_t count = 1;
  const auto base = static_cast<std::size_t>(sites - 1);
  for (std::size_t k = 1; k <= static_cast<std::size_t>(bosons); ++k) {
    std::size_t scaled = 0;
    if (__builtin_mul_overflow(count, base + k, &scaled)) {
      throw std::overflow_error("dimension: binomial(" + std::to_string(sites + bosons - 1) + ", " +
                                std::to_string(bosons) + ") overflows std::size_t");
    }
    count = scaled / k;
  }
  return count;
}

std::size_t FockBasis::OccupationHash::operator()(const Occupation& occ) const noexcept {
  std::size_t seed = occ.size();
  for (int n : occ) seed ^= std::hash<int>{}(n) + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
  return seed;
}

FockBasis::FockBasis(int sites, int bosons)
    : sites_(sites), bosons_(bosons), size_(dimension(sites, bosons)) {
  occupations_.reserve(size_ * static_cast<std::size_t>(sites_));
  index_.reserve(size_);

  Occupation current(static_cast<std::size_t>(sites_), 0);
  // Depth-first fill, highest count on the leftmost free site first.
  std::function<void(int, int)> fill = [&](int site, int remaining) {
    if (site == sites_ - 1) {
      current[static_cast<std::size_t>(site)] = remaining;
      index_.emplace(current, index_.size());
      occupations_.insert(occupations_.end(), current.begin(), current.end());
      return;
    }
    for (int n = remaining; n >= 0; --n) {
      current[static_cast<std::size_t>(site)] = n;
      fill(site + 1, remaining - n);
    }
  };
  fill(0, bosons_);
}

std::optional<std::size_t> FockBasis::find(std::span<const int> occ) const {
  if (occ.size() != static_cast<std::size_t>(sites_)) return std::nullopt;
  auto it = index_.find(Occupation(occ.begin(), occ.end()));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t FockBasis::index_of(std::span<const int> occ) const {
  if (occ.size() != static_cast<std::size_t>(sites_)) {
    throw std::invalid_argument("occupation vector has " + std::to_string(occ.size()) +
                                " entries, basis has " + std::to_string(sites_) + " sites");
  }
  for (int n : occ) {
    if (n < 0) throw std::invalid_argument("occupation vector has a negative entry");
  }
  const int total = std::accumulate(occ.begin(), occ.end(), 0);
  if (total != bosons_) {
    throw std::invalid_argument("occupation vector holds " + std::to_string(total) +
                                " bosons, basis holds " + std::to_string(bosons_));
  }
  return *find(occ);
}

std::size_t FockBasis::localized_index(int site) const {
  if (site < 0 || site >= sites_) throw std::out_of_range("site index out of range");
  Occupation occ(static_cast<std::size_t>(sites_), 0);
  occ[static_cast<std::size_t>(site)] = bosons_;
  return index_of(occ);
}

FockBasis enumerate_basis(int sites, int bosons) { return FockBasis(sites, bosons); }

std::size_t state_index(const FockBasis& basis, std::span<const int> occ) {
  return basis.index_of(occ);
}

}  // namespace ionramp
