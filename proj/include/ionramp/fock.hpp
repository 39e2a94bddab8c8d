#ifndef IONRAMP_FOCK_HPP
#define IONRAMP_FOCK_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

namespace ionramp {

// Boson counts per site; length L, entries >= 0, summing to N.
using Occupation = std::vector<int>;

/// Number of ways to place N indistinguishable bosons on L sites, binomial(L+N-1, N).
/// Throws std::overflow_error if the count does not fit in std::size_t.
std::size_t dimension(int sites, int bosons);

/// Fixed-N Hilbert space of L sites.
///
/// States are stored in lexicographically descending order of the occupation
/// tuple, so (N,0,...,0) is index 0 and (0,...,0,N) is the last index. The
/// basis is immutable after construction and may be shared across threads.
class FockBasis {
 public:
  FockBasis(int sites, int bosons);

  int sites() const { return sites_; }
  int bosons() const { return bosons_; }
  std::size_t size() const { return size_; }

  std::span<const int> state(std::size_t index) const {
    return {occupations_.data() + index * static_cast<std::size_t>(sites_),
            static_cast<std::size_t>(sites_)};
  }
  int occupation(std::size_t index, int site) const {
    return occupations_[index * static_cast<std::size_t>(sites_) + static_cast<std::size_t>(site)];
  }

  // Index of a valid occupation vector; throws std::invalid_argument otherwise.
  std::size_t index_of(std::span<const int> occ) const;
  std::optional<std::size_t> find(std::span<const int> occ) const;

  // Index of the state with all N bosons on `site`.
  std::size_t localized_index(int site) const;

 private:
  struct OccupationHash {
    std::size_t operator()(const Occupation& occ) const noexcept;
  };

  int sites_;
  int bosons_;
  std::size_t size_;
  std::vector<int> occupations_;
  std::unordered_map<Occupation, std::size_t, OccupationHash> index_;
};

FockBasis enumerate_basis(int sites, int bosons);

std::size_t state_index(const FockBasis& basis, std::span<const int> occ);

}  // namespace ionramp

#endif  // IONRAMP_FOCK_HPP
