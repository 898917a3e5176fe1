#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace abcage {

/// Occupation numbers, one entry per site.
using FockState = std::vector<int>;

/// Nonzero occupations sorted descending, e.g. {2, 1} for the "2+1" sector.
using Partition = std::vector<int>;

/// All Fock states with a fixed particle number, in lexicographically
/// descending order. Immutable once built.
class FockBasis {
 public:
  /// `max_occ` caps the occupation of every site; nullopt means unlimited.
  /// Throws std::invalid_argument when the cap cannot hold `n_particles`.
  FockBasis(int n_sites, int n_particles, std::optional<int> max_occ = std::nullopt);

  int n_sites() const { return n_sites_; }
  int n_particles() const { return n_particles_; }
  /// Effective per-site cap (equals n_particles when unlimited).
  int max_occ() const { return max_occ_; }
  bool hard_core() const { return max_occ_ == 1 && n_particles_ > 1; }

  std::size_t size() const { return states_.size(); }
  const FockState& operator[](std::size_t i) const { return states_[i]; }
  const std::vector<FockState>& states() const { return states_; }

  std::optional<std::size_t> find(const FockState& occ) const;

 private:
  int n_sites_;
  int n_particles_;
  int max_occ_;
  std::vector<FockState> states_;
};

FockBasis enumerate_basis(int n_sites, int n_particles, std::optional<int> max_occ = std::nullopt);

/// Position of `occ` in the basis; throws std::out_of_range if absent.
std::size_t state_index(const FockBasis& basis, const FockState& occ);

Partition partition_of(const FockState& occ);

std::vector<std::size_t> subspace_indices(const FockBasis& basis, const Partition& p);

/// Distinct partitions present in the basis, lexicographically descending.
std::vector<Partition> partitions_of(const FockBasis& basis);

/// Interaction count sum_p p(p-1)/2; multiply by U for the on-site energy.
int pair_count(const Partition& p);

/// "2,0,1,0"
std::string format_state(const FockState& occ);
/// Inverse of format_state; throws std::invalid_argument on malformed text.
FockState parse_state(std::string_view text);

/// "2+1"
std::string format_partition(const Partition& p);

}  // namespace abcage
