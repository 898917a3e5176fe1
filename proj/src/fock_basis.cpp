#include "abcage/fock_basis.hpp"

#include <algorithm>
#include <charconv>
#include <functional>
#include <stdexcept>

namespace abcage {

namespace {

// Fills sites [site, n) with `remaining` particles, largest occupation first,
// which yields lexicographically descending order.
void fill(FockState& current, int site, int remaining, int cap, std::vector<FockState>& out) {
  const int n_sites = static_cast<int>(current.size());
  if (site == n_sites - 1) {
    if (remaining <= cap) {
      current[site] = remaining;
      out.push_back(current);
    }
    return;
  }
  const int sites_after = n_sites - site - 1;
  const int hi = std::min(cap, remaining);
  const int lo = std::max(0, remaining - cap * sites_after);
  for (int k = hi; k >= lo; --k) {
    current[site] = k;
    fill(current, site + 1, remaining - k, cap, out);
  }
  current[site] = 0;
}

}  // namespace

FockBasis::FockBasis(int n_sites, int n_particles, std::optional<int> max_occ)
    : n_sites_(n_sites), n_particles_(n_particles) {
  if (n_sites < 1) throw std::invalid_argument("FockBasis: need at least one site");
  if (n_particles < 0) throw std::invalid_argument("FockBasis: negative particle number");
  if (max_occ && *max_occ < 0) throw std::invalid_argument("FockBasis: negative occupation cap");
  max_occ_ = max_occ ? std::min(*max_occ, n_particles) : n_particles;
  if (static_cast<long long>(n_sites) * max_occ_ < n_particles) {
    throw std::invalid_argument("FockBasis: " + std::to_string(n_particles) + " particles do not fit on " +
                                std::to_string(n_sites) + " sites with cap " + std::to_string(max_occ_));
  }
  FockState current(n_sites, 0);
  fill(current, 0, n_particles, max_occ_, states_);
}

std::optional<std::size_t> FockBasis::find(const FockState& occ) const {
  auto it = std::lower_bound(states_.begin(), states_.end(), occ, std::greater<>{});
  if (it == states_.end() || *it != occ) return std::nullopt;
  return static_cast<std::size_t>(it - states_.begin());
}

FockBasis enumerate_basis(int n_sites, int n_particles, std::optional<int> max_occ) {
  return FockBasis(n_sites, n_particles, max_occ);
}

std::size_t state_index(const FockBasis& basis, const FockState& occ) {
  if (auto i = basis.find(occ)) return *i;
  throw std::out_of_range("state_index: " + format_state(occ) + " is not in the basis");
}

Partition partition_of(const FockState& occ) {
  Partition p;
  for (int n : occ) {
    if (n > 0) p.push_back(n);
  }
  std::sort(p.begin(), p.end(), std::greater<>{});
  return p;
}

std::vector<std::size_t> subspace_indices(const FockBasis& basis, const Partition& p) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (partition_of(basis[i]) == p) out.push_back(i);
  }
  return out;
}

std::vector<Partition> partitions_of(const FockBasis& basis) {
  std::vector<Partition> out;
  for (const auto& s : basis.states()) out.push_back(partition_of(s));
  std::sort(out.begin(), out.end(), std::greater<>{});
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

int pair_count(const Partition& p) {
  int total = 0;
  for (int k : p) total += k * (k - 1) / 2;
  return total;
}

std::string format_state(const FockState& occ) {
  std::string out;
  for (std::size_t i = 0; i < occ.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(occ[i]);
  }
  return out;
}

FockState parse_state(std::string_view text) {
  FockState out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find(',', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view field = text.substr(pos, end - pos);
    while (!field.empty() && field.front() == ' ') field.remove_prefix(1);
    while (!field.empty() && field.back() == ' ') field.remove_suffix(1);
    int value = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size() || value < 0) {
      throw std::invalid_argument("parse_state: malformed occupation list '" + std::string(text) + "'");
    }
    out.push_back(value);
    pos = end + 1;
  }
  return out;
}

std::string format_partition(const Partition& p) {
  if (p.empty()) return "0";
  std::string out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) out += '+';
    out += std::to_string(p[i]);
  }
  return out;
}

}  // namespace abcage
