#include "abcage/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <utility>

namespace abcage {

std::string to_string(Flux f) { return f == Flux::Pi ? "pi" : "zero"; }

bool operator==(const SiteParams& a, const SiteParams& b) {
  return a.omega == b.omega && a.U == b.U && a.t1_01 == b.t1_01 && a.t1_12 == b.t1_12 && a.tphi == b.tphi;
}

bool operator==(const Bond& a, const Bond& b) { return a.i == b.i && a.j == b.j && a.t == b.t; }

bool operator==(const LatticeSpec& a, const LatticeSpec& b) {
  return a.sites_ == b.sites_ && a.bonds_ == b.bonds_ && a.labels_ == b.labels_;
}

LatticeSpec::LatticeSpec(std::vector<SiteParams> sites, std::vector<Bond> bonds, std::vector<std::string> labels)
    : sites_(std::move(sites)), bonds_(std::move(bonds)), labels_(std::move(labels)) {
  const int n = n_sites();
  if (n < 1) throw std::invalid_argument("LatticeSpec: no sites");
  for (const auto& s : sites_) {
    for (const auto& time : {s.t1_01, s.t1_12, s.tphi}) {
      if (time && !(*time > 0.0)) throw std::invalid_argument("LatticeSpec: noise times must be positive");
    }
  }
  std::set<std::pair<int, int>> seen;
  for (const auto& b : bonds_) {
    if (b.i < 0 || b.j < 0 || b.i >= n || b.j >= n) {
      throw std::invalid_argument("LatticeSpec: bond endpoint out of range");
    }
    if (b.i == b.j) throw std::invalid_argument("LatticeSpec: self bond on site " + std::to_string(b.i));
    if (!seen.insert(std::minmax(b.i, b.j)).second) {
      throw std::invalid_argument("LatticeSpec: duplicate bond " + std::to_string(b.i) + "-" + std::to_string(b.j));
    }
  }
  if (labels_.empty()) {
    for (int i = 0; i < n; ++i) labels_.push_back(std::to_string(i));
  } else if (static_cast<int>(labels_.size()) != n) {
    throw std::invalid_argument("LatticeSpec: label count does not match site count");
  }
}

std::optional<int> LatticeSpec::site_index(const std::string& label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) return std::nullopt;
  return static_cast<int>(it - labels_.begin());
}

const Bond* LatticeSpec::find_bond(int i, int j) const {
  for (const auto& b : bonds_) {
    if ((b.i == i && b.j == j) || (b.i == j && b.j == i)) return &b;
  }
  return nullptr;
}

LatticeSpec LatticeSpec::with_detuning(int site, double delta) const {
  auto sites = sites_;
  sites.at(site).omega += delta;
  return LatticeSpec(std::move(sites), bonds_, labels_);
}

LatticeSpec LatticeSpec::with_sites(std::vector<SiteParams> sites) const {
  if (sites.size() != sites_.size()) throw std::invalid_argument("with_sites: site count mismatch");
  return LatticeSpec(std::move(sites), bonds_, labels_);
}

double LatticeSpec::mean_abs_tunneling() const {
  if (bonds_.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& b : bonds_) sum += std::abs(b.t);
  return sum / static_cast<double>(bonds_.size());
}

LatticeSpec plaquette(Flux flux, const PlaquetteTunnelings& t, double omega, double U) {
  for (double v : {t.lt, t.lb, t.rt, t.rb}) {
    if (!(std::abs(v) > 0.0)) throw std::invalid_argument("plaquette: tunneling magnitudes must be nonzero");
  }
  enum { L = 0, T = 1, B = 2, R = 3 };
  const double rt = flux == Flux::Pi ? -std::abs(t.rt) : std::abs(t.rt);
  std::vector<Bond> bonds = {
      {L, T, std::abs(t.lt)},
      {L, B, std::abs(t.lb)},
      {R, T, rt},
      {R, B, std::abs(t.rb)},
  };
  std::vector<SiteParams> sites(4, SiteParams{omega, U, {}, {}, {}});
  return LatticeSpec(std::move(sites), std::move(bonds), {"L", "T", "B", "R"});
}

LatticeSpec rhombus_chain(int n_plaquettes, Flux flux, double t, double omega, double U) {
  if (n_plaquettes < 1) throw std::invalid_argument("rhombus_chain: need at least one plaquette");
  if (!(std::abs(t) > 0.0)) throw std::invalid_argument("rhombus_chain: tunneling must be nonzero");
  if (n_plaquettes == 1) return plaquette(flux, PlaquetteTunnelings::uniform(t), omega, U);

  const double mag = std::abs(t);
  const int n_sites = 3 * n_plaquettes + 1;
  std::vector<Bond> bonds;
  std::vector<std::string> labels(n_sites);
  for (int k = 0; k < n_plaquettes; ++k) {
    const int l = 3 * k, top = l + 1, bot = l + 2, r = l + 3;
    bonds.push_back({l, top, mag});
    bonds.push_back({l, bot, mag});
    bonds.push_back({r, top, flux == Flux::Pi ? -mag : mag});
    bonds.push_back({r, bot, mag});
    labels[l] = "S" + std::to_string(k);
    labels[top] = "T" + std::to_string(k);
    labels[bot] = "B" + std::to_string(k);
  }
  labels[n_sites - 1] = "S" + std::to_string(n_plaquettes);
  std::vector<SiteParams> sites(n_sites, SiteParams{omega, U, {}, {}, {}});
  return LatticeSpec(std::move(sites), std::move(bonds), std::move(labels));
}

std::vector<int> rhombus_cycle(int plaquette) {
  const int l = 3 * plaquette;
  return {l, l + 1, l + 3, l + 2};
}

Flux loop_flux(const LatticeSpec& spec, std::span<const int> cycle) {
  if (cycle.size() < 2) throw std::invalid_argument("loop_flux: cycle needs at least two sites");
  std::size_t len = cycle.size();
  if (cycle.front() == cycle.back()) --len;
  int sign = 1;
  for (std::size_t k = 0; k < len; ++k) {
    const int a = cycle[k];
    const int b = cycle[(k + 1) % len];
    const Bond* bond = spec.find_bond(a, b);
    if (!bond) {
      throw std::invalid_argument("loop_flux: no bond between sites " + std::to_string(a) + " and " +
                                  std::to_string(b));
    }
    if (bond->t < 0) sign = -sign;
  }
  return sign < 0 ? Flux::Pi : Flux::Zero;
}

LatticeSpec gauge_transform(const LatticeSpec& spec, int site) {
  if (site < 0 || site >= spec.n_sites()) throw std::invalid_argument("gauge_transform: site out of range");
  auto bonds = spec.bonds();
  for (auto& b : bonds) {
    if (b.i == site || b.j == site) b.t = -b.t;
  }
  return LatticeSpec(spec.sites(), std::move(bonds), spec.labels());
}

}  // namespace abcage
