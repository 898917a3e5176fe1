#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace abcage {

/// Flux per plaquette. Only 0 and pi are realisable with real tunnelings.
enum class Flux { Zero, Pi };

std::string to_string(Flux f);

/// On-site parameters. Energies in rad/us, noise times in us.
struct SiteParams {
  double omega = 0.0;
  double U = 0.0;  // negative for attraction
  std::optional<double> t1_01;
  std::optional<double> t1_12;
  std::optional<double> tphi;
};

/// Tunneling between sites i and j; the Hamiltonian carries -t (b_i^+ b_j + h.c.).
struct Bond {
  int i = 0;
  int j = 0;
  double t = 0.0;
};

/// Sites plus signed bonds. Flux lives entirely in the bond signs.
class LatticeSpec {
 public:
  LatticeSpec(std::vector<SiteParams> sites, std::vector<Bond> bonds, std::vector<std::string> labels = {});

  int n_sites() const { return static_cast<int>(sites_.size()); }
  const std::vector<SiteParams>& sites() const { return sites_; }
  const SiteParams& site(int i) const { return sites_.at(i); }
  const std::vector<Bond>& bonds() const { return bonds_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(int i) const { return labels_.at(i); }
  std::optional<int> site_index(const std::string& label) const;

  /// Bond between i and j in either orientation, if present.
  const Bond* find_bond(int i, int j) const;

  /// Copy with omega of `site` shifted by `delta` (rad/us).
  LatticeSpec with_detuning(int site, double delta) const;
  /// Copy with the on-site parameters replaced; bonds and labels kept.
  LatticeSpec with_sites(std::vector<SiteParams> sites) const;

  double mean_abs_tunneling() const;

  friend bool operator==(const LatticeSpec&, const LatticeSpec&);

 private:
  std::vector<SiteParams> sites_;
  std::vector<Bond> bonds_;
  std::vector<std::string> labels_;
};

bool operator==(const SiteParams& a, const SiteParams& b);
bool operator==(const Bond& a, const Bond& b);

/// Tunneling magnitudes of the four plaquette bonds.
struct PlaquetteTunnelings {
  double lt = 0.0;
  double lb = 0.0;
  double rt = 0.0;
  double rb = 0.0;

  static PlaquetteTunnelings uniform(double t) { return {t, t, t, t}; }
};

/// Four-site rhombus with sites ordered L, T, B, R. For pi flux the R-T
/// bond is negative. Throws std::invalid_argument on a zero tunneling.
LatticeSpec plaquette(Flux flux, const PlaquetteTunnelings& t, double omega, double U);

/// Chain of rhombi sharing spinal sites. Site 3k is the left spinal site of
/// plaquette k, 3k+1 and 3k+2 its top and bottom caps; 3P+1 sites total.
LatticeSpec rhombus_chain(int n_plaquettes, Flux flux, double t, double omega, double U);

/// Site cycle L, T, R, B of plaquette k in a rhombus_chain.
std::vector<int> rhombus_cycle(int plaquette);

/// Pi if the product of bond signs around `cycle` is negative. The cycle is
/// closed implicitly (last site back to first). Throws if a bond is missing.
Flux loop_flux(const LatticeSpec& spec, std::span<const int> cycle);

/// Flips the sign of every bond touching `site`.
LatticeSpec gauge_transform(const LatticeSpec& spec, int site);

}  // namespace abcage
