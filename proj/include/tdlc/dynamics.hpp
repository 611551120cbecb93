#pragma once

// Dynamics of single elements: classification, axes and ends, end
// stabilizers, parabolic and contraction membership, absorbing sets.

#include <optional>
#include <string>
#include <vector>

#include "tdlc/restrict.hpp"
#include "tdlc/scheme.hpp"

namespace tdlc {

/// Axis of a hyperbolic element: gamma(t) follows xi_plus for t >= 0 and
/// xi_minus for t < 0, and g(gamma(t)) = gamma(t + ell).
struct Axis {
  End plus;
  End minus;
  std::size_t split = 0;  // gamma(0) is plus.at(split)
  int ell = 0;

  VertexAddr at(long t) const;
  VertexAddr origin() const { return at(0); }
  Segment window(long from, long to) const;
  /// Ray from gamma(t) toward xi_minus (backward) or xi_plus (forward).
  Ray backward_ray(long t) const { return Ray{at(t), minus}; }
  Ray forward_ray(long t) const { return Ray{at(t), plus}; }
};

struct IsometryReport {
  enum class Kind { Bounded, Hyperbolic };
  Kind kind = Kind::Bounded;
  int ell = 0;
  std::optional<VertexAddr> fixed_vertex;
  /// Endpoints of an inverted edge.
  std::optional<std::pair<VertexAddr, VertexAddr>> fixed_edge;
  std::optional<Axis> axis;

  bool hyperbolic() const { return kind == Kind::Hyperbolic; }
  const Axis& require_axis() const;
};

IsometryReport classify(const CocycleElement& g);

/// Attracting end of a hyperbolic g, read off the orbit of an axis vertex.
End attracting_end(const CocycleElement& g, const VertexAddr& axis_vertex);

/// The shift b with h(rho(t)) = rho(t - b) for all large t, rho the ray from
/// the base vertex to xi; empty when h does not stabilize xi. Exact.
std::optional<int> end_shift(const CocycleElement& h, const End& xi);

/// Smallest horizon at which end_shift is exact for h.
int end_shift_horizon(const CocycleElement& h, const End& xi);

/// Throws HorizonError when horizon < end_shift_horizon(h, xi); a negative
/// horizon selects it automatically.
bool stabilizes_end(const CocycleElement& h, const End& xi, int horizon = -1);

/// h in par(g^-1), the elements with bounded conjugates g^-n h g^n (n >= 0).
/// Route (a) watches d(h g^n y, g^n y); route (b) asks whether h stabilizes
/// xi_plus(g). Throws InvariantViolation if they disagree.
struct ParabolicVerdict {
  bool definitional = false;
  bool geometric = false;
  int horizon = 0;
};
ParabolicVerdict parabolic_routes(const CocycleElement& h, const CocycleElement& g, int horizon = -1);
bool in_parabolic(const CocycleElement& h, const CocycleElement& g, int horizon = -1);

/// h in con(g/K): for every vertex y fixed by K within `radius` of the axis
/// origin, h fixes g^-n(y) for all n in a terminal segment of [0, horizon].
/// Pass K = nullopt for the trivial subgroup.
bool in_contraction(const CocycleElement& h, const CocycleElement& g,
                    const std::optional<FixatorSpec>& k = std::nullopt, int horizon = -1,
                    int radius = 2);

/// Same test over an explicit list of vertices y.
bool in_contraction_region(const CocycleElement& h, const CocycleElement& g,
                           const std::vector<VertexAddr>& region, int horizon = -1);

/// Convex g-invariant subspace used by the contraction criteria.
struct Subspace {
  enum class Kind { Whole, Axis, FixedBy };
  Kind kind = Kind::Whole;
  std::optional<Axis> axis;
  std::vector<CocycleElement> elements;

  static Subspace whole() { return {}; }
  static Subspace along(const Axis& a) { return {Kind::Axis, a, {}}; }
  static Subspace fixed_by(std::vector<CocycleElement> es) {
    return {Kind::FixedBy, std::nullopt, std::move(es)};
  }
  bool contains(const VertexAddr& v) const;
  /// Vertices of the subspace within distance r of c (c must lie in it).
  std::vector<VertexAddr> ball(const VertexAddr& c, int r, int degree) const;
  std::string str() const;
};

struct AbsorbingWitness {
  End xi;
  std::vector<int> times;
  std::vector<int> radii;         // raw r_t, -1 when rho(t) is outside Z
  std::vector<int> regularized;   // suffix minima, nondecreasing
  int horizon = 0;
  int stretch = 0;
  bool absorbing = false;
};

/// Z is the set of vertices of Y fixed by every element of `c`. r_t is the
/// largest r <= min(t, cap) with the Y-ball of radius r around ray(t) inside
/// Z. Absorbing iff the suffix minima of r_t grow by at least one every
/// `stretch` steps over the horizon.
AbsorbingWitness is_absorbing(const std::vector<CocycleElement>& c, const Ray& ray,
                              const Subspace& y, int degree, int horizon = 16, int stretch = 4,
                              int cap = -1);

/// Theorem-level check: the fixed set of <C> in Y absorbs xi_minus(g) iff each
/// element of C lies in con(g / Fix(Y)). Throws InvariantViolation on
/// disagreement.
struct ContractionReport {
  bool geometric = false;
  std::vector<bool> per_element;
  AbsorbingWitness witness;
};
ContractionReport contraction_geometric(const std::vector<CocycleElement>& c,
                                        const CocycleElement& g, const Subspace& y,
                                        int horizon = 16);

/// Restrictions to ball(gamma(0), radius) of the intersection of g^k U g^-k
/// over |k| <= K, for K growing until the set is unchanged `window` times.
RestrictionSet nub_approx(const CocycleElement& g, const FixatorSpec& u, int radius,
                          int max_shift = 8, int window = 3);

struct ContractionSpaceReport {
  bool z_subset_gz = false;
  bool covers_y = false;
  bool intersection_empty = false;
  std::size_t z_size = 0;
  std::size_t y_size = 0;
  /// True when the union of translates of Z inside the ball is the axis.
  bool union_is_axis = false;
  /// Ball vertices lying in some g^n Z, 0 <= n <= horizon.
  std::vector<VertexAddr> covered;
  int horizon = 0;
};

/// Z = (vertices fixed by W) intersected with Y, examined on the Y-ball of
/// `radius` around gamma(0); translates are taken for 0 <= n <= horizon.
/// W = nullopt stands for the trivial subgroup.
ContractionSpaceReport contraction_space_check(const CocycleElement& g, const Subspace& y,
                                               const std::optional<FixatorSpec>& w, int radius,
                                               int horizon);

/// Fix({x} and the halftree beyond gamma(-m) away from gamma(0)): the
/// truncation of con(g) intersected with Fix(x) used on trees.
FixatorSpec contraction_fixator(const Axis& axis, const SchemePtr& s, const VertexAddr& x, int m);

}  // namespace tdlc
