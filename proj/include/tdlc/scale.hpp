#pragma once

// Scale of an element by three independent routes, geometric tidiness
// criteria, the modular function as an index ratio, and the uniscalar
// equivalences for hyperbolic elements.

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tdlc/axis_tree.hpp"
#include "tdlc/dynamics.hpp"

namespace tdlc {

struct Verdict {
  bool value = false;
  Certification cert;

  bool determined() const { return cert.kind != Certification::Kind::Undetermined; }
  std::string str() const;
};

/// Reduced fraction num/den.
struct Rational {
  std::size_t num = 1;
  std::size_t den = 1;

  static Rational of(std::size_t n, std::size_t d);
  bool operator==(const Rational&) const = default;
  std::string str() const;
};

struct TidyOptions {
  int gta_horizon = 3;     // ray depths R checked for GTA
  int ta_horizon = 3;      // translates used to approximate U_+ and U_-
  int moller_powers = 3;   // powers k in the index test of form (c)
  int plus_horizon = 6;    // translates checked in form (d)
};

struct TidyVerdict {
  Verdict ta, gta, gt_plus, gt_minus, minimizing;
  /// Forms (a)-(d) of GT+ and of GT-.
  std::array<bool, 4> gt_plus_forms{};
  std::array<bool, 4> gt_minus_forms{};
  struct GtaLevel {
    int depth = 0;
    std::size_t pairs = 0, plus = 0, minus = 0;
  };
  std::vector<GtaLevel> gta_levels;
  /// |gUg^-1 : U and gUg^-1| and the same for g^-1.
  std::size_t index = 0;
  std::size_t index_inv = 0;
};

/// U must be the fixator of a finite vertex set.
TidyVerdict check_tidy(const FixatorSpec& u, const CocycleElement& g, const TidyOptions& opts = {});

enum class ScaleRoute { AxisSegment, Branching, Search };
std::string route_name(ScaleRoute r);

struct ScaleReport {
  std::size_t s_g = 0;
  std::size_t s_ginv = 0;
  ScaleRoute route = ScaleRoute::AxisSegment;
  std::optional<FixatorSpec> certifying;
  int t0 = 0;                  // axis route: certified segment length
  std::size_t examined = 0;    // search route: subgroups tried
  int horizon = 0;
  Certification cert;

  Rational delta() const { return Rational::of(s_g, s_ginv); }
};

/// U_t = Fix(gamma[0, t]) for t = ell, 2 ell, ... <= max_t; the first t with
/// check_tidy minimizing gives the scale.
ScaleReport scale_axis(const CocycleElement& g, int max_t = 12, const TidyOptions& opts = {});
/// sigma_{T,x0}(|g|) on the axis trees toward xi_plus and xi_minus.
ScaleReport scale_branching(const CocycleElement& g, int radius = -1);
/// Minimum index over fixators of all subtrees of the ball of radius `bound`
/// around gamma(0).
ScaleReport scale_search(const CocycleElement& g, int bound = 2, std::size_t budget = 200000);

struct ModularReport {
  bool bounded = false;
  /// Delta_{G_xi+}(g) and Delta_{G_xi-}(g^-1) as index ratios.
  Rational plus;
  Rational minus;
  /// Delta_G(g) = plus / minus.
  Rational delta;
};

/// With `known`, checks delta = s_g/s_ginv, plus = s_g and minus = s_ginv and
/// throws InvariantViolation on mismatch.
ModularReport modular(const CocycleElement& g, const ScaleReport* known = nullptr);

struct BatteryOptions {
  int ball_horizon = 4;  // radii tried for the openness flags
};

struct BatteryReport {
  bool bounded = false;
  std::array<Verdict, 7> flags{};
  bool agree = true;
  /// "uniscalar", "not-uniscalar", "undetermined" or "bounded".
  std::string verdict;
  ScaleReport scale;
};

BatteryReport uniscalar_battery(const CocycleElement& g, const BatteryOptions& opts = {});

struct NeighbourhoodReport {
  bool found = false;
  int radius = -1;
  Certification cert;
};

/// Smallest r <= horizon such that the restrictions of Fix(B_r(x)) to the
/// working ball lie in the product of those of U_xi+ and U_xi-.
NeighbourhoodReport tidy_neighbourhood_check(const FixatorSpec& u, const CocycleElement& g,
                                             int horizon = 3);

enum class ArrowCase { UniscalarPair, OpenStabilizer, ArrowToRepelling, NoArrows };
std::string arrow_case_name(ArrowCase c);

struct ArrowReport {
  ArrowCase kind = ArrowCase::NoArrows;
  std::size_t s_g = 0, s_ginv = 0;
  /// Uniscalar pair only: the ray fixators toward each end fix the other ray.
  std::optional<bool> stabilizers_equal;
};

ArrowReport arrow_classify(const CocycleElement& g);

/// Restrictions to the target of U_{xi+} (sign > 0) or U_{xi-} for U the
/// fixator of `fixed`.
RestrictionSet end_part(const FixatorSpec& u, const CocycleElement& g, int sign,
                        const std::vector<VertexAddr>& target);
/// Restrictions to the target of U_{g+} (sign > 0) or U_{g-}, approximated by
/// the fixator of the translates g^{+-n} of the fixed set, 0 <= n <= shifts.
RestrictionSet willis_part(const FixatorSpec& u, const CocycleElement& g, int sign,
                           const std::vector<VertexAddr>& target, int shifts);

}  // namespace tdlc
