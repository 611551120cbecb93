#pragma once

// The axis tree: the union of all axes of translation that share a tail with
// a fixed ray rho, explored backward from rho's start within a radius.

#include <map>
#include <optional>
#include <set>
#include <string>

#include "tdlc/dynamics.hpp"

namespace tdlc {

/// Smallest k in [1, k_max] such that some element of the group translates
/// the ray from v to xi by k along itself, or nullopt. Exact: the local
/// actions along the ray are constrained by a finite automaton whose
/// periodic part is solved as a greatest fixpoint.
std::optional<int> axis_shift(const GroupScheme& s, const VertexAddr& v, const End& xi, int k_max);

/// True iff some element translates the ray from v to xi by exactly k.
bool admits_shift(const GroupScheme& s, const VertexAddr& v, const End& xi, int k);

struct AxisTree {
  SchemePtr scheme;
  Ray rho;  // rho.start is the root of the exploration
  int radius = 0;
  int k_max = 0;
  /// Members below rho.start within the radius, plus rho.start itself.
  std::set<VertexAddr> members;
  /// The first `radius` vertices of rho past its start.
  Segment tail;
  /// Smallest admissible translation length over the explored members.
  int lambda = 0;
  Certification cert;

  const End& xi() const { return rho.end; }
  bool contains(const VertexAddr& v) const;
  /// y <=_T x: the ray from y toward xi passes through x.
  bool below(const VertexAddr& y, const VertexAddr& x) const;
  /// Members below rho.start at distance exactly m from it.
  std::size_t level_size(int m) const;
};

/// Builds T for the ray from gamma(0) toward xi_plus(g) (or xi_minus(g)).
AxisTree build_axis_tree(const CocycleElement& g, int radius, bool toward_plus = true,
                         int k_max = -1);
AxisTree build_axis_tree(const SchemePtr& s, const Ray& rho, int radius, int k_max);

/// beta(h): the shift b with h(rho(t)) = rho(t - b) for deep t. Throws when h
/// does not stabilize xi.
int busemann_beta(const CocycleElement& h, const AxisTree& t);

/// sigma_{T,x0}(m); 1 for m <= 0. Throws HorizonError when members below x0
/// at distance m may lie outside the explored radius.
std::size_t branching_sigma(const AxisTree& t, const VertexAddr& x0, int m);

std::string to_dot(const AxisTree& t);

}  // namespace tdlc
