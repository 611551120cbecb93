#pragma once

#include <memory>
#include <random>

#include "tdlc/scheme.hpp"

namespace testutil {

inline tdlc::SchemePtr make(tdlc::GroupScheme s) {
  return std::make_shared<const tdlc::GroupScheme>(std::move(s));
}

inline tdlc::VertexAddr V(const char* s) { return tdlc::VertexAddr::parse(s); }

/// Random legal element: random root action, children pick a random
/// element of the parent's coset by the edge group.
inline tdlc::CocycleElement random_element(const tdlc::SchemePtr& s, int depth, int base_radius,
                                           std::mt19937& rng) {
  using namespace tdlc;
  auto verts = base_ball(depth, s->degree());
  std::map<VertexAddr, int> idx;
  std::map<VertexAddr, Perm> sig;
  for (auto& v : verts) {
    int a;
    if (v.is_base()) {
      a = int(rng() % s->local_order());
    } else {
      const auto& e = s->edge_group(v.last());
      a = s->mul(idx.at(v.parent()), e[rng() % e.size()]);
    }
    idx[v] = a;
    sig.emplace(v, s->perm(a));
  }
  auto near = ball(VertexAddr(), base_radius, s->degree());
  return CocycleElement(s, near[rng() % near.size()], depth, std::move(sig));
}

}  // namespace testutil
