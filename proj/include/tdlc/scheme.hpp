#pragma once

// Local constraint systems on the colored tree, and exactly represented
// tree automorphisms (cocycle elements).
//
// A scheme fixes a local action group A <= Sym(d) and, for each color c, an
// edge group E_c <= Stab_A(c). An automorphism g belongs to the scheme's group
// when sigma(g, v) lies in A for every vertex v and, for every edge (v, w) of
// color c, sigma(g, v)^-1 sigma(g, w) lies in E_c. The requirement that E_c
// fixes c is what makes the local actions agree on the color of each edge.

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "tdlc/perm.hpp"
#include "tdlc/tree.hpp"

namespace tdlc {

enum class SchemeKind { Full, Universal, CoupledWreath };

class GroupScheme {
public:
  static GroupScheme full(int degree);
  static GroupScheme universal(const PermGroup& f);
  static GroupScheme coupled_wreath(int n);
  static GroupScheme from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  SchemeKind kind() const { return kind_; }
  std::string name() const;
  int degree() const { return degree_; }
  int wreath_n() const { return wreath_n_; }
  const PermGroup& local_group() const { return local_; }
  /// Flags raised for degenerate inputs (non-transitive F, trivial edge groups).
  const std::vector<std::string>& flags() const { return flags_; }

  // Local actions are handled by their index in local_group().elements().
  int local_order() const { return static_cast<int>(local_.order()); }
  int identity_index() const { return identity_; }
  int mul(int a, int b) const { return mul_[a * local_order() + b]; }
  int inv(int a) const { return inv_[a]; }
  Color act(int a, Color c) const { return static_cast<Color>(local_.elements()[a](c)); }
  const Perm& perm(int a) const { return local_.elements()[a]; }
  int index(const Perm& p) const { return local_.index_of(p); }

  /// E_c as a list of local-action indices.
  const std::vector<int>& edge_group(Color c) const { return edge_[c]; }
  /// a^-1 b in E_c.
  bool edge_ok(int a, int b, Color c) const { return edge_member_[c][mul(inv(a), b)]; }

  /// The coupling group before intersecting with Stab(c): S_j for the
  /// coupled wreath scheme, all of A for universal schemes.
  bool coupling_ok(const Perm& a, const Perm& b, Color c) const;

private:
  void finish();

  SchemeKind kind_ = SchemeKind::Full;
  int degree_ = 0;
  int wreath_n_ = 0;
  PermGroup local_;
  std::vector<PermGroup> coupling_;
  std::vector<std::vector<int>> edge_;
  std::vector<std::vector<bool>> edge_member_;
  std::vector<int> mul_;
  std::vector<int> inv_;
  int identity_ = 0;
  std::vector<std::string> flags_;
};

using SchemePtr = std::shared_ptr<const GroupScheme>;

/// A tree automorphism given by the image of the base vertex and local
/// actions on the ball of radius `depth`; a deeper vertex uses the local
/// action of its ancestor at depth `depth`.
class CocycleElement {
public:
  CocycleElement() = default;
  /// Throws when a vertex of depth <= depth is missing from sigma.
  CocycleElement(SchemePtr scheme, VertexAddr base_image, int depth,
                 std::map<VertexAddr, Perm> sigma);

  static CocycleElement identity(SchemePtr scheme);
  /// Local action `p` at every vertex.
  static CocycleElement constant(SchemePtr scheme, VertexAddr base_image, const Perm& p);

  const SchemePtr& scheme() const { return scheme_; }
  const VertexAddr& base_image() const { return base_; }
  int depth() const { return depth_; }
  const std::map<VertexAddr, Perm>& sigma_map() const { return sigma_; }

  const Perm& sigma(const VertexAddr& v) const;
  VertexAddr apply(const VertexAddr& v) const;
  /// The unique u with apply(u) == v.
  VertexAddr preimage(const VertexAddr& v) const;

  bool is_legal() const;
  /// Reasons for illegality, empty when legal.
  std::vector<std::string> legality_problems() const;

  CocycleElement compose(const CocycleElement& h) const;  // this after h
  CocycleElement inverse() const;
  CocycleElement power(int k) const;
  /// Smallest depth that represents the same automorphism.
  CocycleElement normalized() const;

  /// Equality as automorphisms.
  bool operator==(const CocycleElement& o) const;

  nlohmann::json to_json() const;
  static CocycleElement from_json(SchemePtr scheme, const nlohmann::json& j);

private:
  SchemePtr scheme_;
  VertexAddr base_;
  int depth_ = 0;
  std::map<VertexAddr, Perm> sigma_;
};

CocycleElement operator*(const CocycleElement& g, const CocycleElement& h);

/// Built-in elements: "identity", "standard_translation",
/// "local_perturbation" (params: vertex, perm) and "translation"
/// (params: length; constant local action, any scheme containing (0 1)).
CocycleElement builtin_element(SchemePtr scheme, const std::string& name,
                               const nlohmann::json& params = nlohmann::json::object());

/// Element fixing the base vertex with local action `p` at v and on the
/// subtree below v, identity elsewhere. Throws when it is not legal.
CocycleElement local_perturbation(SchemePtr scheme, const VertexAddr& v, const Perm& p);

/// Vertices of depth at most r around the base vertex, BFS order.
std::vector<VertexAddr> base_ball(int r, int degree);

}  // namespace tdlc
