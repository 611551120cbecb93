#pragma once

// Fixators and the restriction engine.
//
// U = Fix_G(A) for A a finite set, optionally together with rays (fixed
// pointwise) and halftrees (fixed pointwise). Every g in U fixes a root r,
// so g is determined on a finite subtree H containing r by its local actions
// on H. The engine runs a dynamic program over H: for a vertex v and local
// action a, the set of relative images of the target vertices below v is the
// product over children w of the union over a' in a.E_c of the sets at (w, a').
// Vertices outside H carry no constraint, so every assignment on H extends to
// a legal element by copying local actions outward.

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "tdlc/scheme.hpp"

namespace tdlc {

/// Exact, or read off at horizon R after the count stopped changing.
struct Certification {
  enum class Kind { Exact, StabilizedAt, Undetermined };
  Kind kind = Kind::Exact;
  int horizon = 0;

  static Certification exact() { return {}; }
  static Certification stabilized(int r) { return {Kind::StabilizedAt, r}; }
  static Certification undetermined(int r = 0) { return {Kind::Undetermined, r}; }
  bool is_exact() const { return kind == Kind::Exact; }
  std::string str() const;
};

/// Halftree: the component containing `outer` after removing the edge
/// (inner, outer).
struct Halftree {
  VertexAddr inner;
  VertexAddr outer;
  bool operator<(const Halftree& o) const {
    return std::tie(inner, outer) < std::tie(o.inner, o.outer);
  }
  bool operator==(const Halftree&) const = default;
};

struct FixatorSpec {
  SchemePtr scheme;
  std::set<VertexAddr> fixed;
  std::vector<Ray> rays;
  std::vector<Halftree> halftrees;

  FixatorSpec() = default;
  FixatorSpec(SchemePtr s, std::set<VertexAddr> f) : scheme(std::move(s)), fixed(std::move(f)) {}
  FixatorSpec with(const std::set<VertexAddr>& more) const;
  std::string str() const;
};

struct RestrictionSet {
  std::vector<VertexAddr> target;
  /// Each entry lists the images of target, in order.
  std::set<std::vector<VertexAddr>> images;
  Certification cert;
  std::size_t size() const { return images.size(); }
};

struct EngineOptions {
  /// Cap on stored partial restrictions; exceeding it throws HorizonError.
  std::size_t budget = 2'000'000;
};

class FixatorEngine {
public:
  FixatorEngine(const FixatorSpec& u, const std::vector<VertexAddr>& target,
                EngineOptions opts = {});

  const VertexAddr& root() const { return root_; }
  RestrictionSet restrictions();
  /// Number of restrictions, without materializing them.
  std::size_t count();
  /// Local-action indices realized at x by elements of U; x must lie in H.
  std::vector<int> realizable(const VertexAddr& x);
  bool in_hull(const VertexAddr& x) const { return index_.count(x) > 0; }
  /// True iff every element of U fixes x; x must lie in H.
  bool fixes_vertex(const VertexAddr& x);
  /// True iff every element of U fixes the ray from the root to xi.
  bool fixes_root_ray(const End& xi);
  /// False when U is empty, i.e. the constraints are inconsistent.
  bool nonempty();
  /// An element of U with the given images of the target, or nullopt when
  /// there is none or no element with eventually constant local actions along
  /// the fixed rays exists. With rng, free choices are made at random.
  std::optional<CocycleElement> realize(const std::vector<VertexAddr>& images,
                                        std::mt19937* rng = nullptr);

private:
  struct Node {
    VertexAddr v;
    int parent = -1;
    Color up = 0;  // color of the edge to the parent
    std::vector<std::pair<Color, int>> children;
    std::vector<Color> fixed_children;
    bool frozen = false;
    int tail = -1;  // index into tails_
    int target_slot = -1;
    bool has_target_below = false;
  };
  struct TailInfo {
    Ray ray;
    std::size_t t0 = 0;  // last ray index inside H
    std::size_t period = 0;
    std::vector<std::vector<bool>> allowed;  // by phase, from t0 onward
  };
  /// Image words of the target slots below a node, each followed by kEnd.
  using Partial = std::string;
  using PartialSet = std::set<Partial>;

  bool local_ok(int n, int a) const;
  bool viable(int n, int a);
  const PartialSet& maps(int n, int a);
  void compute_realizable();
  std::vector<std::vector<bool>> tail_sets(const Ray& ray, std::size_t t0) const;
  bool assign(int n, int a, const std::vector<Word>& need, std::size_t from, std::vector<int>& sigma,
              std::mt19937* rng);
  std::size_t slots_below(int n) const;

  SchemePtr s_;
  EngineOptions opts_;
  VertexAddr root_;
  std::vector<Node> nodes_;
  std::map<VertexAddr, int> index_;
  std::vector<VertexAddr> target_;
  std::vector<int> slot_order_;  // DP order position -> target index
  std::vector<TailInfo> tails_;
  std::vector<Halftree> halftrees_;
  std::vector<std::vector<signed char>> viable_;
  std::vector<std::vector<std::unique_ptr<PartialSet>>> maps_;
  std::map<std::pair<int, int>, std::unique_ptr<PartialSet>> options_;
  std::vector<std::vector<bool>> realizable_;
  bool realizable_done_ = false;
  std::size_t stored_ = 0;
};

RestrictionSet enumerate_restrictions(const FixatorSpec& u, const std::vector<VertexAddr>& b,
                                      EngineOptions opts = {});

std::size_t count_restrictions(const FixatorSpec& u, const std::vector<VertexAddr>& b,
                               EngineOptions opts = {});

/// |Fix(A) : Fix(A and extra)|.
struct IndexResult {
  std::size_t value = 0;
  Certification cert;
};
IndexResult fixator_index(const FixatorSpec& u, const std::vector<VertexAddr>& extra,
                          EngineOptions opts = {});

/// True iff every element of U fixes the ray from y to xi pointwise.
bool fixes_ray(const FixatorSpec& u, const VertexAddr& y, const End& xi);

/// Brute force: all restrictions to the radius-r ball around the base vertex
/// of legal elements fixing it, enumerated without pruning and checked
/// against the scheme definition independently of the engine.
struct OracleResult {
  std::vector<VertexAddr> ball;
  std::set<std::vector<VertexAddr>> images;
  std::size_t assignments_tried = 0;
};
OracleResult oracle_ball_group(const SchemePtr& s, int r, std::size_t budget = 20'000'000);

/// Oracle restricted to elements fixing `fixed` (a subset of the ball),
/// reporting images of `target` (also in the ball).
std::set<std::vector<VertexAddr>> oracle_restrictions(const SchemePtr& s, int r,
                                                      const std::set<VertexAddr>& fixed,
                                                      const std::vector<VertexAddr>& target,
                                                      std::size_t budget = 20'000'000);

}  // namespace tdlc
