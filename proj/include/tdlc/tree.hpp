#pragma once

// Geometry of the d-regular edge-colored tree.
//
// A vertex is addressed by the non-backtracking word of edge colors on the
// path from the base vertex. The edge joining v and v.c has color c, so every
// vertex carries exactly one edge of each color.

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tdlc {

using Color = std::uint8_t;
using Word = std::vector<Color>;

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Raised when a truncated computation needs a larger horizon or budget.
class HorizonError : public Error {
public:
  using Error::Error;
};

/// Raised when two routes that must agree by theorem disagree.
class InvariantViolation : public Error {
public:
  using Error::Error;
};

class VertexAddr {
public:
  VertexAddr() = default;
  explicit VertexAddr(Word word);

  const Word& word() const { return word_; }
  std::size_t depth() const { return word_.size(); }
  bool is_base() const { return word_.empty(); }
  Color last() const { return word_.back(); }
  VertexAddr parent() const;
  VertexAddr ancestor(std::size_t depth) const;

  std::string str() const;
  static VertexAddr parse(std::string_view text);

  auto operator<=>(const VertexAddr&) const = default;
  bool operator==(const VertexAddr&) const = default;

private:
  Word word_;
};

struct VertexHash {
  std::size_t operator()(const VertexAddr& v) const;
};

struct TreeParams {
  int degree = 3;
  static constexpr int delta = 0;

  /// Throws for degree < 3.
  void validate() const;
};

using Segment = std::vector<VertexAddr>;

VertexAddr neighbor(const VertexAddr& v, Color c);

std::size_t common_prefix(const VertexAddr& u, const VertexAddr& v);
int distance(const VertexAddr& u, const VertexAddr& v);

/// Edge colors along the geodesic from u to v.
Word path_colors(const VertexAddr& u, const VertexAddr& v);

/// Follow a color sequence from `from`; the sequence need not be reduced.
VertexAddr walk(VertexAddr from, const Word& colors);

Segment geodesic(const VertexAddr& u, const VertexAddr& v);
bool on_geodesic(const VertexAddr& x, const VertexAddr& u, const VertexAddr& v);

std::set<VertexAddr> convex_hull(const std::set<VertexAddr>& s);

/// d(e, [y,z]); the Gromov product is always an integer on a tree.
int gromov_product(const VertexAddr& y, const VertexAddr& z, const VertexAddr& e);

/// Vertices within distance r of c, in BFS order with colors ascending.
std::vector<VertexAddr> ball(const VertexAddr& c, int r, int degree);

/// Center of a finite set: a vertex, or the midpoint of the edge (a, b).
struct Center {
  VertexAddr a;
  std::optional<VertexAddr> b;

  bool is_vertex() const { return !b.has_value(); }
  bool operator==(const Center&) const = default;
};

Center center(const std::set<VertexAddr>& s);

/// Eventually periodic end: the ray from the base vertex reading
/// prefix.period.period...
class End {
public:
  End() = default;
  End(Word prefix, Word period);

  const Word& prefix() const { return prefix_; }
  const Word& period() const { return period_; }

  /// Color of the t-th edge of the ray from the base vertex.
  Color letter(std::size_t t) const;
  /// t-th vertex of the ray from the base vertex.
  VertexAddr at(std::size_t t) const;

  std::string str() const;
  static End parse(std::string_view text);

  bool operator==(const End&) const = default;
  auto operator<=>(const End&) const = default;

private:
  Word prefix_;
  Word period_;
};

/// First n+1 vertices of the ray from the canonical prefix vertex.
Segment end_ray(const End& xi, int n);

/// Ray from an arbitrary vertex v toward an end, as an eventually periodic
/// color sequence.
struct Ray {
  VertexAddr start;
  End end;

  /// Number of leading edges before the ray merges into end's base ray.
  std::size_t join_offset() const;
  std::size_t join_depth() const;
  Color letter(std::size_t t) const;
  VertexAddr at(std::size_t t) const;
  /// Edge index from which the color sequence is purely periodic.
  std::size_t periodic_from() const;
};

bool is_reduced(const Word& w);

}  // namespace tdlc
