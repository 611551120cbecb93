#include "tdlc/dynamics.hpp"

#include <algorithm>

namespace tdlc {

namespace {

int perm_order(const Perm& p) {
  Perm q = p;
  int k = 1;
  while (!q.is_identity()) {
    q = q * p;
    ++k;
  }
  return k;
}

bool extends(const VertexAddr& longer, const VertexAddr& shorter) {
  const auto& a = longer.word();
  const auto& b = shorter.word();
  return a.size() >= b.size() && std::equal(b.begin(), b.end(), a.begin());
}

// Image of the end xi under h, together with the ray parameter T from which
// h(rho(t)) extends h(rho(T)) letter by letter.
struct EndImage {
  End end;
  std::size_t t = 0;
  VertexAddr at_t;
  Perm tau;
};

EndImage image_end(const CocycleElement& h, const End& xi) {
  std::size_t q = xi.period().size();
  std::size_t t = std::max<std::size_t>(h.depth(), xi.prefix().size()) + h.base_image().depth() + 1;
  VertexAddr img = h.apply(xi.at(t));
  // Past depth h.depth() every ray vertex uses the same local action, and
  // past |h(eps)| letters no further cancellation is possible.
  const Perm& tau = h.sigma(xi.at(t));
  Word period;
  for (std::size_t i = 0; i < q; ++i) period.push_back(tau(xi.letter(t + i)));
  return {End(img.word(), period), t, img, tau};
}

}  // namespace

VertexAddr Axis::at(long t) const {
  if (t >= 0) return plus.at(split + static_cast<std::size_t>(t));
  return minus.at(split + static_cast<std::size_t>(-t));
}

Segment Axis::window(long from, long to) const {
  Segment out;
  for (long t = from; t <= to; ++t) out.push_back(at(t));
  return out;
}

const Axis& IsometryReport::require_axis() const {
  if (!axis) throw Error("element is not hyperbolic");
  return *axis;
}

End attracting_end(const CocycleElement& g, const VertexAddr& axis_vertex) {
  int ell = distance(axis_vertex, g.apply(axis_vertex));
  if (ell == 0) throw Error("attracting_end needs a hyperbolic element");
  VertexAddr cur = axis_vertex;
  for (int guard = 0;; ++guard) {
    if (guard > 100000) throw HorizonError("orbit never left the representation depth");
    VertexAddr nxt = g.apply(cur);
    if (static_cast<int>(cur.depth()) > g.depth() && nxt.depth() == cur.depth() + ell &&
        extends(nxt, cur))
      break;
    cur = nxt;
  }
  // From here on each orbit segment is the previous one relabelled by tau.
  int ord = perm_order(g.sigma(cur));
  VertexAddr far = cur;
  for (int i = 0; i < ord; ++i) far = g.apply(far);
  Word period(far.word().begin() + static_cast<long>(cur.depth()), far.word().end());
  return End(cur.word(), period);
}

IsometryReport classify(const CocycleElement& g) {
  IsometryReport rep;
  VertexAddr b = g.base_image();
  Segment path = geodesic(VertexAddr(), b);
  std::size_t len = path.size() - 1;
  VertexAddr m;
  if (len % 2 == 0) {
    m = path[len / 2];
    if (g.apply(m) == m) {
      rep.fixed_vertex = m;
      return rep;
    }
  } else {
    VertexAddr u = path[len / 2], w = path[len / 2 + 1];
    if (g.apply(u) == w && g.apply(w) == u) {
      rep.fixed_edge = std::make_pair(u, w);
      return rep;
    }
    m = u;
  }
  rep.kind = IsometryReport::Kind::Hyperbolic;
  rep.ell = distance(m, g.apply(m));
  Axis ax;
  ax.ell = rep.ell;
  ax.plus = attracting_end(g, m);
  ax.minus = attracting_end(g.inverse(), m);
  if (ax.plus == ax.minus) throw InvariantViolation("hyperbolic element with equal ends");
  std::size_t k = 0;
  while (ax.plus.letter(k) == ax.minus.letter(k)) ++k;
  ax.split = k;
  for (long t = -2L * rep.ell; t <= 2L * rep.ell; ++t)
    if (g.apply(ax.at(t)) != ax.at(t + rep.ell))
      throw InvariantViolation("element does not translate its computed axis");
  rep.axis = ax;
  return rep;
}

int end_shift_horizon(const CocycleElement& h, const End& xi) {
  auto im = image_end(h, xi);
  return static_cast<int>(im.t + im.at_t.depth() + xi.prefix().size() + 2 * xi.period().size());
}

std::optional<int> end_shift(const CocycleElement& h, const End& xi) {
  auto im = image_end(h, xi);
  if (im.end != xi) return std::nullopt;
  // The image ray has joined the ray of xi once its vertex lies on it.
  VertexAddr cur = im.at_t;
  std::size_t t = im.t;
  for (;;) {
    if (cur == xi.at(cur.depth())) return static_cast<int>(t) - static_cast<int>(cur.depth());
    cur = neighbor(cur, im.tau(xi.letter(t)));
    ++t;
  }
}

bool stabilizes_end(const CocycleElement& h, const End& xi, int horizon) {
  if (horizon >= 0 && horizon < end_shift_horizon(h, xi))
    throw HorizonError("stabilizes_end: horizon below the exactness bound " +
                       std::to_string(end_shift_horizon(h, xi)));
  return end_shift(h, xi).has_value();
}

namespace {

// Verdict on an eventually periodic or eventually linear displacement
// sequence. Returns 1 bounded, 0 growing, -1 undecided.
int displacement_verdict(const std::vector<int>& d, int step) {
  std::size_t n = d.size();
  std::size_t start = n / 2;
  bool linear = true;
  for (std::size_t i = start + 1; i < n && linear; ++i) linear = d[i] - d[i - 1] == step;
  if (linear) return 0;
  std::size_t span = n - start;
  for (std::size_t p = 1; p <= span / 3; ++p) {
    bool ok = true;
    for (std::size_t i = start; i + p < n && ok; ++i) ok = d[i] == d[i + p];
    if (ok) return 1;
  }
  return -1;
}

}  // namespace

ParabolicVerdict parabolic_routes(const CocycleElement& h, const CocycleElement& g, int horizon) {
  auto rep = classify(g);
  const Axis& ax = rep.require_axis();
  ParabolicVerdict out;
  int need = end_shift_horizon(h, ax.plus);
  if (horizon < 0)
    horizon = std::max(48, 2 * (need + static_cast<int>(ax.plus.period().size()) * 4) / ax.ell + 24);
  out.horizon = horizon;

  out.geometric = stabilizes_end(h, ax.plus);

  // x in par(g^-1) iff g^-n x g^n stays bounded, i.e. d(x g^n y, g^n y) does.
  int verdict = 1;
  for (const VertexAddr& y0 : {ax.origin(), VertexAddr()}) {
    std::vector<int> d;
    VertexAddr y = y0;
    for (int n = 0; n <= horizon; ++n) {
      d.push_back(distance(h.apply(y), y));
      y = g.apply(y);
    }
    int v = displacement_verdict(d, 2 * ax.ell);
    if (v < 0) throw HorizonError("in_parabolic: displacements did not settle");
    verdict = std::min(verdict, v);
  }
  out.definitional = verdict == 1;
  if (out.definitional != out.geometric)
    throw InvariantViolation("in_parabolic: definitional and geometric routes disagree");
  return out;
}

bool in_parabolic(const CocycleElement& h, const CocycleElement& g, int horizon) {
  return parabolic_routes(h, g, horizon).geometric;
}

namespace {

// Per-vertex terminal behaviour of n -> [h fixes g^-n y].
int terminal_fixing(const CocycleElement& h, const CocycleElement& ginv, VertexAddr y, int horizon) {
  std::vector<bool> f;
  for (int n = 0; n <= horizon; ++n) {
    f.push_back(h.apply(y) == y);
    y = ginv.apply(y);
  }
  std::size_t start = f.size() / 2;
  if (std::all_of(f.begin() + static_cast<long>(start), f.end(), [](bool b) { return b; })) return 1;
  std::size_t span = f.size() - start;
  for (std::size_t p = 1; p <= span / 3; ++p) {
    bool ok = true;
    for (std::size_t i = start; i + p < f.size() && ok; ++i) ok = f[i] == f[i + p];
    if (ok) return 0;
  }
  return -1;
}

}  // namespace

bool in_contraction_region(const CocycleElement& h, const CocycleElement& g,
                           const std::vector<VertexAddr>& region, int horizon) {
  auto rep = classify(g);
  const Axis& ax = rep.require_axis();
  if (horizon < 0) {
    std::size_t far = 0;
    for (const auto& y : region) far = std::max(far, y.depth());
    int need = h.depth() + static_cast<int>(h.base_image().depth() + far +
                                            ax.minus.prefix().size() +
                                            4 * ax.minus.period().size());
    horizon = std::max(48, 2 * need / ax.ell + 24);
  }
  CocycleElement ginv = g.inverse();
  for (const auto& y : region) {
    int v = terminal_fixing(h, ginv, y, horizon);
    if (v < 0) throw HorizonError("in_contraction: no stabilization within the horizon");
    if (v == 0) return false;
  }
  return true;
}

bool in_contraction(const CocycleElement& h, const CocycleElement& g,
                    const std::optional<FixatorSpec>& k, int horizon, int radius) {
  auto rep = classify(g);
  const Axis& ax = rep.require_axis();
  std::vector<VertexAddr> candidates = ball(ax.origin(), radius, h.scheme()->degree());
  std::vector<VertexAddr> region;
  if (!k) {
    region = candidates;
  } else {
    // g-invariance of K = Fix(A): K fixes gA and g^-1 A.
    std::vector<VertexAddr> target = candidates;
    CocycleElement ginv = g.inverse();
    for (const auto& a : k->fixed) {
      target.push_back(g.apply(a));
      target.push_back(ginv.apply(a));
    }
    FixatorEngine eng(*k, target);
    for (const auto& a : k->fixed)
      if (!eng.fixes_vertex(g.apply(a)) || !eng.fixes_vertex(ginv.apply(a)))
        throw Error("in_contraction: K is not g-invariant");
    for (const auto& y : candidates)
      if (eng.fixes_vertex(y)) region.push_back(y);
  }
  return in_contraction_region(h, g, region, horizon);
}

}  // namespace tdlc
