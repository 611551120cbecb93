#include "tdlc/tree.hpp"

#include <algorithm>
#include <charconv>
#include <deque>
#include <sstream>

namespace tdlc {

bool is_reduced(const Word& w) {
  for (std::size_t i = 1; i < w.size(); ++i)
    if (w[i] == w[i - 1]) return false;
  return true;
}

VertexAddr::VertexAddr(Word word) : word_(std::move(word)) {
  if (!is_reduced(word_)) throw Error("vertex address backtracks");
}

VertexAddr VertexAddr::parent() const {
  VertexAddr p = *this;
  p.word_.pop_back();
  return p;
}

VertexAddr VertexAddr::ancestor(std::size_t depth) const {
  if (depth >= word_.size()) return *this;
  VertexAddr a;
  a.word_.assign(word_.begin(), word_.begin() + static_cast<std::ptrdiff_t>(depth));
  return a;
}

namespace {

std::string format_word(const Word& w) {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += '.';
    out += std::to_string(int(w[i]));
  }
  return out;
}

Word parse_word(std::string_view text) {
  Word w;
  if (text.empty()) return w;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t dot = text.find('.', pos);
    if (dot == std::string_view::npos) dot = text.size();
    auto piece = text.substr(pos, dot - pos);
    int value = -1;
    auto [ptr, ec] = std::from_chars(piece.data(), piece.data() + piece.size(), value);
    if (ec != std::errc() || ptr != piece.data() + piece.size() || value < 0 || value > 255)
      throw Error("bad color word: " + std::string(text));
    w.push_back(static_cast<Color>(value));
    pos = dot + 1;
  }
  return w;
}

}  // namespace

std::string VertexAddr::str() const { return format_word(word_); }

VertexAddr VertexAddr::parse(std::string_view text) { return VertexAddr(parse_word(text)); }

std::size_t VertexHash::operator()(const VertexAddr& v) const {
  std::size_t h = 1469598103934665603ull;
  for (Color c : v.word()) h = (h ^ (c + 1)) * 1099511628211ull;
  return h ^ v.depth();
}

void TreeParams::validate() const {
  if (degree < 3) throw Error("tree degree must be at least 3");
}

VertexAddr neighbor(const VertexAddr& v, Color c) {
  Word w = v.word();
  if (!w.empty() && w.back() == c)
    w.pop_back();
  else
    w.push_back(c);
  return VertexAddr(std::move(w));
}

std::size_t common_prefix(const VertexAddr& u, const VertexAddr& v) {
  const auto& a = u.word();
  const auto& b = v.word();
  std::size_t n = std::min(a.size(), b.size());
  std::size_t i = 0;
  while (i < n && a[i] == b[i]) ++i;
  return i;
}

int distance(const VertexAddr& u, const VertexAddr& v) {
  return static_cast<int>(u.depth() + v.depth() - 2 * common_prefix(u, v));
}

Word path_colors(const VertexAddr& u, const VertexAddr& v) {
  std::size_t k = common_prefix(u, v);
  Word out;
  for (std::size_t i = u.depth(); i > k; --i) out.push_back(u.word()[i - 1]);
  for (std::size_t i = k; i < v.depth(); ++i) out.push_back(v.word()[i]);
  return out;
}

VertexAddr walk(VertexAddr from, const Word& colors) {
  for (Color c : colors) from = neighbor(from, c);
  return from;
}

Segment geodesic(const VertexAddr& u, const VertexAddr& v) {
  Segment out{u};
  VertexAddr cur = u;
  for (Color c : path_colors(u, v)) {
    cur = neighbor(cur, c);
    out.push_back(cur);
  }
  return out;
}

bool on_geodesic(const VertexAddr& x, const VertexAddr& u, const VertexAddr& v) {
  return distance(u, x) + distance(x, v) == distance(u, v);
}

std::set<VertexAddr> convex_hull(const std::set<VertexAddr>& s) {
  std::set<VertexAddr> hull;
  if (s.empty()) return hull;
  const VertexAddr& root = *s.begin();
  for (const auto& v : s)
    for (auto& x : geodesic(root, v)) hull.insert(std::move(x));
  return hull;
}

int gromov_product(const VertexAddr& y, const VertexAddr& z, const VertexAddr& e) {
  return (distance(e, y) + distance(e, z) - distance(y, z)) / 2;
}

std::vector<VertexAddr> ball(const VertexAddr& c, int r, int degree) {
  std::vector<VertexAddr> out{c};
  std::vector<int> dist{0};
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (dist[i] == r) continue;
    // The neighbor toward c is the one at smaller distance.
    for (int col = 0; col < degree; ++col) {
      VertexAddr n = neighbor(out[i], static_cast<Color>(col));
      if (distance(n, c) != dist[i] + 1) continue;
      out.push_back(std::move(n));
      dist.push_back(dist[i] + 1);
    }
  }
  return out;
}

Center center(const std::set<VertexAddr>& s) {
  if (s.empty()) throw Error("center of empty set");
  // On a tree, a farthest point from any vertex is one end of a diameter.
  const VertexAddr& any = *s.begin();
  auto farthest = [&](const VertexAddr& from) {
    const VertexAddr* best = &from;
    int bd = -1;
    for (const auto& v : s) {
      int d = distance(from, v);
      if (d > bd) {
        bd = d;
        best = &v;
      }
    }
    return *best;
  };
  VertexAddr a = farthest(any);
  VertexAddr b = farthest(a);
  Segment path = geodesic(a, b);
  std::size_t len = path.size() - 1;
  if (len % 2 == 0) return Center{path[len / 2], std::nullopt};
  VertexAddr m1 = path[len / 2];
  VertexAddr m2 = path[len / 2 + 1];
  if (m2 < m1) std::swap(m1, m2);
  return Center{m1, m2};
}

End::End(Word prefix, Word period) : prefix_(std::move(prefix)), period_(std::move(period)) {
  if (period_.size() < 2) throw Error("end period must have length at least 2");
  if (!is_reduced(prefix_) || !is_reduced(period_) || period_.back() == period_.front() ||
      (!prefix_.empty() && prefix_.back() == period_.front()))
    throw Error("end word backtracks");
  // Shortest prefix: roll trailing prefix letters into the period.
  while (!prefix_.empty() && prefix_.back() == period_.back()) {
    period_.insert(period_.begin(), period_.back());
    period_.pop_back();
    prefix_.pop_back();
  }
  // Primitive period.
  std::size_t n = period_.size();
  for (std::size_t p = 1; p < n; ++p) {
    if (n % p) continue;
    bool ok = true;
    for (std::size_t i = p; i < n && ok; ++i) ok = period_[i] == period_[i - p];
    if (ok) {
      period_.resize(p);
      break;
    }
  }
}

Color End::letter(std::size_t t) const {
  if (t < prefix_.size()) return prefix_[t];
  return period_[(t - prefix_.size()) % period_.size()];
}

VertexAddr End::at(std::size_t t) const {
  Word w(t);
  for (std::size_t i = 0; i < t; ++i) w[i] = letter(i);
  return VertexAddr(std::move(w));
}

std::string End::str() const { return format_word(prefix_) + "|" + format_word(period_); }

End End::parse(std::string_view text) {
  auto bar = text.find('|');
  if (bar == std::string_view::npos) throw Error("end must be written prefix|period");
  return End(parse_word(text.substr(0, bar)), parse_word(text.substr(bar + 1)));
}

Segment end_ray(const End& xi, int n) {
  Segment out;
  for (int t = 0; t <= n; ++t) out.push_back(xi.at(xi.prefix().size() + static_cast<std::size_t>(t)));
  return out;
}

std::size_t Ray::join_depth() const {
  std::size_t j = 0;
  while (j < start.depth() && start.word()[j] == end.letter(j)) ++j;
  return j;
}

std::size_t Ray::join_offset() const { return start.depth() - join_depth(); }

Color Ray::letter(std::size_t t) const {
  std::size_t j = join_depth();
  std::size_t off = start.depth() - j;
  if (t < off) return start.word()[start.depth() - 1 - t];
  return end.letter(j + t - off);
}

VertexAddr Ray::at(std::size_t t) const {
  std::size_t j = join_depth();
  std::size_t off = start.depth() - j;
  if (t <= off) return start.ancestor(start.depth() - t);
  return end.at(j + t - off);
}

std::size_t Ray::periodic_from() const {
  std::size_t j = join_depth();
  std::size_t off = start.depth() - j;
  std::size_t pre = end.prefix().size();
  return off + (pre > j ? pre - j : 0);
}

}  // namespace tdlc
