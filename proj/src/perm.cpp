#include "tdlc/perm.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "json.hpp"

namespace tdlc {

Perm::Perm(std::vector<std::uint8_t> images) : img_(std::move(images)) {
  std::vector<bool> seen(img_.size(), false);
  for (auto v : img_) {
    if (v >= img_.size() || seen[v]) throw Error("permutation is not a bijection");
    seen[v] = true;
  }
}

Perm Perm::identity(std::size_t m) {
  std::vector<std::uint8_t> img(m);
  std::iota(img.begin(), img.end(), 0);
  return Perm(std::move(img));
}

Perm Perm::operator*(const Perm& q) const {
  if (q.size() != size()) throw Error("permutation domains differ");
  Perm r;
  r.img_.resize(size());
  for (std::size_t x = 0; x < size(); ++x) r.img_[x] = img_[q.img_[x]];
  return r;
}

Perm Perm::inverse() const {
  Perm r;
  r.img_.resize(size());
  for (std::size_t x = 0; x < size(); ++x) r.img_[img_[x]] = static_cast<std::uint8_t>(x);
  return r;
}

bool Perm::is_identity() const {
  for (std::size_t x = 0; x < size(); ++x)
    if (img_[x] != x) return false;
  return true;
}

std::string Perm::str() const {
  std::string s = "[";
  for (std::size_t i = 0; i < img_.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(int(img_[i]));
  }
  return s + "]";
}

Perm Perm::parse(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  if (!j.is_array()) throw Error("permutation must be an image array");
  std::vector<std::uint8_t> img;
  for (auto& v : j) img.push_back(v.get<std::uint8_t>());
  return Perm(std::move(img));
}

Perm transposition(std::size_t m, std::size_t a, std::size_t b) {
  auto img = Perm::identity(m).images();
  std::swap(img[a], img[b]);
  return Perm(std::move(img));
}

PermGroup::PermGroup(std::size_t domain, std::vector<Perm> generators, std::size_t bound)
    : domain_(domain), gens_(std::move(generators)) {
  for (auto& g : gens_)
    if (g.size() != domain_) throw Error("generator has wrong domain size");
  std::set<Perm> seen{Perm::identity(domain_)};
  std::vector<Perm> frontier{Perm::identity(domain_)};
  while (!frontier.empty()) {
    std::vector<Perm> next;
    for (const auto& x : frontier)
      for (const auto& g : gens_) {
        Perm y = g * x;
        if (seen.insert(y).second) {
          if (seen.size() > bound) throw HorizonError("permutation group exceeds enumeration bound");
          next.push_back(std::move(y));
        }
      }
    frontier = std::move(next);
  }
  elements_.assign(seen.begin(), seen.end());
}

PermGroup PermGroup::symmetric(std::size_t m) {
  std::vector<Perm> gens;
  for (std::size_t i = 0; i + 1 < m; ++i) gens.push_back(transposition(m, i, i + 1));
  return PermGroup(m, std::move(gens));
}

PermGroup PermGroup::cyclic(std::size_t m) {
  std::vector<std::uint8_t> img(m);
  for (std::size_t i = 0; i < m; ++i) img[i] = static_cast<std::uint8_t>((i + 1) % m);
  return PermGroup(m, {Perm(std::move(img))});
}

PermGroup PermGroup::trivial(std::size_t m) { return PermGroup(m, {}); }

PermGroup PermGroup::from_elements(std::size_t domain, std::vector<Perm> elements) {
  PermGroup g;
  g.domain_ = domain;
  std::sort(elements.begin(), elements.end());
  elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
  g.gens_ = elements;
  g.elements_ = std::move(elements);
  return g;
}

bool PermGroup::contains(const Perm& p) const {
  return std::binary_search(elements_.begin(), elements_.end(), p);
}

int PermGroup::index_of(const Perm& p) const {
  auto it = std::lower_bound(elements_.begin(), elements_.end(), p);
  if (it == elements_.end() || *it != p) return -1;
  return static_cast<int>(it - elements_.begin());
}

std::vector<std::size_t> PermGroup::orbit(std::size_t x) const {
  std::set<std::size_t> o;
  for (const auto& g : elements_) o.insert(g(x));
  return {o.begin(), o.end()};
}

PermGroup PermGroup::point_stabilizer(std::size_t x) const {
  std::vector<Perm> keep;
  for (const auto& g : elements_)
    if (g(x) == x) keep.push_back(g);
  return from_elements(domain_, std::move(keep));
}

bool in_coset(const Perm& g, const Perm& h, const PermGroup& b) {
  return b.contains(h.inverse() * g);
}

Perm wreath_top(std::size_t n) {
  std::vector<std::uint8_t> img(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      img[wreath_color(n, i, j)] = static_cast<std::uint8_t>(wreath_color(n, i, j + 1));
  return Perm(std::move(img));
}

PermGroup wreath_column_block(std::size_t n, std::size_t j) {
  std::size_t m = n * n;
  std::vector<Perm> gens;
  for (std::size_t i = 0; i + 1 < n; ++i)
    gens.push_back(transposition(m, wreath_color(n, i, j), wreath_color(n, i + 1, j)));
  return PermGroup(m, std::move(gens));
}

PermGroup wreath_sym_cyclic(std::size_t n) {
  if (n < 2) throw Error("wreath product needs n >= 2");
  std::size_t m = n * n;
  std::vector<Perm> gens{wreath_top(n)};
  for (std::size_t i = 0; i + 1 < n; ++i)
    gens.push_back(transposition(m, wreath_color(n, i, 0), wreath_color(n, i + 1, 0)));
  return PermGroup(m, std::move(gens));
}

}  // namespace tdlc
