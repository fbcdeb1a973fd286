#ifndef CPTHETA_ISO_ORACLE_HPP
#define CPTHETA_ISO_ORACLE_HPP

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cptheta/graph.hpp"

namespace cptheta {

/// A bijection of [0,n), stored as its image array.
class Permutation {
 public:
  Permutation() = default;

  explicit Permutation(std::vector<int> image) : image_(std::move(image)) {
    const int n = size();
    std::vector<char> seen(image_.size(), 0);
    for (int v : image_) {
      if (v < 0 || v >= n || seen[v])
        throw std::invalid_argument("permutation: image is not a bijection");
      seen[v] = 1;
    }
  }

  static Permutation identity(int n) {
    std::vector<int> image(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) image[i] = i;
    return Permutation(std::move(image));
  }

  int size() const noexcept { return static_cast<int>(image_.size()); }
  int operator()(int i) const { return image_[i]; }
  const std::vector<int>& image() const noexcept { return image_; }

  Permutation inverse() const {
    std::vector<int> inv(image_.size());
    for (int i = 0; i < size(); ++i) inv[image_[i]] = i;
    return Permutation(std::move(inv));
  }

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation& a, const Permutation& b) {
    return a.image_ <=> b.image_;
  }

 private:
  std::vector<int> image_;
};

inline std::string to_string(const Permutation& p) {
  std::string s = "[";
  for (int i = 0; i < p.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(p(i));
  }
  return s + "]";
}

/// Exact check that sigma maps E1 onto E2.
inline bool is_isomorphism(const Permutation& sigma, const Graph& g1, const Graph& g2) {
  if (sigma.size() != g1.n() || g1.n() != g2.n())
    throw std::invalid_argument("is_isomorphism: size mismatch");
  if (g1.edge_count() != g2.edge_count()) return false;
  const int n = g1.n();
  for (int x = 0; x < n; ++x)
    for (int y = x + 1; y < n; ++y)
      if (g1.adjacent(x, y) != g2.adjacent(sigma(x), sigma(y))) return false;
  return true;
}

struct EnumerateOptions {
  std::optional<std::size_t> cap;
  int max_n = 10;
  bool allow_large = false;
};

namespace detail {

class IsoSearch {
 public:
  IsoSearch(const Graph& g1, const Graph& g2, std::optional<std::size_t> cap)
      : g1_(g1), g2_(g2), cap_(cap), deg1_(g1.degrees()), deg2_(g2.degrees()),
        image_(static_cast<std::size_t>(g1.n()), -1),
        used_(static_cast<std::size_t>(g1.n()), 0) {}

  std::vector<Permutation> run() {
    if (g1_.edge_count() == g2_.edge_count()) extend(0);
    return std::move(found_);
  }

 private:
  bool full() const { return cap_ && found_.size() >= *cap_; }

  bool consistent(int v, int c) const {
    if (deg1_[v] != deg2_[c]) return false;
    for (int u = 0; u < v; ++u)
      if (g1_.adjacent(u, v) != g2_.adjacent(image_[u], c)) return false;
    return true;
  }

  // Vertices are assigned in index order so results come out
  // lexicographically sorted and a cap truncates the sorted list.
  void extend(int v) {
    if (full()) return;
    const int n = g1_.n();
    if (v == n) {
      found_.emplace_back(image_);
      return;
    }
    for (int c = 0; c < n && !full(); ++c) {
      if (used_[c] || !consistent(v, c)) continue;
      image_[v] = c;
      used_[c] = 1;
      extend(v + 1);
      used_[c] = 0;
      image_[v] = -1;
    }
  }

  const Graph& g1_;
  const Graph& g2_;
  std::optional<std::size_t> cap_;
  std::vector<int> deg1_, deg2_;
  std::vector<int> image_;
  std::vector<char> used_;
  std::vector<Permutation> found_;
};

}  // namespace detail

/// All isomorphisms g1 -> g2 in lexicographic order of their image arrays,
/// truncated at opts.cap. Backtracking with degree and adjacency pruning.
inline std::vector<Permutation> enumerate_isomorphisms(const Graph& g1, const Graph& g2,
                                                       const EnumerateOptions& opts = {}) {
  if (g1.n() != g2.n()) throw std::invalid_argument("enumerate_isomorphisms: size mismatch");
  if (g1.n() > opts.max_n && !opts.allow_large)
    throw std::invalid_argument("enumerate_isomorphisms: n = " + std::to_string(g1.n()) +
                                " exceeds limit " + std::to_string(opts.max_n));
  return detail::IsoSearch(g1, g2, opts.cap).run();
}

inline bool are_isomorphic(const Graph& g1, const Graph& g2, EnumerateOptions opts = {}) {
  opts.cap = 1;
  return !enumerate_isomorphisms(g1, g2, opts).empty();
}

}  // namespace cptheta

#endif  // CPTHETA_ISO_ORACLE_HPP
