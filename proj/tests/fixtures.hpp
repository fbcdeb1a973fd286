#ifndef CPTHETA_TESTS_FIXTURES_HPP
#define CPTHETA_TESTS_FIXTURES_HPP

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "cptheta/graph.hpp"
#include "cptheta/iso_oracle.hpp"

namespace cptheta::testing {

inline Graph cycle(int n) {
  std::vector<Edge> e;
  for (int i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
  return Graph(n, e);
}

inline Graph path(int n) {
  std::vector<Edge> e;
  for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return Graph(n, e);
}

inline Graph complete(int n) {
  std::vector<Edge> e;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) e.emplace_back(i, j);
  return Graph(n, e);
}

inline Graph empty(int n) { return Graph(n, {}); }

inline Graph star(int n) {
  std::vector<Edge> e;
  for (int i = 1; i < n; ++i) e.emplace_back(0, i);
  return Graph(n, e);
}

inline Graph petersen() {
  std::vector<Edge> e;
  for (int i = 0; i < 5; ++i) {
    e.emplace_back(i, (i + 1) % 5);
    e.emplace_back(i, i + 5);
    e.emplace_back(5 + i, 5 + (i + 2) % 5);
  }
  return Graph(10, e);
}

inline Graph disjoint_union(const Graph& a, const Graph& b) {
  std::vector<Edge> e = a.edges();
  for (auto [x, y] : b.edges()) e.emplace_back(x + a.n(), y + a.n());
  return Graph(a.n() + b.n(), e);
}

/// Image of g under sigma: edge (x,y) becomes (sigma(x), sigma(y)).
inline Graph relabel(const Graph& g, const Permutation& sigma) {
  std::vector<Edge> e;
  for (auto [x, y] : g.edges()) e.emplace_back(sigma(x), sigma(y));
  return Graph(g.n(), e);
}

inline Permutation random_permutation(int n, std::mt19937_64& rng) {
  std::vector<int> img(static_cast<std::size_t>(n));
  std::iota(img.begin(), img.end(), 0);
  std::shuffle(img.begin(), img.end(), rng);
  return Permutation(img);
}

inline Graph random_graph(int n, double p, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(p);
  std::vector<Edge> e;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (coin(rng)) e.emplace_back(i, j);
  return Graph(n, e);
}

/// All graphs on n labelled vertices (n <= 5 keeps this at 1024).
inline std::vector<Graph> all_graphs(int n) {
  std::vector<Edge> slots;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) slots.emplace_back(i, j);
  std::vector<Graph> out;
  for (unsigned mask = 0; mask < (1u << slots.size()); ++mask) {
    std::vector<Edge> e;
    for (std::size_t k = 0; k < slots.size(); ++k)
      if (mask & (1u << k)) e.push_back(slots[k]);
    out.emplace_back(n, e);
  }
  return out;
}

inline std::vector<Permutation> all_permutations(int n) {
  std::vector<int> img(static_cast<std::size_t>(n));
  std::iota(img.begin(), img.end(), 0);
  std::vector<Permutation> out;
  do {
    out.emplace_back(img);
  } while (std::next_permutation(img.begin(), img.end()));
  return out;
}

/// Unpruned oracle: filter all n! permutations through is_isomorphism.
inline std::vector<Permutation> brute_force_isomorphisms(const Graph& g1, const Graph& g2) {
  std::vector<Permutation> out;
  for (auto& p : all_permutations(g1.n()))
    if (is_isomorphism(p, g1, g2)) out.push_back(p);
  return out;
}

/// One graph per isomorphism class on n vertices (first in labelled order).
inline std::vector<Graph> isomorphism_class_representatives(int n) {
  std::vector<Graph> reps;
  for (const auto& g : all_graphs(n)) {
    bool fresh = true;
    for (const auto& r : reps)
      if (r.edge_count() == g.edge_count() && are_isomorphic(r, g)) {
        fresh = false;
        break;
      }
    if (fresh) reps.push_back(g);
  }
  return reps;
}

// Two non-isomorphic trees on 6 vertices with degree sequence 3,2,2,1,1,1.
inline Graph tree_long_arm() { return Graph(6, {{0, 1}, {0, 2}, {0, 3}, {1, 4}, {4, 5}}); }
inline Graph tree_two_arms() { return Graph(6, {{0, 1}, {0, 2}, {0, 3}, {1, 4}, {2, 5}}); }

}  // namespace cptheta::testing

#endif  // CPTHETA_TESTS_FIXTURES_HPP
