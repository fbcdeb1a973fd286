#ifndef CPTHETA_GRAPH_HPP
#define CPTHETA_GRAPH_HPP

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cptheta {

/// Raised by the graph readers. Carries the 1-based line number of the
/// offending input line (0 when the problem is not tied to a line).
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error(line == 0 ? what
                                     : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

using Edge = std::pair<int, int>;

/// Simple undirected graph on vertices 0..n-1. Immutable once built; the
/// edge list is kept sorted with i < j and mirrors the adjacency table.
class Graph {
 public:
  Graph() = default;

  Graph(int n, const std::vector<Edge>& edges) : n_(n) {
    if (n < 0) throw std::invalid_argument("graph: negative vertex count");
    adjacency_.assign(static_cast<std::size_t>(n) * n, 0);
    for (auto [a, b] : edges) {
      if (a < 0 || b < 0 || a >= n || b >= n)
        throw std::invalid_argument("graph: edge (" + std::to_string(a) + "," +
                                    std::to_string(b) + ") out of range");
      if (a == b)
        throw std::invalid_argument("graph: self-loop at vertex " + std::to_string(a));
      adjacency_[index(a, b)] = 1;
      adjacency_[index(b, a)] = 1;
    }
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (adjacent(i, j)) edges_.emplace_back(i, j);
  }

  int n() const noexcept { return n_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  bool adjacent(int i, int j) const { return adjacency_[index(i, j)] != 0; }

  int degree(int i) const {
    int d = 0;
    for (int j = 0; j < n_; ++j) d += adjacent(i, j) ? 1 : 0;
    return d;
  }

  std::vector<int> degrees() const {
    std::vector<int> d(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i) d[i] = degree(i);
    return d;
  }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.n_ == b.n_ && a.edges_ == b.edges_;
  }

 private:
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * n_ + j;
  }

  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<unsigned char> adjacency_;
};

/// Flat indexing of the vertex pairs (i,j) in row-major order, with the
/// extra symbol omega placed last at n*n.
class VertexPairIndex {
 public:
  explicit VertexPairIndex(int n = 0) : n_(n) {}

  int n() const noexcept { return n_; }
  int pair_count() const noexcept { return n_ * n_; }
  int dim() const noexcept { return n_ * n_ + 1; }
  int omega() const noexcept { return n_ * n_; }

  int flat(int i, int j) const noexcept { return i * n_ + j; }
  std::pair<int, int> pair(int flat) const noexcept { return {flat / n_, flat % n_}; }
  bool is_omega(int flat) const noexcept { return flat == omega(); }

 private:
  int n_;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline std::vector<long long> parse_ints(std::string_view s, std::size_t line) {
  std::vector<long long> out;
  std::istringstream in{std::string(s)};
  std::string tok;
  while (in >> tok) {
    std::size_t pos = 0;
    long long v = 0;
    try {
      v = std::stoll(tok, &pos);
    } catch (const std::exception&) {
      throw ParseError(line, "expected integer, got '" + tok + "'");
    }
    if (pos != tok.size()) throw ParseError(line, "expected integer, got '" + tok + "'");
    out.push_back(v);
  }
  return out;
}

inline void check_endpoint(long long v, long long n, std::size_t line) {
  if (v < 0 || v >= n)
    throw ParseError(line, "vertex id " + std::to_string(v) + " outside [0," +
                               std::to_string(n) + ")");
}

}  // namespace detail

/// Reads the plain edge-list dialect: '#' comments and blank lines are
/// skipped, the first remaining line is "n m", followed by exactly m lines
/// "i j" with 0-based ids. Duplicate edges collapse.
inline Graph parse_edge_list(std::string_view text) {
  long long n = -1, m = -1;
  std::vector<Edge> edges;
  long long seen = 0;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = detail::trim(text.substr(start, end - start));
    start = end + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    auto ints = detail::parse_ints(line, line_no);
    if (n < 0) {
      if (ints.size() != 2) throw ParseError(line_no, "header must be 'n m'");
      n = ints[0];
      m = ints[1];
      if (n < 1) throw ParseError(line_no, "vertex count must be positive");
      if (m < 0) throw ParseError(line_no, "edge count must be nonnegative");
      continue;
    }
    if (ints.size() != 2) throw ParseError(line_no, "edge line must hold two vertex ids");
    if (seen == m) throw ParseError(line_no, "more edge lines than declared");
    detail::check_endpoint(ints[0], n, line_no);
    detail::check_endpoint(ints[1], n, line_no);
    if (ints[0] == ints[1])
      throw ParseError(line_no, "self-loop at vertex " + std::to_string(ints[0]));
    edges.emplace_back(static_cast<int>(ints[0]), static_cast<int>(ints[1]));
    ++seen;
  }
  if (n < 0) throw ParseError(0, "missing 'n m' header");
  if (seen != m)
    throw ParseError(line_no, "expected " + std::to_string(m) + " edge lines, found " +
                                  std::to_string(seen));
  return Graph(static_cast<int>(n), edges);
}

/// DIMACS dialect: "c" comments, one "p edge n m" line, then "e i j" with
/// 1-based ids.
inline Graph parse_dimacs(std::string_view text) {
  long long n = -1, m = -1;
  std::vector<Edge> edges;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = detail::trim(text.substr(start, end - start));
    start = end + 1;
    ++line_no;
    if (line.empty() || line.front() == 'c') continue;
    if (line.front() == 'p') {
      if (n >= 0) throw ParseError(line_no, "duplicate problem line");
      std::istringstream in{std::string(line.substr(1))};
      std::string format;
      if (!(in >> format >> n >> m) || (format != "edge" && format != "col"))
        throw ParseError(line_no, "problem line must be 'p edge n m'");
      if (n < 1) throw ParseError(line_no, "vertex count must be positive");
      continue;
    }
    if (line.front() == 'e') {
      if (n < 0) throw ParseError(line_no, "edge before problem line");
      auto ints = detail::parse_ints(line.substr(1), line_no);
      if (ints.size() != 2) throw ParseError(line_no, "edge line must be 'e i j'");
      detail::check_endpoint(ints[0] - 1, n, line_no);
      detail::check_endpoint(ints[1] - 1, n, line_no);
      if (ints[0] == ints[1])
        throw ParseError(line_no, "self-loop at vertex " + std::to_string(ints[0]));
      edges.emplace_back(static_cast<int>(ints[0] - 1), static_cast<int>(ints[1] - 1));
      continue;
    }
    throw ParseError(line_no, "unrecognized DIMACS line");
  }
  if (n < 0) throw ParseError(0, "missing 'p edge n m' line");
  return Graph(static_cast<int>(n), edges);
}

/// Dispatches on the first significant line: DIMACS if it starts with 'p'
/// or 'c', plain edge list otherwise.
inline Graph parse_graph(std::string_view text) {
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = detail::trim(text.substr(start, end - start));
    start = end + 1;
    if (line.empty() || line.front() == '#') continue;
    if (line.front() == 'p' || line.front() == 'c') return parse_dimacs(text);
    break;
  }
  return parse_edge_list(text);
}

inline Graph read_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_graph(buf.str());
  } catch (const ParseError& e) {
    throw ParseError(e.line(), path + ": " + e.what());
  }
}

inline std::string format_edge_list(const Graph& g) {
  std::ostringstream out;
  out << g.n() << ' ' << g.edge_count() << '\n';
  for (auto [a, b] : g.edges()) out << a << ' ' << b << '\n';
  return out.str();
}

inline Graph complement(const Graph& g) {
  std::vector<Edge> edges;
  for (int i = 0; i < g.n(); ++i)
    for (int j = i + 1; j < g.n(); ++j)
      if (!g.adjacent(i, j)) edges.emplace_back(i, j);
  return Graph(g.n(), edges);
}

/// Graph on the n^2 vertex pairs whose edges join incompatible assignments:
/// same row, same column, or an adjacency mismatch between g1 and g2.
/// Vertex (i,j) has id i*n + j.
inline Graph association_graph(const Graph& g1, const Graph& g2) {
  if (g1.n() != g2.n()) throw std::invalid_argument("association_graph: size mismatch");
  const int n = g1.n();
  const VertexPairIndex idx(n);
  std::vector<Edge> edges;
  for (int a = 0; a < n * n; ++a) {
    const auto [i, j] = idx.pair(a);
    for (int b = a + 1; b < n * n; ++b) {
      const auto [k, l] = idx.pair(b);
      const bool row = i == k && j != l;
      const bool col = j == l && i != k;
      const bool mismatch =
          i != k && j != l && g1.adjacent(i, k) != g2.adjacent(j, l);
      if (row || col || mismatch) edges.emplace_back(a, b);
    }
  }
  return Graph(n * n, edges);
}

}  // namespace cptheta

#endif  // CPTHETA_GRAPH_HPP
