#include "infsl/graph.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <queue>
#include <sstream>
#include <string>
#include <utility>

#include "infsl/error.hpp"
#include "infsl/text.hpp"

namespace infsl {

namespace {

// exp() underflows to zero for far-apart points; keep weights strictly positive.
constexpr double kMinWeight = std::numeric_limits<double>::min();

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t t = 0; t < a.size(); ++t) {
    const double diff = a[t] - b[t];
    s += diff * diff;
  }
  return s;
}

double clamp_weight(double w) { return std::clamp(w, kMinWeight, kMaxWeight); }
double clamp_length(double d) { return std::max(d, kMinLength); }

}  // namespace

Edge Edge::from_weight(std::size_t i, std::size_t j, double w) {
  if (!(w > 0.0) || !std::isfinite(w)) throw InvalidArgument("edge weight must be positive and finite");
  return Edge{i, j, w, clamp_length(1.0 / std::sqrt(w))};
}

// ---------------------------------------------------------------------------

Graph Graph::from_edges(std::size_t n, std::span<const Edge> edges) {
  struct Half {
    std::size_t from, to;
    double w, d;
  };
  std::vector<Half> halves;
  halves.reserve(2 * edges.size());
  for (const Edge& e : edges) {
    if (e.i >= n || e.j >= n) {
      throw InvalidArgument("edge (" + std::to_string(e.i) + "," + std::to_string(e.j) +
                            ") out of range for " + std::to_string(n) + " nodes");
    }
    if (e.i == e.j) throw InvalidArgument("self-loop at node " + std::to_string(e.i));
    if (!(e.weight > 0.0) || !(e.weight <= kMaxWeight)) {
      throw InvalidArgument("edge weight outside (0, kMaxWeight]");
    }
    if (!(e.length >= kMinLength) || !std::isfinite(e.length)) {
      throw InvalidArgument("edge length outside [kMinLength, inf)");
    }
    halves.push_back({e.i, e.j, e.weight, e.length});
    halves.push_back({e.j, e.i, e.weight, e.length});
  }
  std::sort(halves.begin(), halves.end(), [](const Half& a, const Half& b) {
    return a.from != b.from ? a.from < b.from : a.to < b.to;
  });
  for (std::size_t t = 1; t < halves.size(); ++t) {
    if (halves[t].from == halves[t - 1].from && halves[t].to == halves[t - 1].to) {
      throw InvalidArgument("duplicate edge (" + std::to_string(halves[t].from) + "," +
                            std::to_string(halves[t].to) + ")");
    }
  }

  Graph g;
  g.offsets_.assign(n + 1, 0);
  for (const Half& h : halves) ++g.offsets_[h.from + 1];
  std::partial_sum(g.offsets_.begin(), g.offsets_.end(), g.offsets_.begin());
  g.targets_.reserve(halves.size());
  g.weights_.reserve(halves.size());
  g.lengths_.reserve(halves.size());
  for (const Half& h : halves) {
    g.targets_.push_back(h.to);
    g.weights_.push_back(h.w);
    g.lengths_.push_back(h.d);
  }
  g.degrees_.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (double w : g.weights(i)) g.degrees_[i] += w;
  }
  return g;
}

double Graph::max_degree() const {
  return degrees_.empty() ? 0.0 : *std::max_element(degrees_.begin(), degrees_.end());
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(num_edges());
  for (std::size_t i = 0; i < size(); ++i) {
    const auto nb = neighbors(i);
    const auto w = weights(i);
    const auto d = lengths(i);
    for (std::size_t t = 0; t < nb.size(); ++t) {
      if (nb[t] > i) out.push_back({i, nb[t], w[t], d[t]});
    }
  }
  return out;
}

std::vector<std::size_t> Graph::components() const {
  constexpr auto unset = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> comp(size(), unset);
  std::size_t next = 0;
  std::vector<std::size_t> stack;
  for (std::size_t s = 0; s < size(); ++s) {
    if (comp[s] != unset) continue;
    comp[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      for (std::size_t u : neighbors(v)) {
        if (comp[u] == unset) {
          comp[u] = next;
          stack.push_back(u);
        }
      }
    }
    ++next;
  }
  return comp;
}

std::size_t Graph::num_components() const {
  const auto comp = components();
  return comp.empty() ? 0 : *std::max_element(comp.begin(), comp.end()) + 1;
}

std::string check_invariants(const Graph& g) {
  const std::size_t n = g.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto nb = g.neighbors(i);
    const auto w = g.weights(i);
    const auto d = g.lengths(i);
    double sum = 0.0;
    for (std::size_t t = 0; t < nb.size(); ++t) {
      const std::size_t j = nb[t];
      if (j == i) return "self-loop at " + std::to_string(i);
      if (t > 0 && nb[t - 1] >= j) return "unsorted adjacency at " + std::to_string(i);
      if (!(w[t] > 0.0 && w[t] <= kMaxWeight)) return "weight out of range at " + std::to_string(i);
      if (!(d[t] >= kMinLength) || !std::isfinite(d[t])) {
        return "length out of range at " + std::to_string(i);
      }
      const auto back = g.neighbors(j);
      const auto it = std::lower_bound(back.begin(), back.end(), i);
      if (it == back.end() || *it != i) {
        return "missing reverse edge " + std::to_string(j) + "->" + std::to_string(i);
      }
      const auto pos = static_cast<std::size_t>(it - back.begin());
      if (g.weights(j)[pos] != w[t] || g.lengths(j)[pos] != d[t]) {
        return "asymmetric edge data on (" + std::to_string(i) + "," + std::to_string(j) + ")";
      }
      sum += w[t];
    }
    if (std::abs(sum - g.degree(i)) > 1e-12 * std::max(1.0, std::abs(sum))) {
      return "degree mismatch at " + std::to_string(i);
    }
  }
  return {};
}

// ---------------------------------------------------------------------------

KernelValue kernel_weight(const WeightKernel& kernel, std::span<const double> xi,
                          std::span<const double> xj, double sigma_i, double sigma_j) {
  if (xi.size() != xj.size()) throw InvalidArgument("kernel_weight: dimension mismatch");
  return std::visit(
      [&](const auto& k) -> KernelValue {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, GaussianSelfTuning>) {
          if (!(sigma_i > 0.0) || !(sigma_j > 0.0)) {
            throw InvalidArgument("gaussian kernel needs positive scales");
          }
          const double r2 = squared_distance(xi, xj);
          return {clamp_weight(std::exp(-r2 / (sigma_i * sigma_j))), clamp_length(std::sqrt(r2))};
        } else if constexpr (std::is_same_v<K, CosineAdjusted>) {
          double dot = 0.0, ni = 0.0, nj = 0.0;
          for (std::size_t t = 0; t < xi.size(); ++t) {
            dot += xi[t] * xj[t];
            ni += xi[t] * xi[t];
            nj += xj[t] * xj[t];
          }
          if (ni == 0.0 || nj == 0.0) throw InvalidArgument("cosine kernel: zero feature vector");
          const double cos = std::clamp(dot / (std::sqrt(ni) * std::sqrt(nj)), -1.0, 1.0);
          // Antipodal vectors have zero similarity; floor it like the lengths.
          const double sim = std::max((cos + 1.0) / 2.0, kMinLength);
          return {clamp_weight(sim), clamp_length(1.0 / sim - 1.0)};
        } else {
          const double d = clamp_length(std::sqrt(squared_distance(xi, xj)));
          return {clamp_weight(std::pow(d, -2.0 * k.alpha)), d};
        }
      },
      kernel);
}

namespace {

// Distance used to rank neighbors: the kernel's own notion of distance.
double ranking_distance(const WeightKernel& kernel, std::span<const double> a,
                        std::span<const double> b) {
  if (std::holds_alternative<CosineAdjusted>(kernel)) return kernel_weight(kernel, a, b).length;
  return squared_distance(a, b);
}

// Indices of the `k` nearest other points to `i`, closest first, ties by index.
std::vector<std::size_t> nearest(const Dataset& data, std::size_t i, std::size_t k,
                                 const WeightKernel& kernel,
                                 std::vector<std::pair<double, std::size_t>>& scratch) {
  scratch.clear();
  const auto xi = data.point(i);
  for (std::size_t j = 0; j < data.size(); ++j) {
    if (j != i) scratch.emplace_back(ranking_distance(kernel, xi, data.point(j)), j);
  }
  std::partial_sort(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(k), scratch.end());
  std::vector<std::size_t> out(k);
  for (std::size_t t = 0; t < k; ++t) out[t] = scratch[t].second;
  return out;
}

}  // namespace

std::vector<double> self_tuning_scales(const Dataset& data, std::size_t rank) {
  const std::size_t n = data.size();
  if (rank < 1 || rank > n - 1) throw InvalidArgument("self-tuning rank out of range");
  std::vector<double> sigma(n);
  std::vector<double> dist;
  for (std::size_t i = 0; i < n; ++i) {
    dist.clear();
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) dist.push_back(squared_distance(data.point(i), data.point(j)));
    }
    std::nth_element(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(rank - 1), dist.end());
    sigma[i] = clamp_length(std::sqrt(dist[rank - 1]));
  }
  return sigma;
}

Graph knn_graph(const Dataset& data, std::size_t k, const WeightKernel& kernel) {
  data.validate();
  const std::size_t n = data.size();
  if (n < 2) throw InvalidArgument("knn_graph needs at least 2 points");
  if (k < 1 || k > n - 1) {
    throw InvalidArgument("knn_graph: k=" + std::to_string(k) + " outside [1, " +
                          std::to_string(n - 1) + "]");
  }
  if (const auto* inv = std::get_if<InverseDistance>(&kernel); inv && !std::isfinite(inv->alpha)) {
    throw InvalidArgument("inverse-distance exponent must be finite");
  }
  if (std::holds_alternative<CosineAdjusted>(kernel)) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto x = data.point(i);
      if (std::all_of(x.begin(), x.end(), [](double v) { return v == 0.0; })) {
        throw InvalidArgument("cosine kernel: point " + std::to_string(i) + " is the zero vector");
      }
    }
  }

  std::vector<double> sigma(n, 1.0);
  if (const auto* gauss = std::get_if<GaussianSelfTuning>(&kernel)) {
    sigma = self_tuning_scales(data, gauss->k_sigma == 0 ? k : gauss->k_sigma);
  }

  // Union symmetrization: collect (min, max) pairs, then dedupe.
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  pairs.reserve(n * k);
  std::vector<std::pair<double, std::size_t>> scratch;
  scratch.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j : nearest(data, i, k, kernel, scratch)) {
      pairs.emplace_back(std::min(i, j), std::max(i, j));
    }
  }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());

  std::vector<Edge> edges;
  edges.reserve(pairs.size());
  for (auto [i, j] : pairs) {
    const auto kv = kernel_weight(kernel, data.point(i), data.point(j), sigma[i], sigma[j]);
    edges.push_back({i, j, kv.weight, kv.length});
  }
  return Graph::from_edges(n, edges);
}

// ---------------------------------------------------------------------------

bool GridGraph::on_boundary(std::size_t node) const {
  const std::size_t row = node / side, col = node % side;
  return row == 0 || col == 0 || row == side - 1 || col == side - 1;
}

std::vector<std::size_t> GridGraph::boundary_nodes() const {
  std::vector<std::size_t> out;
  for (std::size_t v = 0; v < side * side; ++v) {
    if (on_boundary(v)) out.push_back(v);
  }
  return out;
}

std::size_t GridGraph::nearest(double x, double y) const {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t v = 0; v < coords.size(); ++v) {
    const double dx = coords[v][0] - x, dy = coords[v][1] - y;
    const double d = dx * dx + dy * dy;
    if (d < best_d) {
      best_d = d;
      best = v;
    }
  }
  return best;
}

GridGraph grid_graph(std::size_t m, Stencil stencil) {
  if (m < 3) throw InvalidArgument("grid_graph needs m >= 3");
  const double h = 2.0 / static_cast<double>(m - 1);
  GridGraph grid;
  grid.side = m;
  grid.coords.resize(m * m);
  for (std::size_t row = 0; row < m; ++row) {
    for (std::size_t col = 0; col < m; ++col) {
      grid.coords[row * m + col] = {-1.0 + static_cast<double>(col) * h,
                                    -1.0 + static_cast<double>(row) * h};
    }
  }

  const double axis_w = 1.0 / (h * h);
  const double diag_len = h * std::sqrt(2.0);
  const double diag_w = 1.0 / (diag_len * diag_len);
  std::vector<Edge> edges;
  for (std::size_t row = 0; row < m; ++row) {
    for (std::size_t col = 0; col < m; ++col) {
      const std::size_t v = row * m + col;
      if (col + 1 < m) edges.push_back({v, v + 1, axis_w, h});
      if (row + 1 < m) edges.push_back({v, v + m, axis_w, h});
      if (stencil == Stencil::eight && row + 1 < m) {
        if (col + 1 < m) edges.push_back({v, v + m + 1, diag_w, diag_len});
        if (col > 0) edges.push_back({v, v + m - 1, diag_w, diag_len});
      }
    }
  }
  grid.graph = Graph::from_edges(m * m, edges);
  return grid;
}

// ---------------------------------------------------------------------------

void write_edge_list(std::ostream& os, const Graph& g) {
  os << "#nodes=" << g.size() << '\n';
  for (const Edge& e : g.edges()) {
    os << e.i << ',' << e.j << ',' << text::format_double(e.weight) << ','
       << text::format_double(e.length) << '\n';
  }
}

Graph read_edge_list(std::istream& is) {
  std::string line;
  std::size_t lineno = 0;
  std::optional<std::size_t> n;
  std::vector<Edge> edges;
  auto fail = [&](const std::string& what) {
    throw ParseError("edge list line " + std::to_string(lineno) + ": " + what);
  };
  while (std::getline(is, line)) {
    ++lineno;
    const auto s = text::trim(line);
    if (s.empty()) continue;
    if (!n) {
      constexpr std::string_view header = "#nodes=";
      if (s.substr(0, header.size()) != header) fail("expected '#nodes=<n>' header");
      const auto v = text::parse_int(s.substr(header.size()));
      if (!v || *v < 0) fail("bad node count");
      n = static_cast<std::size_t>(*v);
      continue;
    }
    if (s.front() == '#') continue;
    const auto f = text::split(s, ',');
    if (f.size() != 4) fail("expected 4 fields i,j,w,d");
    const auto i = text::parse_int(f[0]);
    const auto j = text::parse_int(f[1]);
    const auto w = text::parse_double(f[2]);
    const auto d = text::parse_double(f[3]);
    if (!i || !j || !w || !d || *i < 0 || *j < 0) fail("non-numeric or negative field");
    edges.push_back({static_cast<std::size_t>(*i), static_cast<std::size_t>(*j), *w, *d});
  }
  if (!n) throw ParseError("edge list: missing '#nodes=<n>' header");
  return Graph::from_edges(*n, edges);
}

}  // namespace infsl
