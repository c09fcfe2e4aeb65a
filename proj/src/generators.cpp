#include "qoegap/generators.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <random>
#include <set>
#include <sstream>
#include <vector>

#include "qoegap/io.hpp"

namespace qoegap {

const char* to_string(Model m) {
  switch (m) {
    case Model::kEr:
      return "er";
    case Model::kWs:
      return "ws";
    case Model::kBa:
      return "ba";
    case Model::kPath:
      return "path";
    case Model::kComplete:
      return "complete";
    case Model::kFile:
      return "file";
  }
  return "unknown";
}

void GraphSpec::validate() const {
  switch (model) {
    case Model::kEr:
      if (n < 2) throw InputError("er: need n >= 2");
      if (!(p > 0.0 && p < 1.0)) throw InputError("er: p must lie in (0, 1)");
      break;
    case Model::kWs:
      if (k == 0 || k % 2 != 0) throw InputError("ws: k must be positive and even");
      if (k >= n) throw InputError("ws: need k < n");
      if (!(rewire >= 0.0 && rewire <= 1.0)) throw InputError("ws: rewire probability must lie in [0, 1]");
      break;
    case Model::kBa:
      if (m_attach < 1 || m_attach >= n) throw InputError("ba: need 1 <= m < n");
      break;
    case Model::kPath:
    case Model::kComplete:
      if (n < 1) throw InputError(std::string(qoegap::to_string(model)) + ": need n >= 1");
      break;
    case Model::kFile:
      if (path.empty()) throw InputError("file: path is empty");
      break;
  }
}

std::string GraphSpec::to_string() const {
  std::ostringstream os;
  os << qoegap::to_string(model) << ':';
  switch (model) {
    case Model::kEr:
      os << "n=" << n << ",p=" << p << ",seed=" << seed;
      break;
    case Model::kWs:
      os << "n=" << n << ",k=" << k << ",rewire=" << rewire << ",seed=" << seed;
      break;
    case Model::kBa:
      os << "n=" << n << ",m=" << m_attach << ",seed=" << seed;
      break;
    case Model::kPath:
    case Model::kComplete:
      os << "n=" << n;
      break;
    case Model::kFile:
      os << "path=" << path << ",format=" << (format == FileFormat::kCaida ? "caida" : "edgelist");
      break;
  }
  return os.str();
}

GraphSpec er_spec(std::size_t n, double p, std::uint64_t seed) {
  GraphSpec s;
  s.model = Model::kEr;
  s.n = n;
  s.p = p;
  s.seed = seed;
  return s;
}

GraphSpec ws_spec(std::size_t n, std::size_t k, double rewire, std::uint64_t seed) {
  GraphSpec s;
  s.model = Model::kWs;
  s.n = n;
  s.k = k;
  s.rewire = rewire;
  s.seed = seed;
  return s;
}

GraphSpec ba_spec(std::size_t n, std::size_t m_attach, std::uint64_t seed) {
  GraphSpec s;
  s.model = Model::kBa;
  s.n = n;
  s.m_attach = m_attach;
  s.seed = seed;
  return s;
}

GraphSpec path_spec(std::size_t n) {
  GraphSpec s;
  s.model = Model::kPath;
  s.n = n;
  return s;
}

GraphSpec complete_spec(std::size_t n) {
  GraphSpec s;
  s.model = Model::kComplete;
  s.n = n;
  return s;
}

namespace {

template <class T>
T parse_number(std::string_view key, std::string_view value) {
  T out{};
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw InputError("graph spec: bad value '" + std::string(value) + "' for " + std::string(key));
  }
  return out;
}

}  // namespace

GraphSpec parse_graph_spec(std::string_view text) {
  GraphSpec spec;
  const auto colon = text.find(':');
  const std::string_view name = text.substr(0, colon);
  if (name == "er") {
    spec.model = Model::kEr;
  } else if (name == "ws") {
    spec.model = Model::kWs;
  } else if (name == "ba") {
    spec.model = Model::kBa;
  } else if (name == "path") {
    spec.model = Model::kPath;
  } else if (name == "complete") {
    spec.model = Model::kComplete;
  } else if (name == "file") {
    spec.model = Model::kFile;
  } else if (colon == std::string_view::npos) {
    // A bare token is taken as an edge-list file.
    spec.model = Model::kFile;
    spec.path = std::string(text);
    spec.validate();
    return spec;
  } else {
    throw InputError("graph spec: unknown model '" + std::string(name) + "'");
  }

  std::string_view rest = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const std::string_view item = rest.substr(0, comma);
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) throw InputError("graph spec: expected key=value, got '" + std::string(item) + "'");
    const std::string_view key = item.substr(0, eq);
    const std::string_view value = item.substr(eq + 1);
    if (key == "n") {
      spec.n = parse_number<std::size_t>(key, value);
    } else if (key == "seed") {
      spec.seed = parse_number<std::uint64_t>(key, value);
    } else if (key == "p" && spec.model == Model::kEr) {
      spec.p = parse_number<double>(key, value);
    } else if (key == "k" && spec.model == Model::kWs) {
      spec.k = parse_number<std::size_t>(key, value);
    } else if ((key == "rewire" || key == "beta") && spec.model == Model::kWs) {
      spec.rewire = parse_number<double>(key, value);
    } else if (key == "m" && spec.model == Model::kBa) {
      spec.m_attach = parse_number<std::size_t>(key, value);
    } else if (key == "path" && spec.model == Model::kFile) {
      spec.path = std::string(value);
    } else if (key == "format" && spec.model == Model::kFile) {
      if (value == "caida") {
        spec.format = FileFormat::kCaida;
      } else if (value == "edgelist") {
        spec.format = FileFormat::kEdgeList;
      } else {
        throw InputError("graph spec: unknown file format '" + std::string(value) + "'");
      }
    } else {
      throw InputError("graph spec: unknown key '" + std::string(key) + "' for model " + std::string(name));
    }
  }
  spec.validate();
  return spec;
}

Graph path_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (NodeId v = 1; v < n; ++v) edges.emplace_back(v - 1, v);
  return build_graph(n, edges).graph;
}

Graph complete_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) edges.emplace_back(u, v);
  }
  return build_graph(n, edges).graph;
}

Graph erdos_renyi(std::size_t n, double p, std::uint64_t seed) {
  er_spec(n, p, seed).validate();
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(p);
  std::vector<Edge> edges;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      if (coin(rng)) edges.emplace_back(u, v);
    }
  }
  return build_graph(n, edges).graph;
}

Graph watts_strogatz(std::size_t n, std::size_t k, double rewire, std::uint64_t seed) {
  ws_spec(n, k, rewire, seed).validate();
  std::set<Edge> edges;
  auto key = [](NodeId a, NodeId b) { return Edge{std::min(a, b), std::max(a, b)}; };
  for (NodeId u = 0; u < n; ++u) {
    for (std::size_t j = 1; j <= k / 2; ++j) edges.insert(key(u, static_cast<NodeId>((u + j) % n)));
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<NodeId> pick(0, static_cast<NodeId>(n - 1));
  std::vector<std::size_t> degree(n, k);
  for (std::size_t j = 1; j <= k / 2; ++j) {
    for (NodeId u = 0; u < n; ++u) {
      const auto v = static_cast<NodeId>((u + j) % n);
      if (!(unit(rng) < rewire)) continue;
      // No free target left for u.
      if (degree[u] >= n - 1) continue;
      NodeId w = pick(rng);
      while (w == u || edges.count(key(u, w))) w = pick(rng);
      edges.erase(key(u, v));
      edges.insert(key(u, w));
      --degree[v];
      ++degree[w];
    }
  }
  const std::vector<Edge> list(edges.begin(), edges.end());
  return build_graph(n, list).graph;
}

Graph barabasi_albert(std::size_t n, std::size_t m_attach, std::uint64_t seed) {
  ba_spec(n, m_attach, seed).validate();
  std::vector<Edge> edges;
  // Endpoint multiset: each node appears once per incident edge.
  std::vector<NodeId> endpoints;
  for (NodeId u = 0; u <= m_attach; ++u) {
    for (NodeId v = u + 1; v <= m_attach; ++v) {
      edges.emplace_back(u, v);
      endpoints.push_back(u);
      endpoints.push_back(v);
    }
  }
  std::mt19937_64 rng(seed);
  std::vector<NodeId> targets;
  for (auto v = static_cast<NodeId>(m_attach + 1); v < n; ++v) {
    targets.clear();
    std::uniform_int_distribution<std::size_t> pick(0, endpoints.size() - 1);
    while (targets.size() < m_attach) {
      const NodeId t = endpoints[pick(rng)];
      if (std::find(targets.begin(), targets.end(), t) == targets.end()) targets.push_back(t);
    }
    for (NodeId t : targets) {
      edges.emplace_back(t, v);
      endpoints.push_back(t);
      endpoints.push_back(v);
    }
  }
  return build_graph(n, edges).graph;
}

Graph generate(const GraphSpec& spec) {
  spec.validate();
  switch (spec.model) {
    case Model::kEr:
      return erdos_renyi(spec.n, spec.p, spec.seed);
    case Model::kWs:
      return watts_strogatz(spec.n, spec.k, spec.rewire, spec.seed);
    case Model::kBa:
      return barabasi_albert(spec.n, spec.m_attach, spec.seed);
    case Model::kPath:
      return path_graph(spec.n);
    case Model::kComplete:
      return complete_graph(spec.n);
    case Model::kFile:
      return spec.format == FileFormat::kCaida ? parse_caida_file(spec.path).graph : read_edge_list_file(spec.path);
  }
  throw InputError("generate: unknown model");
}

}  // namespace qoegap
