#include "qoegap/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string_view>

namespace qoegap {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <class T>
bool to_integer(std::string_view s, T& out) {
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  return in;
}

}  // namespace

Graph read_edge_list(std::istream& in) {
  std::vector<Edge> edges;
  std::size_t n = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view text = trim(line);
    if (text.empty()) continue;
    if (text.front() == '#') {
      std::istringstream header{std::string(text.substr(1))};
      std::string word;
      std::size_t declared = 0;
      if (header >> word && word == "nodes" && header >> declared) n = std::max(n, declared);
      continue;
    }
    std::istringstream fields{std::string(text)};
    std::string a;
    std::string b;
    std::string extra;
    NodeId u = 0;
    NodeId v = 0;
    if (!(fields >> a >> b) || (fields >> extra) || !to_integer(a, u) || !to_integer(b, v)) {
      throw ParseError("expected two node ids, got '" + std::string(text) + "'", lineno);
    }
    if (u == kNoNode || v == kNoNode) throw ParseError("node id too large", lineno);
    edges.emplace_back(u, v);
    n = std::max<std::size_t>(n, std::max(u, v) + std::size_t{1});
  }
  return build_graph(n, edges).graph;
}

Graph read_edge_list_file(const std::string& path) {
  auto in = open_or_throw(path);
  return read_edge_list(in);
}

void write_edge_list(std::ostream& out, const Graph& g) {
  const auto edges = g.edges();
  std::size_t implied = 0;
  for (const auto& [u, v] : edges) implied = std::max<std::size_t>(implied, v + std::size_t{1});
  if (implied != g.node_count()) out << "# nodes " << g.node_count() << '\n';
  for (const auto& [u, v] : edges) out << u << ' ' << v << '\n';
}

std::string edge_list_string(const Graph& g) {
  std::ostringstream os;
  write_edge_list(os, g);
  return os.str();
}

AsGraph parse_caida_as_rel(std::istream& in) {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> raw;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    std::string_view fields[3];
    std::string_view rest = text;
    for (int f = 0; f < 3; ++f) {
      const auto bar = rest.find('|');
      if (bar == std::string_view::npos && f < 2) throw ParseError("expected 'ASa|ASb|type'", lineno);
      fields[f] = rest.substr(0, bar);
      rest = bar == std::string_view::npos ? std::string_view{} : rest.substr(bar + 1);
    }
    std::uint64_t a = 0;
    std::uint64_t b = 0;
    int type = 0;
    if (!to_integer(fields[0], a) || !to_integer(fields[1], b)) throw ParseError("bad AS number", lineno);
    if (!to_integer(fields[2], type) || (type != -1 && type != 0)) {
      throw ParseError("relationship type must be -1 or 0", lineno);
    }
    raw.emplace_back(a, b);
  }
  if (raw.empty()) throw InputError("CAIDA input contains no relationships");

  std::map<std::uint64_t, NodeId> ids;
  for (const auto& [a, b] : raw) {
    ids.emplace(a, 0);
    ids.emplace(b, 0);
  }
  AsGraph out;
  out.as_numbers.reserve(ids.size());
  NodeId next = 0;
  for (auto& [as, id] : ids) {
    id = next++;
    out.as_numbers.push_back(as);
  }
  std::vector<Edge> edges;
  edges.reserve(raw.size());
  for (const auto& [a, b] : raw) edges.emplace_back(ids[a], ids[b]);
  out.graph = build_graph(ids.size(), edges).graph;
  return out;
}

AsGraph parse_caida_file(const std::string& path) {
  auto in = open_or_throw(path);
  return parse_caida_as_rel(in);
}

void write_caida_as_rel(std::ostream& out, const AsGraph& g) {
  for (const auto& [u, v] : g.graph.edges()) out << g.as_numbers[u] << '|' << g.as_numbers[v] << "|0\n";
}

}  // namespace qoegap
