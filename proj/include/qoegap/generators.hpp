#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "qoegap/graph.hpp"

namespace qoegap {

enum class Model { kEr, kWs, kBa, kPath, kComplete, kFile };
enum class FileFormat { kEdgeList, kCaida };

const char* to_string(Model m);

struct GraphSpec {
  Model model = Model::kPath;
  std::size_t n = 0;
  double p = 0.05;            // er
  std::size_t k = 6;          // ws: ring neighbours, even
  double rewire = 0.1;        // ws
  std::size_t m_attach = 2;   // ba
  std::string path;           // file
  FileFormat format = FileFormat::kEdgeList;
  std::uint64_t seed = 1;

  // Throws InputError when a parameter is out of range.
  void validate() const;
  // Canonical "model:key=value,..." form accepted by parse_graph_spec.
  std::string to_string() const;
};

GraphSpec er_spec(std::size_t n, double p, std::uint64_t seed);
GraphSpec ws_spec(std::size_t n, std::size_t k, double rewire, std::uint64_t seed);
GraphSpec ba_spec(std::size_t n, std::size_t m_attach, std::uint64_t seed);
GraphSpec path_spec(std::size_t n);
GraphSpec complete_spec(std::size_t n);

// Parses "er:n=200,p=0.05,seed=3", "ws:n=200,k=6,rewire=0.1", "ba:n=200,m=2",
// "path:n=200", "complete:n=4", "file:path=x.txt,format=caida". Throws
// InputError on unknown models or keys.
GraphSpec parse_graph_spec(std::string_view text);

// Raw generated (or loaded) graph; may be disconnected for er/ws/file.
Graph generate(const GraphSpec& spec);

Graph path_graph(std::size_t n);
Graph complete_graph(std::size_t n);
Graph erdos_renyi(std::size_t n, double p, std::uint64_t seed);
Graph watts_strogatz(std::size_t n, std::size_t k, double rewire, std::uint64_t seed);
Graph barabasi_albert(std::size_t n, std::size_t m_attach, std::uint64_t seed);

}  // namespace qoegap
