#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "qoegap/graph.hpp"

namespace qoegap {

class ParseError : public InputError {
 public:
  ParseError(const std::string& what, std::size_t line)
      : InputError("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Whitespace-separated "u v" pairs, one per line; blank lines and lines
// starting with '#' are skipped. The node count is max id + 1 unless a
// "# nodes N" line declares more.
Graph read_edge_list(std::istream& in);
Graph read_edge_list_file(const std::string& path);

// Canonical form: edges sorted by (min id, max id). A "# nodes N" line is
// written first only when trailing isolated nodes would otherwise be lost.
void write_edge_list(std::ostream& out, const Graph& g);
std::string edge_list_string(const Graph& g);

struct AsGraph {
  Graph graph;
  // Dense id -> AS number, ascending.
  std::vector<std::uint64_t> as_numbers;
};

// CAIDA as-rel lines "ASa|ASb|type[|...]" with type -1 or 0. AS numbers are
// remapped to dense ids in ascending order; relationship types are dropped.
AsGraph parse_caida_as_rel(std::istream& in);
AsGraph parse_caida_file(const std::string& path);

// Re-serialization in as-rel form, one "a|b|0" line per edge in id order.
void write_caida_as_rel(std::ostream& out, const AsGraph& g);

}  // namespace qoegap
