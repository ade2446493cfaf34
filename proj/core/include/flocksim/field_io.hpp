#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "flocksim/field.hpp"

namespace flocksim {

/// One named field block read back from a FLOCKFIELD v1 stream.
struct FieldBlock {
  std::string name;
  double t = 0.0;
  ScalarField field;
};

/// Shortest-representation float64 formatting (round-trip exact).
std::string format_double(double v);
double parse_double(const std::string& s);

/// Writes one FLOCKFIELD v1 block:
///   FLOCKFIELD v1 dim=<n> N=<N> name=<id> t=<time>
/// followed by node values in row-major order, one per line.
void write_field_block(std::ostream& os, const ScalarField& f,
                       const std::string& name, double t);

/// Reads all FLOCKFIELD blocks from a stream (empty result at EOF).
std::vector<FieldBlock> read_field_blocks(std::istream& is);

void write_field_file(const std::string& path,
                      const std::vector<std::pair<std::string, const ScalarField*>>& fields,
                      double t);
std::vector<FieldBlock> read_field_file(const std::string& path);

}  // namespace flocksim
