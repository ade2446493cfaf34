#include "flocksim/field_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "flocksim/errors.hpp"

namespace flocksim {

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
  double v = 0.0;
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc() || res.ptr != end) {
    throw ConfigError("not a float64 literal: '" + s + "'");
  }
  return v;
}

void write_field_block(std::ostream& os, const ScalarField& f,
                       const std::string& name, double t) {
  os << "FLOCKFIELD v1 dim=" << f.grid().dim() << " N=" << f.grid().points_per_dim()
     << " name=" << name << " t=" << format_double(t) << "\n";
  for (double v : f.values()) os << format_double(v) << "\n";
}

namespace {

std::string expect_kv(const std::string& token, const std::string& key) {
  const std::string prefix = key + "=";
  if (token.rfind(prefix, 0) != 0) {
    throw ConfigError("malformed FLOCKFIELD header token: '" + token + "'");
  }
  return token.substr(prefix.size());
}

}  // namespace

std::vector<FieldBlock> read_field_blocks(std::istream& is) {
  std::vector<FieldBlock> blocks;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream header(line);
    std::string magic, version, dim_tok, n_tok, name_tok, t_tok;
    header >> magic >> version >> dim_tok >> n_tok >> name_tok >> t_tok;
    if (magic != "FLOCKFIELD" || version != "v1") {
      throw ConfigError("expected FLOCKFIELD v1 header, got: '" + line + "'");
    }
    const int dim = std::stoi(expect_kv(dim_tok, "dim"));
    const int n = std::stoi(expect_kv(n_tok, "N"));
    const std::string name = expect_kv(name_tok, "name");
    const double t = parse_double(expect_kv(t_tok, "t"));

    auto grid = TorusGrid::create(dim, n);
    std::vector<double> values;
    values.reserve(grid->node_count());
    for (std::size_t i = 0; i < grid->node_count(); ++i) {
      if (!std::getline(is, line)) {
        throw ConfigError("truncated FLOCKFIELD block '" + name + "'");
      }
      values.push_back(parse_double(line));
    }
    blocks.push_back(FieldBlock{name, t, ScalarField(std::move(grid), std::move(values))});
  }
  return blocks;
}

void write_field_file(const std::string& path,
                      const std::vector<std::pair<std::string, const ScalarField*>>& fields,
                      double t) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot open for writing: " + path);
  for (const auto& [name, f] : fields) write_field_block(os, *f, name, t);
}

std::vector<FieldBlock> read_field_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open for reading: " + path);
  return read_field_blocks(is);
}

}  // namespace flocksim
