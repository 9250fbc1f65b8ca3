#include "heiscut/io.hpp"

#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace heiscut::io {

namespace {
const char* kHexDigits = "0123456789abcdef";
}

std::string bits_to_hex(const BitVec& bits) {
  std::size_t nbytes = (bits.size() + 7) / 8;
  std::string out;
  out.reserve(2 * nbytes);
  for (std::size_t byte = 0; byte < nbytes; ++byte) {
    unsigned v = 0;
    for (unsigned k = 0; k < 8; ++k) {
      std::size_t i = byte * 8 + k;
      if (i < bits.size() && bits.get(i)) v |= 1u << k;
    }
    out.push_back(kHexDigits[v >> 4]);
    out.push_back(kHexDigits[v & 15]);
  }
  return out;
}

BitVec hex_to_bits(const std::string& hex, std::size_t n) {
  std::size_t nbytes = (n + 7) / 8;
  if (hex.size() != 2 * nbytes)
    throw std::invalid_argument("hex_to_bits: length mismatch");
  auto nibble = [](char c) -> unsigned {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw std::invalid_argument("hex_to_bits: bad hex digit");
  };
  BitVec bits(n);
  for (std::size_t byte = 0; byte < nbytes; ++byte) {
    unsigned v = (nibble(hex[2 * byte]) << 4) | nibble(hex[2 * byte + 1]);
    for (unsigned k = 0; k < 8; ++k) {
      std::size_t i = byte * 8 + k;
      if (i < n && ((v >> k) & 1u)) bits.set(i, true);
    }
  }
  return bits;
}

json cut_measure_to_json(const CutMeasure& sigma) {
  json atoms = json::array();
  for (const auto& a : sigma.atoms)
    atoms.push_back({{"cut", bits_to_hex(a.cut.membership())},
                     {"weight", a.weight}});
  return {{"n", sigma.n}, {"atoms", atoms}};
}

CutMeasure cut_measure_from_json(const json& j) {
  CutMeasure sigma;
  sigma.n = j.at("n").get<std::size_t>();
  for (const auto& a : j.at("atoms")) {
    BitVec bits = hex_to_bits(a.at("cut").get<std::string>(), sigma.n);
    sigma.add(Cut::from_membership(bits), a.at("weight").get<double>());
  }
  return sigma;
}

json metric_space_to_json(const FiniteMetricSpace& space) {
  json j;
  j["n"] = space.size();
  j["label"] = space.label;
  j["weights"] = space.weights;
  j["dist"] = space.dist;
  if (!space.coords.empty()) {
    json coords = json::array();
    for (const auto& c : space.coords) coords.push_back({c[0], c[1], c[2]});
    j["points"] = coords;
  }
  return j;
}

FiniteMetricSpace metric_space_from_json(const json& j) {
  FiniteMetricSpace s;
  s.weights = j.at("weights").get<std::vector<double>>();
  s.dist = j.at("dist").get<std::vector<double>>();
  s.label = j.value("label", std::string{});
  if (j.contains("points")) {
    for (const auto& c : j.at("points"))
      s.coords.push_back({c.at(0).get<double>(), c.at(1).get<double>(),
                          c.at(2).get<double>()});
  }
  if (s.dist.size() != s.weights.size() * s.weights.size())
    throw std::invalid_argument("metric space json: matrix size mismatch");
  return s;
}

std::string metric_space_edge_list(const FiniteMetricSpace& space) {
  std::ostringstream os;
  std::size_t n = space.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      os << i << " " << j << " " << space.d(i, j) << "\n";
  return os.str();
}

std::string l1map_to_csv(const L1Map& f) {
  std::ostringstream os;
  os.precision(17);
  os << "target_weights";
  for (double w : f.target_weights) os << "," << w;
  os << "\ndomain_weights";
  for (double w : f.domain_weights) os << "," << w;
  os << "\n";
  for (std::size_t i = 0; i < f.n; ++i) {
    for (std::size_t j = 0; j < f.m; ++j) {
      if (j) os << ",";
      os << f(i, j);
    }
    os << "\n";
  }
  return os.str();
}

namespace {
std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}
}  // namespace

L1Map l1map_from_csv(const std::string& csv) {
  std::istringstream is(csv);
  std::string line;
  L1Map f;
  if (!std::getline(is, line) || line.rfind("target_weights", 0) != 0)
    throw std::invalid_argument("l1map csv: missing target_weights header");
  {
    auto parts = split(line, ',');
    for (std::size_t k = 1; k < parts.size(); ++k)
      f.target_weights.push_back(std::stod(parts[k]));
  }
  if (!std::getline(is, line) || line.rfind("domain_weights", 0) != 0)
    throw std::invalid_argument("l1map csv: missing domain_weights header");
  {
    auto parts = split(line, ',');
    for (std::size_t k = 1; k < parts.size(); ++k)
      f.domain_weights.push_back(std::stod(parts[k]));
  }
  f.m = f.target_weights.size();
  f.n = f.domain_weights.size();
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    auto parts = split(line, ',');
    if (parts.size() != f.m)
      throw std::invalid_argument("l1map csv: row width mismatch");
    for (const auto& p : parts) f.values.push_back(std::stod(p));
  }
  if (f.values.size() != f.n * f.m)
    throw std::invalid_argument("l1map csv: row count mismatch");
  return f;
}

namespace {
constexpr char kGridMagic[4] = {'H', 'G', 'S', '1'};
}

void write_gridset(const std::string& path, const GridSet& set) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("write_gridset: cannot open " + path);
  os.write(kGridMagic, 4);
  std::uint32_t version = 1;
  os.write(reinterpret_cast<const char*>(&version), 4);
  const auto& g = *set.geom;
  double bounds[6] = {g.lo()[0], g.lo()[1], g.lo()[2],
                      g.hi()[0], g.hi()[1], g.hi()[2]};
  os.write(reinterpret_cast<const char*>(bounds), sizeof(bounds));
  std::uint32_t res[3] = {static_cast<std::uint32_t>(g.res()[0]),
                          static_cast<std::uint32_t>(g.res()[1]),
                          static_cast<std::uint32_t>(g.res()[2])};
  os.write(reinterpret_cast<const char*>(res), sizeof(res));
  std::size_t n = set.membership.size();
  std::vector<unsigned char> bytes((n + 7) / 8, 0);
  for (std::size_t i = 0; i < n; ++i)
    if (set.membership.get(i)) bytes[i >> 3] |= 1u << (i & 7);
  os.write(reinterpret_cast<const char*>(bytes.data()),
           static_cast<std::streamsize>(bytes.size()));
}

GridSet read_gridset(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("read_gridset: cannot open " + path);
  char magic[4];
  is.read(magic, 4);
  if (std::memcmp(magic, kGridMagic, 4) != 0)
    throw std::runtime_error("read_gridset: bad magic");
  std::uint32_t version = 0;
  is.read(reinterpret_cast<char*>(&version), 4);
  if (version != 1) throw std::runtime_error("read_gridset: bad version");
  double bounds[6];
  is.read(reinterpret_cast<char*>(bounds), sizeof(bounds));
  std::uint32_t res[3];
  is.read(reinterpret_cast<char*>(res), sizeof(res));
  auto geom = std::make_shared<GridGeometry>(
      std::array<double, 3>{bounds[0], bounds[1], bounds[2]},
      std::array<double, 3>{bounds[3], bounds[4], bounds[5]},
      std::array<std::size_t, 3>{res[0], res[1], res[2]});
  std::size_t n = geom->num_voxels();
  std::vector<unsigned char> bytes((n + 7) / 8, 0);
  is.read(reinterpret_cast<char*>(bytes.data()),
          static_cast<std::streamsize>(bytes.size()));
  if (!is) throw std::runtime_error("read_gridset: truncated payload");
  BitVec bits(n);
  for (std::size_t i = 0; i < n; ++i)
    if ((bytes[i >> 3] >> (i & 7)) & 1u) bits.set(i, true);
  return {geom, std::move(bits)};
}

std::string perimeter_field_to_csv(const PerimeterField& field) {
  std::ostringstream os;
  os.precision(17);
  os << "voxel,density\n";
  for (std::size_t v = 0; v < field.density.size(); ++v)
    if (field.density[v] != 0.0) os << v << "," << field.density[v] << "\n";
  return os.str();
}

json distortion_to_json(const DistortionResult& result) {
  return {{"distortion", result.distortion},
          {"s_value", result.s_value},
          {"status", to_string(result.status)},
          {"n_cuts", result.witness.atoms.size()},
          {"lp_stats",
           {{"pivots", result.lp_stats.pivots},
            {"master_solves", result.lp_stats.master_solves},
            {"columns_added", result.lp_stats.columns_added},
            {"rows_active", result.lp_stats.rows_active},
            {"budget_exhausted", result.lp_stats.budget_exhausted},
            {"separation_exhausted", result.lp_stats.separation_exhausted}}}};
}

json witness_report_to_json(const WitnessReport& report) {
  return {{"max_nonexpansive_violation", report.max_nonexpansive_violation},
          {"max_colipschitz_violation", report.max_colipschitz_violation},
          {"min_ratio", report.min_ratio},
          {"achieved_distortion",
           report.infinite ? json("inf") : json(report.achieved_distortion)},
          {"infinite", report.infinite}};
}

json collapse_to_json(const CollapseReport& report) {
  return {{"basepoint", {report.basepoint.a, report.basepoint.b, report.basepoint.c}},
          {"direction", report.direction},
          {"t_list", report.t_list},
          {"ratios", report.ratios},
          {"numerators", report.numerators},
          {"denominators", report.denominators},
          {"slope", report.slope},
          {"resolution_floor", report.resolution_floor}};
}

json scale_report_to_json(const ScaleReport& report) {
  json entries = json::array();
  for (const auto& e : report.entries) {
    entries.push_back({{"r", e.r},
                       {"R0", e.R0},
                       {"skipped", e.skipped},
                       {"skip_reason", e.skip_reason},
                       {"D", e.D},
                       {"D_good", e.D_good},
                       {"D_bad", e.D_bad},
                       {"triangle_ok", e.triangle_ok},
                       {"sigma_good", e.sigma_good},
                       {"n_good", e.n_good},
                       {"n_bad", e.n_bad},
                       {"n_demoted", e.n_demoted},
                       {"mass_straightened", e.mass_straightened}});
  }
  return {{"basepoint", {report.basepoint.a, report.basepoint.b, report.basepoint.c}},
          {"delta", report.delta},
          {"eps", report.eps},
          {"seed", report.seed},
          {"pairs", report.pairs},
          {"entries", entries}};
}

json bad_mass_to_json(const BadMassReport& report) {
  return {{"R_list", report.R_list},
          {"bad_mass", report.bad_mass},
          {"total_mass", report.total_mass},
          {"eps", report.eps},
          {"r_floor", report.r_floor}};
}

json good_bad_to_json(const GoodBadResult& gb) {
  return {{"good", gb.good},
          {"bad", gb.bad},
          {"sigma_good", gb.sigma_good},
          {"c0_measured", gb.c0_measured},
          {"bad_perimeter_ratio", gb.bad_perimeter_ratio},
          {"bad_bound", gb.bad_bound},
          {"bad_bound_satisfied", gb.bad_bound_satisfied},
          {"hs_lower_c", gb.hs_lower_c}};
}

json straighten_to_json(const StraightenResult& st) {
  json atoms = json::array();
  for (const auto& a : st.atoms)
    atoms.push_back({{"a0", a.half_space.a0},
                     {"b0", a.half_space.b0},
                     {"theta", a.half_space.theta},
                     {"weight", a.weight},
                     {"alpha_2r", a.alpha_2r},
                     {"source", a.source}});
  json j = good_bad_to_json(st.partition);
  j["atoms"] = atoms;
  j["demoted"] = st.demoted;
  j["mass"] = st.mass;
  return j;
}

std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path);
  os << content;
}

std::uint64_t fnv1a(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace heiscut::io
