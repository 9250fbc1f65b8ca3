#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"

#include "heiscut/cayley.hpp"
#include "heiscut/collapse.hpp"
#include "heiscut/cuts.hpp"
#include "heiscut/distortion.hpp"
#include "heiscut/grid.hpp"
#include "heiscut/metric_space.hpp"
#include "heiscut/perimeter.hpp"

namespace heiscut::io {

using json = nlohmann::json;

// Bit vectors are hex encoded bytewise: bit i lives in byte i/8 at position
// i%8, two lowercase hex digits per byte.
std::string bits_to_hex(const BitVec& bits);
BitVec hex_to_bits(const std::string& hex, std::size_t n);

// {"n": int, "atoms": [{"cut": hex, "weight": w}, ...]}
json cut_measure_to_json(const CutMeasure& sigma);
CutMeasure cut_measure_from_json(const json& j);

json metric_space_to_json(const FiniteMetricSpace& space);
FiniteMetricSpace metric_space_from_json(const json& j);
// one "i j d_ij" line per unordered pair
std::string metric_space_edge_list(const FiniteMetricSpace& space);

// CSV with two header lines (target_weights, domain_weights) and one row of
// values per domain point.
std::string l1map_to_csv(const L1Map& f);
L1Map l1map_from_csv(const std::string& csv);

// binary voxel set: magic+version header, box bounds, resolution, bit-packed
// membership
void write_gridset(const std::string& path, const GridSet& set);
GridSet read_gridset(const std::string& path);

// "voxel,density" rows for the nonzero entries
std::string perimeter_field_to_csv(const PerimeterField& field);

json distortion_to_json(const DistortionResult& result);
json witness_report_to_json(const WitnessReport& report);
json collapse_to_json(const CollapseReport& report);
json scale_report_to_json(const ScaleReport& report);
json bad_mass_to_json(const BadMassReport& report);
json good_bad_to_json(const GoodBadResult& gb);
json straighten_to_json(const StraightenResult& st);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

// stable 64-bit content hash used to stamp configs into results
std::uint64_t fnv1a(const std::string& data);

}  // namespace heiscut::io
