#pragma once

#include <json.hpp>

#include <string>

#include "riesz/frames.hpp"
#include "riesz/gram.hpp"
#include "riesz/lattice.hpp"
#include "riesz/quadfield.hpp"
#include "riesz/quasicrystal.hpp"
#include "riesz/torus.hpp"

namespace riesz::io {

using json = nlohmann::json;

inline constexpr const char* kSchema = "riesz-forge/1";

json to_json(const QuadNum& x);
QuadNum quadnum_from_json(const json& j);

json to_json(const UnitInterval& interval);

/// {"bands_2pi": [[a,b],...]} (0 <= a < b <= 1) or {"bands_rad": [[a,b],...]}.
MultibandSet multiband_from_json(const json& j);
json to_json(const MultibandSet& s);

json to_json(const PointSet& p);
PointSet pointset_from_json(const json& j);

json to_json(const QcParams& params);
json to_json(const GapStats& g);
json to_json(const DensityStats& d);

json to_json(const GramCertificate& cert);
/// window,lambda_min,lambda_max
std::string certificate_csv(const GramCertificate& cert);

json to_json(const SelectorResult& r);

/// Rows are components, columns are vectors; entries are numbers or [re, im].
VectorSystem vector_system_from_json(const json& j);

/// {"boxes_2pi": [[[a1,b1],...,[ad,bd]],...]} or {"boxes_rad": ...}.
BoxSet boxset_from_json(const json& j);
json to_json(const IntVec& v);
json to_json(const std::vector<IntVec>& vs);

}  // namespace riesz::io
