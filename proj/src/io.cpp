#include "riesz/io.hpp"

#include <sstream>
#include <stdexcept>

namespace riesz::io {

json to_json(const QuadNum& x) {
  return json{{"p", format_rational(x.p())}, {"q", format_rational(x.q())}, {"D", x.radicand()}};
}

QuadNum quadnum_from_json(const json& j) {
  if (!j.is_object() || !j.contains("p") || !j.contains("q") || !j.contains("D")) {
    throw std::invalid_argument("QuadNum JSON needs p, q and D");
  }
  return QuadNum(parse_rational(j.at("p").get<std::string>()), parse_rational(j.at("q").get<std::string>()),
                 j.at("D").get<long>());
}

json to_json(const UnitInterval& interval) {
  return json{{"lo", to_json(interval.lo())},
              {"hi", to_json(interval.hi())},
              {"lo_approx", interval.lo().approx()},
              {"hi_approx", interval.hi().approx()}};
}

namespace {

std::vector<std::pair<double, double>> read_pairs(const json& arr, const char* key) {
  if (!arr.is_array() || arr.empty()) throw std::invalid_argument(std::string(key) + " must be a non-empty array");
  std::vector<std::pair<double, double>> out;
  for (const auto& band : arr) {
    if (!band.is_array() || band.size() != 2) throw std::invalid_argument(std::string(key) + " entries must be [lo, hi]");
    out.emplace_back(band[0].get<double>(), band[1].get<double>());
  }
  return out;
}

}  // namespace

MultibandSet multiband_from_json(const json& j) {
  if (j.is_object() && j.contains("bands_2pi")) {
    const auto pairs = read_pairs(j.at("bands_2pi"), "bands_2pi");
    for (const auto& [a, b] : pairs) {
      if (!(a >= 0.0 && a < b && b <= 1.0)) throw std::invalid_argument("bands_2pi entries need 0 <= a < b <= 1");
    }
    return normalize_bands_2pi(pairs);
  }
  if (j.is_object() && j.contains("bands_rad")) return normalize_bands(read_pairs(j.at("bands_rad"), "bands_rad"));
  throw std::invalid_argument("spectrum JSON needs bands_2pi or bands_rad");
}

json to_json(const MultibandSet& s) {
  json rad = json::array();
  json frac = json::array();
  for (const Arc& a : s.arcs()) {
    rad.push_back({a.start, a.end});
    frac.push_back({a.start / kTwoPi, a.end / kTwoPi});
  }
  return json{{"bands_rad", rad}, {"bands_2pi", frac}, {"measure", s.measure()},
              {"measure_2pi", s.normalized_measure()}};
}

json to_json(const PointSet& p) {
  return json{{"window", {p.window_lo, p.window_hi}}, {"elements", p.elements}, {"count", p.size()}};
}

PointSet pointset_from_json(const json& j) {
  PointSet p;
  if (j.is_array()) {
    p.elements = j.get<std::vector<long>>();
    if (p.elements.empty()) throw std::invalid_argument("point set is empty");
    std::sort(p.elements.begin(), p.elements.end());
    p.window_lo = p.elements.front();
    p.window_hi = p.elements.back();
  } else {
    if (!j.contains("elements")) throw std::invalid_argument("point set JSON needs elements");
    p.elements = j.at("elements").get<std::vector<long>>();
    if (j.contains("window")) {
      const auto w = j.at("window").get<std::vector<long>>();
      if (w.size() != 2) throw std::invalid_argument("window must be [lo, hi]");
      p.window_lo = w[0];
      p.window_hi = w[1];
    } else if (!p.elements.empty()) {
      p.window_lo = *std::min_element(p.elements.begin(), p.elements.end());
      p.window_hi = *std::max_element(p.elements.begin(), p.elements.end());
    }
  }
  p.validate();
  return p;
}

json to_json(const QcParams& params) {
  return json{{"mode", std::string(to_string(params.mode))},
              {"n", params.n},
              {"a", to_json(params.a)},
              {"a_approx", params.a.approx()},
              {"alpha", to_json(params.alpha)},
              {"alpha_approx", params.alpha.approx()},
              {"interval", to_json(params.interval)},
              {"riesz_interval", to_json(params.riesz_interval())},
              {"s_norm", params.s_norm},
              {"s_norm_exact", format_rational(params.s_norm_exact)}};
}

json to_json(const GapStats& g) {
  json hist = json::object();
  json values = json::array();
  for (const auto& [gap, count] : g.histogram()) {
    hist[std::to_string(gap)] = count;
    values.push_back(gap);
  }
  return json{{"gamma", g.gamma}, {"min_gap", g.min_gap}, {"gap_values", values}, {"histogram", hist}};
}

json to_json(const DensityStats& d) {
  return json{{"upper", d.upper_density_est},
              {"lower", d.lower_density_est},
              {"asymptotic", d.asymptotic_density_est},
              {"r", d.window_r}};
}

json to_json(const GramCertificate& cert) {
  json lmin = json::array();
  json lmax = json::array();
  json nmin = json::array();
  json nmax = json::array();
  const double to_norm = cert.normalized ? 1.0 : 1.0 / kTwoPi;
  for (const auto& b : cert.spectra) {
    lmin.push_back(b.lambda_min);
    lmax.push_back(b.lambda_max);
    nmin.push_back(b.lambda_min * to_norm);
    nmax.push_back(b.lambda_max * to_norm);
  }
  return json{{"schema", kSchema},
              {"source", cert.source},
              {"S", to_json(cert.spectrum)},
              {"normalized", cert.normalized},
              {"schedule", cert.schedule},
              {"lambda_min", lmin},
              {"lambda_max", lmax},
              {"lambda_min_normalized", nmin},
              {"lambda_max_normalized", nmax},
              {"verdict", std::string(to_string(cert.verdict))},
              {"threshold", cert.threshold},
              {"drop_ratio", cert.drop_ratio},
              {"final_relative_drop", cert.final_relative_drop()},
              {"refute_floor", cert.refute_floor},
              {"note", cert.note}};
}

std::string certificate_csv(const GramCertificate& cert) {
  std::ostringstream out;
  out.precision(17);
  out << "window,lambda_min,lambda_max\n";
  for (std::size_t i = 0; i < cert.schedule.size(); ++i) {
    out << cert.schedule[i] << ',' << cert.spectra[i].lambda_min << ',' << cert.spectra[i].lambda_max << '\n';
  }
  return out.str();
}

json to_json(const SelectorResult& r) {
  return json{{"schema", kSchema},
              {"selector", r.selector},
              {"lambda_min", r.achieved_lambda_min},
              {"lambda_max", r.achieved_lambda_max},
              {"trials_used", r.trials_used},
              {"winning_trial", r.winning_trial},
              {"seed", r.seed},
              {"target", r.target},
              {"verdict", r.success ? "found" : "not_found"}};
}

VectorSystem vector_system_from_json(const json& j) {
  const json& rows = j.is_object() && j.contains("matrix") ? j.at("matrix") : j;
  if (!rows.is_array() || rows.empty() || !rows[0].is_array()) {
    throw std::invalid_argument("vector system JSON must be a matrix (array of rows)");
  }
  const auto nrows = static_cast<Eigen::Index>(rows.size());
  const auto ncols = static_cast<Eigen::Index>(rows[0].size());
  ComplexMatrix m(nrows, ncols);
  for (Eigen::Index r = 0; r < nrows; ++r) {
    if (static_cast<Eigen::Index>(rows[r].size()) != ncols) throw std::invalid_argument("ragged matrix");
    for (Eigen::Index c = 0; c < ncols; ++c) {
      const json& e = rows[r][c];
      if (e.is_number()) {
        m(r, c) = e.get<double>();
      } else if (e.is_array() && e.size() == 2) {
        m(r, c) = {e[0].get<double>(), e[1].get<double>()};
      } else {
        throw std::invalid_argument("matrix entries must be numbers or [re, im]");
      }
    }
  }
  if (j.is_object() && j.contains("labels")) return VectorSystem(std::move(m), j.at("labels").get<std::vector<long>>());
  return VectorSystem(std::move(m));
}

BoxSet boxset_from_json(const json& j) {
  const bool frac = j.contains("boxes_2pi");
  if (!frac && !j.contains("boxes_rad")) throw std::invalid_argument("box set JSON needs boxes_2pi or boxes_rad");
  std::vector<std::vector<std::pair<double, double>>> boxes;
  for (const auto& box : j.at(frac ? "boxes_2pi" : "boxes_rad")) {
    boxes.push_back(read_pairs(box, "box"));
  }
  if (frac) return BoxSet::from_2pi(boxes);
  BoxSet out{boxes};
  out.validate();
  return out;
}

json to_json(const IntVec& v) { return json(v); }

json to_json(const std::vector<IntVec>& vs) {
  json out = json::array();
  for (const auto& v : vs) out.push_back(v);
  return out;
}

}  // namespace riesz::io
