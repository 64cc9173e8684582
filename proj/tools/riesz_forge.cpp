// riesz-forge: command line front end.
//
// Exit codes: 0 success/supported, 1 usage or input error, 2 refuted,
// 3 inconclusive or no selector found.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>

#include "riesz/io.hpp"

namespace {

using namespace riesz;
using io::json;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitRefuted = 2;
constexpr int kExitNotFound = 3;

struct RunSpec {
  std::string bands;
  std::string bands_file;
  std::string boxes_file;
  std::string points_file;
  double measure = 0.0;
  long step = 0;
  long window = 0;
  std::string window_2d;
  std::string schedule;
  double threshold = std::numeric_limits<double>::quiet_NaN();
  double drop_ratio = 0.05;
  double refute_floor = std::numeric_limits<double>::quiet_NaN();
  double tol = 0.02;
  long r = 0;
  long density_r = 0;
  int dim = 2;
  std::string mode = "auto";
  std::uint64_t seed = 0;
  long trials = 10000;
  double delta0 = 0.1;
  unsigned threads = 1;
  int cross_check = 0;
  bool normalized = false;
  std::string out;
  std::string csv;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void emit(const json& j, const RunSpec& spec) {
  const std::string text = j.dump(2) + "\n";
  if (spec.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(spec.out);
    if (!f) throw std::invalid_argument("cannot write '" + spec.out + "'");
    f << text;
  }
}

bool has_spectrum(const RunSpec& spec) {
  return !spec.bands.empty() || !spec.bands_file.empty() || spec.measure > 0.0;
}

// --bands takes a JSON array of [a, b] pairs in units of 2pi, or a full
// spectrum object.
MultibandSet load_spectrum(const RunSpec& spec) {
  if (!spec.bands.empty()) {
    const json j = json::parse(spec.bands);
    return io::multiband_from_json(j.is_array() ? json{{"bands_2pi", j}} : j);
  }
  if (!spec.bands_file.empty()) return io::multiband_from_json(json::parse(read_file(spec.bands_file)));
  if (spec.measure > 0.0) return single_arc(spec.measure);
  throw std::invalid_argument("a spectrum is required (--bands, --bands-file or --measure)");
}

std::vector<long> parse_list(const std::string& text) {
  std::vector<long> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    const long v = std::stol(item, &used);
    if (used != item.size()) throw std::invalid_argument("bad integer list '" + text + "'");
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("empty integer list");
  return out;
}

// --window N means the centered integer window [-floor(N/2), ceil(N/2)].
std::pair<long, long> centered_window(long n) {
  if (n < 1) throw std::invalid_argument("--window must be >= 1");
  return {-(n / 2), n - n / 2};
}

json gap_json_or_null(const PointSet& p) {
  if (p.size() < 2) return nullptr;
  return io::to_json(gap_stats(p));
}

long default_density_r(const PointSet& p, long requested) {
  if (requested > 0) return requested;
  return std::max(1L, std::min(1000L, p.window_length() / 10));
}

// ---------------------------------------------------------------------------

int cmd_construct(const RunSpec& spec) {
  const MultibandSet s = load_spectrum(spec);
  const auto [lo, hi] = centered_window(spec.window > 0 ? spec.window : 10000);
  json out{{"schema", io::kSchema}, {"command", "construct"}, {"S", io::to_json(s)}};

  PointSet riesz_set;
  if (s.is_full()) {
    out["params"] = json{{"mode", "full"}};
    riesz_set = integer_window(lo, hi);
  } else {
    const QcParams params = choose_params(s.normalized_measure(), parse_mode_hint(spec.mode));
    out["params"] = io::to_json(params);
    riesz_set = construct_riesz_set(params, lo, hi);
    if (params.mode == QcMode::large) {
      const PointSet removed = generate(params.alpha, params.interval, lo, hi);
      const MultibandSet sc = complement(s);
      json comp{{"points", io::to_json(removed)}, {"gaps", gap_json_or_null(removed)}};
      if (removed.size() >= 2) {
        const long sep = gap_stats(removed).min_gap;
        comp["separation"] = sep;
        comp["separation_times_complement_measure"] = static_cast<double>(sep) * sc.measure();
        comp["separation_at_least_n"] = sep >= params.n;
      }
      comp["S_complement"] = io::to_json(sc);
      out["complement"] = comp;
    }
  }
  out["riesz_set"] = io::to_json(riesz_set);
  out["gaps"] = gap_json_or_null(riesz_set);
  const long r = default_density_r(riesz_set, spec.density_r);
  out["density"] = io::to_json(density_stats(riesz_set, r));
  out["landau"] = json{{"pass", landau_check(riesz_set, s, r, spec.tol)}, {"tol", spec.tol}, {"r", r}};
  emit(out, spec);
  return kExitOk;
}

int cmd_certify(const RunSpec& spec) {
  const MultibandSet s = load_spectrum(spec);
  CertifyOptions opts;
  if (!spec.schedule.empty()) opts.schedule = parse_list(spec.schedule);
  opts.normalized = spec.normalized;
  const double unit = spec.normalized ? 1.0 : kTwoPi;
  opts.threshold = std::isnan(spec.threshold) ? 1e-3 * unit : spec.threshold;
  opts.drop_ratio = spec.drop_ratio;
  if (!std::isnan(spec.refute_floor)) opts.refute_floor = spec.refute_floor;

  GramCertificate cert;
  PointSet used;
  if (!spec.points_file.empty()) {
    used = io::pointset_from_json(json::parse(read_file(spec.points_file)));
    cert = certify(used, s, opts, "points file " + spec.points_file);
  } else if (spec.step > 0) {
    const long half = opts.schedule.back() * spec.step + spec.step;
    used = progression(spec.step, -half, half);
    cert = certify(used, s, opts, "progression " + std::to_string(spec.step) + "Z");
  } else if (s.is_full()) {
    const long half = opts.schedule.back() + 1;
    used = integer_window(-half, half);
    cert = certify(used, s, opts, "integers Z");
  } else {
    const QcParams params = choose_params(s.normalized_measure(), parse_mode_hint(spec.mode));
    std::ostringstream desc;
    desc << "quasicrystal mode=" << to_string(params.mode) << " n=" << params.n << " a=" << params.a.to_string()
         << " alpha=" << params.alpha.to_string();
    PointSource source = [&params](long lo, long hi) { return construct_riesz_set(params, lo, hi); };
    cert = certify(source, s, opts, desc.str());
    const long half = opts.schedule.back() * (params.n + 1);
    used = construct_riesz_set(params, -half, half);
  }

  json out = io::to_json(cert);
  if (spec.cross_check > 0) {
    out["offset_window_min"] =
        offset_window_min(used, s, opts.schedule.back(), spec.cross_check, spec.seed, spec.normalized);
  }
  emit(out, spec);
  if (!spec.csv.empty()) {
    std::ofstream f(spec.csv);
    if (!f) throw std::invalid_argument("cannot write '" + spec.csv + "'");
    f << io::certificate_csv(cert);
  }
  switch (cert.verdict) {
    case Verdict::supported: return kExitOk;
    case Verdict::refuted: return kExitRefuted;
    case Verdict::inconclusive: return kExitNotFound;
  }
  return kExitNotFound;
}

int cmd_select(const RunSpec& spec) {
  const MultibandSet s = load_spectrum(spec);
  const long n = spec.window > 0 ? spec.window : 64;
  const long r = spec.r > 0 ? spec.r : 2;
  std::vector<long> freqs(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) freqs[static_cast<std::size_t>(i)] = i;
  const BlockSystem blocks = consecutive_blocks(0, n, r);

  SelectorConfig cfg;
  cfg.delta0 = spec.delta0;
  cfg.master_seed = spec.seed;
  cfg.max_trials = spec.trials;
  cfg.threads = spec.threads;
  const double threshold = std::isnan(spec.threshold) ? 0.05 * kTwoPi : spec.threshold;

  const HermitianMatrix gram = build_gram(freqs, s, false);
  const SelectorResult res = select_riesz(gram, freqs, blocks, threshold, cfg);

  json out = io::to_json(res);
  out["command"] = "select";
  out["S"] = io::to_json(s);
  out["r"] = r;
  out["window"] = {0, n - 1};
  out["blocks"] = blocks.blocks.size();
  out["lambda_min_normalized"] = res.achieved_lambda_min / kTwoPi;
  out["lambda_max_normalized"] = res.achieved_lambda_max / kTwoPi;
  out["theory"] = json{{"delta0", cfg.delta0},
                       {"eps0", cfg.eps0()},
                       {"C_formula", cfg.c_formula()},
                       {"predicted_r", cfg.predicted_block_size(s.normalized_measure())}};
  if (r == 1) out["note"] = "r = 1 forces the full window; see certify for the Riesz verdict of the whole set";
  emit(out, spec);
  return res.success ? kExitOk : kExitNotFound;
}

LatticeWindow partition_window(const RunSpec& spec, long r) {
  if (!spec.window_2d.empty()) {
    if (spec.dim != 2) throw std::invalid_argument("--window-2d needs --dim 2");
    const auto v = parse_list(spec.window_2d);
    if (v.size() != 4) throw std::invalid_argument("--window-2d expects x0,x1,y0,y1");
    LatticeWindow w{{v[0], v[2]}, {v[1], v[3]}};
    w.validate();
    return w;
  }
  const long n = spec.window > 0 ? spec.window : 6 * r;
  return LatticeWindow::cube(spec.dim, 0, n - 1);
}

int cmd_partition(const RunSpec& spec) {
  const long r = spec.r > 0 ? spec.r : 2;
  const LatticeWindow window = partition_window(spec, r);
  const std::vector<Segment> segments = cycling_partition(spec.dim, r, window);

  json out{{"schema", io::kSchema}, {"command", "partition"}, {"dim", spec.dim}, {"r", r},
           {"window", {{"lo", window.lo}, {"hi", window.hi}}}};
  json segs = json::array();
  for (const Segment& seg : segments) {
    segs.push_back(json{{"base", seg.base}, {"offset", seg.offset}, {"axis", seg.axis}, {"cells", io::to_json(seg.cells)}});
  }
  out["segments"] = segs;
  out["segment_count"] = segments.size();

  std::vector<IntVec> selected;
  int code = kExitOk;
  const bool spectral = !spec.boxes_file.empty() || (spec.dim == 1 && has_spectrum(spec));
  if (spectral) {
    BoxSet boxes;
    if (!spec.boxes_file.empty()) {
      boxes = io::boxset_from_json(json::parse(read_file(spec.boxes_file)));
    } else {
      for (const Arc& a : load_spectrum(spec).arcs()) boxes.boxes.push_back({{a.start, a.end}});
      boxes.validate();
    }
    if (boxes.dim() != spec.dim) throw std::invalid_argument("spectrum dimension does not match --dim");
    // Labels are positions in the flattened cell list.
    std::vector<IntVec> cells;
    BlockSystem blocks;
    for (const Segment& seg : segments) {
      std::vector<long> block;
      for (const IntVec& c : seg.cells) {
        block.push_back(static_cast<long>(cells.size()));
        cells.push_back(c);
      }
      blocks.blocks.push_back(std::move(block));
    }
    std::vector<long> labels(cells.size());
    for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = static_cast<long>(i);
    SelectorConfig cfg;
    cfg.delta0 = spec.delta0;
    cfg.master_seed = spec.seed;
    cfg.max_trials = spec.trials;
    cfg.threads = spec.threads;
    const double threshold = std::isnan(spec.threshold) ? 1e-3 * std::pow(kTwoPi, spec.dim) : spec.threshold;
    const SelectorResult res = select_riesz(build_gram_d(cells, boxes, false), labels, blocks, threshold, cfg);
    for (long l : res.selector) selected.push_back(cells[static_cast<std::size_t>(l)]);
    json sel = io::to_json(res);
    sel.erase("selector");
    out["selection"] = sel;
    code = res.success ? kExitOk : kExitNotFound;
  } else {
    selected = random_selection(cells_of(segments), spec.seed);
    out["selection"] = json{{"method", "random"}, {"seed", spec.seed}};
  }
  out["selected"] = io::to_json(selected);
  out["selected_count"] = selected.size();

  const SectionSummary sections = all_section_gaps(selected, window);
  const long bound = 2 * spec.dim * r;
  json sec{{"sections", sections.sections}, {"empty_sections", sections.empty_sections}, {"bound_2dr", bound}};
  if (sections.empty_sections == 0) {
    sec["max_gap"] = sections.max_gap;
    sec["within_bound"] = sections.max_gap <= bound;
  } else {
    sec["max_gap"] = "infinite";
    sec["within_bound"] = false;
  }
  out["sections"] = sec;
  try {
    out["covering_radius"] = covering_radius(selected, window, r);
    out["covering_margin"] = r;
  } catch (const std::invalid_argument&) {
    out["covering_radius"] = nullptr;
  }
  emit(out, spec);
  return code;
}

// Step of an arithmetic progression, or 0 when the set is not one.
long progression_step(const PointSet& p) {
  if (p.size() < 2) return 0;
  const long step = p.elements[1] - p.elements[0];
  for (std::size_t i = 2; i < p.size(); ++i) {
    if (p.elements[i] - p.elements[i - 1] != step) return 0;
  }
  return step;
}

int cmd_density(const RunSpec& spec) {
  PointSet points;
  if (!spec.points_file.empty()) {
    points = io::pointset_from_json(json::parse(read_file(spec.points_file)));
  } else if (spec.step > 0) {
    const auto [lo, hi] = centered_window(spec.window > 0 ? spec.window : 1000);
    points = progression(spec.step, lo, hi);
  } else {
    throw std::invalid_argument("density needs --points-file or --step");
  }
  const long r = spec.density_r > 0 ? spec.density_r : std::min(100L, points.window_length());
  json out{{"schema", io::kSchema}, {"command", "density"}, {"points", io::to_json(points)},
           {"density", io::to_json(density_stats(points, r))}};
  if (has_spectrum(spec)) {
    const MultibandSet s = load_spectrum(spec);
    out["S"] = io::to_json(s);
    out["landau"] = json{{"pass", landau_check(points, s, r, spec.tol)}, {"tol", spec.tol}, {"r", r}};
    const long step = progression_step(points);
    if (step > 0 && s.arcs().size() == 1) {
      out["kahane"] = json{{"step", step}, {"interval_len", s.measure()},
                           {"verdict", std::string(to_string(kahane_classify(step, s.measure())))}};
    }
  }
  emit(out, spec);
  return kExitOk;
}

int cmd_selftest(const RunSpec& spec) {
  json checks = json::array();
  bool all = true;
  auto record = [&](const std::string& name, bool ok) {
    checks.push_back(json{{"name", name}, {"pass", ok}});
    all = all && ok;
  };

  {
    const auto b = extreme_eigs(build_gram(integer_window(-16, 16), full_torus(), false));
    record("full torus Gram is 2pi I", std::fabs(b.lambda_min - kTwoPi) < 1e-10 && std::fabs(b.lambda_max - kTwoPi) < 1e-10);
  }
  {
    const QuadNum alpha(mpq_class(1, 2), mpq_class(-1, 12), 6);
    const UnitInterval interval(QuadNum::rational(0, 6), QuadNum(0, mpq_class(1, 6), 6));
    const PointSet p = generate(alpha, interval, 0, 18);
    record("exact quasicrystal regression", p.elements == std::vector<long>{0, 1, 4, 7, 8, 11, 14, 17, 18});
  }
  {
    const QcParams params = choose_params(0.45);
    const PointSet p = construct_riesz_set(params, -500, 500);
    const auto h = gap_stats(p).histogram();
    record("two-gap law at s=0.45", h.size() == 2 && h.count(1) == 1 && h.count(3) == 1);
  }
  {
    const auto segs = cycling_partition(2, 2, LatticeWindow::cube(2, 0, 3));
    record("cycling partition axis rule", segs.size() == 8 && segs.front().axis == 2 && segs[2].axis == 1);
  }
  emit(json{{"schema", io::kSchema}, {"command", "selftest"}, {"checks", checks}, {"pass", all}}, spec);
  return all ? kExitOk : kExitRefuted;
}

void add_spectrum_options(CLI::App* cmd, RunSpec& spec) {
  cmd->add_option("--bands", spec.bands, "JSON array of [a,b] bands in units of 2pi, or a spectrum object");
  cmd->add_option("--bands-file", spec.bands_file, "spectrum JSON file ({\"bands_2pi\": ...} or {\"bands_rad\": ...})");
  cmd->add_option("--measure", spec.measure, "single arc [0, measure*2pi)");
}

}  // namespace

int main(int argc, char** argv) {
  RunSpec spec;
  CLI::App app{"riesz-forge: syndetic exponential Riesz sequences and Gram certificates"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--out", spec.out, "write JSON here instead of stdout");
  app.add_option("--seed", spec.seed, "master seed for every random choice");

  auto* construct = app.add_subcommand("construct", "two-gap quasicrystal for a spectrum");
  add_spectrum_options(construct, spec);
  construct->add_option("--window", spec.window, "centered integer window length (default 10000)");
  construct->add_option("--mode", spec.mode, "auto, small or large")->check(CLI::IsMember({"auto", "small", "large"}));
  construct->add_option("--density-r", spec.density_r, "sliding window length for density estimates");
  construct->add_option("--tol", spec.tol, "tolerance for the Landau check");

  auto* certify_cmd = app.add_subcommand("certify", "finite-section Gram certificate");
  add_spectrum_options(certify_cmd, spec);
  certify_cmd->add_option("--points-file", spec.points_file, "explicit point set JSON");
  certify_cmd->add_option("--step", spec.step, "use the progression step*Z");
  certify_cmd->add_option("--mode", spec.mode, "construction mode when no points are given")
      ->check(CLI::IsMember({"auto", "small", "large"}));
  certify_cmd->add_option("--schedule", spec.schedule, "comma separated window sizes");
  certify_cmd->add_option("--threshold", spec.threshold, "lower bound required for 'supported'");
  certify_cmd->add_option("--drop-ratio", spec.drop_ratio, "largest relative drop over the last step");
  certify_cmd->add_option("--refute-floor", spec.refute_floor, "lambda_min below this refutes");
  certify_cmd->add_flag("--normalized", spec.normalized, "divide the Gram by 2pi");
  certify_cmd->add_option("--cross-check", spec.cross_check, "random offset windows to test as well");
  certify_cmd->add_option("--csv", spec.csv, "CSV companion path");

  auto* select = app.add_subcommand("select", "one-per-block Riesz selector");
  add_spectrum_options(select, spec);
  select->add_option("--r", spec.r, "block length (default 2)");
  select->add_option("--window", spec.window, "frequencies 0..N-1 (default 64)");
  select->add_option("--threshold", spec.threshold, "required lambda_min, unnormalized (default 0.05*2pi)");
  select->add_option("--trials", spec.trials, "maximum number of random trials");
  select->add_option("--delta0", spec.delta0, "delta0 used for the reported theory constants");
  select->add_option("--threads", spec.threads, "worker threads");

  auto* partition = app.add_subcommand("partition", "cycling segment partition of a lattice window");
  add_spectrum_options(partition, spec);
  partition->add_option("--dim", spec.dim, "lattice dimension (1-4)")->check(CLI::Range(1, 4));
  partition->add_option("--r", spec.r, "segment length");
  partition->add_option("--window", spec.window, "cube [0, N-1]^d");
  partition->add_option("--window-2d", spec.window_2d, "x0,x1,y0,y1");
  partition->add_option("--boxes-file", spec.boxes_file, "d-dimensional spectrum JSON");
  partition->add_option("--threshold", spec.threshold, "required lambda_min when a spectrum is given");
  partition->add_option("--trials", spec.trials, "maximum number of random trials");
  partition->add_option("--threads", spec.threads, "worker threads");

  auto* density = app.add_subcommand("density", "density estimates and Landau/Kahane verdicts");
  add_spectrum_options(density, spec);
  density->add_option("--points-file", spec.points_file, "explicit point set JSON");
  density->add_option("--step", spec.step, "use the progression step*Z");
  density->add_option("--window", spec.window, "centered window length for --step (default 1000)");
  density->add_option("--r", spec.density_r, "sliding window length");
  density->add_option("--tol", spec.tol, "tolerance for the Landau check");

  auto* selftest = app.add_subcommand("selftest", "quick internal consistency checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (*construct) return cmd_construct(spec);
    if (*certify_cmd) return cmd_certify(spec);
    if (*select) return cmd_select(spec);
    if (*partition) return cmd_partition(spec);
    if (*density) return cmd_density(spec);
    if (*selftest) return cmd_selftest(spec);
  } catch (const std::exception& e) {
    std::cerr << "riesz-forge: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
