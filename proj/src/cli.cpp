#include "isoprof/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>

#include "isoprof/asymptotics.hpp"
#include "isoprof/cmc.hpp"
#include "isoprof/envelope.hpp"
#include "isoprof/families.hpp"
#include "isoprof/geometry.hpp"
#include "isoprof/io.hpp"
#include "isoprof/jacobi.hpp"

namespace isoprof {

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::Vector2d parse_point(const std::string& s) {
  double x = 0.0, y = 0.0;
  if (std::sscanf(s.c_str(), "%lf,%lf", &x, &y) != 2) {
    throw ValidationError("expected a point as \"x,y\", got: " + s);
  }
  return {x, y};
}

std::pair<int, int> parse_grid_dims(const std::string& s) {
  int nx = 0, ny = 0;
  if (std::sscanf(s.c_str(), "%dx%d", &nx, &ny) != 2 || nx < 1 || ny < 1) {
    throw ValidationError("expected a grid as \"NxM\", got: " + s);
  }
  return {nx, ny};
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
  std::error_code ec;
  std::filesystem::create_directories(cfg.out_dir, ec);
  if (ec) throw ValidationError("cannot create output directory: " + cfg.out_dir);
  return (std::filesystem::path(cfg.out_dir) / name).string();
}

ManifoldModel require_model(const RunConfig& cfg) {
  if (cfg.model_path.empty()) throw ValidationError("--model is required");
  return load_model(cfg.model_path);
}

SolveOptions solve_options(const RunConfig& cfg) {
  SolveOptions so;
  so.modes = cfg.modes;
  so.collocation = std::max(2 * cfg.modes + 2, 4 * cfg.modes);
  return so;
}

// Largest volume window every family union can cover, with a relative inset.
std::pair<double, double> coverage_window(const std::vector<ProfileCurve>& curves, double vol) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const ProfileCurve& c : curves) {
    for (int i = 0; i <= 64; ++i) {
      const double t = c.t_min + (c.t_max - c.t_min) * i / 64;
      const double v = c.eval(t).first;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  lo = std::max(lo, 0.0);
  return {std::max(1e-6 * vol, lo + 1e-9 * vol), std::min((1.0 - 1e-6) * vol, hi - 1e-9 * vol)};
}

int cmd_profile(const RunConfig& cfg) {
  const ManifoldModel model = require_model(cfg);
  FamilyOptions fo;
  fo.solve = solve_options(cfg);
  const std::vector<ProfileCurve> curves = enumerate_families(model, fo);

  const double vol = model.total_volume();
  auto [v_lo, v_hi] = coverage_window(curves, vol);
  if (cfg.v_min > 0.0) v_lo = cfg.v_min;
  if (cfg.v_max > 0.0) v_hi = cfg.v_max;
  if (!(v_hi > v_lo)) throw ValidationError("profile window is empty");

  EnvelopeOptions eo;
  eo.grid = cfg.grid;
  const EnvelopeResult envelope = lower_contour(curves, v_lo, v_hi, eo);

  std::vector<double> vs;
  for (int i = 0; i < cfg.samples; ++i) {
    vs.push_back(v_lo + (v_hi - v_lo) * i / (cfg.samples - 1));
  }
  for (const EnvelopeBreakpoint& b : envelope.breakpoints()) vs.push_back(b.v);
  std::sort(vs.begin(), vs.end());
  vs.erase(std::unique(vs.begin(), vs.end(),
                       [&](double a, double b) { return std::abs(a - b) <= 1e-12 * vol; }),
           vs.end());

  std::vector<ProfileRow> rows;
  for (double v : vs) {
    const auto [w, family] = envelope.eval(v);
    rows.push_back({v, w, family});
  }
  write_profile_csv(out_path(cfg, "profile.csv"), rows);

  json report = envelope_report(
      envelope, model.kind() == ModelKind::FlatTorus && model.dimension() >= 3);
  report["v_min"] = v_lo;
  report["v_max"] = v_hi;
  report["grid"] = cfg.grid;
  write_text_file(out_path(cfg, "envelope.json"), report.dump(2) + "\n");
  return 0;
}

int cmd_families(const RunConfig& cfg) {
  const ManifoldModel model = require_model(cfg);
  FamilyOptions fo;
  fo.solve = solve_options(cfg);
  const std::vector<ProfileCurve> curves = enumerate_families(model, fo);

  if (model.kind() == ModelKind::ConformalTorus) {
    for (int axis : {0, 1}) {
      if (!conformal_band_exists(model, axis)) {
        std::cerr << "note: band-" << (axis == 0 ? 'x' : 'y')
                  << " not enumerated (conformal factor varies transversally)\n";
      }
    }
  }

  std::vector<FamilyRow> rows;
  for (const ProfileCurve& c : curves) {
    for (int i = 1; i <= cfg.samples; ++i) {
      const double t = c.t_min + (c.t_max - c.t_min) * i / (cfg.samples + 1);
      const auto [v, w] = c.eval(t);
      rows.push_back({c.family_id, t, v, w});
    }
  }
  write_family_csv(out_path(cfg, "families.csv"), rows);
  return 0;
}

int cmd_stability(const RunConfig& cfg) {
  const ManifoldModel model = require_model(cfg);
  if (cfg.family.empty()) throw ValidationError("--family is required");
  if (!(cfg.param >= 0.0)) throw ValidationError("--param is required and must be >= 0");
  const BoundaryDescriptor descriptor = jacobi_potential(model, cfg.family, cfg.param);
  const JacobiSpectrum spectrum =
      jacobi_spectrum(descriptor, cfg.modes, cfg.tol > 0.0 ? cfg.tol : 0.0);
  write_text_file(out_path(cfg, "spectrum.json"), spectrum_report(spectrum).dump(2) + "\n");
  return 0;
}

int cmd_pseudo_ball(const RunConfig& cfg) {
  const ManifoldModel model = require_model(cfg);
  const ConformalMetric metric(model);
  const Eigen::Vector2d center = parse_point(cfg.center);
  SolveOptions so = solve_options(cfg);
  if (cfg.tol > 0.0) so.tol = cfg.tol;

  PseudoBall ball;
  if (cfg.volume > 0.0) {
    ball = continue_in_volume(metric, center, {cfg.volume}, so).front();
  } else if (cfg.r > 0.0) {
    ball = solve_pseudo_ball(metric, center, cfg.r, so);
  } else {
    throw ValidationError("pseudo-ball needs --r or --volume");
  }

  write_text_file(out_path(cfg, "pseudo_ball.json"), pseudo_ball_report(ball).dump(2) + "\n");
  std::vector<CurveRow> rows;
  for (int i = 0; i < cfg.curve_samples; ++i) {
    const double theta = 2.0 * kPi * i / cfg.curve_samples;
    const Eigen::Vector2d q = ball.point(theta);
    rows.push_back({theta, q.x(), q.y()});
  }
  write_curve_csv(out_path(cfg, "curve.csv"), rows);
  return 0;
}

int cmd_small_profile(const RunConfig& cfg) {
  const ManifoldModel model = require_model(cfg);
  const ConformalMetric metric(model);
  if (cfg.volumes.empty()) throw ValidationError("--volumes is required");
  SmallProfileOptions sp;
  std::tie(sp.centers_x, sp.centers_y) = parse_grid_dims(cfg.centers);
  sp.solve = solve_options(cfg);
  const std::vector<SmallProfileSample> samples = small_volume_profile(metric, cfg.volumes, sp);
  write_small_profile_csv(out_path(cfg, "small_profile.csv"), samples);
  return 0;
}

int cmd_expand(const RunConfig& cfg) {
  const ManifoldModel model = require_model(cfg);
  std::vector<double> rhos = cfg.rhos;
  if (rhos.empty()) rhos = {0.05, 0.1, 0.15, 0.2};
  std::sort(rhos.begin(), rhos.end());
  const int n = model.dimension();

  std::vector<std::pair<double, double>> samples;
  Eigen::Vector2d point = parse_point(cfg.center);
  switch (model.kind()) {
    case ModelKind::FlatTorus:
      for (double rho : rhos) samples.emplace_back(rho, euclidean_profile(n, std::pow(rho, n)));
      break;
    case ModelKind::RoundSphere: {
      const double R = model.radius();
      for (double rho : rhos) {
        const double v = rho * rho;
        samples.emplace_back(rho, std::sqrt(4.0 * kPi * v - v * v / (R * R)));
      }
      break;
    }
    case ModelKind::ConformalTorus: {
      const ConformalMetric metric(model);
      SmallProfileOptions sp;
      std::tie(sp.centers_x, sp.centers_y) = parse_grid_dims(cfg.centers);
      sp.solve = solve_options(cfg);
      std::vector<double> volumes;
      for (double rho : rhos) volumes.push_back(rho * rho);
      const std::vector<SmallProfileSample> prof = small_volume_profile(metric, volumes, sp);
      for (size_t i = 0; i < prof.size(); ++i) samples.emplace_back(rhos[i], prof[i].w);
      point = prof.front().center;  // argmin at the smallest volume
      break;
    }
  }

  const double fitted = fit_expansion_coefficient(samples, n);
  const double predicted =
      ExpansionModel::make(n, scalar_curvature(model, point)).coefficient();
  write_text_file(out_path(cfg, "expansion.json"),
                  expansion_report(fitted, predicted, point, samples).dump(2) + "\n");
  return 0;
}

}  // namespace

json config_to_json(const RunConfig& cfg) {
  json j;
  j["subcommand"] = cfg.subcommand;
  j["model"] = cfg.model_path;
  j["out"] = cfg.out_dir;
  j["grid"] = cfg.grid;
  j["modes"] = cfg.modes;
  j["samples"] = cfg.samples;
  j["curve_samples"] = cfg.curve_samples;
  j["tol"] = cfg.tol;
  j["v_min"] = cfg.v_min;
  j["v_max"] = cfg.v_max;
  j["centers"] = cfg.centers;
  j["center"] = cfg.center;
  j["volumes"] = cfg.volumes;
  j["rhos"] = cfg.rhos;
  j["family"] = cfg.family;
  j["param"] = cfg.param;
  j["r"] = cfg.r;
  j["volume"] = cfg.volume;
  return j;
}

RunConfig config_from_json(const json& j) {
  RunConfig cfg;
  try {
    cfg.subcommand = j.value("subcommand", cfg.subcommand);
    cfg.model_path = j.value("model", cfg.model_path);
    cfg.out_dir = j.value("out", cfg.out_dir);
    cfg.grid = j.value("grid", cfg.grid);
    cfg.modes = j.value("modes", cfg.modes);
    cfg.samples = j.value("samples", cfg.samples);
    cfg.curve_samples = j.value("curve_samples", cfg.curve_samples);
    cfg.tol = j.value("tol", cfg.tol);
    cfg.v_min = j.value("v_min", cfg.v_min);
    cfg.v_max = j.value("v_max", cfg.v_max);
    cfg.centers = j.value("centers", cfg.centers);
    cfg.center = j.value("center", cfg.center);
    cfg.volumes = j.value("volumes", cfg.volumes);
    cfg.rhos = j.value("rhos", cfg.rhos);
    cfg.family = j.value("family", cfg.family);
    cfg.param = j.value("param", cfg.param);
    cfg.r = j.value("r", cfg.r);
    cfg.volume = j.value("volume", cfg.volume);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed config JSON: ") + e.what());
  }
  return cfg;
}

int run_cli(const std::vector<std::string>& args) {
  RunConfig cfg;
  // --config seeds the defaults; explicit flags then override field by field.
  for (size_t i = 0; i + 1 < args.size(); ++i) {
    if (args[i] == "--config") {
      std::ifstream in(args[i + 1]);
      if (!in) {
        std::cerr << "error: cannot open config file: " << args[i + 1] << "\n";
        return 2;
      }
      json j;
      try {
        in >> j;
        cfg = config_from_json(j);
      } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
      }
    }
  }

  const std::vector<std::string> known = {"profile",     "families",      "stability",
                                          "pseudo-ball", "small-profile", "expand"};
  std::vector<std::string> argv_strings = args;
  bool has_sub = false;
  for (const std::string& a : argv_strings) {
    if (std::find(known.begin(), known.end(), a) != known.end()) {
      has_sub = true;
      break;
    }
  }
  if (!has_sub && !cfg.subcommand.empty()) {
    argv_strings.insert(argv_strings.begin(), cfg.subcommand);
  }

  CLI::App app{"isoperimetric profile toolkit"};
  app.require_subcommand(0, 1);
  bool dump_config = false;
  std::string config_path;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--model", cfg.model_path, "model JSON file");
    sub->add_option("--out", cfg.out_dir, "output directory");
    sub->add_option("--modes", cfg.modes, "trig modes for numeric solves");
    sub->add_option("--tol", cfg.tol, "tolerance override");
    sub->add_flag("--dump-config", dump_config, "print effective config and exit");
    sub->add_option("--config", config_path, "config JSON with defaults for this run");
  };

  CLI::App* profile = app.add_subcommand("profile", "families, lower contour, profile CSV");
  add_common(profile);
  profile->add_option("--grid", cfg.grid, "envelope volume grid");
  profile->add_option("--samples", cfg.samples, "profile CSV rows");
  profile->add_option("--v-min", cfg.v_min, "window lower end");
  profile->add_option("--v-max", cfg.v_max, "window upper end");

  CLI::App* families = app.add_subcommand("families", "raw family curve dump");
  add_common(families);
  families->add_option("--samples", cfg.samples, "rows per family");

  CLI::App* stability = app.add_subcommand("stability", "Jacobi spectrum of one boundary");
  add_common(stability);
  stability->add_option("--family", cfg.family, "family id");
  stability->add_option("--param", cfg.param, "family parameter");

  CLI::App* pseudo = app.add_subcommand("pseudo-ball", "single constant-curvature solve");
  add_common(pseudo);
  pseudo->add_option("--center", cfg.center, "center as x,y");
  pseudo->add_option("--r", cfg.r, "base radius");
  pseudo->add_option("--volume", cfg.volume, "target enclosed volume");
  pseudo->add_option("--curve-samples", cfg.curve_samples, "curve CSV rows");

  CLI::App* small = app.add_subcommand("small-profile", "center-grid minimization");
  add_common(small);
  small->add_option("--centers", cfg.centers, "center grid as NxM");
  small->add_option("--volumes", cfg.volumes, "target volumes")->delimiter(',');

  CLI::App* expand = app.add_subcommand("expand", "expansion coefficient fit vs prediction");
  add_common(expand);
  expand->add_option("--rhos", cfg.rhos, "expansion radii")->delimiter(',');
  expand->add_option("--center", cfg.center, "evaluation point as x,y");
  expand->add_option("--centers", cfg.centers, "center grid as NxM (numeric models)");

  std::vector<const char*> argv;
  argv.push_back("isoprof");
  for (const std::string& a : argv_strings) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    std::cout << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  const std::vector<CLI::App*> parsed = app.get_subcommands();
  if (parsed.size() == 1) {
    cfg.subcommand = parsed.front()->get_name();
  }
  if (cfg.subcommand.empty()) {
    std::cerr << "error: no subcommand given (see --help)\n";
    return 2;
  }

  if (dump_config) {
    std::cout << config_to_json(cfg).dump(2) << "\n";
    return 0;
  }

  try {
    if (cfg.subcommand == "profile") return cmd_profile(cfg);
    if (cfg.subcommand == "families") return cmd_families(cfg);
    if (cfg.subcommand == "stability") return cmd_stability(cfg);
    if (cfg.subcommand == "pseudo-ball") return cmd_pseudo_ball(cfg);
    if (cfg.subcommand == "small-profile") return cmd_small_profile(cfg);
    if (cfg.subcommand == "expand") return cmd_expand(cfg);
    std::cerr << "error: unknown subcommand in config: " << cfg.subcommand << "\n";
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace isoprof
