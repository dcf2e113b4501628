#include "isoprof/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace isoprof {

ManifoldModel model_from_json(const json& j) {
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string()) {
    throw ValidationError("model JSON needs a \"type\" string");
  }
  const std::string type = j["type"].get<std::string>();
  try {
    if (type == "flat_torus") {
      if (!j.contains("sides") || !j["sides"].is_array()) {
        throw ValidationError("flat_torus model needs a \"sides\" array");
      }
      return ManifoldModel::flat_torus(j["sides"].get<std::vector<double>>());
    }
    if (type == "sphere") {
      if (!j.contains("radius") || !j["radius"].is_number()) {
        throw ValidationError("sphere model needs a numeric \"radius\"");
      }
      return ManifoldModel::sphere(j["radius"].get<double>());
    }
    if (type == "conformal_torus") {
      if (!j.contains("sides") || !j["sides"].is_array() || j["sides"].size() != 2) {
        throw ValidationError("conformal_torus model needs \"sides\":[L1,L2]");
      }
      std::vector<PhiMode> modes;
      if (j.contains("phi")) {
        if (!j["phi"].is_array()) throw ValidationError("conformal_torus \"phi\" must be an array");
        for (const json& m : j["phi"]) {
          PhiMode pm;
          pm.kx = m.value("kx", 0);
          pm.ky = m.value("ky", 0);
          pm.cos_coef = m.value("cos", 0.0);
          pm.sin_coef = m.value("sin", 0.0);
          modes.push_back(pm);
        }
      }
      return ManifoldModel::conformal_torus(j["sides"][0].get<double>(),
                                            j["sides"][1].get<double>(), std::move(modes));
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed model JSON: ") + e.what());
  }
  throw ValidationError("unknown model type: " + type);
}

json model_to_json(const ManifoldModel& model) {
  json j;
  switch (model.kind()) {
    case ModelKind::FlatTorus:
      j["type"] = "flat_torus";
      j["sides"] = model.sides();
      break;
    case ModelKind::RoundSphere:
      j["type"] = "sphere";
      j["radius"] = model.radius();
      break;
    case ModelKind::ConformalTorus: {
      j["type"] = "conformal_torus";
      j["sides"] = model.sides();
      json phi = json::array();
      for (const PhiMode& m : model.phi().modes()) {
        phi.push_back({{"kx", m.kx}, {"ky", m.ky}, {"cos", m.cos_coef}, {"sin", m.sin_coef}});
      }
      j["phi"] = std::move(phi);
      break;
    }
  }
  return j;
}

ManifoldModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open model file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ValidationError("model file " + path + " is not valid JSON: " + e.what());
  }
  return model_from_json(j);
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write file: " + path);
  out << content;
  if (!out) throw ValidationError("failed writing file: " + path);
}

void write_family_csv(const std::string& path, const std::vector<FamilyRow>& rows) {
  std::ostringstream os;
  os << "family_id,t,v,w\n";
  for (const FamilyRow& r : rows) {
    os << r.family_id << ',' << format_double(r.t) << ',' << format_double(r.v) << ','
       << format_double(r.w) << '\n';
  }
  write_text_file(path, os.str());
}

void write_profile_csv(const std::string& path, const std::vector<ProfileRow>& rows) {
  std::ostringstream os;
  os << "v,I,family_id\n";
  for (const ProfileRow& r : rows) {
    os << format_double(r.v) << ',' << format_double(r.value) << ',' << r.family_id << '\n';
  }
  write_text_file(path, os.str());
}

void write_curve_csv(const std::string& path, const std::vector<CurveRow>& rows) {
  std::ostringstream os;
  os << "theta,xcoord,ycoord\n";
  for (const CurveRow& r : rows) {
    os << format_double(r.theta) << ',' << format_double(r.x) << ',' << format_double(r.y) << '\n';
  }
  write_text_file(path, os.str());
}

void write_small_profile_csv(const std::string& path,
                             const std::vector<SmallProfileSample>& samples) {
  std::ostringstream os;
  os << "v,I,cx,cy\n";
  for (const SmallProfileSample& s : samples) {
    os << format_double(s.v) << ',' << format_double(s.w) << ',' << format_double(s.center.x())
       << ',' << format_double(s.center.y()) << '\n';
  }
  write_text_file(path, os.str());
}

json envelope_report(const EnvelopeResult& envelope, bool candidate_upper_bound) {
  json j;
  json bps = json::array();
  json tols = json::array();
  for (const EnvelopeBreakpoint& b : envelope.breakpoints()) {
    bps.push_back(b.v);
    tols.push_back(b.tol);
  }
  j["breakpoints"] = std::move(bps);
  j["breakpoint_tolerances"] = std::move(tols);
  json segs = json::array();
  for (const EnvelopeSegment& s : envelope.segments()) {
    segs.push_back({{"v_start", s.v_start}, {"v_end", s.v_end}, {"family", s.family}});
  }
  j["segments"] = std::move(segs);
  if (candidate_upper_bound) {
    // Families for flat tori of dimension >= 3 are candidates, not proven
    // minimizers; the contour is then only an upper bound for the profile.
    j["candidate_upper_bound"] = true;
  }
  return j;
}

json spectrum_report(const JacobiSpectrum& spectrum) {
  json j;
  j["eigenvalues"] = spectrum.eigenvalues;
  j["kernel_dim"] = spectrum.kernel_dim;
  j["stability"] = to_string(spectrum.stability);
  j["component_kernel_dims"] = spectrum.component_kernel_dims;
  j["constrained_min"] = spectrum.constrained_min;
  j["kernel_tol"] = spectrum.kernel_tol;
  j["modes"] = spectrum.modes;
  return j;
}

json pseudo_ball_report(const PseudoBall& ball) {
  json j;
  j["center"] = {ball.center.x(), ball.center.y()};
  j["r"] = ball.r;
  j["h"] = ball.h;
  j["v"] = ball.v;
  j["w"] = ball.w;
  j["residual"] = ball.residual_norm;
  j["curvature_deviation"] = ball.curvature_deviation;
  j["x_cos"] = ball.x_cos;
  j["x_sin"] = ball.x_sin;
  j["iterations"] = ball.iterations;
  j["collocation"] = ball.collocation;
  return j;
}

json expansion_report(double fitted, double predicted, const Eigen::Vector2d& center,
                      const std::vector<std::pair<double, double>>& rho_and_w) {
  json j;
  j["fitted_coefficient"] = fitted;
  j["predicted_coefficient"] = predicted;
  const double err = std::abs(fitted - predicted);
  j["absolute_error"] = err;
  j["relative_error"] = (predicted != 0.0) ? err / std::abs(predicted) : err;
  j["center"] = {center.x(), center.y()};
  json samples = json::array();
  for (const auto& [rho, w] : rho_and_w) {
    samples.push_back({{"rho", rho}, {"w", w}});
  }
  j["samples"] = std::move(samples);
  return j;
}

}  // namespace isoprof
