#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "isoprof/asymptotics.hpp"
#include "isoprof/cmc.hpp"
#include "isoprof/envelope.hpp"
#include "isoprof/geometry.hpp"
#include "isoprof/jacobi.hpp"

namespace isoprof {

using json = nlohmann::ordered_json;

/// Model description:
///   {"type":"flat_torus","sides":[...]}
///   {"type":"sphere","radius":R}
///   {"type":"conformal_torus","sides":[L1,L2],
///    "phi":[{"kx":int,"ky":int,"cos":float,"sin":float}, ...]}
ManifoldModel model_from_json(const json& j);
json model_to_json(const ManifoldModel& model);
ManifoldModel load_model(const std::string& path);

/// CSV rows use 17 significant digits so reruns diff cleanly.
std::string format_double(double x);

struct FamilyRow {
  std::string family_id;
  double t, v, w;
};
void write_family_csv(const std::string& path, const std::vector<FamilyRow>& rows);

struct ProfileRow {
  double v, value;
  std::string family_id;
};
void write_profile_csv(const std::string& path, const std::vector<ProfileRow>& rows);

struct CurveRow {
  double theta, x, y;
};
void write_curve_csv(const std::string& path, const std::vector<CurveRow>& rows);

void write_small_profile_csv(const std::string& path,
                             const std::vector<SmallProfileSample>& samples);

json envelope_report(const EnvelopeResult& envelope, bool candidate_upper_bound = false);
json spectrum_report(const JacobiSpectrum& spectrum);
json pseudo_ball_report(const PseudoBall& ball);
json expansion_report(double fitted, double predicted, const Eigen::Vector2d& center,
                      const std::vector<std::pair<double, double>>& rho_and_w);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace isoprof
