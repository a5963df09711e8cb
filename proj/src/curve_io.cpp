#include "pbcurves/curve_io.hpp"

#include <cmath>
#include <unordered_map>

#include <fmt/format.h>

#include "pbcurves/errors.hpp"

namespace pbcurves {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return fmt::format("{}", x == 0.0 ? 0.0 : x);
}

std::vector<std::string> csv_columns(const DiscreteCurve& curve) {
  const int a = curve.space.ambient_dim();
  std::vector<std::string> cols{"s"};
  auto add = [&](const char* prefix) {
    for (int j = 0; j < a; ++j) cols.push_back(prefix + std::to_string(j));
  };
  add("x");
  add("T");
  add("N");
  if (curve.space.dim() == 3) add("B");
  cols.push_back("k");
  if (curve.space.dim() == 3) cols.push_back("tau");
  return cols;
}

void write_csv(std::ostream& out, const DiscreteCurve& curve, const std::string& extra_name,
               const std::vector<Vec>& extra, const std::vector<std::size_t>& extra_nodes) {
  const int a = curve.space.ambient_dim();
  auto cols = csv_columns(curve);
  if (!extra_name.empty())
    for (int j = 0; j < a; ++j) cols.push_back(extra_name + std::to_string(j));
  for (std::size_t c = 0; c < cols.size(); ++c) out << (c ? "," : "") << cols[c];
  out << '\n';

  std::unordered_map<std::size_t, std::size_t> slot;
  for (std::size_t r = 0; r < extra_nodes.size(); ++r) slot[extra_nodes[r]] = r;

  auto vec = [&](const std::vector<Vec>& field, std::size_t i) {
    for (int j = 0; j < a; ++j)
      out << ',' << (i < field.size() ? format_double(field[i][j]) : std::string());
  };
  for (std::size_t i = 0; i < curve.size(); ++i) {
    out << format_double(curve.s[i]);
    vec(curve.points, i);
    vec(curve.T, i);
    vec(curve.N, i);
    if (curve.space.dim() == 3) vec(curve.B, i);
    out << ',' << (i < curve.k.size() ? format_double(curve.k[i]) : std::string());
    if (curve.space.dim() == 3)
      out << ',' << (i < curve.tau.size() ? format_double(curve.tau[i]) : std::string());
    if (!extra_name.empty()) {
      auto it = slot.find(i);
      if (it != slot.end()) {
        vec(extra, it->second);
      } else {
        for (int j = 0; j < a; ++j) out << ',';
      }
    }
    out << '\n';
  }
}

namespace {

nlohmann::json vectors(const std::vector<Vec>& field) {
  auto arr = nlohmann::json::array();
  for (const Vec& v : field) arr.push_back(std::vector<double>(v.data(), v.data() + v.size()));
  return arr;
}

}  // namespace

nlohmann::json to_json(const DiscreteCurve& curve) {
  nlohmann::json j;
  j["schema"] = "pbcurves/curve@1";
  j["space"] = curve.space.name();
  j["closed"] = curve.closed;
  j["s"] = curve.s;
  j["points"] = vectors(curve.points);
  j["T"] = vectors(curve.T);
  j["N"] = vectors(curve.N);
  j["k"] = curve.k;
  if (curve.space.dim() == 3) {
    j["B"] = vectors(curve.B);
    j["tau"] = curve.tau;
  }
  if (curve.profile) j["profile"] = to_json(*curve.profile);
  return j;
}

nlohmann::json to_json(const CurvatureProfile& profile) {
  nlohmann::json j;
  j["family"] = to_string(profile.family);
  j["constants"] = profile.constants;
  j["p"] = profile.p;
  if (profile.variant != ProfileVariant::Canonical) j["variant"] = to_string(profile.variant);
  return j;
}

CurvatureProfile profile_from_json(const nlohmann::json& j) {
  try {
    CurvatureProfile out;
    const auto family = parse_family(j.at("family").get<std::string>());
    if (!family) throw DomainError("unknown family '" + j.at("family").get<std::string>() + "'");
    out.family = *family;
    if (j.contains("constants")) out.constants = j.at("constants").get<std::map<std::string, double>>();
    if (j.contains("p")) out.p = j.at("p").get<double>();
    if (j.contains("variant")) {
      const auto variant = parse_variant(j.at("variant").get<std::string>());
      if (!variant) throw DomainError("unknown variant '" + j.at("variant").get<std::string>() + "'");
      out.variant = *variant;
    }
    validate(out);
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("malformed profile JSON: ") + e.what());
  }
}

}  // namespace pbcurves
