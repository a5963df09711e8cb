#include "pbcurves/cli.hpp"

#include <array>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "pbcurves/config.hpp"
#include "pbcurves/curve_io.hpp"
#include "pbcurves/energy.hpp"
#include "pbcurves/errors.hpp"
#include "pbcurves/frenet.hpp"
#include "pbcurves/magnetic.hpp"
#include "pbcurves/profiles.hpp"
#include "pbcurves/spaceform.hpp"
#include "pbcurves/stability.hpp"

namespace pbcurves {

namespace {

using nlohmann::json;

constexpr std::array<const char*, 13> kConstantNames{"c1", "c2", "c3", "c4", "b1", "b2", "b3",
                                                     "b4", "b5", "b6", "b7", "k0", "tau0"};

/// Raised for flag combinations that parse but make no sense.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double default_tol() {
  if (const char* env = std::getenv("PBCURVES_TOL")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end != env && *end == '\0' && v > 0 && std::isfinite(v)) return v;
  }
  return 1e-6;
}

// Flags shared by every command that builds a profile.
struct ProfileArgs {
  std::string family;
  std::string variant = "canonical";
  std::map<std::string, double> constants;
  std::array<std::optional<double>, kConstantNames.size()> values;
  double p = 0.5;

  void add(CLI::App* app, bool family_required) {
    auto* f = app->add_option("--family", family,
                              "flat2d, sphere2d, hyperbolic2d, flat3d, sphere3d, hyperbolic3d, constk");
    if (family_required) f->required();
    app->add_option("--variant", variant, "canonical or a rejected reading of the closed form");
    for (std::size_t i = 0; i < kConstantNames.size(); ++i)
      app->add_option(std::string("--") + kConstantNames[i], values[i]);
    app->add_option("--p", p, "exponent of the energy")->capture_default_str();
  }

  CurvatureProfile build() const {
    CurvatureProfile prof;
    const auto fam = parse_family(family);
    if (!fam) throw UsageError("unknown family '" + family + "'");
    prof.family = *fam;
    const auto var = parse_variant(variant);
    if (!var) throw UsageError("unknown variant '" + variant + "'");
    prof.variant = *var;
    for (std::size_t i = 0; i < kConstantNames.size(); ++i)
      if (values[i]) prof.constants[kConstantNames[i]] = *values[i];
    prof.p = p;
    validate(prof);
    return prof;
  }
};

// Flags of commands that synthesize a curve.
struct CurveArgs {
  std::string space;
  ProfileArgs profile;
  std::vector<double> span;
  std::optional<double> length;
  double h = 1e-3;

  void add(CLI::App* app) {
    app->add_option("--space", space, "r2, s2, h2, r3, s3, h3")->required();
    profile.add(app, true);
    app->add_option("--span", span, "arclength interval s0 s1")->expected(2);
    app->add_option("--length", length, "integrate over [0, length]");
    app->add_option("--h", h, "arclength step")->capture_default_str();
  }
};

std::optional<double> constk_period(const CurvatureProfile& prof, int K) {
  const double k0 = prof.constant("k0"), tau0 = prof.constant("tau0");
  if (tau0 != 0) return std::nullopt;
  const double q = k0 * k0 + K;
  if (!(q > 0)) return std::nullopt;
  return 2 * std::numbers::pi / std::sqrt(q);
}

std::pair<double, double> resolve_span(const CurveArgs& a, const CurvatureProfile& prof, int K) {
  if (!a.span.empty() && a.length) throw UsageError("give either --span or --length, not both");
  if (a.length) {
    if (!(*a.length > 0)) throw UsageError("--length must be positive");
    return {0.0, *a.length};
  }
  if (!a.span.empty()) return {a.span[0], a.span[1]};
  switch (prof.family) {
    case Family::Sphere2D:
    case Family::Sphere3D: return {0.0, std::numbers::pi};
    case Family::ConstantK:
      if (auto period = constk_period(prof, K)) return {0.0, *period};
      throw UsageError("constant curvature curve does not close; give --length or --span");
    default: return {-1.0, 1.0};
  }
}

DiscreteCurve synthesize(const CurveArgs& a, const CurvatureProfile& prof,
                         std::optional<double> closure_tol) {
  const SpaceForm space = SpaceForm::parse(a.space);
  const auto span = resolve_span(a, prof, space.curvature());
  if (!(a.h > 0)) throw UsageError("--h must be positive");
  FrenetOptions opt;
  opt.h = a.h;
  opt.closure_tol = closure_tol;
  return integrate_frenet(space, prof, span, opt);
}

// Writes to --output when given, else to out.
void emit(const std::string& path, std::ostream& out, const std::function<void(std::ostream&)>& body) {
  if (path.empty()) {
    body(out);
    return;
  }
  std::ofstream file(path);
  if (!file) throw UsageError("cannot open output file '" + path + "'");
  body(file);
}

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

void check_format(const std::string& format) {
  if (format != "csv" && format != "json") throw UsageError("--format must be csv or json");
}

// ---------------------------------------------------------------- profile

struct ProfileCmd {
  ProfileArgs profile;
  std::vector<double> span{-1.0, 1.0};
  int n = 201;
  std::optional<int> K;
  std::string space;
  double tol = default_tol();
  std::string format = "csv";
  std::string output;

  void add(CLI::App* app) {
    profile.add(app, true);
    app->add_option("--span", span, "s interval")->expected(2)->capture_default_str();
    app->add_option("--n", n, "grid points")->capture_default_str();
    app->add_option("--K", K, "space-form curvature (default: the family's)");
    app->add_option("--space", space, "take K from this space");
    app->add_option("--tol", tol, "residual tolerance")->capture_default_str();
    app->add_option("--format", format, "csv or json")->capture_default_str();
    app->add_option("--output", output, "write the table here instead of stdout");
  }

  int run(std::ostream& out, std::ostream& err) const {
    check_format(format);
    const CurvatureProfile prof = profile.build();
    int curvature = 0;
    if (K) {
      curvature = *K;
    } else if (!space.empty()) {
      curvature = SpaceForm::parse(space).curvature();
    } else if (auto fk = family_curvature(prof.family)) {
      curvature = *fk;
    } else {
      throw UsageError("constk needs --K or --space");
    }
    if (curvature < -1 || curvature > 1) throw UsageError("--K must be -1, 0 or 1");
    if (n < 2) throw UsageError("--n must be at least 2");

    const bool three_d = family_dimension(prof.family) == 3 ||
                         (prof.family == Family::ConstantK && prof.constant("tau0") != 0);
    const bool has_tau = family_dimension(prof.family) != 2;
    std::vector<std::string> cols{"s", "k"};
    if (has_tau) cols.push_back("tau");
    cols.push_back("residual_surface");
    cols.push_back("residual_h");
    if (has_tau) {
      cols.push_back("residual_3d_first");
      cols.push_back("residual_3d_second");
    }

    std::vector<std::vector<double>> rows;
    double worst = 0;
    for (int i = 0; i < n; ++i) {
      const double s = span[0] + (span[1] - span[0]) * i / (n - 1);
      std::vector<double> row{s, eval_k(prof, s)};
      if (has_tau) row.push_back(eval_tau(prof, s));
      const double rs = residual_surface(prof, s, curvature);
      row.push_back(rs);
      row.push_back(row[1] > 0 ? residual_h(prof, s, curvature) : std::nan(""));
      if (has_tau) {
        const auto [r1, r2] = residual_3d(prof, s, curvature);
        row.push_back(r1);
        row.push_back(r2);
        worst = std::max(worst, three_d ? std::max(std::abs(r1), std::abs(r2)) : std::abs(rs));
      } else {
        worst = std::max(worst, std::abs(rs));
      }
      rows.push_back(std::move(row));
    }

    emit(output, out, [&](std::ostream& o) {
      if (format == "csv") {
        for (std::size_t c = 0; c < cols.size(); ++c) o << (c ? "," : "") << cols[c];
        o << '\n';
        for (const auto& row : rows) {
          for (std::size_t c = 0; c < row.size(); ++c) o << (c ? "," : "") << format_double(row[c]);
          o << '\n';
        }
      } else {
        json j;
        j["schema"] = "pbcurves/profile-table@1";
        j["profile"] = to_json(prof);
        j["K"] = curvature;
        j["columns"] = cols;
        j["rows"] = rows;
        j["max_residual"] = worst;
        j["tol"] = tol;
        o << j.dump(2) << '\n';
      }
    });
    err << fmt::format("max |residual| = {} (tol {})\n", format_double(worst), format_double(tol));
    return worst < tol ? kExitOk : kExitNumerical;
  }
};

// ------------------------------------------------------------- synthesize

struct SynthesizeCmd {
  CurveArgs curve;
  bool expect_closed = false;
  double tol = default_tol();
  std::string format = "csv";
  std::string output;

  void add(CLI::App* app) {
    curve.add(app);
    app->add_flag("--expect-closed", expect_closed, "require the endpoint gap to be below --tol");
    app->add_option("--tol", tol, "defect tolerance")->capture_default_str();
    app->add_option("--format", format, "curve file format: csv or json")->capture_default_str();
    app->add_option("--output", output, "curve file");
  }

  int run(std::ostream& out, std::ostream&) const {
    check_format(format);
    const CurvatureProfile prof = curve.profile.build();
    const DiscreteCurve c = synthesize(curve, prof, expect_closed ? std::optional<double>(tol) : std::nullopt);
    const CurveDiagnostics d = curve_diagnostics(c);
    const double gap = endpoint_gap(c);
    if (!output.empty()) {
      emit(output, out, [&](std::ostream& o) {
        if (format == "csv") {
          write_csv(o, c);
        } else {
          o << to_json(c).dump() << '\n';
        }
      });
    }
    bool ok = d.arclength_defect < tol && d.constraint_defect < tol && d.frame_defect < tol;
    if (expect_closed) ok = ok && gap < tol;
    const std::vector<std::pair<std::string, double>> table{
        {"arclength_defect", d.arclength_defect},
        {"constraint_defect", d.constraint_defect},
        {"frame_defect", d.frame_defect},
        {"closure_defect", d.closure_defect},
        {"endpoint_gap", gap},
        {"length", c.length()},
        {"nodes", static_cast<double>(c.size())},
    };
    if (format == "json" && output.empty()) {
      // With JSON selected and no file, the report is the only output.
      json j;
      j["schema"] = "pbcurves/diagnostics@1";
      for (const auto& [name, value] : table) j[name] = std::isfinite(value) ? json(value) : json(nullptr);
      j["closed"] = c.closed;
      j["ok"] = ok;
      out << j.dump(2) << '\n';
    } else {
      for (const auto& [name, value] : table) out << pad(name, 20) << format_double(value) << '\n';
    }
    return ok ? kExitOk : kExitNumerical;
  }
};

// ----------------------------------------------------------------- energy

struct EnergyCmd {
  CurveArgs curve;
  std::optional<double> mu;
  std::string residual_csv;

  void add(CLI::App* app) {
    curve.add(app);
    app->add_option("--mu", mu, "also evaluate the Blaschke energy with this mu");
    app->add_option("--residual-csv", residual_csv, "write the Euler-Lagrange residual field here");
  }

  int run(std::ostream& out, std::ostream&) const {
    const CurvatureProfile prof = curve.profile.build();
    const DiscreteCurve c = synthesize(curve, prof, 1e-6);
    const double p = prof.p;
    json j;
    j["schema"] = "pbcurves/energy@1";
    j["p"] = p;
    j["space"] = c.space.name();
    j["length"] = c.length();
    const EnergyResult eb = energy_p_biharmonic(c, p);
    const EnergyResult ee = energy_p_elastic(c, p);
    j["energy_p_biharmonic"] = eb.value;
    j["energy_p_elastic"] = ee.value;
    j["near_geodesic"] = eb.near_geodesic || ee.near_geodesic;
    if (mu) j["energy_blaschke"] = energy_blaschke(c, *mu);
    const ResidualField w = el_residual(c, p);
    j["el_residual_max"] = w.max_norm;
    j["el_residual_extrapolated"] = criticality_residual(c, p);
    if (c.space.model() == Model::Flat) j["el_residual_lagrangian_max"] = el_residual_lagrangian(c, p).max_norm;
    const TangentialCheck t = tangential_identity_check(c, p);
    j["tangential"] = {{"max_tangential", t.max_tangential},
                       {"max_predicted", t.max_predicted},
                       {"max_discrepancy", t.max_discrepancy}};
    if (!residual_csv.empty()) {
      std::ofstream file(residual_csv);
      if (!file) throw UsageError("cannot open '" + residual_csv + "'");
      write_csv(file, c, "W", w.values, w.nodes);
    }
    out << j.dump(2) << '\n';
    return kExitOk;
  }
};

// -------------------------------------------------------------- stability

struct StabilityCmd {
  CurveArgs curve;
  double t_step = 1e-3;
  bool richardson = false;
  double gap_tol = 0.01;
  std::string format = "csv";

  void add(CLI::App* app) {
    curve.add(app);
    app->add_option("--t-step", t_step, "variation step of the finite-difference Hessian")->capture_default_str();
    app->add_flag("--richardson", richardson, "Richardson-extrapolate the finite-difference Hessian");
    app->add_option("--gap", gap_tol, "allowed relative gap between closed form and FD")->capture_default_str();
    app->add_option("--format", format, "csv or json")->capture_default_str();
  }

  int run(std::ostream& out, std::ostream&) const {
    check_format(format);
    if (!(curve.profile.p > 0)) throw UsageError("--p must be positive");
    if (!(t_step > 0)) throw UsageError("--t-step must be positive");
    const CurvatureProfile prof = curve.profile.build();
    const DiscreteCurve c = synthesize(curve, prof, 1e-6);
    const double p = prof.p;
    const int dim = c.space.dim();

    std::vector<StabilityReport> reports;
    if (p == 0.5 && prof.family != Family::ConstantK) {
      reports.push_back(dim == 2 ? hessian_half_2d(c) : hessian_half_3d(c));
    } else {
      reports.push_back(dim == 2 ? hessian_normal_2d(c, p) : hessian_normal_3d(c, p));
    }
    if (prof.family == Family::ConstantK && p != 0.5) {
      StabilityReport r = reports.front();
      r.method = HessianMethod::ClosedFormPNeHalf;
      r.value = hessian_p_ne_half(prof.constant("k0"), c.space.curvature(), c.length(), p,
                                  prof.constant("tau0"));
      reports.push_back(r);
    }
    const VariationField eta = normal_variation(c);
    reports.push_back(hessian_quadratic_form(c, eta, p));
    reports.push_back(hessian_fd(c, eta, p, {t_step, richardson}));
    const double fd = reports.back().value;
    const double closed = reports.front().value;
    const double gap = std::abs(closed - fd) / std::max(std::abs(fd), 1e-300);
    const bool ok = gap <= gap_tol;

    if (format == "json") {
      json j;
      j["schema"] = "pbcurves/stability@1";
      j["space"] = c.space.name();
      j["profile"] = to_json(prof);
      auto arr = json::array();
      for (const auto& r : reports) {
        json e{{"method", to_string(r.method)}, {"value", r.value}, {"p", r.p}, {"K", r.K}, {"h", r.h}};
        if (r.t_step) e["t_step"] = *r.t_step;
        e["relative_gap_to_fd"] = std::abs(r.value - fd) / std::max(std::abs(fd), 1e-300);
        arr.push_back(e);
      }
      j["reports"] = arr;
      j["sign"] = closed < 0 ? "negative" : (closed > 0 ? "positive" : "zero");
      j["ok"] = ok;
      out << j.dump(2) << '\n';
    } else {
      out << "method,value,relative_gap_to_fd\n";
      for (const auto& r : reports)
        out << to_string(r.method) << ',' << format_double(r.value) << ','
            << format_double(std::abs(r.value - fd) / std::max(std::abs(fd), 1e-300)) << '\n';
    }
    return ok ? kExitOk : kExitNumerical;
  }
};

// --------------------------------------------------------------- magnetic

Vec parse_vector(const std::vector<double>& values, const SpaceForm& space, const char* flag) {
  if (static_cast<int>(values.size()) != space.ambient_dim())
    throw UsageError(std::string(flag) + " needs " + std::to_string(space.ambient_dim()) + " ambient coordinates");
  Vec v(space.ambient_dim());
  for (int i = 0; i < space.ambient_dim(); ++i) v[i] = values[static_cast<std::size_t>(i)];
  return v;
}

struct MagneticArgs {
  std::string space;
  ProfileArgs profile;
  double h = 1e-3;

  void add(CLI::App* app) {
    app->add_option("--space", space, "r2, s2 or h2")->required();
    profile.add(app, false);
    app->add_option("--h", h, "arclength step")->capture_default_str();
  }

  MagneticProblem build() const {
    MagneticProblem pb{SpaceForm::parse(space), ConstantField{}};
    if (pb.space.dim() != 2) throw UsageError("magnetic commands need a surface (r2, s2, h2)");
    if (!(h > 0)) throw UsageError("--h must be positive");
    if (profile.family.empty() || profile.family == "constk") {
      const auto& k0 = profile.values[11];
      if (!k0) throw UsageError("give --k0 or an arclength --family");
      pb.source = ConstantField{*k0};
    } else {
      pb.source = ArclengthField{profile.build()};
    }
    return pb;
  }
};

struct MagneticIntegrateCmd {
  MagneticArgs problem;
  double length = 2 * std::numbers::pi;
  std::vector<double> start, direction;
  std::string format = "csv";
  std::string output;

  void add(CLI::App* app) {
    problem.add(app);
    app->add_option("--length", length, "arclength to integrate")->capture_default_str();
    app->add_option("--start", start, "start point in ambient coordinates");
    app->add_option("--direction", direction, "unit initial velocity in ambient coordinates");
    app->add_option("--format", format, "csv or json")->capture_default_str();
    app->add_option("--output", output, "curve file (default stdout)");
  }

  int run(std::ostream& out, std::ostream& err) const {
    check_format(format);
    const MagneticProblem pb = problem.build();
    const Vec x = start.empty() ? pb.space.origin() : parse_vector(start, pb.space, "--start");
    const Vec v = direction.empty() ? pb.space.canonical_frame().front()
                                    : parse_vector(direction, pb.space, "--direction");
    const DiscreteCurve c = integrate_magnetic(pb, x, v, length, {problem.h, default_tolerances().escape_distance});
    emit(output, out, [&](std::ostream& o) {
      if (format == "csv") {
        write_csv(o, c);
      } else {
        o << to_json(c).dump() << '\n';
      }
    });
    err << fmt::format("length {} speed_drift {} endpoint_gap {}\n", format_double(c.length()),
                       format_double(speed_drift(c)), format_double(endpoint_gap(c)));
    return kExitOk;
  }
};

struct MagneticShootCmd {
  MagneticArgs problem;
  int grid = 8;
  double min_length = 0.5;
  double max_length = 20.0;
  double tol = default_tol();
  std::string output;

  void add(CLI::App* app) {
    problem.add(app);
    app->add_option("--grid", grid, "n base points times n directions")->capture_default_str();
    app->add_option("--min-length", min_length, "shortest closed orbit considered")->capture_default_str();
    app->add_option("--max-length", max_length, "integration length per initial condition")->capture_default_str();
    app->add_option("--tol", tol, "phase-space closure tolerance")->capture_default_str();
    app->add_option("--output", output, "candidate list (default stdout)");
  }

  int run(std::ostream& out, std::ostream&) const {
    const MagneticProblem pb = problem.build();
    if (grid < 1) throw UsageError("--grid must be positive");
    if (!(max_length > min_length) || !(min_length >= 0)) throw UsageError("need 0 <= --min-length < --max-length");
    ShootOptions opt;
    opt.min_length = min_length;
    opt.max_length = max_length;
    opt.h = problem.h;
    opt.tol = tol;
    const auto ics = default_grid(pb.space, grid);
    const auto found = shoot_closed(pb, ics, opt);
    json j;
    j["schema"] = "pbcurves/candidates@1";
    j["space"] = pb.space.name();
    j["initial_conditions"] = ics.size();
    auto arr = json::array();
    for (const auto& c : found) {
      arr.push_back({{"start", std::vector<double>(c.start.point.data(), c.start.point.data() + c.start.point.size())},
                     {"direction", std::vector<double>(c.start.direction.data(),
                                                       c.start.direction.data() + c.start.direction.size())},
                     {"length", c.length},
                     {"defect", c.defect},
                     {"curvature_integral", c.curvature_integral},
                     {"curvature_residual", c.curvature_residual},
                     {"profile_residual", c.profile_residual},
                     {"multiplicity", c.multiplicity}});
    }
    j["candidates"] = arr;
    emit(output, out, [&](std::ostream& o) { o << j.dump(2) << '\n'; });
    return kExitOk;
  }
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical workbench for p-biharmonic curves on space forms", "pbcurves"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);

  ProfileCmd profile;
  SynthesizeCmd synth;
  EnergyCmd energy;
  StabilityCmd stability;
  MagneticIntegrateCmd mag_integrate;
  MagneticShootCmd mag_shoot;

  auto* c_profile = app.add_subcommand("profile", "Tabulate a curvature profile and its residuals");
  profile.add(c_profile);
  auto* c_synth = app.add_subcommand("synthesize", "Integrate the Frenet system for a profile");
  synth.add(c_synth);
  auto* c_energy = app.add_subcommand("energy", "Energies and Euler-Lagrange residuals of a synthesized curve");
  energy.add(c_energy);
  auto* c_stab = app.add_subcommand("stability", "Second variation in the normal direction: closed forms vs FD");
  stability.add(c_stab);
  auto* c_mag = app.add_subcommand("magnetic", "Prescribed-curvature curves on surfaces");
  c_mag->require_subcommand(1);
  auto* c_mag_int = c_mag->add_subcommand("integrate", "Integrate one trajectory");
  mag_integrate.add(c_mag_int);
  auto* c_mag_shoot = c_mag->add_subcommand("shoot", "Search for closed orbits from a grid of initial conditions");
  mag_shoot.add(c_mag_shoot);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*c_profile) return profile.run(out, err);
    if (*c_synth) return synth.run(out, err);
    if (*c_energy) return energy.run(out, err);
    if (*c_stab) return stability.run(out, err);
    if (*c_mag_int) return mag_integrate.run(out, err);
    if (*c_mag_shoot) return mag_shoot.run(out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const UnsupportedDimension& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const UnsupportedSpace& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const PoleError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitUsage;
}

}  // namespace pbcurves
