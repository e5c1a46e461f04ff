#include "mpe/study.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace mpe {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12e", v);
  return buf;
}

// deterministic interior sample points, away from ∂Ω and Σ
std::vector<Vec2> oracle_points(int count, double margin, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> ux(margin, 0.5 - margin);
  std::uniform_real_distribution<double> uy(margin, 0.5 - margin);
  std::vector<Vec2> pts;
  pts.reserve(count);
  for (int i = 0; i < count; ++i) {
    const double x = ux(rng);
    pts.emplace_back(i % 2 == 0 ? -x : x, uy(rng));  // alternate subdomains
  }
  return pts;
}

struct SeriesDef {
  const char* name;
  const char* color;
  double ConvergenceRow::* field;
};

constexpr SeriesDef kSvgSeries[] = {
    {"ERR_e", "#1f77b4", &ConvergenceRow::err_e},
    {"eta_ok", "#d62728", &ConvergenceRow::eta_ok},
    {"E_d", "#2ca02c", &ConvergenceRow::E_d},
    {"E_d_dt", "#9467bd", &ConvergenceRow::E_d_dt},
    {"E_J", "#8c564b", &ConvergenceRow::E_J},
    {"E_up", "#ff7f0e", &ConvergenceRow::E_up},
};

}  // namespace

void StudyConfig::validate() const {
  if (levels < 2) throw std::invalid_argument("StudyConfig: levels must be >= 2");
  if (n0 < 1) throw std::invalid_argument("StudyConfig: n0 must be >= 1");
  if (dt <= 0.0 || t_final <= 0.0)
    throw std::invalid_argument("StudyConfig: dt and t_final must be positive");
  if (alpha_e < 0.0 || alpha_e >= 1.0)
    throw std::invalid_argument("StudyConfig: alpha_e must lie in [0,1)");
  if (format != "csv" && format != "svg")
    throw std::invalid_argument("StudyConfig: format must be csv or svg");
}

void apply_config_line(StudyConfig& config, const std::string& key,
                       const std::string& value) {
  try {
    if (key == "levels")
      config.levels = std::stoi(value);
    else if (key == "n0")
      config.n0 = std::stoi(value);
    else if (key == "dt")
      config.dt = std::stod(value);
    else if (key == "t-final")
      config.t_final = std::stod(value);
    else if (key == "alpha-e")
      config.alpha_e = std::stod(value);
    else if (key == "out")
      config.out = value;
    else if (key == "format")
      config.format = value;
    else if (key == "include-eta-data")
      config.include_eta_data = value == "true" || value == "1";
    else if (key == "jump") {
      if (value == "symmetric")
        config.jump = JumpVariant::Symmetric;
      else if (value == "traction")
        config.jump = JumpVariant::Traction;
      else
        throw std::invalid_argument("jump must be symmetric or traction");
    } else {
      throw std::invalid_argument("unknown key '" + key + "'");
    }
  } catch (const std::logic_error& err) {
    throw std::invalid_argument("config: bad value for '" + key + "': " + err.what());
  }
}

void load_config_file(StudyConfig& config, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config: expected 'key = value': " + line);
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    apply_config_line(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

double observed_rate(double coarse, double fine) {
  if (coarse <= 0.0 || fine <= 0.0) return 0.0;
  return std::log2(coarse / fine);
}

std::vector<ConvergenceRow> run_convergence_study(const StudyConfig& config,
                                                  std::ostream* log) {
  config.validate();
  const ParameterSet params = ParameterSet::unit(1, config.alpha_e);
  const ManufacturedSolution exact(params);
  const SourceFields sources = exact.source_fields();

  // source-oracle gate: refuse to run on a broken source derivation
  const double fd_step = 1e-4;
  for (const Vec2& x : oracle_points(100, 5.0 * fd_step, /*seed=*/20240521)) {
    const SourceCheck check = exact.verify_sources_fd(0.37 * config.t_final, x, fd_step);
    if (check.max_relative() > 1e-5 || std::abs(check.r_div_u) > 1e-10)
      throw std::runtime_error(
          "run_convergence_study: finite-difference source oracle failed at (" +
          std::to_string(x.x()) + ", " + std::to_string(x.y()) + ")");
  }

  if (log) {
    InterfaceResiduals worst;
    for (double t : {0.0, 0.5 * config.t_final, config.t_final})
      for (double y : {0.1, 0.25, 0.4}) {
        const InterfaceResiduals r = exact.interface_residuals(t, y);
        worst.total_stress = std::max(worst.total_stress, r.total_stress);
        worst.normal_stress = std::max(worst.normal_stress, r.normal_stress);
        worst.normal_flux = std::max(worst.normal_flux, std::abs(r.normal_flux));
        worst.tangential_stress =
            std::max(worst.tangential_stress, r.tangential_stress);
      }
    *log << "interface-condition residuals at the exact solution:"
         << " total_stress=" << worst.total_stress
         << " normal_stress=" << worst.normal_stress
         << " normal_flux=" << worst.normal_flux
         << " tangential_stress=" << worst.tangential_stress << "\n";
  }

  const TimeGrid grid(config.t_final, config.dt);
  EstimatorOptions opts;
  opts.jump = config.jump;

  std::vector<ConvergenceRow> rows;
  for (int level = 0; level < config.levels; ++level) {
    const auto t0 = std::chrono::steady_clock::now();
    const int n = config.n0 << level;
    const Mesh mesh = build_two_square_mesh(n);
    const Discretization disc = Discretization::build(mesh, params);

    const TimeLoopOptions loop_opts{config.consistent_initial_state};
    const StateTrajectory traj = [&] {
      try {
        return run_time_loop(disc, grid, sources, exact.initial_fields(),
                             exact.boundary_fields(), loop_opts);
      } catch (const std::exception& err) {
        throw std::runtime_error("run_convergence_study: level " +
                                 std::to_string(level) + " failed: " + err.what());
      }
    }();

    const EstimatorReport est = compute_estimators(
        disc, traj, sources, opts, config.include_eta_data ? &exact : nullptr);
    const ErrorReport err = error_norms(disc, traj, exact, est.eta_ok);

    ConvergenceRow row;
    row.level = level;
    row.n = n;
    row.h_max = mesh.max_diameter();
    row.ndof = disc.layout.total();
    row.err_d_linf = err.err_d_linf;
    row.err_J_linf = err.err_J_linf;
    row.err_u_l2 = err.err_u_l2;
    row.err_J_l2 = err.err_J_l2;
    row.err_e = err.err_e;
    row.E_d = est.E_d;
    row.E_d_dt = est.E_d_dt;
    row.E_J = est.E_J;
    row.E_up = est.E_up;
    row.eta_time = est.eta_time;
    row.eta_ok = est.eta_ok;
    row.i_eff = err.i_eff;
    row.eta_data = est.eta_data;
    row.max_galerkin_residual = traj.max_galerkin_residual();
    row.max_solver_residual = traj.max_solver_residual();
    row.div_u_l2 = err.div_u_l2;
    row.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rows.push_back(row);

    if (log) {
      *log << "level " << level << " n=" << n << " h=" << row.h_max
           << " ndof=" << row.ndof << " ERR_e=" << row.err_e
           << " eta_ok=" << row.eta_ok << " I_eff=" << row.i_eff
           << " galerkin=" << row.max_galerkin_residual;
      if (config.include_eta_data) *log << " eta_data=" << row.eta_data;
      *log << " (" << row.wall_seconds << "s)\n";
    }
  }
  return rows;
}

void emit_csv(const std::vector<ConvergenceRow>& rows, std::ostream& os) {
  os << "level,n,h_max,ndof,err_d_linf,err_J_linf,err_u_l2,err_J_l2,ERR_e,"
        "E_d,E_d_dt,E_J,E_up,eta_time,eta_ok,I_eff\n";
  for (const auto& r : rows) {
    os << r.level << ',' << r.n << ',' << fmt(r.h_max) << ',' << r.ndof << ','
       << fmt(r.err_d_linf) << ',' << fmt(r.err_J_linf) << ',' << fmt(r.err_u_l2)
       << ',' << fmt(r.err_J_l2) << ',' << fmt(r.err_e) << ',' << fmt(r.E_d) << ','
       << fmt(r.E_d_dt) << ',' << fmt(r.E_J) << ',' << fmt(r.E_up) << ','
       << fmt(r.eta_time) << ',' << fmt(r.eta_ok) << ',' << fmt(r.i_eff) << '\n';
  }
}

void emit_svg(const std::vector<ConvergenceRow>& rows, std::ostream& os) {
  if (rows.empty()) throw std::invalid_argument("emit_svg: no rows");
  const int width = 720, height = 520;
  const int ml = 70, mr = 170, mt = 30, mb = 60;

  double lx_min = 1e300, lx_max = -1e300, ly_min = 1e300, ly_max = -1e300;
  for (const auto& r : rows) {
    const double lx = std::log10(r.h_max);
    lx_min = std::min(lx_min, lx);
    lx_max = std::max(lx_max, lx);
    for (const auto& s : kSvgSeries) {
      const double v = r.*(s.field);
      if (v <= 0.0) continue;
      const double ly = std::log10(v);
      ly_min = std::min(ly_min, ly);
      ly_max = std::max(ly_max, ly);
    }
  }
  if (lx_max <= lx_min) lx_max = lx_min + 1.0;
  if (ly_max <= ly_min) ly_max = ly_min + 1.0;

  const auto px = [&](double lx) {
    return ml + (lx - lx_min) / (lx_max - lx_min) * (width - ml - mr);
  };
  const auto py = [&](double ly) {
    return height - mb - (ly - ly_min) / (ly_max - ly_min) * (height - mt - mb);
  };

  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
     << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " " << height
     << "\">\n";
  os << "  <rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height
     << "\" fill=\"white\"/>\n";
  os << "  <g stroke=\"#333\" fill=\"none\"><path d=\"M" << ml << " " << mt << " V"
     << height - mb << " H" << width - mr << "\"/></g>\n";

  // decade grid lines and labels
  for (int e = static_cast<int>(std::ceil(ly_min)); e <= std::floor(ly_max); ++e) {
    const double y = py(e);
    os << "  <line x1=\"" << ml << "\" y1=\"" << y << "\" x2=\"" << width - mr
       << "\" y2=\"" << y << "\" stroke=\"#ddd\"/>\n";
    os << "  <text x=\"" << ml - 8 << "\" y=\"" << y + 4
       << "\" text-anchor=\"end\" font-size=\"11\">1e" << e << "</text>\n";
  }
  for (const auto& r : rows) {
    const double x = px(std::log10(r.h_max));
    os << "  <line x1=\"" << x << "\" y1=\"" << mt << "\" x2=\"" << x << "\" y2=\""
       << height - mb << "\" stroke=\"#eee\"/>\n";
    std::ostringstream hs;
    hs.precision(3);
    hs << r.h_max;
    os << "  <text x=\"" << x << "\" y=\"" << height - mb + 16
       << "\" text-anchor=\"middle\" font-size=\"11\">" << hs.str() << "</text>\n";
  }
  os << "  <text x=\"" << (ml + width - mr) / 2 << "\" y=\"" << height - 16
     << "\" text-anchor=\"middle\" font-size=\"13\">h</text>\n";

  int legend_y = mt + 10;
  for (const auto& s : kSvgSeries) {
    os << "  <polyline fill=\"none\" stroke=\"" << s.color
       << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& r : rows) {
      const double v = r.*(s.field);
      if (v <= 0.0) continue;
      os << px(std::log10(r.h_max)) << "," << py(std::log10(v)) << " ";
    }
    os << "\"/>\n";
    os << "  <line x1=\"" << width - mr + 14 << "\" y1=\"" << legend_y << "\" x2=\""
       << width - mr + 38 << "\" y2=\"" << legend_y << "\" stroke=\"" << s.color
       << "\" stroke-width=\"1.5\"/>\n";
    os << "  <text x=\"" << width - mr + 44 << "\" y=\"" << legend_y + 4
       << "\" font-size=\"12\">" << s.name << "</text>\n";
    legend_y += 20;
  }
  os << "</svg>\n";
}

void emit_report(const std::vector<ConvergenceRow>& rows, const std::string& path,
                 const std::string& format) {
  if (rows.empty()) throw std::invalid_argument("emit_report: no rows");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("emit_report: cannot write " + path);
  if (format == "csv")
    emit_csv(rows, out);
  else if (format == "svg")
    emit_svg(rows, out);
  else
    throw std::invalid_argument("emit_report: unknown format " + format);
}

}  // namespace mpe
