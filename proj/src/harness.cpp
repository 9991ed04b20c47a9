#include "qnr/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>

#include "qnr/bounds.hpp"
#include "qnr/error.hpp"
#include "qnr/orlicz.hpp"
#include "qnr/qrange.hpp"
#include "qnr/random.hpp"
#include "qnr/sectorial.hpp"

namespace qnr {

namespace {

constexpr double kAlphaTargets[] = {0.2, 0.5, 0.8, 1.1, 1.4};
constexpr double kImDominantTargets[] = {0.8, 1.1, 1.4};

[[noreturn]] void bad_config(const std::string& msg) { throw Error(ErrorKind::InvalidConfig, msg); }

nlohmann::json finite_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

ComplexMatrix rescaled(ComplexMatrix m, CounterRng& rng) {
  const double n = spectral_norm(m);
  if (n > 0.0) m *= Complex((0.5 + 1.5 * rng.uniform()) / n);
  return m;
}

ComplexMatrix random_normal(std::size_t dim, Seed seed) {
  CounterRng rng(seed, 1);
  std::vector<Complex> eig(dim);
  for (Complex& z : eig) z = rng.complex_normal();
  const ComplexMatrix u = random_unitary(dim, derive_seed(seed, 2));
  return u * ComplexMatrix::diagonal(eig) * u.adjoint();
}

ComplexMatrix random_square_zero(std::size_t dim, Seed seed) {
  CounterRng rng(seed, 1);
  const std::size_t k = dim / 2;
  ComplexMatrix z(dim);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = k; j < dim; ++j) z(i, j) = rng.complex_normal();
  const ComplexMatrix u = random_unitary(dim, derive_seed(seed, 2));
  return u * z * u.adjoint();
}

// Matrices shared by every q and bound for one (dim, trial) cell.
struct Instance {
  ComplexMatrix general;
  ComplexMatrix normal;
  ComplexMatrix square_zero;
  ComplexMatrix r;
  ComplexMatrix s;
  ComplexMatrix contraction;
  std::vector<ComplexMatrix> summands;
  ComplexMatrix b;
  ComplexMatrix x;
  ComplexMatrix y;
  int exponent = 2;
};

Instance make_instance(std::size_t dim, int trial, Seed seed) {
  CounterRng rng(seed, 7);
  auto draw = [&](std::uint64_t k) { return rescaled(random_matrix(dim, derive_seed(seed, k)), rng); };
  Instance in{draw(1),
              rescaled(random_normal(dim, derive_seed(seed, 2)), rng),
              rescaled(random_square_zero(dim, derive_seed(seed, 3)), rng),
              draw(4),
              draw(5),
              random_matrix(dim, derive_seed(seed, 6)),
              {},
              draw(7),
              draw(8),
              draw(9),
              1 + trial % 3};
  in.contraction *= Complex(1.0 / spectral_norm(in.contraction));
  const int n = 1 + trial % 3;
  in.summands.push_back(in.general);
  for (int k = 1; k < n; ++k) in.summands.push_back(draw(10 + static_cast<std::uint64_t>(k)));
  return in;
}

struct SectorialInstance {
  ComplexMatrix a;
  double alpha;
};

bool is_sectorial_bound(const BoundSpec& spec) {
  return spec.requires_predicate == Predicate::QSectorial ||
         spec.requires_predicate == Predicate::QSectorialPair ||
         spec.requires_predicate == Predicate::Sectorial;
}

std::vector<ComplexMatrix> inputs_for(const BoundSpec& spec, const Instance& in, const ComplexMatrix* sect) {
  const std::string& id = spec.id;
  if (id == "L1b") return {in.normal};
  if (id == "L5" || id == "Q2" || id == "C2") return {in.square_zero};
  if (id == "T2") return in.summands;
  if (id == "T3" || id == "C3a" || id == "C3b") return {in.general, in.r, in.s};
  if (id == "C3d") return {in.general, in.contraction, in.s};
  if (spec.requires_predicate == Predicate::None) return {in.general};
  if (sect == nullptr) return {};
  if (id == "K1" || id == "K2") return {*sect, in.b, in.x, in.y};
  if (id == "K4") return {*sect, sect->transpose()};
  if (id == "K3" || id == "K5") return {*sect, in.b};
  return {*sect};
}

}  // namespace

void validate(const CampaignConfig& cfg) {
  if (cfg.dims.empty()) bad_config("dims must not be empty");
  for (std::size_t d : cfg.dims)
    if (d < 2 || d > 16) bad_config("dims must lie in 2..16");
  if (cfg.q_grid.empty()) bad_config("q_grid must not be empty");
  for (double q : cfg.q_grid)
    if (!(q > 0.0) || !(q <= 1.0)) bad_config("q_grid values must lie in (0, 1]");
  if (cfg.trials < 1) bad_config("trials must be >= 1");
  if (cfg.restarts < 1) bad_config("restarts must be >= 1");
  if (cfg.sampler_trials < 0) bad_config("sampler_trials must be >= 0");
  if (cfg.directions < 8) bad_config("directions must be >= 8");
  for (const std::string& id : cfg.bounds) {
    try {
      find_bound(id);
    } catch (const Error&) {
      bad_config("unknown bound id '" + id + "'");
    }
  }
  for (const std::string& name : cfg.phis) {
    try {
      builtin(name);
    } catch (const Error& e) {
      bad_config(e.what());
    }
  }
}

nlohmann::json config_to_json(const CampaignConfig& cfg) {
  return {{"seed", cfg.seed.value},        {"dims", cfg.dims},
          {"q_grid", cfg.q_grid},          {"trials", cfg.trials},
          {"bounds", cfg.bounds},          {"phis", cfg.phis},
          {"output", cfg.output},          {"restarts", cfg.restarts},
          {"sampler_trials", cfg.sampler_trials}, {"directions", cfg.directions}};
}

CampaignConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) bad_config("config must be a JSON object");
  CampaignConfig cfg;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "seed") {
        cfg.seed = Seed{value.get<std::uint64_t>()};
      } else if (key == "dims") {
        cfg.dims = value.get<std::vector<std::size_t>>();
      } else if (key == "q_grid") {
        cfg.q_grid = value.get<std::vector<double>>();
      } else if (key == "trials") {
        cfg.trials = value.get<int>();
      } else if (key == "bounds") {
        cfg.bounds = value.get<std::vector<std::string>>();
      } else if (key == "phis") {
        cfg.phis = value.get<std::vector<std::string>>();
      } else if (key == "output") {
        cfg.output = value.get<std::string>();
      } else if (key == "restarts") {
        cfg.restarts = value.get<int>();
      } else if (key == "sampler_trials") {
        cfg.sampler_trials = value.get<int>();
      } else if (key == "directions") {
        cfg.directions = value.get<int>();
      } else {
        bad_config("unknown config key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    bad_config(std::string("bad config value: ") + e.what());
  }
  validate(cfg);
  return cfg;
}

CampaignReport run_campaign(const CampaignConfig& cfg) {
  validate(cfg);
  CampaignReport report;
  report.generated_at = utc_now();
  report.config = cfg;

  std::vector<const BoundSpec*> specs;
  for (const BoundSpec& s : catalog()) {
    if (cfg.bounds.empty() || std::find(cfg.bounds.begin(), cfg.bounds.end(), s.id) != cfg.bounds.end()) {
      specs.push_back(&s);
    }
  }
  std::vector<OrliczFn> phis;
  for (const std::string& name : cfg.phis) phis.push_back(builtin(name));

  std::map<std::pair<std::string, std::string>, std::size_t> row_of;
  std::vector<double> tightness_sum;
  std::vector<int> tightness_count;
  for (const BoundSpec* s : specs) {
    const std::vector<std::string> names =
        s->orlicz_dependent ? cfg.phis : std::vector<std::string>{std::string()};
    for (const std::string& phi : names) {
      row_of[{s->id, phi}] = report.rows.size();
      report.rows.push_back({s->id, phi});
      tightness_sum.push_back(0.0);
      tightness_count.push_back(0);
    }
  }
  const bool want_sectorial = std::any_of(specs.begin(), specs.end(), [](const BoundSpec* s) {
    return is_sectorial_bound(*s) || s->requires_predicate == Predicate::SectorialImDominant;
  });

  RadiusOracle oracle({cfg.restarts, cfg.sampler_trials, 16, derive_seed(cfg.seed, 0xC0FFEE)});
  GeneratorOptions gen_opts;
  gen_opts.directions = cfg.directions;
  gen_opts.restarts = 8;

  auto record = [&](std::size_t row, const BoundOutcome& out) {
    CampaignRow& r = report.rows[row];
    ++r.trials;
    ++report.outcomes;
    if (!out.holds) {
      if (out.warning) {
        ++r.warnings;
        ++report.warnings;
      } else {
        ++r.violations;
        ++report.violations;
      }
    }
    if (std::isnan(out.relative_slack)) {
      r.min_slack = std::numeric_limits<double>::quiet_NaN();
    } else if (!std::isnan(r.min_slack)) {
      r.min_slack = std::min(r.min_slack, out.relative_slack);
    }
    if (out.rhs > 0.0 && std::isfinite(out.rhs) && std::isfinite(out.lhs)) {
      tightness_sum[row] += out.lhs / out.rhs;
      ++tightness_count[row];
    }
  };

  for (std::size_t dim : cfg.dims) {
    for (int trial = 0; trial < cfg.trials; ++trial) {
      const Seed cell_seed = derive_seed(cfg.seed, dim * 100003ULL + static_cast<std::uint64_t>(trial));
      const Instance inst = make_instance(dim, trial, cell_seed);
      for (std::size_t qi = 0; qi < cfg.q_grid.size(); ++qi) {
        const QParam q(cfg.q_grid[qi]);
        std::optional<SectorialInstance> sect;
        std::optional<SectorialInstance> im_dominant;
        if (want_sectorial) {
          const double target = kAlphaTargets[static_cast<std::size_t>(trial) % std::size(kAlphaTargets)];
          try {
            const GeneratedSectorial g =
                generate_q_sectorial(dim, q, target, derive_seed(cell_seed, 1000 + qi), gen_opts);
            sect = SectorialInstance{g.matrix, *g.verdict.alpha_margined};
          } catch (const Error&) {
          }
          if (q.modulus() == 1.0) {
            const double t =
                std::tan(kImDominantTargets[static_cast<std::size_t>(trial) % std::size(kImDominantTargets)]);
            ComplexMatrix h = random_hermitian(dim, derive_seed(cell_seed, 2000));
            h *= Complex(0.0, t / spectral_norm(h));
            const ComplexMatrix a = ComplexMatrix::identity(dim) + h;
            const SectorialVerdict v =
                sectorial_index_estimate(a, q, cfg.directions, 8, derive_seed(cell_seed, 2001));
            if (v.is_q_sectorial) im_dominant = SectorialInstance{a, *v.alpha_margined};
          }
        }

        for (const BoundSpec* spec : specs) {
          const SectorialInstance* si = nullptr;
          if (spec->requires_predicate == Predicate::SectorialImDominant) {
            si = im_dominant ? &*im_dominant : nullptr;
          } else if (is_sectorial_bound(*spec)) {
            si = sect ? &*sect : nullptr;
          }
          EvalInputs ev;
          ev.matrices = inputs_for(*spec, inst, si ? &si->a : nullptr);
          ev.q = q;
          ev.r = inst.exponent;
          if (si) ev.alpha = si->alpha;

          const std::size_t count = spec->orlicz_dependent ? phis.size() : 1;
          for (std::size_t p = 0; p < count; ++p) {
            const std::size_t row =
                row_of.at({spec->id, spec->orlicz_dependent ? cfg.phis[p] : std::string()});
            if (ev.matrices.empty()) {
              ++report.rows[row].skipped;
              continue;
            }
            ev.phi = spec->orlicz_dependent ? &phis[p] : nullptr;
            try {
              record(row, evaluate(spec->id, ev, oracle));
            } catch (const Error&) {
              ++report.rows[row].skipped;
            }
          }
        }
      }
    }
  }
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    if (tightness_count[i] > 0) report.rows[i].mean_tightness = tightness_sum[i] / tightness_count[i];
  }
  if (!cfg.output.empty()) write_report(report, cfg.output);
  return report;
}

nlohmann::json report_to_json(const CampaignReport& report) {
  nlohmann::json results = nlohmann::json::array();
  for (const CampaignRow& r : report.rows) {
    results.push_back({{"bound_id", r.bound_id},
                       {"phi", r.phi.empty() ? nlohmann::json(nullptr) : nlohmann::json(r.phi)},
                       {"trials", r.trials},
                       {"violations", r.violations},
                       {"warnings", r.warnings},
                       {"skipped", r.skipped},
                       {"min_slack", finite_or_null(r.min_slack)},
                       {"mean_tightness", finite_or_null(r.mean_tightness)}});
  }
  return {{"generated_at", report.generated_at},
          {"config", config_to_json(report.config)},
          {"summary",
           {{"outcomes", report.outcomes}, {"violations", report.violations}, {"warnings", report.warnings}}},
          {"results", std::move(results)}};
}

void write_report(const CampaignReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot open '" + path + "' for writing");
  out << report_to_json(report).dump(2) << '\n';
  if (!out) throw Error(ErrorKind::Io, "failed writing '" + path + "'");
}

std::vector<std::string> figure_ids() { return {"fig1", "fig4", "fig5", "fig6"}; }

namespace {

std::vector<double> open_unit_grid() {
  std::vector<double> g;
  for (int k = 1; k < 200; ++k) g.push_back(k / 200.0);
  return g;
}

FigureData sector_figure(std::string id, double sin_alpha) {
  FigureData f{std::move(id), "q", open_unit_grid(), {{"bd1", {}}, {"bd2", {}}}};
  for (double q : f.grid) {
    const double s = std::sqrt(1.0 - q * q);
    const double inner = q * sin_alpha + 2.0 * s;
    const double q4 = std::pow(q, 4);
    f.columns[0].second.push_back(3.4433 * q4 / (q * q + inner * inner));
    f.columns[1].second.push_back(2.1623 * q4 / (inner * inner));
  }
  return f;
}

std::string format17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(std::string_view cell) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || ptr != cell.data() + cell.size()) {
    throw Error(ErrorKind::InvalidInput, "bad CSV number '" + std::string(cell) + "'");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

FigureData figure_data(std::string_view figure_id) {
  if (figure_id == "fig1") {
    FigureData f{"fig1", "q", open_unit_grid(), {{"f_L3", {}}, {"f_C1", {}}}};
    for (double q : f.grid) {
      const double s = std::sqrt(1.0 - q * q);
      f.columns[0].second.push_back(std::pow(q + 2.0 * s, 2) / 2.0);
      f.columns[1].second.push_back((2.0 - q * q + 2.0 * q * std::sqrt(2.0 * (1.0 - q * q))) / 2.0);
    }
    return f;
  }
  if (figure_id == "fig4") {
    FigureData f{"fig4", "alpha", {}, {{"cos_alpha", {}}, {"inv_one_plus_sin", {}}}};
    for (int k = 0; k < 200; ++k) {
      const double a = k * (0.5 * std::numbers::pi) / 200.0;
      f.grid.push_back(a);
      f.columns[0].second.push_back(std::cos(a));
      f.columns[1].second.push_back(1.0 / (1.0 + std::sin(a)));
    }
    return f;
  }
  if (figure_id == "fig5") return sector_figure("fig5", 0.5);
  if (figure_id == "fig6") return sector_figure("fig6", 0.9);
  throw Error(ErrorKind::UnknownFigure, "unknown figure '" + std::string(figure_id) + "'");
}

std::string figure_to_csv(const FigureData& fig) {
  std::string out = fig.grid_name;
  for (const auto& [name, values] : fig.columns) out += "," + name;
  out += '\n';
  for (std::size_t i = 0; i < fig.grid.size(); ++i) {
    out += format17(fig.grid[i]);
    for (const auto& col : fig.columns) out += "," + format17(col.second[i]);
    out += '\n';
  }
  return out;
}

FigureData figure_from_csv(std::string_view figure_id, std::string_view text) {
  std::vector<std::string_view> lines = split(text, '\n');
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) throw Error(ErrorKind::InvalidInput, "empty CSV");
  const std::vector<std::string_view> header = split(lines[0], ',');
  if (header.size() < 2) throw Error(ErrorKind::InvalidInput, "CSV needs a grid and one column");
  FigureData f;
  f.figure_id = std::string(figure_id);
  f.grid_name = std::string(header[0]);
  for (std::size_t c = 1; c < header.size(); ++c) f.columns.push_back({std::string(header[c]), {}});
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::vector<std::string_view> cells = split(lines[i], ',');
    if (cells.size() != header.size()) {
      throw Error(ErrorKind::InvalidInput, "CSV row " + std::to_string(i) + " has the wrong width");
    }
    f.grid.push_back(parse_double(cells[0]));
    for (std::size_t c = 1; c < cells.size(); ++c) f.columns[c - 1].second.push_back(parse_double(cells[c]));
  }
  return f;
}

int sign_changes(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error(ErrorKind::DimensionMismatch, "series lengths differ");
  int changes = 0;
  int last = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    const int sign = d > 0.0 ? 1 : (d < 0.0 ? -1 : 0);
    if (sign == 0) continue;
    if (last != 0 && sign != last) ++changes;
    last = sign;
  }
  return changes;
}

double fig4_crossover() {
  auto g = [](double a) { return std::cos(a) * (1.0 + std::sin(a)) - 1.0; };
  double lo = 0.1;
  double hi = 0.5 * std::numbers::pi - 1e-9;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

ComplexMatrix example_a1() { return ComplexMatrix::from_rows({{2.5, -0.5}, {-0.5, 2.5}}); }
ComplexMatrix example_a2() { return ComplexMatrix::from_rows({{4.0, -3.0}, {-3.0, 4.0}}); }
ComplexMatrix example_randn() {
  return ComplexMatrix::from_rows({{Complex(0.4889, 0.29239), Complex(0.7269, 0.8884)},
                                   {Complex(1.0347, -0.7873), Complex(-0.3034, -1.1471)}});
}
ComplexMatrix jordan_block() { return ComplexMatrix::from_rows({{0.0, 1.0}, {0.0, 0.0}}); }

RegressionReport worked_examples_regression() {
  RegressionReport rep;
  auto add = [&](std::string name, double expected, double actual, double tol) {
    const bool ok = std::abs(actual - expected) <= tol;
    rep.entries.push_back({std::move(name), expected, actual, tol, ok});
  };
  const ComplexMatrix a1 = example_a1();
  const ComplexMatrix a2 = example_a2();
  const std::vector<double> e1 = hermitian_eigenvalues(a1);
  const std::vector<double> e2 = hermitian_eigenvalues(a2);
  add("A1 largest eigenvalue", 3.0, e1.front(), 1e-10);
  add("A1 smallest eigenvalue", 2.0, e1.back(), 1e-10);
  add("A2 largest eigenvalue", 7.0, e2.front(), 1e-10);
  add("A2 smallest eigenvalue", 1.0, e2.back(), 1e-10);

  const double q = 0.5;
  const EllipseDisc el1 = hermitian_qrange_ellipse(a1, QParam(q));
  add("A1 ellipse center", 1.25, el1.center_x, 1e-12);
  add("A1 ellipse semi-axis a", 0.5, el1.semi_axis_x, 1e-12);
  add("A1 ellipse semi-axis b", std::sqrt(3.0) / 4.0, el1.semi_axis_y, 1e-12);
  const EllipseDisc el2 = hermitian_qrange_ellipse(a2, QParam(q));
  add("A2 ellipse center", 2.0, el2.center_x, 1e-12);
  add("A2 ellipse semi-axis a", 3.0, el2.semi_axis_x, 1e-12);
  add("A2 ellipse semi-axis b", 3.0 * std::sqrt(0.75), el2.semi_axis_y, 1e-12);

  const SectorialVerdict v1 = hermitian_q_sectorial_test(a1, q);
  const SectorialVerdict v2 = hermitian_q_sectorial_test(a2, q);
  add("A1 q-sectorial", 1.0, v1.is_q_sectorial ? 1.0 : 0.0, 0.0);
  add("A2 q-sectorial", 0.0, v2.is_q_sectorial ? 1.0 : 0.0, 0.0);

  const ComplexMatrix r = example_randn();
  const ComplexMatrix ra = r.adjoint();
  const double n2 = spectral_norm(r * ra + ra * r);
  const auto [re, im] = hermitian_parts(r);
  const double nre = spectral_norm(re);
  const double nim = spectral_norm(im);
  add("randn ||AA*+A*A||/2", 3.4433, n2 / 2.0, 5e-4);
  add("randn ||AA*+A*A||/4 + (||Im A||^2-||Re A||^2)/2", 2.1623, n2 / 4.0 + (nim * nim - nre * nre) / 2.0,
      5e-4);

  add("w_0.5(I)", 0.5, q_numerical_radius(ComplexMatrix::identity(3), QParam(q)).value, 1e-12);
  add("w_0.5(Jordan block)", (1.0 + std::sqrt(0.75)) / 2.0, q_numerical_radius(jordan_block(), QParam(q)).value,
      1e-6);

  rep.all_passed =
      std::all_of(rep.entries.begin(), rep.entries.end(), [](const RegressionEntry& e) { return e.passed; });
  return rep;
}

nlohmann::json regression_to_json(const RegressionReport& report) {
  nlohmann::json entries = nlohmann::json::array();
  for (const RegressionEntry& e : report.entries) {
    entries.push_back({{"name", e.name},
                       {"expected", e.expected},
                       {"actual", e.actual},
                       {"tolerance", e.tolerance},
                       {"passed", e.passed}});
  }
  return {{"all_passed", report.all_passed}, {"entries", std::move(entries)}};
}

}  // namespace qnr
