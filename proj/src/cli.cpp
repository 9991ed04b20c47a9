#include "qnr/cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qnr/bounds.hpp"
#include "qnr/error.hpp"
#include "qnr/harness.hpp"
#include "qnr/matrix_io.hpp"
#include "qnr/orlicz.hpp"
#include "qnr/sectorial.hpp"

namespace qnr {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::optional<double> to_double(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
    return std::nullopt;
  }
  return v;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

nlohmann::json complex_json(Complex z) { return nlohmann::json::array({z.real(), z.imag()}); }

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto pos = text.find(',', start);
    const std::string item = text.substr(start, pos == std::string::npos ? std::string::npos : pos - start);
    if (!item.empty()) out.push_back(item);
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<std::size_t> parse_dims(const std::string& text) {
  const auto dots = text.find("..");
  std::vector<std::size_t> dims;
  auto to_size = [&](std::string_view s) {
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
      throw UsageError("bad --dims value '" + text + "'");
    }
    return v;
  };
  if (dots != std::string::npos) {
    const std::size_t lo = to_size(std::string_view(text).substr(0, dots));
    const std::size_t hi = to_size(std::string_view(text).substr(dots + 2));
    if (lo > hi) throw UsageError("bad --dims range '" + text + "'");
    for (std::size_t d = lo; d <= hi; ++d) dims.push_back(d);
    return dims;
  }
  for (const std::string& item : split_list(text)) dims.push_back(to_size(item));
  if (dims.empty()) throw UsageError("bad --dims value '" + text + "'");
  return dims;
}

QParam require_q(const std::string& text) {
  const auto q = parse_q(text);
  if (!q) throw UsageError("--q must be a real or \"re,im\" with 0 < |q| <= 1, got '" + text + "'");
  return *q;
}

std::uint64_t default_seed() {
  const char* env = std::getenv("QNR_SEED");
  if (env == nullptr || *env == '\0') return 0;
  std::uint64_t v = 0;
  const std::string_view s(env);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw UsageError("QNR_SEED must be a non-negative integer, got '" + std::string(s) + "'");
  }
  return v;
}

struct Options {
  std::string matrix;
  std::string q = "0.5";
  int restarts = 32;
  std::uint64_t seed = 0;
  bool json = false;
  int directions = 256;

  std::string fn;
  std::string op = "eval";
  std::vector<double> args;

  std::string bounds = "all";
  int trials = 40;
  std::string dims = "2..6";
  std::string q_grid = "0.1,0.3,0.5,0.7,0.9,1.0";
  std::string phi = "power:2,exp_minus_one,power_over_p:2";
  std::string report;
  int sampler_trials = 1000;
  int campaign_directions = 64;

  std::string figure;
  std::string out_path;
};

void add_common(CLI::App* sub, Options& o, bool directions) {
  sub->add_option("--matrix", o.matrix, "Matrix JSON file {\"dim\": n, \"entries\": [[re, im], ...]}")
      ->required();
  sub->add_option("--q", o.q, "q as a real or \"re,im\" with 0 < |q| <= 1")->capture_default_str();
  sub->add_option("--restarts", o.restarts, "Random restarts of the ascent")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  sub->add_option("--seed", o.seed, "Seed (default from QNR_SEED, else 0)")->capture_default_str();
  if (directions) {
    sub->add_option("--directions", o.directions, "Support directions of the boundary polygon")
        ->capture_default_str()
        ->check(CLI::Range(3, 1 << 20));
  }
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw Error(ErrorKind::Io, "cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw Error(ErrorKind::Io, "failed writing '" + path + "'");
}

void cmd_radius(const Options& o, std::ostream& out) {
  const ComplexMatrix t = load_matrix(o.matrix);
  const QParam q = require_q(o.q);
  const RadiusEstimate r = q_numerical_radius(t, q, o.restarts, Seed{o.seed});
  if (o.json) {
    nlohmann::json j = {{"q", complex_json(q.value())}, {"w_q", r.value}, {"restarts", o.restarts},
                        {"seed", o.seed}};
    out << j.dump(2) << '\n';
  } else {
    out << fmt(r.value) << '\n';
  }
}

void cmd_boundary(const Options& o, std::ostream& out) {
  const ComplexMatrix t = load_matrix(o.matrix);
  const QParam q = require_q(o.q);
  const BoundaryPolygon p = boundary_polygon(t, q, o.directions, o.restarts, Seed{o.seed});
  std::string csv = "theta,h,vertex_re,vertex_im\n";
  for (std::size_t k = 0; k < p.directions.size(); ++k) {
    const Complex v = p.degenerate ? p.vertices.front() : p.vertices[k];
    csv += fmt(p.directions[k]) + "," + fmt(p.support_values[k]) + "," + fmt(v.real()) + "," + fmt(v.imag()) +
           "\n";
  }
  out << csv;
}

void cmd_sectorial(const Options& o, std::ostream& out) {
  const ComplexMatrix a = load_matrix(o.matrix);
  const QParam q = require_q(o.q);
  const SectorialVerdict v = sectorial_index_estimate(a, q, o.directions, o.restarts, Seed{o.seed});
  if (o.json) {
    nlohmann::json j = {{"q", complex_json(q.value())},
                        {"is_q_sectorial", v.is_q_sectorial},
                        {"alpha", v.alpha_estimate ? nlohmann::json(*v.alpha_estimate) : nlohmann::json()},
                        {"alpha_margined", v.alpha_margined ? nlohmann::json(*v.alpha_margined) : nlohmann::json()},
                        {"min_real_part", v.min_real_part},
                        {"witness", v.witness ? complex_json(*v.witness) : nlohmann::json()}};
    out << j.dump(2) << '\n';
    return;
  }
  out << "sectorial=" << (v.is_q_sectorial ? "true" : "false");
  if (v.alpha_estimate) out << " alpha=" << fmt(*v.alpha_estimate) << " alpha_margined=" << fmt(*v.alpha_margined);
  out << " min_real_part=" << fmt(v.min_real_part);
  if (v.witness) out << " witness=" << fmt(v.witness->real()) << "," << fmt(v.witness->imag());
  out << '\n';
}

void cmd_orlicz(const Options& o, std::ostream& out) {
  const OrliczFn f = builtin(o.fn);
  nlohmann::json result;
  auto each = [&](auto&& fn) {
    nlohmann::json arr = nlohmann::json::array();
    for (double x : o.args) arr.push_back(fn(x));
    return arr;
  };
  auto need = [&](std::size_t n) {
    if (o.args.size() != n) {
      throw UsageError("--op " + o.op + " takes " + std::to_string(n) + " arguments");
    }
  };
  if (o.op == "eval") {
    result = each([&](double t) {
      if (!(t >= 0.0)) throw Error(ErrorKind::InvalidInput, "Orlicz argument must be >= 0");
      return f(t);
    });
  } else if (o.op == "kernel") {
    result = each([&](double u) { return kernel(f, u); });
  } else if (o.op == "inverse") {
    result = each([&](double v) { return right_inverse(f, v); });
  } else if (o.op == "complement") {
    const ComplementaryPair pair = complementary(f);
    result = each([&](double s) {
      if (!(s >= 0.0)) throw Error(ErrorKind::InvalidInput, "complementary argument must be >= 0");
      return pair.psi(s);
    });
  } else if (o.op == "hh") {
    need(2);
    result = hermite_hadamard_integral(f, o.args[0], o.args[1]);
  } else if (o.op == "young") {
    need(2);
    const YoungCheck y = young_check(complementary(f), o.args[0], o.args[1]);
    result = {{"lhs", y.lhs}, {"rhs", y.rhs}, {"slack", y.slack}};
  } else {
    throw UsageError("unknown --op '" + o.op + "'");
  }
  nlohmann::json j = {{"fn", f.name()}, {"op", o.op}, {"args", o.args}, {"result", result}};
  out << j.dump(2) << '\n';
}

void cmd_verify(const Options& o, std::ostream& out) {
  CampaignConfig cfg;
  cfg.seed = Seed{o.seed};
  cfg.dims = parse_dims(o.dims);
  cfg.q_grid.clear();
  for (const std::string& item : split_list(o.q_grid)) {
    const auto v = to_double(item);
    if (!v) throw UsageError("bad --q-grid value '" + item + "'");
    cfg.q_grid.push_back(*v);
  }
  cfg.trials = o.trials;
  if (o.bounds != "all") cfg.bounds = split_list(o.bounds);
  cfg.phis = split_list(o.phi);
  cfg.restarts = o.restarts;
  cfg.sampler_trials = o.sampler_trials;
  cfg.directions = o.campaign_directions;
  cfg.output = o.report;
  const CampaignReport rep = run_campaign(cfg);
  if (o.report.empty()) {
    out << report_to_json(rep).dump(2) << '\n';
  } else {
    out << "outcomes=" << rep.outcomes << " violations=" << rep.violations << " warnings=" << rep.warnings
        << " report=" << o.report << '\n';
  }
}

void cmd_figure(const Options& o, std::ostream& out) {
  write_text(o.out_path, figure_to_csv(figure_data(o.figure)), out);
}

void cmd_regress(std::ostream& out) { out << regression_to_json(worked_examples_regression()).dump(2) << '\n'; }

nlohmann::json dump_invocation(const CLI::App& sub) {
  nlohmann::json options = nlohmann::json::object();
  nlohmann::json positional = nlohmann::json::array();
  for (const CLI::Option* opt : sub.get_options()) {
    if (opt->get_positional()) {
      for (const std::string& r : opt->results()) positional.push_back(r);
      continue;
    }
    if (opt->get_lnames().empty()) continue;
    const std::string name = opt->get_lnames().front();
    if (name == "help") continue;
    if (opt->get_items_expected_max() == 0) {
      options[name] = opt->count() > 0;
    } else if (opt->count() > 0 && !opt->results().empty()) {
      options[name] = opt->results().back();
    } else if (!opt->get_default_str().empty()) {
      options[name] = opt->get_default_str();
    }
  }
  return {{"subcommand", sub.get_name()}, {"options", std::move(options)}, {"positional", std::move(positional)}};
}

// Positional arguments go after extra, behind a "--" separator.
std::vector<std::string> invocation_args(const char* prog, const std::string& path,
                                         const std::vector<std::string>& extra) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config '" + path + "'");
  std::vector<std::string> args{prog};
  try {
    const nlohmann::json j = nlohmann::json::parse(in);
    args.push_back(j.at("subcommand").get<std::string>());
    for (const auto& [key, value] : j.at("options").items()) {
      if (value.is_boolean()) {
        if (value.get<bool>()) args.push_back("--" + key);
      } else {
        args.push_back("--" + key);
        args.push_back(value.get<std::string>());
      }
    }
    args.insert(args.end(), extra.begin(), extra.end());
    const auto pos = j.value("positional", nlohmann::json::array());
    if (!pos.empty()) args.emplace_back("--");
    for (const auto& v : pos) args.push_back(v.get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("bad config '" + path + "': " + e.what());
  }
  return args;
}

}  // namespace

std::optional<QParam> parse_q(std::string_view text) {
  const auto comma = text.find(',');
  Complex value;
  if (comma == std::string_view::npos) {
    const auto re = to_double(text);
    if (!re) return std::nullopt;
    value = Complex(*re, 0.0);
  } else {
    const auto re = to_double(text.substr(0, comma));
    const auto im = to_double(text.substr(comma + 1));
    if (!re || !im) return std::nullopt;
    value = Complex(*re, *im);
  }
  try {
    return QParam(value);
  } catch (const Error&) {
    return std::nullopt;
  }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app("q-numerical ranges, radii, Orlicz bounds and sectorial checks", "qnr");
  app.require_subcommand(1);
  app.fallthrough();
  bool dump = false;
  app.add_flag("--dump-config", dump, "Print the parsed invocation as JSON and exit");
  app.add_option("--config", "JSON invocation written by --dump-config; must come first");
  app.footer("Start with --config <file> to replay a dumped invocation.");

  if (argc >= 3 && std::string_view(argv[1]) == "--config") {
    std::vector<std::string> args;
    try {
      args = invocation_args(argv[0], argv[2], std::vector<std::string>(argv + 3, argv + argc));
    } catch (const UsageError& e) {
      err << "error: kind=Usage message=" << e.what() << '\n';
      return 2;
    }
    std::vector<const char*> ptrs;
    for (const std::string& a : args) ptrs.push_back(a.c_str());
    return run_cli(static_cast<int>(ptrs.size()), ptrs.data(), out, err);
  }

  try {
    o.seed = default_seed();
  } catch (const UsageError& e) {
    err << "error: kind=Usage message=" << e.what() << '\n';
    return 2;
  }

  CLI::App* radius = app.add_subcommand("radius", "Estimate w_q(T)");
  add_common(radius, o, false);
  radius->add_flag("--json", o.json, "JSON output");

  CLI::App* boundary = app.add_subcommand("boundary", "Support function and outer polygon of W_q(T) as CSV");
  add_common(boundary, o, true);

  CLI::App* sect = app.add_subcommand("sectorial", "q-sectorial verdict and index estimate");
  add_common(sect, o, true);
  sect->add_flag("--json", o.json, "JSON output");

  CLI::App* orlicz = app.add_subcommand("orlicz", "Evaluate a built-in Orlicz function");
  orlicz->add_option("--fn", o.fn, "name[:param], e.g. power:2, exp_minus_one")->required();
  orlicz->add_option("--op", o.op, "eval | kernel | inverse | complement | hh | young")
      ->capture_default_str()
      ->check(CLI::IsMember({"eval", "kernel", "inverse", "complement", "hh", "young"}));
  orlicz->add_option("args", o.args, "Numeric arguments");

  CLI::App* verify = app.add_subcommand("verify", "Seeded soundness campaign over the bound catalog");
  verify->add_option("--bounds", o.bounds, "Comma-separated bound ids or 'all'")->capture_default_str();
  verify->add_option("--trials", o.trials, "Matrices per dimension")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  verify->add_option("--dims", o.dims, "Range lo..hi or comma list")->capture_default_str();
  verify->add_option("--q-grid", o.q_grid, "Comma-separated q values in (0, 1]")->capture_default_str();
  verify->add_option("--phi", o.phi, "Comma-separated Orlicz functions")->capture_default_str();
  verify->add_option("--seed", o.seed, "Seed (default from QNR_SEED, else 0)")->capture_default_str();
  verify->add_option("--report", o.report, "Write the JSON report here instead of standard output");
  verify->add_option("--restarts", o.restarts, "Ascent restarts per radius")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  verify->add_option("--sampler-trials", o.sampler_trials, "Sampling-oracle draws per radius")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  verify->add_option("--directions", o.campaign_directions, "Polygon directions for sectorial instances")
      ->capture_default_str();

  CLI::App* figure = app.add_subcommand("figure", "Emit figure data as CSV");
  figure->add_option("--id", o.figure, "fig1 | fig4 | fig5 | fig6")->required();
  figure->add_option("--out", o.out_path, "Output CSV path (standard output if omitted)");

  CLI::App* regress = app.add_subcommand("regress", "Re-check the worked examples");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: kind=Usage message=" << e.what() << '\n';
    return 2;
  }

  if (dump) {
    for (const CLI::App* sub : app.get_subcommands()) out << dump_invocation(*sub).dump(2) << '\n';
    return 0;
  }

  try {
    if (*radius) {
      cmd_radius(o, out);
    } else if (*boundary) {
      cmd_boundary(o, out);
    } else if (*sect) {
      cmd_sectorial(o, out);
    } else if (*orlicz) {
      cmd_orlicz(o, out);
    } else if (*verify) {
      cmd_verify(o, out);
    } else if (*figure) {
      cmd_figure(o, out);
    } else if (*regress) {
      cmd_regress(out);
    }
  } catch (const UsageError& e) {
    err << "error: kind=Usage message=" << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    err << "error: kind=" << to_string(e.kind()) << " message=" << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace qnr
