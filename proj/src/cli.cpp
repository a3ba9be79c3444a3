#include "polyshell/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>

#include <CLI11.hpp>

#include "polyshell/analysis.hpp"
#include "polyshell/config.hpp"
#include "polyshell/output.hpp"
#include "polyshell/verify.hpp"

namespace polyshell::cli {

namespace {

using output::real;
using output::SvgLayer;

class Sink {
public:
  Sink(const std::string& path, std::ostream& fallback, const char* field) {
    if (path.empty()) {
      os_ = &fallback;
      return;
    }
    file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
    if (!*file_)
      throw ConfigError(field, "cannot open '" + path + "' for writing");
    os_ = file_.get();
  }
  std::ostream& stream() { return *os_; }

private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* os_ = nullptr;
};

void assert_feasible(std::span<const Vec2> vertices, double circumradius) {
  for (std::size_t i = 0; i < vertices.size(); ++i)
    if (vertices[i].y < -1e-9 * circumradius)
      throw SolverError("refusing to write infeasible configuration: vertex " +
                            std::to_string(i + 1) + " below the surface",
                        {});
}

std::string labels(const std::set<int>& s) {
  std::string out;
  for (int v : s)
    out += (out.empty() ? "" : " ") + std::to_string(v);
  return out;
}

void summarize(std::ostream& err, const std::string& prefix, const DeformedConfig& cfg) {
  const double reference = apparent_height(cfg.polygon().vertices());
  const double height = apparent_height(cfg);
  err << prefix << "contacts = " << cfg.contact_set.size() << '\n'
      << prefix << "contact_labels = " << labels(cfg.contact_set) << '\n'
      << prefix << "height = " << real(height) << '\n'
      << prefix << "height_drop = " << real(reference - height) << '\n'
      << prefix << "energy = " << real(cfg.elastic_energy()) << '\n'
      << prefix << "solver_path = " << to_string(cfg.solution.path) << '\n'
      << prefix << "iterations = " << cfg.solution.iterations << '\n'
      << prefix << "kkt_residual = " << real(cfg.solution.kkt_residual) << '\n';
  if (const auto fit = fit_free_sector(cfg)) {
    err << prefix << "fit_radius = " << real(fit->radius) << '\n'
        << prefix << "fit_R_over_R0 = " << real(fit->radius / cfg.polygon().circumradius()) << '\n'
        << prefix << "fit_center = " << real(fit->center.x) << ' ' << real(fit->center.y) << '\n'
        << prefix << "fit_rms = " << real(fit->rms_residual) << '\n';
  }
}

std::vector<Vec2> reference_of(const DeformedConfig& cfg) {
  return {cfg.polygon().vertices().begin(), cfg.polygon().vertices().end()};
}

void maybe_svg(const ExperimentConfig& cfg, const std::vector<SvgLayer>& layers) {
  if (cfg.svg.empty())
    return;
  Sink sink(cfg.svg, std::cout, "svg");
  output::write_svg(sink.stream(), layers);
}

void add_fit_layer(std::vector<SvgLayer>& layers, const DeformedConfig& cfg, std::string color) {
  if (const auto fit = fit_free_sector(cfg))
    layers.push_back({{}, true, fit->center, fit->radius, SvgLayer::Style::dashed, color});
}

int cmd_indent(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto shape =
      indent(Polygon(cfg.n, cfg.circumradius), cfg.params(), cfg.per_vertex(cfg.f),
             cfg.contact_options());
  assert_feasible(shape.deformed, cfg.circumradius);
  Sink sink(cfg.out, out, "out");
  output::write_vertices_csv(sink.stream(), shape);

  err << "n = " << cfg.n << "\nf = " << real(cfg.f)
      << "\nf_per_vertex = " << real(cfg.per_vertex(cfg.f)) << '\n';
  summarize(err, "", shape);

  std::vector<SvgLayer> layers{
      {reference_of(shape), false, {}, 0.0, SvgLayer::Style::dashed, "gray"},
      {shape.deformed, false, {}, 0.0, SvgLayer::Style::solid, "black"}};
  add_fit_layer(layers, shape, "red");
  maybe_svg(cfg, layers);
  return kExitOk;
}

int cmd_relax(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto opts = cfg.contact_options();
  const auto pressed =
      indent(Polygon(cfg.n, cfg.circumradius), cfg.params(), cfg.per_vertex(cfg.f), opts);
  const auto relaxed = relax(pressed, opts);
  assert_feasible(relaxed.deformed, cfg.circumradius);
  Sink sink(cfg.out, out, "out");
  output::write_vertices_csv(sink.stream(), relaxed);

  err << "n = " << cfg.n << "\nf = " << real(cfg.f)
      << "\nf_per_vertex = " << real(cfg.per_vertex(cfg.f)) << '\n';
  summarize(err, "indented_", pressed);
  summarize(err, "relaxed_", relaxed);

  std::vector<SvgLayer> layers{
      {reference_of(relaxed), false, {}, 0.0, SvgLayer::Style::dashed, "gray"},
      {pressed.deformed, false, {}, 0.0, SvgLayer::Style::dotted, "steelblue"},
      {relaxed.deformed, false, {}, 0.0, SvgLayer::Style::solid, "black"}};
  add_fit_layer(layers, relaxed, "red");
  maybe_svg(cfg, layers);
  return kExitOk;
}

int cmd_sweep(const ExperimentConfig& cfg, std::ostream& out, std::ostream&) {
  const auto grid = cfg.grid();
  std::vector<double> per_vertex;
  per_vertex.reserve(grid.size());
  for (double g : grid)
    per_vertex.push_back(cfg.per_vertex(g));
  const auto records =
      force_sweep(cfg.n, cfg.circumradius, cfg.params(), per_vertex, cfg.contact_options());
  Sink sink(cfg.out, out, "out");
  output::write_sweep_csv(sink.stream(), records, grid);

  if (!cfg.svg.empty() && !per_vertex.empty()) {
    const auto last = indent(Polygon(cfg.n, cfg.circumradius), cfg.params(), per_vertex.back(),
                             cfg.contact_options());
    maybe_svg(cfg, {{reference_of(last), false, {}, 0.0, SvgLayer::Style::dashed, "gray"},
                    {last.deformed, false, {}, 0.0, SvgLayer::Style::solid, "black"}});
  }
  return kExitOk;
}

int cmd_table1(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto rows = relaxation_study(cfg.n, cfg.circumradius, cfg.params(), cfg.counts,
                                     cfg.contact_options());
  for (const auto& r : rows)
    if (r.relaxed)
      assert_feasible(r.relaxed->deformed, cfg.circumradius);
  Sink sink(cfg.out, out, "out");
  output::write_table1_csv(sink.stream(), rows);

  static const char* colors[] = {"black", "steelblue", "darkgreen", "purple", "orange"};
  std::vector<SvgLayer> layers;
  std::size_t color = 0;
  for (const auto& r : rows) {
    if (!r.reached) {
      err << "contacts " << r.contacts << ": not reachable for n = " << cfg.n << '\n';
      continue;
    }
    if (layers.empty())
      layers.push_back(
          {reference_of(*r.relaxed), false, {}, 0.0, SvgLayer::Style::dashed, "gray"});
    const std::string c = colors[color++ % std::size(colors)];
    layers.push_back({r.relaxed->deformed, false, {}, 0.0, SvgLayer::Style::solid, c});
    add_fit_layer(layers, *r.relaxed, c);
  }
  maybe_svg(cfg, layers);
  return kExitOk;
}

int cmd_converge(const ExperimentConfig& cfg, std::ostream& out, std::ostream&) {
  const auto rows = convergence_study(cfg.n_list, cfg.total_force, cfg.circumradius, cfg.params(),
                                      cfg.contact_options(), cfg.resample_points);
  for (const auto& r : rows)
    assert_feasible(r.shape, cfg.circumradius);
  Sink sink(cfg.out, out, "out");
  output::write_converge_csv(sink.stream(), rows);

  static const char* colors[] = {"lightgray", "silver", "gray", "dimgray", "black"};
  std::vector<SvgLayer> layers;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::size_t shade = rows.size() == 1 ? std::size(colors) - 1
                                               : i * (std::size(colors) - 1) / (rows.size() - 1);
    layers.push_back({rows[i].shape, false, {}, 0.0, SvgLayer::Style::solid, colors[shade]});
  }
  // Circumcircle of the reference polygon, placed through the apex of the largest-n shape.
  const double apex = rows.back().apex_height;
  layers.push_back({{}, true, {0.0, apex - cfg.circumradius}, cfg.circumradius,
                    SvgLayer::Style::dotted, "red"});
  maybe_svg(cfg, layers);
  return kExitOk;
}

int cmd_verify(const ExperimentConfig& cfg, std::ostream& out) {
  verify::SuiteOptions opts;
  opts.seed = cfg.seed;
  opts.instances = cfg.instances;
  const auto checks = verify::run_property_suite(opts);
  bool ok = true;
  Sink sink(cfg.out, out, "out");
  for (const auto& c : checks) {
    sink.stream() << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
    ok = ok && c.passed;
  }
  return ok ? kExitOk : kExitSolverFailure;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Elastic polygon indentation and adhesion relaxation"};
  app.name("polyshell");
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path, "flat key = value file; flags override it");
  std::map<std::string, std::string> flag_values;
  for (const auto& key : config_keys())
    app.add_option("--" + key, flag_values[key]);

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"indent", "single indentation solve"},
      {"relax", "indentation followed by adhesion-constrained relaxation"},
      {"sweep", "height and contact count over a force grid"},
      {"table1", "relaxed free-sector radius per contact count"},
      {"converge", "shape convergence in the vertex count at fixed total force"},
      {"verify", "randomized solver property suite"}};
  for (const auto& [name, help] : commands)
    app.add_subcommand(name, help)->fallthrough();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfigError;
  }

  ExperimentConfig cfg;
  try {
    if (!config_path.empty())
      for (const auto& [key, value] : read_config_file(config_path))
        apply_setting(cfg, key, value);
    for (const auto& key : config_keys())
      if (app.count("--" + key) > 0)
        apply_setting(cfg, key, flag_values[key]);
    cfg.validate();
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfigError;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    if (command == "indent")
      return cmd_indent(cfg, out, err);
    if (command == "relax")
      return cmd_relax(cfg, out, err);
    if (command == "sweep")
      return cmd_sweep(cfg, out, err);
    if (command == "table1")
      return cmd_table1(cfg, out, err);
    if (command == "converge")
      return cmd_converge(cfg, out, err);
    return cmd_verify(cfg, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const SolverError& e) {
    err << "solver failure: " << e.what() << '\n';
    return kExitSolverFailure;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::exception& e) {
    err << "failure: " << e.what() << '\n';
    return kExitSolverFailure;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

} // namespace polyshell::cli
