#include "foliagraph/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "foliagraph/analyze.hpp"
#include "foliagraph/closing.hpp"
#include "foliagraph/config_json.hpp"
#include "foliagraph/sample.hpp"
#include "foliagraph/strip_svg.hpp"
#include "foliagraph/wedge.hpp"

namespace foliagraph {

namespace fs = std::filesystem;

std::string version_string() { return "foliagraph 0.1.0"; }

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kObstruction = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  if (fs::path(path).has_parent_path()) fs::create_directories(fs::path(path).parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << content;
}

std::uint64_t fnv1a(const std::string& data) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

// Shared one-form flags for analyze/forms.
struct FormFlags {
  std::string gx, gy, gz;
  std::string box, counts, builtin;
  std::vector<std::string> slits;
  double tube = 0.5, angle = 15.0, spacing = 8.0;
};

void add_form_flags(CLI::App* cmd, FormFlags& flags) {
  cmd->add_option("--gx", flags.gx, "expression for the dx component");
  cmd->add_option("--gy", flags.gy, "expression for the dy component");
  cmd->add_option("--gz", flags.gz, "expression for the dz component");
  cmd->add_option("--box", flags.box, "domain box: x0,x1,y0,y1[,z0,z1]");
  cmd->add_option("--n", flags.counts, "node counts: nx,ny[,nz]");
  cmd->add_option("--slit", flags.slits, "masked segment: x0,y0,x1,y1 (repeatable)");
  cmd->add_option("--builtin", flags.builtin,
                  "built-in form: winding-cylinder, contact, exact-ey, branch2, branch3");
}

std::vector<double> parse_csv_numbers(const std::string& text, std::size_t expect_min,
                                      std::size_t expect_max, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (...) {
      throw Error("cannot parse " + what + ": '" + item + "'");
    }
  }
  if (out.size() < expect_min || out.size() > expect_max)
    throw Error(what + " needs between " + std::to_string(expect_min) + " and " +
                std::to_string(expect_max) + " values");
  return out;
}

SampledOneForm make_form(const FormFlags& flags, std::string* input_desc) {
  // box/counts overrides merge onto the base spec (the built-in's default or
  // the generic unit box)
  GridSpec base{2, {-1, -1, 0}, {1, 1, 0}, {65, 65, 1}};
  if (!flags.builtin.empty()) {
    for (const auto& b : builtin_forms())
      if (b.name == flags.builtin) base = b.default_spec;
  }
  bool overridden = false;
  if (!flags.box.empty()) {
    auto b = parse_csv_numbers(flags.box, 4, 6, "--box");
    base.dim = b.size() == 6 ? 3 : 2;
    for (std::size_t a = 0; a < b.size() / 2; ++a) {
      base.lo[a] = b[2 * a];
      base.hi[a] = b[2 * a + 1];
    }
    overridden = true;
  }
  if (!flags.counts.empty()) {
    auto c = parse_csv_numbers(flags.counts, 2, 3, "--n");
    base.dim = static_cast<int>(c.size());
    for (std::size_t a = 0; a < c.size(); ++a) base.n[a] = static_cast<int>(c[a]);
    overridden = true;
  }
  std::optional<GridSpec> spec_override;
  if (overridden) spec_override = base;

  if (!flags.builtin.empty()) {
    if (input_desc) *input_desc = "builtin:" + flags.builtin;
    return sample_builtin(flags.builtin, spec_override);
  }

  if (flags.gx.empty() || flags.gy.empty()) throw Error("need --gx and --gy (or --builtin)");
  SampleRequest req;
  req.spec = base;
  if (!flags.gz.empty()) req.spec.dim = 3;
  req.component_exprs.push_back(parse_expr(flags.gx));
  req.component_exprs.push_back(parse_expr(flags.gy));
  if (req.spec.dim == 3) {
    if (flags.gz.empty()) throw Error("3D grid needs --gz");
    req.component_exprs.push_back(parse_expr(flags.gz));
  }
  for (const auto& s : flags.slits) {
    auto v = parse_csv_numbers(s, 4, 4, "--slit");
    req.slits.push_back({v[0], v[1], v[2], v[3]});
  }
  if (input_desc) *input_desc = "gx=" + flags.gx + ";gy=" + flags.gy + ";gz=" + flags.gz;
  return sample(req);
}

std::string verdict_of(const GlobalResult& result) {
  if (eulerian(result)) return "globally-eulerian";
  const auto& obs = std::get<Obstruction>(result);
  if (obs.kind == Obstruction::Kind::EndpointPresent || obs.kind == Obstruction::Kind::OddMicroCycle)
    return "not-locally-eulerian";
  return "locally-eulerian-only";
}

std::string manifest_json(const std::string& command, const std::vector<std::string>& args,
                          const std::string& input_desc, std::uint64_t input_hash,
                          const std::vector<std::string>& outputs) {
  nlohmann::json j;
  j["command"] = command;
  j["flags"] = args;
  j["input"] = input_desc;
  char hex[32];
  std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(input_hash));
  j["input_hash"] = hex;
  j["version"] = version_string();
  j["outputs"] = outputs;
  return j.dump(2) + "\n";
}

int cmd_check(const std::string& config_path, const std::string& cert_out, const std::string& dot_out) {
  GraphicalConfiguration config = config_from_json(read_file(config_path));
  auto violations = validate(config);
  if (!violations.empty()) {
    for (const auto& v : violations)
      std::cerr << "invalid configuration [" << v.code << "] " << v.id << ": " << v.detail << "\n";
    return kUsage;
  }
  GlobalResult result = solve_global(config);
  std::cout << verdict_of(result) << "\n";
  if (!cert_out.empty()) write_file(cert_out, result_to_json(result));
  if (!dot_out.empty()) write_file(dot_out, config_to_dot(config));
  return eulerian(result) ? kOk : kObstruction;
}

int cmd_synthesize(const std::string& config_path, const std::string& out_path,
                   const std::string& svg_path) {
  GraphicalConfiguration config = config_from_json(read_file(config_path));
  auto violations = validate(config);
  if (!violations.empty()) {
    for (const auto& v : violations)
      std::cerr << "invalid configuration [" << v.code << "] " << v.id << ": " << v.detail << "\n";
    return kUsage;
  }
  // use the certificate orientation when one exists, the stored end order
  // otherwise (synthesis does not need the configuration to be eulerian)
  Orientation orientation;
  GlobalResult result = solve_global(config);
  if (eulerian(result)) {
    orientation = std::get<EulerianCertificate>(result).orientation;
  } else {
    for (const auto& e : config.edges) orientation.dir[e.id] = e.ends;
  }
  try {
    StripComplex complex = synthesize(config, orientation);
    std::cout << "strips: " << complex.strips.size()
              << " identifications: " << complex.identifications.size() << "\n";
    if (!out_path.empty()) write_file(out_path, strip_complex_to_json(complex));
    if (!svg_path.empty()) write_file(svg_path, render_svg(complex));
  } catch (const EndpointError& e) {
    std::cerr << e.what() << "\n";
    return kObstruction;
  }
  return kOk;
}

int cmd_analyze(const FormFlags& flags, const std::string& out_dir, bool refine_check,
                const std::vector<std::string>& raw_args) {
  std::string input_desc;
  SampledOneForm form = make_form(flags, &input_desc);

  AnalyzeOptions opts;
  opts.classify.tube_factor = flags.tube;
  opts.classify.angle_deg = flags.angle;
  opts.net.seed_spacing_factor = flags.spacing;
  AnalysisResult res = analyze(form, opts);

  std::vector<std::string> outputs;
  auto emit = [&](const std::string& name, const std::string& content) {
    std::string path = (fs::path(out_dir) / name).string();
    write_file(path, content);
    outputs.push_back(name);
  };

  emit("config.json", config_to_json(res.graph.config));
  emit("charts.json", charts_to_json(res.graph));
  if (!res.fastpath) emit("leaves.svg", leaves_svg(res.field, form, res.pairs));

  std::string verdict = res.decision ? verdict_of(*res.decision) : "undecided";
  std::cout << (res.fastpath ? "cylinder-fastpath " : "") << verdict << "\n";
  if (res.decision) emit("decision.json", result_to_json(*res.decision));

  if (res.multiplier) {
    emit("f.csv", grid_to_csv(res.multiplier->f));
    emit("lambda.csv", grid_to_csv(res.multiplier->lambda));
    emit("grid.json", grid_header_json(form.spec, form.mask));
    auto rep = verify(*res.multiplier);
    nlohmann::json j;
    j["min_abs_grad_f"] = res.multiplier->report.min_abs_grad_f;
    j["min_abs_lambda"] = res.multiplier->report.min_abs_lambda;
    j["max_rel_residual"] = res.multiplier->report.max_rel_residual;
    j["verify"] = rep.pass ? "pass" : rep.worst;
    emit("report.json", j.dump(2) + "\n");
  }

  if (refine_check && !res.fastpath) {
    GridSpec fine = form.spec;
    for (int a = 0; a < fine.dim; ++a) fine.n[a] = 2 * fine.n[a] - 1;
    FormFlags fine_flags = flags;
    SampledOneForm fine_form;
    if (!flags.builtin.empty()) {
      fine_form = sample_builtin(flags.builtin, fine);
    } else {
      fine_flags.counts = std::to_string(fine.n[0]) + "," + std::to_string(fine.n[1]);
      fine_form = make_form(fine_flags, nullptr);
    }
    AnalysisResult fine_res = analyze(fine_form, opts);
    if (configs_isomorphic(res.graph.config, fine_res.graph.config))
      std::cout << "refinement-stable\n";
    else
      std::cout << "warning: configuration unstable under refinement\n";
  }

  emit("manifest.json",
       manifest_json("analyze", raw_args, input_desc, fnv1a(input_desc + form_to_csv(form)), outputs));

  if (!res.decision) return kUsage;
  return eulerian(*res.decision) ? kOk : kObstruction;
}

int cmd_forms_wedge(const FormFlags& flags) {
  SampledOneForm form = make_form(flags, nullptr);
  WedgeResult res = wedge_residual(form);
  std::cout << "max |omega ^ d(omega)| residual: " << res.max_abs << "\n";
  return kOk;
}

int cmd_forms_close(const FormFlags& flags, const std::string& lambda_out) {
  SampledOneForm form = make_form(flags, nullptr);
  ClosingResult res = closing_multiplier(form);
  std::cout << "relative residual: " << res.residual << " ("
            << (res.feasible ? "solution found" : "infeasible") << ", " << res.iterations
            << " iterations)\n";
  if (!lambda_out.empty()) write_file(lambda_out, grid_to_csv(res.lambda));
  return kOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"Decide global existence of Euler's multiplier from graphical configurations,\n"
               "synthesize foliated surfaces, and test sampled one-forms numerically."};
  app.set_version_flag("--version", version_string());

  std::string config_path, cert_out, dot_out, complex_out, svg_out, out_dir, lambda_out;
  bool refine_check = false;
  FormFlags analyze_flags, wedge_flags, close_flags;

  CLI::App* check = app.add_subcommand("check", "decide whether a configuration is globally eulerian");
  check->add_option("config", config_path, "configuration JSON")->required();
  check->add_option("--certificate", cert_out, "write certificate/obstruction JSON here");
  check->add_option("--dot", dot_out, "write main-graph DOT here");

  CLI::App* synth = app.add_subcommand("synthesize", "realize a configuration as a strip complex");
  synth->add_option("config", config_path, "configuration JSON")->required();
  synth->add_option("--out", complex_out, "strip complex JSON");
  synth->add_option("--svg", svg_out, "strip diagram SVG");

  CLI::App* analyze_cmd = app.add_subcommand("analyze", "trace a sampled one-form end to end");
  add_form_flags(analyze_cmd, analyze_flags);
  analyze_cmd->add_option("--out", out_dir, "output directory")->required();
  analyze_cmd->add_option("--tube", analyze_flags.tube, "merge tube in grid units (default 0.5)");
  analyze_cmd->add_option("--angle", analyze_flags.angle, "merge angle in degrees (default 15)");
  analyze_cmd->add_option("--spacing", analyze_flags.spacing,
                          "transversal seed spacing in grid units (default 8)");
  analyze_cmd->add_flag("--refine-check", refine_check,
                        "re-run at half spacing and compare configurations");

  CLI::App* forms = app.add_subcommand("forms", "numerical tests on sampled one-forms");
  CLI::App* wedge = forms->add_subcommand("wedge", "Frobenius residual omega ^ d(omega)");
  add_form_flags(wedge, wedge_flags);
  CLI::App* close = forms->add_subcommand("close", "solve omega ^ d(lambda) = d(omega)");
  add_form_flags(close, close_flags);
  close->add_option("--lambda", lambda_out, "write lambda grid CSV here");

  app.require_subcommand(1);
  forms->require_subcommand(1);

  std::vector<std::string> raw = args;
  try {
    std::vector<const char*> argv{"foliagraph"};
    for (const auto& a : args) argv.push_back(a.c_str());
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return kOk;
  } catch (const CLI::CallForVersion&) {
    std::cout << version_string() << "\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return kUsage;
  }

  try {
    if (check->parsed()) return cmd_check(config_path, cert_out, dot_out);
    if (synth->parsed()) return cmd_synthesize(config_path, complex_out, svg_out);
    if (analyze_cmd->parsed()) return cmd_analyze(analyze_flags, out_dir, refine_check, raw);
    if (forms->parsed()) {
      if (wedge->parsed()) return cmd_forms_wedge(wedge_flags);
      if (close->parsed()) return cmd_forms_close(close_flags, lambda_out);
    }
  } catch (const SyntaxError& e) {
    std::cerr << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return kUsage;
  }
  std::cerr << "no subcommand\n";
  return kUsage;
}

}  // namespace foliagraph
