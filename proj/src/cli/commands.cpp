#include <fracvc/cli.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace fracvc::cli {

namespace {

// Flags shared by the single-experiment subcommands.
struct Common {
  std::string config;
  int n = 0;
  double alpha = -1.0;
  double tol = -1.0;
  long long seed = -1;
  std::vector<std::string> points;
};

// JSON text, or a bare name of a configured object.
json object_or_name(const std::string& s) {
  if (!s.empty() && (s.front() == '{' || s.front() == '[')) {
    try {
      return json::parse(s);
    } catch (const json::parse_error& e) {
      throw ConfigError("argument '" + s + "' is not valid JSON: " + e.what());
    }
  }
  return s;
}

json coords(const std::string& s) {
  json out = json::array();
  std::stringstream in(s);
  std::string c;
  while (std::getline(in, c, ',')) {
    try {
      out.push_back(std::stod(c));
    } catch (const std::exception&) {
      throw ConfigError("'" + s + "' is not a comma separated list of numbers");
    }
  }
  return out;
}

json base_document(const Common& c) {
  json doc;
  if (!c.config.empty()) {
    std::ifstream in(c.config);
    if (!in) throw ConfigError("cannot open config " + c.config);
    try {
      doc = json::parse(in);
    } catch (const json::parse_error& e) {
      throw ConfigError(std::string("parse error in ") + c.config + ": " + e.what());
    }
    doc.erase("experiments");
    doc.erase("output");
  }
  if (!doc.contains("context")) doc["context"] = {{"n", 1}, {"alpha", 0.5}};
  if (c.n > 0) doc["context"]["n"] = c.n;
  if (c.alpha >= 0.0) doc["context"]["alpha"] = c.alpha;
  if (c.tol > 0.0) doc["quadrature"]["tol"] = c.tol;
  if (c.seed >= 0) doc["quadrature"]["seed"] = static_cast<std::uint64_t>(c.seed);
  return doc;
}

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config, "JSON config supplying context, quadrature, sets and fields");
  sub->add_option("--n", c.n, "ambient dimension");
  sub->add_option("--alpha", c.alpha, "fractional order in (0,1)");
  sub->add_option("--tol", c.tol, "quadrature tolerance");
  sub->add_option("--seed", c.seed, "master seed");
  sub->add_option("--point,-x", c.points, "evaluation point, comma separated (repeatable)");
}

int report(const Config& cfg, std::ostream& out) {
  const RunReport rep = run_jobs(cfg);
  write_csv(out, rep);
  for (const auto& r : rep.results)
    if (!r.message.empty()) std::cerr << r.id << ": " << r.message << '\n';
  return rep.pass ? 0 : 1;
}

int run_single(const Common& c, json experiment) {
  json doc = base_document(c);
  if (!c.points.empty() && !experiment.contains("points")) {
    json pts = json::array();
    for (const auto& p : c.points) pts.push_back(coords(p));
    experiment["points"] = pts;
  }
  experiment["id"] = experiment.value("op", std::string("experiment"));
  doc["experiments"] = json::array({experiment});
  return report(parse_config(doc), std::cout);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fractional vector calculus experiments"};
  app.require_subcommand(1);

  std::string config_path, csv_path, summary_path;
  auto* run = app.add_subcommand("run", "run every experiment of a config file");
  run->add_option("config", config_path, "JSON config")->required();
  run->add_option("--csv", csv_path, "CSV output (overrides the config)");
  run->add_option("--summary", summary_path, "JSON summary output (overrides the config)");

  Common c;
  std::string name, set, omega, field, f, g, phi, e, radii, expected_normal, method, identity;
  double eps = 0.0, ball_radius = 1.0, golden = -1.0, s = 0.0, u = 1.0, radius = 1.0;
  bool oracle = false, local = false;

  auto* orc = app.add_subcommand("oracle", "closed-form values");
  add_common(orc, c);
  orc->add_option("name", name, "mu | descent | gamma_beta | halfspace | ball | interval_union | halfspace_target")
      ->required();
  orc->add_option("--set", set, "interval union for the interval_union oracle");
  orc->add_option("--s", s, "exponent of the Gamma/Beta identity");
  orc->add_option("--u", u, "scale of the Gamma/Beta identity");
  orc->add_option("--radius", radius, "ball radius");

  auto* grad = app.add_subcommand("gradient", "fractional gradient at points");
  add_common(grad, c);
  grad->add_option("--set", set, "set or product operand (JSON or a configured name)")->required();
  grad->add_option("--method", method, "ray_sweep | dyadic_cells | monte_carlo");
  grad->add_flag("--oracle", oracle, "compare against the closed form");

  auto* per = app.add_subcommand("perimeter", "fractional perimeter");
  add_common(per, c);
  per->add_option("--set", set, "set (JSON or name)")->required();
  per->add_option("--omega", omega, "restricting open set");
  per->add_flag("--local", local, "local perimeter inside omega");
  per->add_option("--method", method, "deterministic | monte_carlo");

  auto* ver = app.add_subcommand("verify", "check an identity");
  add_common(ver, c);
  ver->add_option("identity", identity)
      ->required()
      ->check(CLI::IsMember({"ibp", "leibniz", "gauss-green", "nl-zero", "total-zero", "smoothing"}));
  ver->add_option("--set", set, "set for total-zero, smoothing and the self Leibniz identity");
  ver->add_option("--e", e, "set E");
  ver->add_option("--f", f, "operand f or set F");
  ver->add_option("--g", g, "operand g");
  ver->add_option("--phi", phi, "vector field");
  ver->add_option("--eps", eps, "mollifier radius");

  auto* blow = app.add_subcommand("blowup", "blow-up convergence of the variation");
  add_common(blow, c);
  blow->add_option("--set", set)->required();
  blow->add_option("--radii", radii, "decreasing comma separated ladder")->required();
  blow->add_option("--ball-radius", ball_radius);
  blow->add_option("--expected-normal", expected_normal);

  auto* nor = app.add_subcommand("normal", "fractional normal ratios");
  add_common(nor, c);
  nor->add_option("--set", set)->required();
  nor->add_option("--radii", radii)->required();
  nor->add_option("--expected-normal", expected_normal);

  auto* prb = app.add_subcommand("probe", "corner probe");
  add_common(prb, c);
  prb->add_option("--set", set)->required();
  prb->add_option("--radii", radii)->required();
  prb->add_option("--golden", golden, "cone plateau value")->required();

  auto* mol = app.add_subcommand("mollify", "mollified value");
  add_common(mol, c);
  mol->add_option("--set", set, "set (JSON or name)");
  mol->add_option("--field", field, "field (JSON or name)");
  mol->add_option("--eps", eps)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) {
      Config cfg = load_config(config_path);
      if (!csv_path.empty()) cfg.csv_path = csv_path;
      if (!summary_path.empty()) cfg.summary_path = summary_path;
      const RunReport rep = run_jobs(cfg);
      if (cfg.csv_path.empty()) {
        write_csv(std::cout, rep);
      } else {
        std::ofstream out(cfg.csv_path);
        if (!out) throw ConfigError("cannot write " + cfg.csv_path);
        write_csv(out, rep);
      }
      if (!cfg.summary_path.empty()) {
        std::ofstream out(cfg.summary_path);
        if (!out) throw ConfigError("cannot write " + cfg.summary_path);
        out << summary(rep, cfg).dump(2) << '\n';
      }
      for (const auto& r : rep.results)
        if (!r.message.empty()) std::cerr << r.id << ": " << r.message << '\n';
      return rep.pass ? 0 : 1;
    }
    json exp;
    const auto first_point = [&] {
      if (c.points.empty()) throw ConfigError("--point is required");
      return coords(c.points.front());
    };
    if (orc->parsed()) {
      exp = {{"op", "oracle"}, {"name", name}};
      if (!set.empty()) exp["set"] = object_or_name(set);
      if (name == "gamma_beta") exp["s"] = s, exp["u"] = u;
      if (name == "ball" || name == "halfspace_target") exp["radius"] = radius;
    } else if (grad->parsed()) {
      exp = {{"op", "gradient"}, {"target", object_or_name(set)}, {"oracle", oracle}};
      if (!method.empty()) exp["method"] = method;
    } else if (per->parsed()) {
      exp = {{"op", "perimeter"}, {"set", object_or_name(set)}, {"local", local}};
      if (!omega.empty()) exp["omega"] = object_or_name(omega);
      if (!method.empty()) exp["method"] = method;
    } else if (ver->parsed()) {
      exp = {{"op", "verify"}, {"identity", identity}};
      if (identity == "ibp") {
        exp["f"] = object_or_name(f), exp["phi"] = object_or_name(phi);
      } else if (identity == "leibniz") {
        if (g.empty()) {
          exp["self"] = true, exp["f"] = object_or_name(set.empty() ? f : set);
        } else {
          exp["f"] = object_or_name(f), exp["g"] = object_or_name(g);
        }
      } else if (identity == "gauss-green" || identity == "nl-zero") {
        exp["e"] = object_or_name(e), exp["f"] = object_or_name(f);
      } else if (identity == "total-zero") {
        exp["set"] = object_or_name(set);
      } else {
        exp["set"] = object_or_name(set), exp["eps"] = eps;
      }
    } else if (blow->parsed()) {
      exp = {{"op", "blowup"}, {"set", object_or_name(set)}, {"point", first_point()},
             {"radii", coords(radii)}, {"ball_radius", ball_radius}};
      if (!expected_normal.empty()) exp["expected_normal"] = coords(expected_normal);
    } else if (nor->parsed()) {
      exp = {{"op", "normal"}, {"set", object_or_name(set)}, {"point", first_point()}, {"radii", coords(radii)}};
      if (!expected_normal.empty()) exp["expected_normal"] = coords(expected_normal);
    } else if (prb->parsed()) {
      exp = {{"op", "probe"}, {"set", object_or_name(set)}, {"vertex", first_point()}, {"radii", coords(radii)},
             {"golden", golden}};
    } else if (mol->parsed()) {
      if (set.empty() == field.empty()) throw ConfigError("give exactly one of --set and --field");
      exp = {{"op", "mollify"}, {"eps", eps}};
      exp["target"] = set.empty() ? json{{"field", object_or_name(field)}} : object_or_name(set);
    }
    return run_single(c, exp);
  } catch (const ConfigError& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 2;
  } catch (const Error& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 2;
  }
}

}  // namespace fracvc::cli
