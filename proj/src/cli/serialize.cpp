#include <fracvc/cli.hpp>

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

namespace fracvc::cli {

namespace {

double number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ConfigError(where + ": expected a number");
  return j.get<double>();
}

double number_or(const json& obj, const char* key, double fallback, const std::string& where) {
  return obj.contains(key) ? number(obj.at(key), where + "." + key) : fallback;
}

const json& member(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) throw ConfigError(where + ": missing '" + key + "'");
  return obj.at(key);
}

std::string text(const json& j, const std::string& where) {
  if (!j.is_string()) throw ConfigError(where + ": expected a string");
  return j.get<std::string>();
}

// Wraps library validation errors so they carry the config location.
template <class F>
auto guarded(const std::string& where, F&& f) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

}  // namespace

Point parse_point(const json& j, int n, const std::string& where) {
  if (j.is_number() && n == 1) return make_point({j.get<double>()});
  if (!j.is_array() || static_cast<int>(j.size()) != n)
    throw ConfigError(where + ": expected " + std::to_string(n) + " coordinates");
  Point p(n);
  for (int k = 0; k < n; ++k) p(k) = number(j[k], where);
  return p;
}

std::vector<Point> parse_points(const json& j, int n, const std::string& where) {
  if (!j.is_array()) throw ConfigError(where + ": expected a list of points");
  std::vector<Point> out;
  for (std::size_t k = 0; k < j.size(); ++k) out.push_back(parse_point(j[k], n, where + "[" + std::to_string(k) + "]"));
  return out;
}

QuadratureConfig parse_quadrature(const json& j, QuadratureConfig q) {
  const std::string where = "quadrature";
  if (j.is_null()) return q;
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  static const std::set<std::string> known{"tail_radius", "base_cell", "max_depth", "tol",
                                           "mc_samples", "seed", "method", "max_intervals"};
  for (const auto& [key, value] : j.items())
    if (!known.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
  q.tail_radius = number_or(j, "tail_radius", q.tail_radius, where);
  q.base_cell = number_or(j, "base_cell", q.base_cell, where);
  q.max_depth = static_cast<int>(number_or(j, "max_depth", q.max_depth, where));
  q.tol = number_or(j, "tol", q.tol, where);
  q.mc_samples = static_cast<long>(number_or(j, "mc_samples", static_cast<double>(q.mc_samples), where));
  q.max_intervals = static_cast<int>(number_or(j, "max_intervals", q.max_intervals, where));
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) throw ConfigError(where + ".seed: expected a nonnegative integer");
    q.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("method")) {
    const std::string m = text(j.at("method"), where + ".method");
    if (m == "ray_sweep") {
      q.method = Method::ray_sweep;
    } else if (m == "dyadic_cells") {
      q.method = Method::dyadic_cells;
    } else {
      throw ConfigError(where + ".method: unknown method '" + m + "'");
    }
  }
  guarded(where, [&] {
    validate(q);
    return 0;
  });
  return q;
}

SetSpec parse_set(const json& j, int n, const Registry& reg, const std::string& where) {
  if (j.is_string()) {
    const std::string name = j.get<std::string>();
    const auto it = reg.sets.find(name);
    if (it == reg.sets.end()) throw ConfigError(where + ": undefined set '" + name + "'");
    return it->second;
  }
  const std::string type = text(member(j, "type", where), where + ".type");
  auto sub = [&](const char* key) { return parse_set(member(j, key, where), n, reg, where + "." + key); };
  return guarded(where, [&]() -> SetSpec {
    if (type == "whole_space") return whole_space(n);
    if (type == "empty") return empty_set(n);
    if (type == "half_space")
      return half_space(parse_point(member(j, "origin", where), n, where + ".origin"),
                        parse_point(member(j, "normal", where), n, where + ".normal"));
    if (type == "ball")
      return ball(j.contains("center") ? parse_point(j.at("center"), n, where + ".center") : Point(Point::Zero(n)),
                  number(member(j, "radius", where), where + ".radius"));
    if (type == "interval_union") {
      if (n != 1) throw ConfigError(where + ": interval unions live in n = 1");
      std::vector<Interval> iv;
      for (const auto& p : member(j, "intervals", where)) {
        if (!p.is_array() || p.size() != 2) throw ConfigError(where + ".intervals: expected [lo, hi] pairs");
        auto end = [&](const json& v) {
          if (v.is_string() && (v == "-inf" || v == "inf")) return v == "inf" ? kInf : -kInf;
          return number(v, where + ".intervals");
        };
        iv.push_back({end(p[0]), end(p[1])});
      }
      return interval_union(std::move(iv));
    }
    if (type == "polygon" || type == "convex_polygon") {
      if (n != 2) throw ConfigError(where + ": polygons live in n = 2");
      std::vector<Eigen::Vector2d> v;
      for (const auto& p : member(j, "vertices", where)) {
        const Point q = parse_point(p, 2, where + ".vertices");
        v.emplace_back(q(0), q(1));
      }
      return type == "polygon" ? polygon(std::move(v)) : convex_polygon(std::move(v));
    }
    if (type == "square") {
      if (n != 2) throw ConfigError(where + ": squares live in n = 2");
      const Point lo = j.contains("lo") ? parse_point(j.at("lo"), 2, where + ".lo") : Point(Point::Zero(2));
      return square(Eigen::Vector2d(lo(0), lo(1)), number_or(j, "side", 1.0, where));
    }
    if (type == "koch") {
      if (n != 2) throw ConfigError(where + ": Koch prefractals live in n = 2");
      return koch_prefractal(static_cast<int>(number(member(j, "level", where), where + ".level")));
    }
    if (type == "complement") return complement(sub("of"));
    if (type == "intersection" || type == "union") {
      const json& parts = member(j, "of", where);
      if (!parts.is_array() || parts.size() < 2) throw ConfigError(where + ".of: expected at least two sets");
      SetSpec acc = parse_set(parts[0], n, reg, where + ".of[0]");
      for (std::size_t k = 1; k < parts.size(); ++k) {
        const SetSpec next = parse_set(parts[k], n, reg, where + ".of[" + std::to_string(k) + "]");
        acc = type == "union" ? set_union(acc, next) : intersection(acc, next);
      }
      return acc;
    }
    if (type == "translate") return translated(sub("set"), parse_point(member(j, "shift", where), n, where + ".shift"));
    if (type == "dilate") return dilated(sub("set"), number(member(j, "factor", where), where + ".factor"));
    throw ConfigError(where + ": unknown set type '" + type + "'");
  });
}

FieldSpec parse_field(const json& j, int n, const Registry& reg, const std::string& where) {
  if (j.is_string()) {
    const std::string name = j.get<std::string>();
    const auto it = reg.fields.find(name);
    if (it == reg.fields.end()) throw ConfigError(where + ": undefined field '" + name + "'");
    return it->second;
  }
  const std::string type = text(member(j, "type", where), where + ".type");
  const double amp = number_or(j, "amplitude", 1.0, where);
  return guarded(where, [&]() -> FieldSpec {
    if (type == "constant") return constant_field(n, number(member(j, "value", where), where + ".value"));
    if (type == "radial_bump")
      return radial_bump(parse_point(member(j, "center", where), n, where + ".center"),
                         number(member(j, "width", where), where + ".width"), amp);
    if (type == "tent") {
      if (n != 1) throw ConfigError(where + ": tents live in n = 1");
      return tent(number(member(j, "center", where), where + ".center"),
                  number(member(j, "width", where), where + ".width"), amp);
    }
    if (type == "modulated_bump")
      return modulated_bump(parse_point(member(j, "center", where), n, where + ".center"),
                            number(member(j, "width", where), where + ".width"),
                            static_cast<int>(number_or(j, "axis", 0, where)), amp);
    if (type == "vector") {
      std::vector<FieldSpec> comps;
      const json& c = member(j, "components", where);
      if (!c.is_array()) throw ConfigError(where + ".components: expected a list");
      for (std::size_t k = 0; k < c.size(); ++k)
        comps.push_back(parse_field(c[k], n, reg, where + ".components[" + std::to_string(k) + "]"));
      return vector_field(comps);
    }
    if (type == "along_axis")
      return along_axis(parse_field(member(j, "field", where), n, reg, where + ".field"),
                        static_cast<int>(number_or(j, "axis", 0, where)));
    if (type == "mollified")
      return mollified_indicator(parse_set(member(j, "set", where), n, reg, where + ".set"),
                                 number(member(j, "eps", where), where + ".eps"));
    throw ConfigError(where + ": unknown field type '" + type + "'");
  });
}

Config parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config: expected a top-level object");
  static const std::set<std::string> known{"context", "quadrature", "sets", "fields", "experiments", "output"};
  for (const auto& [key, value] : doc.items())
    if (!known.count(key)) throw ConfigError("config: unknown key '" + key + "'");
  Config cfg;
  const json& ctx = member(doc, "context", "config");
  cfg.n = static_cast<int>(number(member(ctx, "n", "context"), "context.n"));
  cfg.alpha = number(member(ctx, "alpha", "context"), "context.alpha");
  guarded("context", [&] { return make_context(cfg.n, cfg.alpha); });
  cfg.quadrature = parse_quadrature(doc.value("quadrature", json()), QuadratureConfig{});
  // definitions may refer to earlier ones
  if (doc.contains("sets")) {
    if (!doc.at("sets").is_object()) throw ConfigError("sets: expected an object");
    for (const auto& [name, def] : doc.at("sets").items())
      cfg.registry.sets.emplace(name, parse_set(def, cfg.n, cfg.registry, "sets." + name));
  }
  if (doc.contains("fields")) {
    if (!doc.at("fields").is_object()) throw ConfigError("fields: expected an object");
    for (const auto& [name, def] : doc.at("fields").items())
      cfg.registry.fields.emplace(name, parse_field(def, cfg.n, cfg.registry, "fields." + name));
  }
  for (const auto& [name, s] : cfg.registry.sets)
    if (cfg.registry.fields.count(name)) throw ConfigError("'" + name + "' is defined both as a set and a field");
  if (doc.contains("output")) {
    const json& o = doc.at("output");
    if (o.contains("csv")) cfg.csv_path = text(o.at("csv"), "output.csv");
    if (o.contains("summary")) cfg.summary_path = text(o.at("summary"), "output.summary");
  }
  const json& exps = doc.value("experiments", json::array());
  if (!exps.is_array()) throw ConfigError("experiments: expected a list");
  std::set<std::string> ids;
  for (const auto& e : exps) {
    Job job = make_job(e, cfg, cfg.quadrature.seed);
    if (!ids.insert(job.id).second) throw ConfigError("experiments: duplicate id '" + job.id + "'");
    cfg.jobs.push_back(std::move(job));
  }
  return cfg;
}

Config parse_config_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config ") + e.what());
  }
  return parse_config(doc);
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_csv(std::ostream& out, const RunReport& report) {
  out << csv_header() << '\n';
  for (const auto& r : report.results)
    for (const auto& row : r.rows) {
      out << row.experiment;
      for (int k = 0; k < 3; ++k) out << ',' << (k < row.x.size() ? fmt(row.x(k)) : "");
      for (std::size_t k = 0; k < 4; ++k) out << ',' << (k < row.values.size() ? fmt(row.values[k]) : "");
      out << ',' << fmt(row.error_bar) << ',' << row.evaluations << ',' << (row.pass ? "true" : "false") << '\n';
    }
}

json summary(const RunReport& report, const Config& cfg) {
  json doc;
  doc["context"] = {{"n", cfg.n}, {"alpha", cfg.alpha}};
  doc["seed"] = report.seed;
  doc["pass"] = report.pass;
  doc["wall_seconds"] = report.wall_seconds;
  json list = json::array();
  for (const auto& r : report.results) {
    json e;
    e["id"] = r.id;
    e["op"] = r.op;
    e["seed"] = r.seed;
    e["pass"] = r.pass;
    e["wall_seconds"] = r.wall_seconds;
    e["rows"] = r.rows.size();
    if (!r.message.empty()) e["message"] = r.message;
    if (!r.details.empty()) e["details"] = r.details;
    list.push_back(std::move(e));
  }
  doc["experiments"] = std::move(list);
  return doc;
}

}  // namespace fracvc::cli
