#ifndef FRACVC_CLI_HPP
#define FRACVC_CLI_HPP

#include <fracvc/fields.hpp>
#include <fracvc/geometry.hpp>
#include <fracvc/kernel.hpp>
#include <fracvc/quadrature.hpp>

#include <json.hpp>

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace fracvc::cli {

using json = nlohmann::ordered_json;

/// Malformed or inconsistent configuration; maps to exit status 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// One CSV record.
struct Row {
  std::string experiment;
  Point x;
  std::vector<double> values;  // at most four
  double error_bar = 0.0;
  long evaluations = 0;
  bool pass = true;
};

struct ExperimentResult {
  std::string id;
  std::string op;
  std::uint64_t seed = 0;
  bool pass = true;
  std::string message;
  double wall_seconds = 0.0;
  std::vector<Row> rows;
  json details = json::object();
};

struct Registry {
  std::map<std::string, SetSpec> sets;
  std::map<std::string, FieldSpec> fields;
};

/// A validated experiment, ready to run.
struct Job {
  std::string id;
  std::string op;
  std::uint64_t seed = 0;
  std::function<ExperimentResult()> run;
};

struct Config {
  int n = 1;
  double alpha = 0.5;
  QuadratureConfig quadrature;
  Registry registry;
  std::vector<Job> jobs;
  std::string csv_path;
  std::string summary_path;
};

// Parsing. Every function throws ConfigError with the offending path.
Point parse_point(const json& j, int n, const std::string& where);
std::vector<Point> parse_points(const json& j, int n, const std::string& where);
QuadratureConfig parse_quadrature(const json& j, QuadratureConfig base);
SetSpec parse_set(const json& j, int n, const Registry& reg, const std::string& where);
FieldSpec parse_field(const json& j, int n, const Registry& reg, const std::string& where);
Config parse_config(const json& doc);
Config parse_config_text(const std::string& text);
Config load_config(const std::string& path);

/// Builds the job for one experiment object; validates all references.
Job make_job(const json& spec, const Config& cfg, std::uint64_t master_seed);

struct RunReport {
  std::vector<ExperimentResult> results;
  bool pass = true;
  double wall_seconds = 0.0;
  std::uint64_t seed = 0;
};

/// Runs the jobs (concurrently when FRACVC_THREADS allows); results keep the declared order.
RunReport run_jobs(const Config& cfg);

inline const char* csv_header() { return "experiment,x1,x2,x3,v1,v2,v3,v4,error_bar,evaluations,pass"; }
void write_csv(std::ostream& out, const RunReport& report);
json summary(const RunReport& report, const Config& cfg);

/// Entry point of the command line tool; returns the exit status.
int main(int argc, char** argv);

}  // namespace fracvc::cli

#endif  // FRACVC_CLI_HPP
