// Runs the shipped acceptance config and prints one line per criterion.
// Experiment ids start with cNN- to name the criterion they serve.

#include <fracvc/cli.hpp>
#include <fracvc/parallel.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

using namespace fracvc;
using namespace fracvc::cli;

namespace {

struct Criterion {
  int id;
  const char* title;
  double time_limit;  // seconds of experiment time; negative when none is stated
};

const Criterion criteria[] = {
    {1, "constants: mu, Gamma/Beta identity, descent", 1.0},
    {2, "half-space gradient vs closed form", 120.0},
    {3, "interval unions vs closed form", 30.0},
    {4, "ball gradient vs closed form", 300.0},
    {5, "integration by parts", -1.0},
    {6, "pointwise Leibniz rules", -1.0},
    {7, "Gauss-Green formula", 600.0},
    {8, "zero totals", -1.0},
    {9, "blow-up convergence", -1.0},
    {10, "corner probe and edge contrast", -1.0},
    {11, "scaling law of the variation", -1.0},
    {12, "mollification and precise representative", -1.0},
};

int criterion_of(const std::string& id) {
  if (id.size() < 4 || id[0] != 'c' || id[3] != '-') return 0;
  return std::stoi(id.substr(1, 2));
}

std::string csv_text(const RunReport& rep) {
  std::ostringstream s;
  write_csv(s, rep);
  return s.str();
}

void line(bool pass, int id, const std::string& title, double seconds, const std::string& note) {
  std::printf("criterion %2d %s  %-46s %9.2f s%s%s\n", id, pass ? "PASS" : "FAIL", title.c_str(), seconds,
              note.empty() ? "" : "  ", note.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  const std::string path = argc > 1 ? argv[1] : std::string(FRACVC_CONFIG_DIR) + "/acceptance.json";
  using Clock = std::chrono::steady_clock;
  const auto t0 = Clock::now();
  Config cfg;
  try {
    cfg = load_config(path);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  std::printf("acceptance: %zu experiments from %s, %d threads\n", cfg.jobs.size(), path.c_str(), thread_count());
  std::fflush(stdout);

  const RunReport first = run_jobs(cfg);
  {
    std::ofstream csv("acceptance.csv");
    write_csv(csv, first);
    std::ofstream sum("acceptance_summary.json");
    sum << summary(first, cfg).dump(2) << '\n';
  }

  std::map<int, std::vector<const ExperimentResult*>> by_criterion;
  for (const auto& r : first.results) by_criterion[criterion_of(r.id)].push_back(&r);

  bool all = true;
  for (const auto& c : criteria) {
    const auto it = by_criterion.find(c.id);
    bool pass = it != by_criterion.end() && !it->second.empty();
    double seconds = 0.0;
    std::string note = pass ? "" : "no experiments";
    if (it != by_criterion.end())
      for (const auto* r : it->second) {
        seconds += r->wall_seconds;
        if (!r->pass) {
          pass = false;
          note += (note.empty() ? "failed: " : ", ") + r->id;
        }
      }
    if (c.time_limit > 0.0 && seconds > c.time_limit) {
      pass = false;
      note += (note.empty() ? "" : "; ") + std::string("over the time limit");
    }
    line(pass, c.id, c.title, seconds, note);
    if (it != by_criterion.end())
      for (const auto* r : it->second)
        if (!r->pass) {
          std::printf("    %s:", r->id.c_str());
          if (!r->message.empty()) std::printf(" %s", r->message.c_str());
          if (!r->details.empty()) std::printf(" %s", r->details.dump().c_str());
          std::printf("\n");
        }
    std::fflush(stdout);
    all = all && pass;
  }

  const RunReport second = run_jobs(cfg);
  const double total = std::chrono::duration<double>(Clock::now() - t0).count();
  const bool same = csv_text(first) == csv_text(second);
  const bool in_time = total <= 1800.0;
  line(same && in_time, 13, "determinism and total runtime", total,
       std::string(same ? "CSV bodies identical" : "CSV bodies differ") + (in_time ? "" : "; over 30 min"));
  all = all && same && in_time;

  std::printf("acceptance: %s\n", all ? "all criteria pass" : "some criteria fail");
  return all ? 0 : 1;
}
