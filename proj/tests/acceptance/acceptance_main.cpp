// Acceptance suite: one PASS/FAIL line per criterion.

#include <array>
#include <chrono>
#include <exception>
#include <iomanip>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "acceptance.hpp"

namespace {

using namespace smlab::acceptance;

struct Criterion {
  const char* name;
  Verdict (*run)(const Context&);
  double budget_seconds;
};

const std::array<Criterion, 13> kCriteria = {{
    {"stability semantics", stability_semantics, 60},
    {"partial-list completion", completion_bijection, 60},
    {"linear-extension counting", extension_counting, 120},
    {"proportional transitivity", proportional_transitivity, 300},
    {"sampler uniformity", sampler_uniformity, 300},
    {"sampled representative order", sampled_representativeness, 300},
    {"representative learner progress", representative_progress, 600},
    {"naive learner bound", naive_bound, 300},
    {"serial-dictatorship lower bound", serial_lower_bound, 900},
    {"many-to-many simple learner", many_simple_bound, 600},
    {"last-fraction learner progress", last_frac_progress, 900},
    {"3SAT reduction", sat_reduction, 60},
    {"scaling report", scaling_report, 1200},
}};

bool run_one(int index, const Context& ctx) {
  const Criterion& c = kCriteria[static_cast<std::size_t>(index - 1)];
  const auto start = std::chrono::steady_clock::now();
  Verdict v;
  try {
    v = c.run(ctx);
  } catch (const std::exception& e) {
    v = {false, std::string("unexpected exception: ") + e.what()};
  }
  const double elapsed = seconds_since(start);
  if (v.pass && elapsed > c.budget_seconds) {
    v.pass = false;
    v.detail += "; over the runtime budget";
  }
  std::cout << (v.pass ? "PASS" : "FAIL") << " criterion " << index << ": " << c.name << ": " << v.detail << " ["
            << std::fixed << std::setprecision(1) << elapsed << " s of " << std::setprecision(0) << c.budget_seconds
            << " s]" << std::endl;
  return v.pass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  int only = 0;
  Context ctx;
  app.add_option("--only", only, "run a single criterion")->check(CLI::Range(1, 13));
  app.add_option("--seed", ctx.seed, "base seed");
  app.add_option("--report-dir", ctx.report_dir, "directory for the scaling report");
  CLI11_PARSE(app, argc, argv);

  bool all = true;
  for (int i = 1; i <= 13; ++i) {
    if (only != 0 && i != only) continue;
    all = run_one(i, ctx) && all;
  }
  return all ? 0 : 1;
}
