// Acceptance suite: one PASS/FAIL line per criterion, details indented below.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "levyfisher/verification.hpp"

using namespace levyfisher;

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::string report_path;
  std::vector<int> only;
  bool report_only = false;
  app.add_option("--report", report_path, "also write the lines to this file");
  app.add_option("--only", only, "criterion ids to run (repeatable)");
  app.add_flag("--report-only", report_only, "exit 0 whenever every criterion ran");
  CLI11_PARSE(app, argc, argv);

  std::ofstream report;
  if (!report_path.empty()) {
    report.open(report_path);
    if (!report) {
      std::cerr << "cannot write " << report_path << '\n';
      return 2;
    }
  }
  auto emit = [&](const std::string& line) {
    std::cout << line << std::endl;
    if (report) report << line << std::endl;
  };

  int passed = 0, ran = 0;
  for (const auto& info : criteria_manifest()) {
    if (!only.empty() && std::find(only.begin(), only.end(), info.id) == only.end()) continue;
    const CheckResult r = run_criterion(info.id);
    ++ran;
    if (r.passed) ++passed;
    char head[256];
    std::snprintf(head, sizeof head, "%s %2d %s (%.1f s)", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(),
                  r.seconds);
    emit(head);
    emit("      tolerance: " + info.tolerance);
    for (const auto& d : r.details) emit("      " + d);
  }
  std::ostringstream tail;
  tail << passed << " of " << ran << " criteria passed";
  emit(tail.str());
  if (report_only) return ran > 0 ? 0 : 1;
  return passed == ran ? 0 : 1;
}
