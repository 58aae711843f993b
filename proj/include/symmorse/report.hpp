#pragma once

#include <string>

#include "symmorse/verify.hpp"

namespace symmorse {

const char* version();

/// Everything a report echoes besides the results themselves.
struct ReportContext {
  std::string command;
  std::string problem_text;  // serialized problem
  RunConfig config;
  bool timings = true;  // false drops the only non-deterministic section
};

/// Schema "symmorse-report/1": deterministic for fixed inputs and thread count.
std::string report_json(const IndexReport& report, const ReportContext& ctx,
                        const ConvergenceCheck* convergence = nullptr);
std::string sweep_json(const SweepResult& sweep, const ReportContext& ctx);

/// kind,name,value rows.
std::string report_csv(const IndexReport& report);
std::string sweep_lambda_csv(const SweepResult& sweep);
std::string sweep_angle_csv(const SweepResult& sweep);

/// Staircase of Morse counts against lambda, and principal angles against tau.
std::string staircase_svg(const SweepResult& sweep);
std::string angles_svg(const SweepResult& sweep);

}  // namespace symmorse
