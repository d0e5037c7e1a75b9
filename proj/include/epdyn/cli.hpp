#pragma once

#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

#include "epdyn/algebra.hpp"
#include "epdyn/report.hpp"

namespace epdyn::cli {

struct Options {
  std::size_t jobs = 1;
  std::size_t cap = kDefaultAlgebraCap;
};

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kInternal = 1;
inline constexpr int kBadInput = 2;
inline constexpr int kOverCap = 3;

/// Runs one command (arguments without the program name) and returns its
/// JSON result. Throws the library's error types.
Json execute(const std::vector<std::string>& args, const Options& options);

/// A parsed scenario step: `name = command tokens`.
struct Step {
  std::string name;
  std::vector<std::string> tokens;
};

/// Throws parse_error on malformed lines, duplicate names, or references to
/// steps that are not defined earlier.
std::vector<Step> parse_scenario(const std::string& text);

Json run_scenario(const std::vector<Step>& steps, const Options& options);

/// Full front end: global --jobs/--cap anywhere, JSON on `out`, messages on
/// `err`, exit code per the constants above.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace epdyn::cli
