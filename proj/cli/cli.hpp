#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace mixvote::cli {

enum ExitCode : int { kOk = 0, kAxiomFail = 1, kUsage = 2, kCapacity = 3 };

// Runs one `mixvote` invocation. args excludes the program name. The JSON
// report goes to out, diagnostics and usage text to err.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct BenchSize {
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t atoms = 0;
};

struct BenchRow {
  BenchSize size;
  double millis = 0.0;
  std::size_t iterations = 0;   // purchases made
  std::size_t bound = 0;        // m + atoms * n + n
  bool within_bound = true;
};

// Times generalized_mes on seeded random instances of each size and checks
// the purchase count against the progress bound (every purchase removes a
// good, finishes an interval, or exhausts a budget).
std::vector<BenchRow> bench_mes(const std::vector<BenchSize>& sizes, std::uint64_t seed,
                                double density = 0.5);

// "1000x100x100,4x3x2" -> sizes. Throws mixvote::ParseError.
std::vector<BenchSize> parse_bench_sizes(const std::string& text);

}  // namespace mixvote::cli
