#pragma once

// Exhaustive enumeration of small type-A data and the invariant suite run
// over them (plus the shipped fixtures).

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "gic/engine.hpp"
#include "gic/type_a_builder.hpp"

namespace gic {

struct SweepItem {
  std::vector<GLFactor> factors;
  int n = 1;
  std::string spec;  // glq:... form
};

// Every product of GL factors with total dimension in [1, max_total_dim], weights in
// [0, 4] with minimum 0 in each factor, factors in canonical order, n in ns.
std::vector<SweepItem> enumerate_type_a(int max_total_dim, const std::vector<int>& ns = {1, 2});

// Invariant findings for one type-A datum, including the expected Xi set.
std::vector<Finding> type_a_invariants(const RunResult& r);

struct SelftestOptions {
  int depth = 4;
  unsigned threads = 1;
  bool oracles = true;
  int engine_cap = 5;  // larger total dimensions are skipped and reported
  int oracle_cap = 4;
  std::uint64_t seed = 1;  // second orbit representatives
};

struct SelftestReport {
  int data = 0;
  int oracle_data = 0;
  std::vector<std::string> skipped;
  std::vector<Finding> findings;
  bool ok() const { return findings.empty(); }
};

SelftestReport selftest(const SelftestOptions& opt, std::ostream* log = nullptr);

std::string default_sp4_path();

}  // namespace gic
