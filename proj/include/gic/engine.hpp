#pragma once

/*
  The inductive construction of the Z-sets, W-elements and the
  multiplicity matrix for one datum, plus the derived tables: e-matrix,
  Fourier matching between n and -n, partial order, L-table and Xi.

  A RunResult has two sides, sides[0] for n and sides[1] for -n.
  Child data are run first (memoized by datum name).
*/

#include <array>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "gic/datum_model.hpp"

namespace gic {

enum class Origin { Induced, CFromFourier, CPrime };
const char* origin_name(Origin o);

struct Kappa {
  std::string orbit;
  std::string ls;
  std::string str() const { return orbit + "/" + ls; }
};

struct ZElement {
  std::vector<RatFunc> vec;  // coordinates over the basis
  Origin origin = Origin::Induced;
  int eta = -1;              // index into datum.etas[n] when induced
  Kappa kappa;
  int d = 0;                 // orbit dimension
  std::size_t child_index = 0;  // induced: index in the child's z list
  std::size_t partner = 0;      // CFromFourier: index of h_n^-1 in the other side's z list
};

struct LRow {
  std::size_t s_kappa = 0;
  LaurentPoly r_kappa;
  std::vector<RatFunc> L_z;  // coordinates over z
  std::vector<RatFunc> L_w;  // coordinates over the W-elements
};

struct SideResult {
  int n = 0;
  std::vector<ZElement> z;
  std::vector<std::size_t> zprime;  // positions in z of the induced elements
  RFMatrix a_matrix;                // over zprime
  RFMatrix c_matrix;                // over z (rows W, columns z)
  RFMatrix e_matrix;                // basis x z
  RFMatrix gram_z;
  std::vector<std::vector<Int>> weight_dims;
  std::vector<std::vector<RatFunc>> w_vectors;
  std::vector<std::vector<bool>> leq;  // leq[i][j]: z_i <= z_j
  std::vector<std::size_t> fourier;    // into the other side's z
  std::vector<LRow> l_table;
  std::vector<std::size_t> xi;
};

struct RunResult {
  std::shared_ptr<const GradedDatum> datum;
  SignConvention conv = SignConvention::PlusV;
  RFMatrix gram;
  std::array<SideResult, 2> sides;
  std::vector<Finding> findings;
  std::vector<std::shared_ptr<const RunResult>> children;
  const SideResult& side(int n) const { return sides[0].n == n ? sides[0] : sides[1]; }
};

struct RunOptions {
  SignConvention conv = SignConvention::PlusV;
  unsigned threads = 1;
};

class Engine {
 public:
  explicit Engine(RunOptions opt = {}) : opt_(opt) {}
  std::shared_ptr<const RunResult> run(const std::shared_ptr<const GradedDatum>& d);
  const RunOptions& options() const { return opt_; }

 private:
  RunOptions opt_;
  std::mutex mu_;
  std::map<std::string, std::shared_ptr<const RunResult>> memo_;
};

// Convenience: one-shot run with a fresh engine.
std::shared_ptr<const RunResult> run(const GradedDatum& d, RunOptions opt = {});

// Findings across the whole tree of child runs reachable from r.
std::vector<Finding> all_findings(const RunResult& r);

}  // namespace gic
