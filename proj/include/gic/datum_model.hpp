#pragma once

/*
  The recursive description of a pair (G, iota) with grading degrees {n,-n}:
  basis of K_G, primitive classes, pairing orbits with their tau values,
  the sigma involution, graded orbits with closure, the n-good parabolic
  classes (with their Levi data as children), and the rigid-leaf data.

  Everything the algorithm consumes is here; nothing in the engine looks at
  an actual group.
*/

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gic/exact_algebra.hpp"

namespace gic {

using KVector = std::map<std::size_t, RatFunc>;

enum class SignConvention { PlusV, PrintedMinusV };

struct Finding {
  std::string code;
  std::string message;
};

struct BasisId {
  std::size_t index = 0;
  std::string label;
};

struct PrimitiveClass {
  std::size_t id = 0;
  std::size_t dual = 0;
  int c_F = 0;
  std::vector<std::size_t> members;
  LaurentPoly theta_ratio;
};

struct PairingOrbit {
  std::size_t s = 0;
  std::size_t s_prime = 0;
  int tau = 0;
};

struct OrbitLabel {
  std::string name;
  int dim = 0;
};

struct GradedDatum;
struct TypeAInfo;

struct EtaClass {
  std::size_t id = 0;
  int n = 0;
  int d_eta = 0;
  std::string orbit;
  std::shared_ptr<const GradedDatum> child;
  std::vector<std::pair<std::size_t, std::size_t>> induction;  // child index -> parent index
};

struct CPrimeEntry {
  std::size_t s_F = 0;
  LaurentPoly r_F;
  std::string kappa_label;
};

struct LeafData {
  bool rigid = false;
  std::vector<CPrimeEntry> cprime;
};

// Names the local system of a rigid-top element on the open orbit by the
// label of its Fourier partner.  Unlisted partners get "triv".
struct OpenLabelRule {
  std::string partner_orbit;
  std::string partner_ls;
  std::string label;
};

struct GradedDatum {
  std::string name;
  int n = 1;  // delta = {n, -n}
  std::vector<BasisId> basis;
  std::vector<PrimitiveClass> classes;
  std::vector<PairingOrbit> pairing;
  std::vector<std::size_t> sigma;
  std::map<int, std::vector<OrbitLabel>> orbits;
  // strict relation lower < upper; need not be transitively closed
  std::map<int, std::vector<std::pair<std::string, std::string>>> closure;
  std::map<int, std::vector<EtaClass>> etas;  // proper n-good classes only
  LeafData leaf;
  std::vector<OpenLabelRule> open_labels;
  std::optional<LaurentPoly> theta_G;  // full theta of G^iota, for series checks
  std::shared_ptr<const TypeAInfo> type_a;

  std::vector<int> delta() const { return {n, -n}; }
  std::size_t size() const { return basis.size(); }
  const PrimitiveClass& class_of(std::size_t b) const;
  const OrbitLabel* find_orbit(int k, const std::string& name) const;
  std::string open_orbit(int k) const;  // unique orbit of maximal dimension
  bool closure_lt(int k, const std::string& a, const std::string& b) const;
};

RFMatrix gram_matrix(const GradedDatum& d, SignConvention conv = SignConvention::PlusV,
                     unsigned threads = 1);

// tau multisets per (s, s'), the raw material of the Gram matrix
std::map<std::pair<std::size_t, std::size_t>, std::vector<int>> pairing_table(const GradedDatum& d);

std::vector<Finding> validate_datum(const GradedDatum& d);

KVector induction_extend(const EtaClass& eta, const KVector& x);

bool radical_member(const RFMatrix& gram, const KVector& x);
bool radical_member(const GradedDatum& d, const KVector& x,
                    SignConvention conv = SignConvention::PlusV);

// Parses the table-datum JSON schema and validates; throws ParseError / DatumInvalid.
GradedDatum load_table_datum(const std::string& text);
GradedDatum load_table_datum_file(const std::string& path);

}  // namespace gic
