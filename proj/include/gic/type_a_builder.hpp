#pragma once

/*
  Automatic data for products of GL's with an integral grading.

  A basis element is a word: per factor, an arrangement of the weight
  multiset, read as a flag from the bottom.  Graded orbits are
  multisegments; the n-good parabolic of an orbit is read off from the
  midpoints c of its segments, and its Levi is the product of GL(V_c).
*/

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "gic/datum_model.hpp"

namespace gic {

struct GLFactor {
  std::map<int, int> weights;  // weight -> multiplicity
  int dim() const;
  std::vector<int> sorted() const;
};

using Word = std::vector<std::vector<int>>;  // per factor, a weight arrangement

struct Line {
  int weight = 0;
  int occ = 0;  // which copy of that weight
  auto operator<=>(const Line&) const = default;
};
using LinedWord = std::vector<std::vector<Line>>;

// Segment of weights lo, lo+|n|, ..., lo+(len-1)|n|.
struct Segment {
  int lo = 0;
  int len = 1;
  int hi(int n) const { return lo + (len - 1) * (n < 0 ? -n : n); }
  auto operator<=>(const Segment&) const = default;
};
using Multisegment = std::vector<std::vector<Segment>>;  // per factor, sorted

enum class FlagOrder { Asc, Desc };

struct TypeAInfo {
  std::vector<GLFactor> factors;
  int n = 1;
  FlagOrder order = FlagOrder::Asc;
  std::vector<Word> words;                                // indexed like the basis
  std::map<int, std::vector<Multisegment>> orbit_segments;  // like datum.orbits
};

struct OrbitEta {
  Multisegment orbit;
  int d_eta = 0;
  bool whole = false;  // P = G
  std::vector<GLFactor> child_factors;
  std::vector<std::size_t> child_parent;  // parent factor of each child factor, in block order
};

std::vector<GLFactor> parse_gl_spec(const std::string& spec, int* n_out);
std::string gl_spec_name(const std::vector<GLFactor>& factors, int n, FlagOrder order = FlagOrder::Asc);

std::string word_label(const Word& w);
std::string multisegment_name(const Multisegment& m, int n);
LinedWord lined(const Word& w);

int tau_of_pair(const LinedWord& x, const LinedWord& y, int n);
std::vector<Multisegment> multisegments(const std::vector<GLFactor>& factors, int n);
OrbitEta child_datum_of_orbit(const std::vector<GLFactor>& factors, const Multisegment& orbit, int n,
                              FlagOrder order = FlagOrder::Asc);
std::vector<OrbitEta> enumerate_orbits(const std::vector<GLFactor>& factors, int n,
                                       FlagOrder order = FlagOrder::Asc);
LeafData rigidity_check(const std::vector<GLFactor>& factors, int n);
bool closure_leq(const Multisegment& a, const Multisegment& b, int n);

// dim L_k G summed over factors
int dim_graded(const std::vector<GLFactor>& factors, int k);

// Builds (and memoizes by canonical name) the datum together with all descendants.
std::shared_ptr<const GradedDatum> make_type_a_shared(const std::vector<GLFactor>& factors, int n,
                                                      FlagOrder order = FlagOrder::Asc);
GradedDatum make_type_a_datum(const std::vector<GLFactor>& factors, int n, FlagOrder order = FlagOrder::Asc);

}  // namespace gic
