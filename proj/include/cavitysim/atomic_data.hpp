#pragma once

#include <map>
#include <set>
#include <utility>
#include <vector>

namespace cavitysim {

// Rb-87 D2 line: ground 5S1/2 (J=1/2), excited 5P3/2 (J'=3/2), I=3/2.
// Ground F in {1,2}, excited F' in {0,1,2,3}.

enum class Manifold { Ground, Excited };

struct HyperfineLevel {
  Manifold manifold = Manifold::Ground;
  int F = 0;
  int mF = 0;
  double energy_offset_mhz = 0.0; // relative to manifold reference

  bool valid() const;
  friend bool operator<(const HyperfineLevel& a, const HyperfineLevel& b) {
    return std::tie(a.manifold, a.F, a.mF) < std::tie(b.manifold, b.F, b.mF);
  }
  friend bool operator==(const HyperfineLevel& a, const HyperfineLevel& b) {
    return a.manifold == b.manifold && a.F == b.F && a.mF == b.mF;
  }
};

// Published hyperfine splittings of the 5P3/2 manifold relative to F'=1
// (MHz): F'=1 -> F'=2 and F'=1 -> F'=3.
constexpr double kDefaultDelta2Mhz = 156.947;
constexpr double kDefaultDelta3Mhz = 423.597;

// Wigner symbols for half-integer arguments passed as doubled integers
// (two_j = 2j).  Exact Racah sums in double precision; plenty for j <= 9/2.
double wigner3j(int two_j1, int two_j2, int two_j3, int two_m1, int two_m2,
                int two_m3);
double wigner6j(int two_j1, int two_j2, int two_j3, int two_j4, int two_j5,
                int two_j6);
double clebsch_gordan(int two_j1, int two_m1, int two_j2, int two_m2,
                      int two_j, int two_m);

struct DecayChannel {
  HyperfineLevel ground;
  int q = 0;             // polarization, mF' - mF_ground in {-1,0,+1}
  double fraction = 0.0; // of total decay rate from the excited level
};

// Normalized decay fractions from an excited D2 level, from squared
// Clebsch-Gordan coefficients.  Fractions sum to 1.
std::vector<DecayChannel> branching_fractions(const HyperfineLevel& excited);

// Relative manifold strength F' -> F (sums to 1 over F for each F').
double manifold_branching(int Fp, int F);

// Splits the branching of `excited` into (detectable, nondetectable)
// fractions of gamma according to membership of the final state in
// `detectable_set`.
std::pair<double, double> detectability_split(
    const HyperfineLevel& excited, const std::set<HyperfineLevel>& detectable_set);

// The experiment's detectable set for decays from |e> = |F'=1, mF=0>:
// err states |1,+-1> are detectable; F=2 Zeeman sublevels read like |1>
// (undetectable); the clock states are not error states.
std::set<HyperfineLevel> paper_detectable_set();

// Aggregate rates (as fractions of gamma) feeding the 28-state model.
// With recycle_elastic=true decays back to the state the atom was driven
// from (|2,0> = qubit |1>) are excluded and the remainder renormalized:
// these return population to the qubit manifold and are not error sinks.
struct BranchingAggregates {
  double gamma_d_frac;   // from |e>  = |1',0>, detectable
  double gamma_nd_frac;  // from |e>, nondetectable
  double gamma_3d_frac;  // from |e3> = |3',0>, detectable
  double gamma_3nd_frac; // from |e3>, nondetectable
};

BranchingAggregates branching_aggregates(bool recycle_elastic = true);

} // namespace cavitysim
