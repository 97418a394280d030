#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace cavitysim {

struct DetectorModel {
  double dead_time_ns = 17.0;
  double dark_rate_cps = 0.0;      // counts per second
  double window_us = 10.0;         // integration window tau0
  int n_detectors = 1;

  bool valid() const {
    return dead_time_ns >= 0 && dark_rate_cps >= 0 && window_us >= 0 &&
           n_detectors >= 1;
  }
};

// Dead-time-corrected measured rate.  Default convention (counts/s):
//   C_M = R exp(-t_D R), R = C_P + C_D, t_D effective = dead_time/n_detectors.
// printed_form additionally multiplies the exponent by the integration
// window in seconds, reproducing the source expression verbatim (its tau0
// placement is a units bookkeeping artifact; see module notes).
double dead_time_rate(double photon_rate_cps, const DetectorModel& d,
                      bool printed_form = false);

// Rate at which the measured curve rolls over: R = 1/t_D_eff (minus dark).
double dead_time_rollover_cps(const DetectorModel& d);

struct ThresholdModel {
  double mu_low = 0.09;   // mean counts per window, coupled atom
  double mu_high = 16.6;  // uncoupled
  int k_threshold = 3;    // counts > k_T read "high"

  bool valid() const { return 0 < mu_low && mu_low < mu_high && k_threshold >= 0; }
};

// k_T = floor((mu_H - mu_L)/(ln mu_H - ln mu_L)); equates the two Poisson
// likelihoods.  Requires 0 < mu_L < mu_H.
int optimal_threshold(double mu_low, double mu_high);

// P_FP = P(X > k_T | mu_L),  P_FN = P(X <= k_T | mu_H).
std::pair<double, double> readout_error_probs(const ThresholdModel& m);

double poisson_pmf(int k, double mu);
double poisson_cdf(int k, double mu);

// Exact binomial (Clopper-Pearson) interval via beta quantiles.
std::pair<double, double> clopper_pearson(std::int64_t successes,
                                          std::int64_t trials,
                                          double confidence = 0.95);

enum class WindowLabel { High, Low };

struct ReadoutWindow {
  int counts = 0;
  WindowLabel label = WindowLabel::Low;
};

enum class SequenceKind { SingleAtom, TwoAtom };

struct ReadoutRecord {
  std::vector<ReadoutWindow> windows;
  SequenceKind kind = SequenceKind::SingleAtom;
};

// Atomic states the sequences can start from.
enum class AtomState { Zero, One, Err };

// Deterministic Poisson draws (Knuth multiplication over mt19937_64 --
// byte-identical across platforms for a fixed seed).  One window per
// sequence step; the per-window mean follows the state's coupled status
// under the stated pumping mechanics.
ReadoutRecord simulate_readout(AtomState a, const ThresholdModel& m,
                               std::uint64_t seed);
ReadoutRecord simulate_readout_two_atom(AtomState a, AtomState b,
                                        const ThresholdModel& m,
                                        std::uint64_t seed);

enum class ClassLabel {
  Q0, Q1, Err,          // single-atom outcomes
  Q00, Q01,             // two-atom: atom A = |0>, B resolved uncoupled/coupled
  OneAny,               // atom A = |1>, first readout blocked, B unresolved
  ErrAGroup,            // atom A in an error state
  Inconsistent
};

std::string to_string(ClassLabel l);

// Decision table for the 2- or 3-readout sequences, derived from the
// pumping mechanics: readout leaves |0> undisturbed, pumps |1> to the
// stretched coupled state, and the microwave pi pulse acts only on the
// clock transition.  Inconsistent patterns are labeled, never coerced.
ClassLabel classify_sequence(const ReadoutRecord& r);

// Independent Poisson-count windows at the mean selected by the coupled /
// uncoupled status; used for Monte-Carlo error-rate estimates.
std::vector<int> simulate_windows(bool coupled, const ThresholdModel& m,
                                  std::int64_t n_windows, std::uint64_t seed);

int poisson_draw(double mu, std::mt19937_64& rng);

} // namespace cavitysim
