#include "cavitysim/readout.hpp"

#include <cmath>
#include <stdexcept>

#include <boost/math/distributions/beta.hpp>

namespace cavitysim {

double dead_time_rate(double photon_rate_cps, const DetectorModel& d,
                      bool printed_form) {
  if (photon_rate_cps < 0)
    throw std::invalid_argument("dead_time_rate: rate >= 0 required");
  if (!d.valid()) throw std::invalid_argument("dead_time_rate: bad detector model");
  double rate = photon_rate_cps + d.dark_rate_cps;
  double td = d.dead_time_ns * 1e-9 / d.n_detectors;
  double exponent = -td * rate;
  if (printed_form) exponent *= d.window_us * 1e-6; // verbatim source form
  return rate * std::exp(exponent);
}

double dead_time_rollover_cps(const DetectorModel& d) {
  double td = d.dead_time_ns * 1e-9 / d.n_detectors;
  if (td <= 0) return std::numeric_limits<double>::infinity();
  return 1.0 / td - d.dark_rate_cps;
}

int optimal_threshold(double mu_low, double mu_high) {
  if (!(0 < mu_low && mu_low < mu_high))
    throw std::invalid_argument("optimal_threshold: need 0 < mu_L < mu_H");
  return static_cast<int>(
      std::floor((mu_high - mu_low) / (std::log(mu_high) - std::log(mu_low))));
}

double poisson_pmf(int k, double mu) {
  if (k < 0) return 0.0;
  return std::exp(k * std::log(mu) - mu - std::lgamma(k + 1.0));
}

double poisson_cdf(int k, double mu) {
  if (k < 0) return 0.0;
  double sum = 0.0;
  for (int i = 0; i <= k; ++i) sum += poisson_pmf(i, mu);
  return std::min(sum, 1.0);
}

std::pair<double, double> readout_error_probs(const ThresholdModel& m) {
  if (!m.valid()) throw std::invalid_argument("readout_error_probs: bad model");
  double p_fp = 1.0 - poisson_cdf(m.k_threshold, m.mu_low);
  double p_fn = poisson_cdf(m.k_threshold, m.mu_high);
  return {p_fp, p_fn};
}

std::pair<double, double> clopper_pearson(std::int64_t successes,
                                          std::int64_t trials,
                                          double confidence) {
  if (trials <= 0) throw std::invalid_argument("clopper_pearson: trials > 0 required");
  if (successes < 0 || successes > trials)
    throw std::invalid_argument("clopper_pearson: 0 <= successes <= trials");
  if (!(confidence > 0 && confidence < 1))
    throw std::invalid_argument("clopper_pearson: 0 < confidence < 1");
  const double alpha = 1.0 - confidence;
  double lower = 0.0, upper = 1.0;
  if (successes > 0) {
    boost::math::beta_distribution<double> lo(successes, trials - successes + 1);
    lower = boost::math::quantile(lo, alpha / 2);
  }
  if (successes < trials) {
    boost::math::beta_distribution<double> hi(successes + 1, trials - successes);
    upper = boost::math::quantile(hi, 1.0 - alpha / 2);
  }
  return {lower, upper};
}

int poisson_draw(double mu, std::mt19937_64& rng) {
  // Knuth multiplication method; deterministic for a fixed engine state.
  auto uniform = [&rng]() {
    return (rng() >> 11) * 0x1.0p-53; // 53-bit mantissa in [0,1)
  };
  const double limit = std::exp(-mu);
  int k = 0;
  double prod = uniform();
  while (prod > limit) {
    ++k;
    prod *= uniform();
  }
  return k;
}

namespace {

WindowLabel label_for(int counts, const ThresholdModel& m) {
  return counts > m.k_threshold ? WindowLabel::High : WindowLabel::Low;
}

// One readout window: uncoupled atoms transmit (mu_high), a coupled atom
// blocks the cavity (mu_low).
ReadoutWindow draw_window(bool any_coupled, const ThresholdModel& m,
                          std::mt19937_64& rng) {
  int c = poisson_draw(any_coupled ? m.mu_low : m.mu_high, rng);
  return {c, label_for(c, m)};
}

// Pumping mechanics: readout leaves |0> and err (F=1) undisturbed; it
// pumps a coupled |1> atom to the stretched coupled state (still coupled,
// no longer a clock state).  The pi pulse acts only on the clock
// transition |0> <-> |1>.
struct AtomSim {
  AtomState state;
  bool pumped = false; // stretched |2,2>, unaffected by the pi pulse

  bool coupled() const { return state == AtomState::One; }
  void readout_backaction() {
    if (state == AtomState::One) pumped = true;
  }
  void pi_pulse() {
    if (pumped) return;
    if (state == AtomState::Zero)
      state = AtomState::One;
    else if (state == AtomState::One)
      state = AtomState::Zero;
  }
  void hide() { // local depump into the uncoupled manifold
    if (state == AtomState::One) state = AtomState::Err;
    pumped = false;
  }
};

} // namespace

ReadoutRecord simulate_readout(AtomState a, const ThresholdModel& m,
                               std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  AtomSim atom{a};
  ReadoutRecord rec;
  rec.kind = SequenceKind::SingleAtom;
  rec.windows.push_back(draw_window(atom.coupled(), m, rng));
  atom.readout_backaction();
  atom.pi_pulse();
  rec.windows.push_back(draw_window(atom.coupled(), m, rng));
  atom.readout_backaction();
  return rec;
}

ReadoutRecord simulate_readout_two_atom(AtomState a, AtomState b,
                                        const ThresholdModel& m,
                                        std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  AtomSim atomA{a}, atomB{b};
  ReadoutRecord rec;
  rec.kind = SequenceKind::TwoAtom;
  rec.windows.push_back(
      draw_window(atomA.coupled() || atomB.coupled(), m, rng));
  atomA.readout_backaction();
  atomB.readout_backaction();
  atomB.hide(); // atom B removed from the remaining readouts
  rec.windows.push_back(draw_window(atomA.coupled(), m, rng));
  atomA.readout_backaction();
  atomA.pi_pulse();
  rec.windows.push_back(draw_window(atomA.coupled(), m, rng));
  return rec;
}

std::string to_string(ClassLabel l) {
  switch (l) {
    case ClassLabel::Q0: return "|0>";
    case ClassLabel::Q1: return "|1>";
    case ClassLabel::Err: return "|err>";
    case ClassLabel::Q00: return "|00>";
    case ClassLabel::Q01: return "|01>";
    case ClassLabel::OneAny: return "|1?>";
    case ClassLabel::ErrAGroup: return "err_A-group";
    case ClassLabel::Inconsistent: return "inconsistent";
  }
  return "?";
}

ClassLabel classify_sequence(const ReadoutRecord& r) {
  auto lab = [&](std::size_t i) { return r.windows.at(i).label; };
  const auto H = WindowLabel::High, L = WindowLabel::Low;
  if (r.kind == SequenceKind::SingleAtom) {
    if (r.windows.size() != 2)
      throw std::invalid_argument("classify_sequence: single-atom record needs 2 windows");
    if (lab(0) == H && lab(1) == L) return ClassLabel::Q0;
    if (lab(0) == L && lab(1) == L) return ClassLabel::Q1;
    if (lab(0) == H && lab(1) == H) return ClassLabel::Err;
    return ClassLabel::Inconsistent; // (L, H): a coupled atom cannot uncouple
  }
  if (r.windows.size() != 3)
    throw std::invalid_argument("classify_sequence: two-atom record needs 3 windows");
  // Windows 2 and 3 are the single-atom sequence on atom A.
  ClassLabel a;
  if (lab(1) == H && lab(2) == L) a = ClassLabel::Q0;
  else if (lab(1) == L && lab(2) == L) a = ClassLabel::Q1;
  else if (lab(1) == H && lab(2) == H) a = ClassLabel::Err;
  else return ClassLabel::Inconsistent;

  if (a == ClassLabel::Err) return ClassLabel::ErrAGroup;
  if (a == ClassLabel::Q1) {
    // Atom A blocked the first readout; atom B unresolved.
    return lab(0) == L ? ClassLabel::OneAny : ClassLabel::Inconsistent;
  }
  // Atom A uncoupled in the first window: its result reflects atom B.
  return lab(0) == H ? ClassLabel::Q00 : ClassLabel::Q01;
}

std::vector<int> simulate_windows(bool coupled, const ThresholdModel& m,
                                  std::int64_t n_windows, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<int> out;
  out.reserve(n_windows);
  double mu = coupled ? m.mu_low : m.mu_high;
  for (std::int64_t i = 0; i < n_windows; ++i) out.push_back(poisson_draw(mu, rng));
  return out;
}

} // namespace cavitysim
