#include "cavitysim/atomic_data.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace cavitysim {

namespace {

// Exact factorials as long double; arguments here never exceed ~20.
long double fact(int n) {
  static const auto table = [] {
    std::array<long double, 41> t{};
    t[0] = 1.0L;
    for (int i = 1; i <= 40; ++i) t[i] = t[i - 1] * i;
    return t;
  }();
  if (n < 0) throw std::invalid_argument("negative factorial");
  return table[static_cast<std::size_t>(n)];
}

bool triangle_ok(int two_a, int two_b, int two_c) {
  return two_c >= std::abs(two_a - two_b) && two_c <= two_a + two_b &&
         (two_a + two_b + two_c) % 2 == 0;
}

long double triangle_coeff(int two_a, int two_b, int two_c) {
  return std::sqrt(fact((two_a + two_b - two_c) / 2) *
                   fact((two_a - two_b + two_c) / 2) *
                   fact((-two_a + two_b + two_c) / 2) /
                   fact((two_a + two_b + two_c) / 2 + 1));
}

} // namespace

double wigner3j(int two_j1, int two_j2, int two_j3, int two_m1, int two_m2,
                int two_m3) {
  if (two_m1 + two_m2 + two_m3 != 0) return 0.0;
  if (!triangle_ok(two_j1, two_j2, two_j3)) return 0.0;
  if (std::abs(two_m1) > two_j1 || std::abs(two_m2) > two_j2 ||
      std::abs(two_m3) > two_j3)
    return 0.0;
  if ((two_j1 + two_m1) % 2 || (two_j2 + two_m2) % 2 || (two_j3 + two_m3) % 2)
    return 0.0;

  // Racah sum over k (all arguments in doubled-integer units / 2).
  const int a1 = (two_j3 - two_j2 + two_m1) / 2;
  const int a2 = (two_j3 - two_j1 - two_m2) / 2;
  const int b1 = (two_j1 + two_j2 - two_j3) / 2;
  const int b2 = (two_j1 - two_m1) / 2;
  const int b3 = (two_j2 + two_m2) / 2;
  const int kmin = std::max({0, -a1, -a2});
  const int kmax = std::min({b1, b2, b3});
  long double sum = 0.0L;
  for (int k = kmin; k <= kmax; ++k) {
    long double term = fact(k) * fact(b1 - k) * fact(b2 - k) * fact(b3 - k) *
                       fact(a1 + k) * fact(a2 + k);
    sum += ((k % 2) ? -1.0L : 1.0L) / term;
  }
  long double pref =
      triangle_coeff(two_j1, two_j2, two_j3) *
      std::sqrt(fact((two_j1 + two_m1) / 2) * fact((two_j1 - two_m1) / 2) *
                fact((two_j2 + two_m2) / 2) * fact((two_j2 - two_m2) / 2) *
                fact((two_j3 + two_m3) / 2) * fact((two_j3 - two_m3) / 2));
  int phase_exp = (two_j1 - two_j2 - two_m3) / 2;
  long double phase = (((phase_exp % 2) + 2) % 2) ? -1.0L : 1.0L;
  return static_cast<double>(phase * pref * sum);
}

double wigner6j(int two_j1, int two_j2, int two_j3, int two_j4, int two_j5,
                int two_j6) {
  if (!triangle_ok(two_j1, two_j2, two_j3) ||
      !triangle_ok(two_j1, two_j5, two_j6) ||
      !triangle_ok(two_j4, two_j2, two_j6) ||
      !triangle_ok(two_j4, two_j5, two_j3))
    return 0.0;
  const int t1 = (two_j1 + two_j2 + two_j3) / 2;
  const int t2 = (two_j1 + two_j5 + two_j6) / 2;
  const int t3 = (two_j4 + two_j2 + two_j6) / 2;
  const int t4 = (two_j4 + two_j5 + two_j3) / 2;
  const int q1 = (two_j1 + two_j2 + two_j4 + two_j5) / 2;
  const int q2 = (two_j2 + two_j3 + two_j5 + two_j6) / 2;
  const int q3 = (two_j3 + two_j1 + two_j6 + two_j4) / 2;
  const int kmin = std::max({t1, t2, t3, t4});
  const int kmax = std::min({q1, q2, q3});
  long double sum = 0.0L;
  for (int k = kmin; k <= kmax; ++k) {
    long double term = fact(k + 1) /
                       (fact(k - t1) * fact(k - t2) * fact(k - t3) *
                        fact(k - t4) * fact(q1 - k) * fact(q2 - k) *
                        fact(q3 - k));
    sum += ((k % 2) ? -1.0L : 1.0L) * term;
  }
  long double pref = triangle_coeff(two_j1, two_j2, two_j3) *
                     triangle_coeff(two_j1, two_j5, two_j6) *
                     triangle_coeff(two_j4, two_j2, two_j6) *
                     triangle_coeff(two_j4, two_j5, two_j3);
  return static_cast<double>(pref * sum);
}

double clebsch_gordan(int two_j1, int two_m1, int two_j2, int two_m2,
                      int two_j, int two_m) {
  if (two_m1 + two_m2 != two_m) return 0.0;
  int phase_exp = (two_j1 - two_j2 + two_m) / 2;
  double phase = (((phase_exp % 2) + 2) % 2) ? -1.0 : 1.0;
  return phase * std::sqrt(two_j + 1.0) *
         wigner3j(two_j1, two_j2, two_j, two_m1, two_m2, -two_m);
}

bool HyperfineLevel::valid() const {
  if (std::abs(mF) > F) return false;
  if (manifold == Manifold::Ground) return F == 1 || F == 2;
  return F >= 0 && F <= 3;
}

// S_{F F'} = (2F+1)(2J'+1) {J J' 1; F' F I}^2 with J=1/2, J'=3/2, I=3/2.
double manifold_branching(int Fp, int F) {
  const int two_J = 1, two_Jp = 3, two_I = 3;
  double sixj = wigner6j(two_J, two_Jp, 2, 2 * Fp, 2 * F, two_I);
  return (2 * F + 1) * (two_Jp + 1) * sixj * sixj;
}

std::vector<DecayChannel> branching_fractions(const HyperfineLevel& excited) {
  if (excited.manifold != Manifold::Excited || !excited.valid())
    throw std::invalid_argument("branching_fractions: not a valid D2 excited level");
  std::vector<DecayChannel> out;
  for (int F = 1; F <= 2; ++F) {
    double sff = manifold_branching(excited.F, F);
    for (int mF = -F; mF <= F; ++mF) {
      int q = mF - excited.mF;
      if (std::abs(q) > 1) continue;
      // fraction = S_{FF'} (2F'+1) [3j(F' 1 F; mF' q -mF)]^2
      double threej =
          wigner3j(2 * excited.F, 2, 2 * F, 2 * excited.mF, 2 * q, -2 * mF);
      double frac = sff * (2 * excited.F + 1) * threej * threej;
      if (frac > 0)
        out.push_back({{Manifold::Ground, F, mF, 0.0}, q, frac});
    }
  }
  return out;
}

std::pair<double, double> detectability_split(
    const HyperfineLevel& excited,
    const std::set<HyperfineLevel>& detectable_set) {
  double det = 0.0, nondet = 0.0;
  for (const auto& ch : branching_fractions(excited)) {
    if (detectable_set.count(ch.ground))
      det += ch.fraction;
    else
      nondet += ch.fraction;
  }
  return {det, nondet};
}

std::set<HyperfineLevel> paper_detectable_set() {
  return {{Manifold::Ground, 1, -1, 0.0}, {Manifold::Ground, 1, +1, 0.0}};
}

BranchingAggregates branching_aggregates(bool recycle_elastic) {
  auto split = [&](int Fp, const HyperfineLevel& elastic_target) {
    HyperfineLevel exc{Manifold::Excited, Fp, 0, 0.0};
    double det = 0.0, nondet = 0.0, elastic = 0.0;
    auto detset = paper_detectable_set();
    for (const auto& ch : branching_fractions(exc)) {
      if (ch.ground == elastic_target)
        elastic += ch.fraction;
      else if (detset.count(ch.ground))
        det += ch.fraction;
      else
        nondet += ch.fraction;
    }
    if (recycle_elastic) {
      double rest = det + nondet;
      det /= rest;
      nondet /= rest;
    } else {
      nondet += elastic; // elastic reads like |1>: undetectable
    }
    return std::pair{det, nondet};
  };
  // Both driven transitions start from qubit |1> = |2,0>.
  const HyperfineLevel one{Manifold::Ground, 2, 0, 0.0};
  auto [gd, gnd] = split(1, one);
  auto [g3d, g3nd] = split(3, one);
  return {gd, gnd, g3d, g3nd};
}

} // namespace cavitysim
