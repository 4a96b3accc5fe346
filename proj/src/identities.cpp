#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <stdexcept>

#include "opfrelax/analysis.hpp"

namespace opfrelax {

double optimality_gap(double heuristic, double bound) {
  if (!(heuristic > 0)) throw std::invalid_argument("optimality gap needs a positive heuristic value");
  return 100.0 * (heuristic - bound) / heuristic;
}

double IdentityCheck::max_error() const { return *std::max_element(std::begin(error), std::end(error)); }

IdentitySample random_identity_sample(std::mt19937_64& rng, bool extended) {
  std::uniform_real_distribution<double> mag(0.9, 1.1), ang(-0.5, 0.5), r(0.001, 0.1), x(0.01, 1.0);
  IdentitySample s;
  s.vi = std::polar(mag(rng), ang(rng));
  s.vj = std::polar(mag(rng), ang(rng));
  s.z = {r(rng), x(rng)};
  if (extended) {
    std::uniform_real_distribution<double> shift(-5 * kPi / 180, 5 * kPi / 180), bc(0.0, 0.7);
    const double t = mag(rng);
    s.tap = std::polar(t, shift(rng));
    s.b_charge = bc(rng);
  }
  return s;
}

namespace {

// |sum| / sum |term|; zero when every term is zero.
double mismatch(std::initializer_list<Complex> terms) {
  Complex sum = 0;
  double scale = 0;
  for (Complex t : terms) {
    sum += t;
    scale += std::abs(t);
  }
  return scale > 0 ? std::abs(sum) / scale : 0.0;
}

}  // namespace

IdentityCheck check_lemma1(const IdentitySample& s, bool extended) {
  const Complex T = extended ? s.tap : Complex(1, 0);
  const double bc = extended ? s.b_charge : 0.0;
  const double beta = bc / 2, t2 = std::norm(T);
  const Complex Z = s.z, Y = 1.0 / Z;
  const double y2 = std::norm(Y), z2 = std::norm(Z);

  // Raw quantities straight from the voltages.
  const Complex vt = s.vi / T;
  const Complex I = Y * (vt - s.vj) + Complex(0, beta) * vt;
  const Complex S = vt * std::conj(I);
  const double l = std::norm(I);
  const double wii = std::norm(s.vi), wjj = std::norm(s.vj);
  const Complex wij = s.vi * std::conj(s.vj);
  const Complex a = wij / T;  // W_ij / T

  IdentityCheck out;
  // |S|^2 = |Y|^2 (W_ii^2/t^4 - W_ii/t^2 (a + a^*) + |W_ij|^2/t^2) - beta^2 W_ii^2/t^4 - b W_ii/t^2 Im S
  out.error[0] = mismatch({-std::norm(S), y2 * wii * wii / (t2 * t2), -y2 * wii / t2 * (a + std::conj(a)),
                           y2 * std::norm(wij) / t2, -beta * beta * wii * wii / (t2 * t2), -bc * wii / t2 * S.imag()});
  // |W_ij|^2 = (1 - b Im Z) W_ii^2/t^2 - W_ii (Z^* S + Z S^*) + |Z|^2 (t^2 |S|^2 + beta^2 W_ii^2/t^2 + b W_ii Im S)
  out.error[1] = mismatch({-std::norm(wij), (1 - bc * Z.imag()) * wii * wii / t2, -wii * std::conj(Z) * S,
                           -wii * Z * std::conj(S), z2 * t2 * std::norm(S), z2 * beta * beta * wii * wii / t2,
                           z2 * bc * wii * S.imag()});
  // l = |Y|^2 (W_ii/t^2 - a - a^* + W_jj) - beta^2 W_ii/t^2 - b Im S
  out.error[2] = mismatch({-l, y2 * wii / t2, -y2 * a, -y2 * std::conj(a), y2 * wjj, -beta * beta * wii / t2,
                           -bc * S.imag()});
  // W_jj = (1 - b Im Z) W_ii/t^2 - Z^* S - Z S^* + |Z|^2 (l + beta^2 W_ii/t^2 + b Im S)
  out.error[3] = mismatch({-wjj, (1 - bc * Z.imag()) * wii / t2, -std::conj(Z) * S, -Z * std::conj(S), z2 * l,
                           z2 * beta * beta * wii / t2, z2 * bc * S.imag()});
  return out;
}

double lemma1_suite(int samples, std::uint64_t seed, bool extended, double perturb) {
  std::mt19937_64 rng(seed);
  double worst = 0;
  for (int k = 0; k < samples; ++k) {
    IdentitySample s = random_identity_sample(rng, extended);
    IdentityCheck c = check_lemma1(s, extended);
    worst = std::max(worst, c.max_error() + perturb);
  }
  return worst;
}

}  // namespace opfrelax
