#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace opfrelax {

/// coef_x2 * x^2 + coef_x * x + coef_y * y + coef_aux * aux <= rhs.
/// coef_x2 is never negative, so every cut is convex.
struct EnvelopeCut {
  double coef_x2 = 0;
  double coef_x = 0;
  double coef_y = 0;
  double coef_aux = 0;
  double rhs = 0;
};

/// Convex outer approximation of aux = f(x) or aux = x * y over a box.
struct EnvelopeSet {
  std::string kind;  // "square", "mccormick", "sine", "cosine"
  int aux_variable = -1;
  double aux_lo = 0;
  double aux_hi = 0;
  double x_lo = 0;
  double x_hi = 0;
  double y_lo = 0;
  double y_hi = 0;
  std::vector<EnvelopeCut> cuts;

  /// Largest positive cut or aux-bound violation at (x, y, aux); 0 if inside.
  double violation(double x, double y, double aux) const;
  /// Feasible aux interval at fixed (x, y); empty when lo > hi.
  std::pair<double, double> aux_range(double x, double y = 0) const;
};

/// x^2 over [x_lo, x_hi].
EnvelopeSet square_envelope(double x_lo, double x_hi);
/// x * y over a box.
EnvelopeSet mccormick(double x_lo, double x_hi, double y_lo, double y_hi);
/// sin(x) over [-theta_bound, theta_bound], 0 < theta_bound <= pi/2.
EnvelopeSet sine_envelope(double theta_bound);
/// cos(x) over [-theta_bound, theta_bound], 0 < theta_bound <= pi/2.
EnvelopeSet cosine_envelope(double theta_bound);
/// McCormick over the aux variables of a and b, using their aux bounds.
EnvelopeSet compose_product(const EnvelopeSet& a, const EnvelopeSet& b);

void write_cuts_csv(std::ostream& out, const EnvelopeSet& env);

}  // namespace opfrelax
