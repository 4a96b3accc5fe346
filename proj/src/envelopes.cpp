#include "opfrelax/envelopes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "opfrelax/network.hpp"

namespace opfrelax {

namespace {

void require_ordered(double lo, double hi, const char* what) {
  if (!std::isfinite(lo) || !std::isfinite(hi)) throw std::invalid_argument(std::string(what) + ": bounds must be finite");
  if (lo > hi) throw std::invalid_argument(std::string(what) + ": lower bound exceeds upper bound");
}

void require_angle(double theta) {
  if (!(theta > 0) || theta > kPi / 2 * (1 + 1e-12))
    throw std::invalid_argument("angle bound outside (0, pi/2]");
}

}  // namespace

double EnvelopeSet::violation(double x, double y, double aux) const {
  double v = std::max({0.0, aux_lo - aux, aux - aux_hi});
  for (const EnvelopeCut& c : cuts) {
    const double lhs = c.coef_x2 * x * x + c.coef_x * x + c.coef_y * y + c.coef_aux * aux;
    v = std::max(v, lhs - c.rhs);
  }
  return v;
}

std::pair<double, double> EnvelopeSet::aux_range(double x, double y) const {
  double lo = aux_lo, hi = aux_hi;
  for (const EnvelopeCut& c : cuts) {
    const double rest = c.rhs - (c.coef_x2 * x * x + c.coef_x * x + c.coef_y * y);
    if (c.coef_aux > 0) hi = std::min(hi, rest / c.coef_aux);
    else if (c.coef_aux < 0) lo = std::max(lo, rest / c.coef_aux);
  }
  return {lo, hi};
}

EnvelopeSet square_envelope(double x_lo, double x_hi) {
  require_ordered(x_lo, x_hi, "square envelope");
  EnvelopeSet e;
  e.kind = "square";
  e.x_lo = x_lo;
  e.x_hi = x_hi;
  const double a = x_lo * x_lo, b = x_hi * x_hi;
  e.aux_lo = (x_lo <= 0 && x_hi >= 0) ? 0.0 : std::min(a, b);
  e.aux_hi = std::max(a, b);
  // x^2 - aux <= 0
  e.cuts.push_back({1.0, 0.0, 0.0, -1.0, 0.0});
  // aux - (x_hi + x_lo) x <= -x_hi x_lo
  e.cuts.push_back({0.0, -(x_hi + x_lo), 0.0, 1.0, -x_hi * x_lo});
  return e;
}

EnvelopeSet mccormick(double x_lo, double x_hi, double y_lo, double y_hi) {
  require_ordered(x_lo, x_hi, "McCormick x");
  require_ordered(y_lo, y_hi, "McCormick y");
  EnvelopeSet e;
  e.kind = "mccormick";
  e.x_lo = x_lo;
  e.x_hi = x_hi;
  e.y_lo = y_lo;
  e.y_hi = y_hi;
  const double c[4] = {x_lo * y_lo, x_lo * y_hi, x_hi * y_lo, x_hi * y_hi};
  e.aux_lo = *std::min_element(c, c + 4);
  e.aux_hi = *std::max_element(c, c + 4);
  // aux >= x_lo y + y_lo x - x_lo y_lo
  e.cuts.push_back({0.0, y_lo, x_lo, -1.0, x_lo * y_lo});
  // aux >= x_hi y + y_hi x - x_hi y_hi
  e.cuts.push_back({0.0, y_hi, x_hi, -1.0, x_hi * y_hi});
  // aux <= x_lo y + y_hi x - x_lo y_hi
  e.cuts.push_back({0.0, -y_hi, -x_lo, 1.0, -x_lo * y_hi});
  // aux <= x_hi y + y_lo x - x_hi y_lo
  e.cuts.push_back({0.0, -y_lo, -x_hi, 1.0, -x_hi * y_lo});
  return e;
}

EnvelopeSet sine_envelope(double theta_bound) {
  require_angle(theta_bound);
  EnvelopeSet e;
  e.kind = "sine";
  e.x_lo = -theta_bound;
  e.x_hi = theta_bound;
  e.aux_lo = -std::sin(theta_bound);
  e.aux_hi = std::sin(theta_bound);
  const double h = theta_bound / 2, ch = std::cos(h), sh = std::sin(h);
  // aux <= ch (x - h) + sh
  e.cuts.push_back({0.0, -ch, 0.0, 1.0, sh - ch * h});
  // aux >= ch (x + h) - sh
  e.cuts.push_back({0.0, ch, 0.0, -1.0, sh - ch * h});
  return e;
}

EnvelopeSet cosine_envelope(double theta_bound) {
  require_angle(theta_bound);
  EnvelopeSet e;
  e.kind = "cosine";
  e.x_lo = -theta_bound;
  e.x_hi = theta_bound;
  const double cu = std::max(0.0, std::cos(theta_bound));
  e.aux_lo = cu;
  e.aux_hi = 1.0;
  // aux + (1 - cos u)/u^2 x^2 <= 1
  e.cuts.push_back({(1 - cu) / (theta_bound * theta_bound), 0.0, 0.0, 1.0, 1.0});
  // aux >= cos u
  e.cuts.push_back({0.0, 0.0, 0.0, -1.0, -cu});
  return e;
}

EnvelopeSet compose_product(const EnvelopeSet& a, const EnvelopeSet& b) {
  if (!std::isfinite(a.aux_lo) || !std::isfinite(a.aux_hi) || !std::isfinite(b.aux_lo) || !std::isfinite(b.aux_hi))
    throw std::invalid_argument("compose_product: unbounded aux variable");
  return mccormick(a.aux_lo, a.aux_hi, b.aux_lo, b.aux_hi);
}

void write_cuts_csv(std::ostream& out, const EnvelopeSet& env) {
  const auto prec = out.precision(17);
  out << "kind,coef_x2,coef_x,coef_y,coef_aux,rhs\n";
  for (const EnvelopeCut& c : env.cuts)
    out << env.kind << ',' << c.coef_x2 << ',' << c.coef_x << ',' << c.coef_y << ',' << c.coef_aux << ',' << c.rhs
        << '\n';
  out.precision(prec);
}

}  // namespace opfrelax
