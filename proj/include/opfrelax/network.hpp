#pragma once

#include <complex>
#include <limits>
#include <numbers>
#include <string>
#include <unordered_map>
#include <vector>

namespace opfrelax {

using Complex = std::complex<double>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kPi = std::numbers::pi;

/// Angle-difference bound used when a case carries none. It is the largest
/// value strictly inside (0, pi/2], which keeps the trigonometric envelopes valid.
inline constexpr double kDefaultAngleBound = kPi / 2 * (1 - 1e-6);

/// All electrical quantities are per-unit on the network MVA base; voltages
/// in p.u., angles in radians.
struct Bus {
  int id = 0;
  double v_min = 0.9;
  double v_max = 1.1;
  double shunt_g = 0;  // Y^s = g + ib, consumed as conj(Y^s)|V|^2
  double shunt_b = 0;
  double p_load = 0;
  double q_load = 0;
};

/// Cost coefficients are applied to MW (not p.u.): c2*P^2 + c1*P + c0 in $/h.
struct Generator {
  int bus = 0;
  double p_min = 0;
  double p_max = kInf;
  double q_min = -kInf;
  double q_max = kInf;
  double c2 = 0;
  double c1 = 0;
  double c0 = 0;
};

/// Pi-model line with an ideal transformer T = tap_mag * exp(i tap_shift) on
/// the from side.
struct Branch {
  int from = 0;
  int to = 0;
  double r = 0;
  double x = 0;
  double b_charge = 0;
  double tap_mag = 1;
  double tap_shift = 0;
  double s_max = kInf;
  double angle_max = kDefaultAngleBound;
};

struct Network {
  std::string name;
  double base_mva = 100;
  int reference_bus = 0;
  std::vector<Bus> buses;
  std::vector<Generator> generators;
  std::vector<Branch> branches;
};

enum class Severity { Error, Warning };

struct Violation {
  Severity severity = Severity::Error;
  std::string message;
};

/// Checks every type invariant. Never throws; an empty result means the
/// network is usable by the builders. Disconnected networks yield a warning.
std::vector<Violation> validate(const Network& net);

/// True when validate() reports no Error-severity entries.
bool is_valid(const Network& net);

/// Throws std::invalid_argument listing the errors, if any.
void require_valid(const Network& net);

/// Y = 1/Z. Throws std::domain_error on zero impedance.
Complex branch_admittance(const Branch& br);
Complex branch_impedance(const Branch& br);
Complex tap_ratio(const Branch& br);

Complex total_load(const Network& net);

/// Map from bus id to position in Network::buses. Throws on duplicates.
std::unordered_map<int, int> bus_positions(const Network& net);

double to_per_unit(double megawatts, double base_mva);
double to_megawatts(double per_unit, double base_mva);

/// Fuel cost in $/h for an injection given in p.u.
double generation_cost(const Generator& gen, double p_pu, double base_mva);

}  // namespace opfrelax
