#pragma once

#include <cmath>

#include "opfrelax/formulations.hpp"

namespace opfrelax::detail {

/// Flow k of a branch as a linear function of the lifted voltage products:
/// f = wii W_ii + wjj W_jj + wr Re W_ij + wi Im W_ij, W_ij = V_i conj(V_j).
struct WFlow {
  double wii, wjj, wr, wi;
};

inline WFlow w_flow(const Branch& br, int k) {
  const auto f = AcOpfProgram::flow_coefficients(br, k);
  const double c = std::cos(br.tap_shift), s = std::sin(br.tap_shift);
  // vi vj cos d = Re W cos t + Im W sin t;  vi vj sin d = Im W cos t - Re W sin t
  return {f.a, f.b, f.c * c - f.s * s, f.c * s + f.s * c};
}

}  // namespace opfrelax::detail
