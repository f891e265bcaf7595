#pragma once

#include <cmath>
#include <sstream>
#include <string>

#include "znd/errors.hpp"

namespace znd {

/// Validated parameter set of a strong detonation.
///
/// A wave is described by the quiescent state u_plus ahead of the shock, the
/// pre-shock peak u_star, the heat release q, the reaction rate k and the
/// ignition threshold u_i.  The wave speed s = (u_plus + u_star)/2 and the
/// burned end state u_minus = s + sqrt((s-u_plus)^2 - 2qs) are derived.
/// Instances are immutable; share freely across threads.
class DetonationParams {
 public:
  static DetonationParams build(double u_plus, double u_star, double q,
                                double k, double u_i);

  /// Bypasses validation.  For diagnostics and tests that need to probe
  /// deliberately corrupted parameter sets; never use on real input.
  static DetonationParams unchecked(double u_plus, double u_star, double q,
                                    double k, double u_i, double s,
                                    double u_minus) {
    DetonationParams p;
    p.u_plus_ = u_plus;
    p.u_star_ = u_star;
    p.q_ = q;
    p.k_ = k;
    p.u_i_ = u_i;
    p.s_ = s;
    p.u_minus_ = u_minus;
    return p;
  }

  double u_plus() const { return u_plus_; }
  double u_star() const { return u_star_; }
  double q() const { return q_; }
  double k() const { return k_; }
  double u_i() const { return u_i_; }
  double s() const { return s_; }
  double u_minus() const { return u_minus_; }

  /// u_minus - s = sqrt((s-u_plus)^2 - 2qs), the decay-rate denominator of
  /// the burned end state.  Strictly positive for admissible parameters.
  double c_minus() const { return u_minus_ - s_; }

  /// Shock strength u_star - u_plus.
  double delta_u() const { return u_star_ - u_plus_; }

 private:
  DetonationParams() = default;
  double u_plus_ = 0, u_star_ = 0, q_ = 0, k_ = 0, u_i_ = 0, s_ = 0,
         u_minus_ = 0;
};

/// Upper admissible heat release (u_star - s)^2 / (2s) for the given states.
inline double q_max(double u_plus, double u_star) {
  if (!(std::isfinite(u_plus) && std::isfinite(u_star)))
    throw DomainError("q_max: non-finite input");
  const double s = 0.5 * (u_plus + u_star);
  if (!(0.0 <= u_plus && u_plus < u_star) || !(s > 0.0)) {
    std::ostringstream os;
    os << "q_max: requires 0 <= u_plus < u_star with s > 0, got u_plus="
       << u_plus << ", u_star=" << u_star;
    throw DomainError(os.str());
  }
  const double d = u_star - s;
  return d * d / (2.0 * s);
}

inline DetonationParams DetonationParams::build(double u_plus, double u_star,
                                                double q, double k,
                                                double u_i) {
  auto fail = [&](const std::string& what) {
    std::ostringstream os;
    os << "inadmissible parameters (" << what << "): u_plus=" << u_plus
       << " u_star=" << u_star << " q=" << q << " k=" << k << " u_i=" << u_i;
    throw AdmissibilityError(os.str());
  };

  if (!(std::isfinite(u_plus) && std::isfinite(u_star) && std::isfinite(q) &&
        std::isfinite(k) && std::isfinite(u_i)))
    fail("non-finite input");

  const double s = 0.5 * (u_plus + u_star);
  if (!(u_plus >= 0.0)) fail("Lax order requires u_plus >= 0");
  if (!(u_plus < s && s < u_star))
    fail("Lax order requires u_plus < s < u_star");
  if (!(k > 0.0)) fail("reaction rate requires k > 0");

  const double qm = (u_star - s) * (u_star - s) / (2.0 * s);
  if (!(q > 0.0 && q < qm)) {
    std::ostringstream os;
    os << "q range requires 0 < q < (u_star-s)^2/(2s) = " << qm;
    fail(os.str());
  }

  // (s - u_plus)^2 - 2qs > 0 strictly, by q < q_max.
  const double c2 = (s - u_plus) * (s - u_plus) - 2.0 * q * s;
  const double u_minus = s + std::sqrt(c2);
  if (!(s < u_minus && u_minus < u_star))
    fail("derived state requires s < u_minus < u_star");
  if (!(u_plus < u_i && u_i < u_minus))
    fail("ignition placement requires u_plus < u_i < u_minus");

  DetonationParams p;
  p.u_plus_ = u_plus;
  p.u_star_ = u_star;
  p.q_ = q;
  p.k_ = k;
  p.u_i_ = u_i;
  p.s_ = s;
  p.u_minus_ = u_minus;
  return p;
}

inline DetonationParams build_params(double u_plus, double u_star, double q,
                                     double k, double u_i) {
  return DetonationParams::build(u_plus, u_star, q, k, u_i);
}

/// Step ignition function: 0 below the threshold, 1 at and above it.
/// The value exactly at u_i is never reached by an admissible profile
/// (which only visits [u_minus, u_star] and u_plus); 1 keeps it total.
inline double ignition(const DetonationParams& p, double u) {
  return u < p.u_i() ? 0.0 : 1.0;
}

}  // namespace znd
