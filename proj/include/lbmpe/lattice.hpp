#pragma once

// D3Q19 discrete-velocity model and the per-cell BGK physics.
//
// Direction ordering is fixed: the rest direction first, then the six axis
// directions, then the twelve diagonals, each group sorted lexicographically
// by (ex, ey, ez). With this ordering opposite directions mirror each other
// inside their group, e.g. opposite(1) == 6 and opposite(7) == 18.
//
// All physics routines are templates over the value type so that the same
// expression tree serves float, double and instrumented number types.

#include <array>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

namespace lbmpe {

inline constexpr int kQ = 19;

using Velocity = std::array<int, 3>;

template <typename T>
using Pdfs = std::array<T, kQ>;

template <typename T>
struct Vec3 {
  T x{}, y{}, z{};
};

struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  template <typename T>
  constexpr T as() const {
    return static_cast<T>(static_cast<double>(num) / static_cast<double>(den));
  }
};

/// Runtime description of a discrete-velocity stencil. The compile-time
/// D3Q19 tables below are generated from `d3q19()`; a copy can be perturbed
/// and checked with `stencil_violations` to exercise the invariant checks.
struct LatticeModel {
  std::array<Velocity, kQ> velocities{};
  std::array<Rational, kQ> weights{};
  std::array<int, kQ> opposite{};
};

constexpr LatticeModel d3q19() {
  LatticeModel m{};
  m.velocities[0] = {0, 0, 0};
  m.weights[0] = {1, 3};
  int k = 1;
  // axis directions, then diagonals; lexicographic within each group
  for (int norm : {1, 2}) {
    for (int ex = -1; ex <= 1; ++ex) {
      for (int ey = -1; ey <= 1; ++ey) {
        for (int ez = -1; ez <= 1; ++ez) {
          if (ex * ex + ey * ey + ez * ez != norm) continue;
          m.velocities[k] = {ex, ey, ez};
          m.weights[k] = norm == 1 ? Rational{1, 18} : Rational{1, 36};
          ++k;
        }
      }
    }
  }
  for (int i = 0; i < kQ; ++i) {
    for (int j = 0; j < kQ; ++j) {
      const auto& a = m.velocities[i];
      const auto& b = m.velocities[j];
      if (a[0] == -b[0] && a[1] == -b[1] && a[2] == -b[2]) m.opposite[i] = j;
    }
  }
  return m;
}

inline constexpr LatticeModel kD3Q19 = d3q19();

constexpr const Velocity& velocity(int i) { return kD3Q19.velocities[i]; }
constexpr int opposite(int i) { return kD3Q19.opposite[i]; }

template <typename T>
constexpr T weight(int i) {
  return kD3Q19.weights[i].template as<T>();
}

/// Names of the stencil invariants that `model` violates; empty when valid.
inline std::vector<std::string> stencil_violations(const LatticeModel& model) {
  std::vector<std::string> failed;
  std::int64_t num = 0;
  std::int64_t den = 1;
  std::array<std::int64_t, 3> mom_num{0, 0, 0};
  for (int i = 0; i < kQ; ++i) {
    const Rational w = model.weights[i];
    const std::int64_t old_den = den;
    num = num * w.den + w.num * den;
    den *= w.den;
    for (int c = 0; c < 3; ++c) {
      mom_num[c] = mom_num[c] * w.den + w.num * model.velocities[i][c] * old_den;
    }
  }
  if (num != den) failed.emplace_back("weights_sum_to_one");
  if (mom_num[0] != 0 || mom_num[1] != 0 || mom_num[2] != 0) {
    failed.emplace_back("first_weighted_moment_zero");
  }

  int rest = 0;
  std::array<int, 3> norm_counts{0, 0, 0};
  bool opposite_ok = true;
  bool symmetric = true;
  bool norms_ok = true;
  for (int i = 0; i < kQ; ++i) {
    const auto& e = model.velocities[i];
    const int n2 = e[0] * e[0] + e[1] * e[1] + e[2] * e[2];
    if (n2 > 2) {
      norms_ok = false;
    } else {
      ++norm_counts[n2];
    }
    if (n2 == 0) {
      ++rest;
      if (model.opposite[i] != i) opposite_ok = false;
    }
    const int j = model.opposite[i];
    if (j < 0 || j >= kQ) {
      opposite_ok = false;
      continue;
    }
    const auto& o = model.velocities[j];
    if (model.opposite[j] != i || o[0] != -e[0] || o[1] != -e[1] || o[2] != -e[2]) {
      opposite_ok = false;
    }
    const Rational wi = model.weights[i];
    const Rational wj = model.weights[j];
    if (wi.num * wj.den != wj.num * wi.den) symmetric = false;
  }
  if (rest != 1) failed.emplace_back("single_rest_direction");
  if (!norms_ok || norm_counts != std::array<int, 3>{1, 6, 12}) {
    failed.emplace_back("speed_shell_counts");
  }
  if (!opposite_ok) failed.emplace_back("opposite_involution");
  if (!symmetric) failed.emplace_back("weight_symmetry");
  return failed;
}

template <typename T>
struct Macroscopics {
  T rho{};
  Vec3<T> momentum{};  // bare first moment, sum_i f_i e_i
  Vec3<T> u{};         // momentum / rho, zero when rho == 0
};

struct RelaxationParams {
  double tau = 0.6;

  explicit RelaxationParams(double relaxation_time = 0.6) : tau(relaxation_time) {
    if (!(tau > 0.5)) {
      throw std::invalid_argument("relaxation time must exceed 0.5, got " + std::to_string(tau));
    }
  }

  template <typename T>
  T omega() const {
    return T(1) / static_cast<T>(tau);
  }
};

namespace detail {

// Indices of directions with e[c] == sign, in table order.
constexpr std::array<int, 5> component_directions(int c, int sign) {
  std::array<int, 5> out{};
  int k = 0;
  for (int i = 0; i < kQ; ++i) {
    if (kD3Q19.velocities[i][c] == sign) out[k++] = i;
  }
  return out;
}

template <int C>
inline constexpr std::array<int, 5> kPositive = component_directions(C, 1);
template <int C>
inline constexpr std::array<int, 5> kNegative = component_directions(C, -1);

template <int C, typename T>
constexpr T first_moment(const Pdfs<T>& f) {
  constexpr auto& p = kPositive<C>;
  constexpr auto& n = kNegative<C>;
  return (f[p[0]] + f[p[1]] + f[p[2]] + f[p[3]] + f[p[4]]) -
         (f[n[0]] + f[n[1]] + f[n[2]] + f[n[3]] + f[n[4]]);
}

// e_i . u using only the nonzero components of e_i.
template <int I, typename T>
constexpr T project(const Vec3<T>& u) {
  constexpr Velocity e = kD3Q19.velocities[I];
  constexpr int nonzero = (e[0] != 0) + (e[1] != 0) + (e[2] != 0);
  const T comps[3] = {u.x, u.y, u.z};
  if constexpr (nonzero == 1) {
    constexpr int c = e[0] != 0 ? 0 : (e[1] != 0 ? 1 : 2);
    return comps[c];  // the sign is applied by the caller's pairing
  } else {
    constexpr int a = e[0] != 0 ? 0 : 1;
    constexpr int b = e[2] != 0 ? 2 : 1;
    if constexpr (e[a] == e[b]) {
      return comps[a] + comps[b];
    } else {
      return comps[a] - comps[b];
    }
  }
}

// Sign that turns project<I> into e_I . u for the axis directions.
template <int I>
constexpr int projection_sign() {
  constexpr Velocity e = kD3Q19.velocities[I];
  constexpr int nonzero = (e[0] != 0) + (e[1] != 0) + (e[2] != 0);
  if constexpr (nonzero == 1) {
    return e[0] + e[1] + e[2];
  } else {
    constexpr int a = e[0] != 0 ? 0 : 1;
    return e[a];
  }
}

}  // namespace detail

/// rho = sum f_i, momentum = sum f_i e_i, u = momentum / rho.
template <typename T>
constexpr Macroscopics<T> moments(const Pdfs<T>& f) {
  Macroscopics<T> m;
  m.rho = f[0] + f[1] + f[2] + f[3] + f[4] + f[5] + f[6] + f[7] + f[8] + f[9] + f[10] + f[11] +
          f[12] + f[13] + f[14] + f[15] + f[16] + f[17] + f[18];
  m.momentum.x = detail::first_moment<0>(f);
  m.momentum.y = detail::first_moment<1>(f);
  m.momentum.z = detail::first_moment<2>(f);
  if (m.rho != T(0)) {
    const T inv_rho = T(1) / m.rho;
    m.u = {m.momentum.x * inv_rho, m.momentum.y * inv_rho, m.momentum.z * inv_rho};
  }
  return m;
}

/// Second-order equilibrium
///   f_i^eq = w_i rho (1 + 3 e.u + 9/2 (e.u)^2 - 3/2 u.u)
/// evaluated pairwise: f_i and f_opp(i) share the even part and differ in
/// the sign of the odd part 3 w_i rho (e_i.u).
template <typename T>
constexpr Pdfs<T> equilibrium(T rho, const Vec3<T>& u) {
  constexpr T w_rest = weight<T>(0);
  constexpr T w_axis = weight<T>(1);
  constexpr T w_diag = weight<T>(7);

  const T base = T(1) - T(1.5) * (u.x * u.x + u.y * u.y + u.z * u.z);
  const T wr_axis = w_axis * rho;
  const T wr_diag = w_diag * rho;
  const T wr3_axis = T(3) * wr_axis;
  const T wr3_diag = T(3) * wr_diag;

  Pdfs<T> feq{};
  feq[0] = w_rest * rho * base;

  auto pair = [&]<int I>(std::integral_constant<int, I>, T wr, T wr3) {
    constexpr int J = opposite(I);
    constexpr int s = detail::projection_sign<I>();
    const T eu = detail::project<I>(u);
    const T even = wr * (base + T(4.5) * (eu * eu));
    const T odd = wr3 * eu;
    if constexpr (s > 0) {
      feq[I] = even + odd;
      feq[J] = even - odd;
    } else {
      feq[I] = even - odd;
      feq[J] = even + odd;
    }
  };
  // one representative per opposite pair: indices 1..3 and 7..12
  pair(std::integral_constant<int, 1>{}, wr_axis, wr3_axis);
  pair(std::integral_constant<int, 2>{}, wr_axis, wr3_axis);
  pair(std::integral_constant<int, 3>{}, wr_axis, wr3_axis);
  pair(std::integral_constant<int, 7>{}, wr_diag, wr3_diag);
  pair(std::integral_constant<int, 8>{}, wr_diag, wr3_diag);
  pair(std::integral_constant<int, 9>{}, wr_diag, wr3_diag);
  pair(std::integral_constant<int, 10>{}, wr_diag, wr3_diag);
  pair(std::integral_constant<int, 11>{}, wr_diag, wr3_diag);
  pair(std::integral_constant<int, 12>{}, wr_diag, wr3_diag);
  return feq;
}

template <typename T>
constexpr Pdfs<T> equilibrium(const Macroscopics<T>& m) {
  return equilibrium(m.rho, m.u);
}

/// BGK relaxation with a precomputed rate omega = 1/tau.
template <typename T>
constexpr Pdfs<T> bgk_collide(const Pdfs<T>& f, T omega) {
  const Macroscopics<T> m = moments(f);
  const Pdfs<T> feq = equilibrium(m.rho, m.u);
  Pdfs<T> out;
  for (int i = 0; i < kQ; ++i) out[i] = f[i] - omega * (f[i] - feq[i]);
  return out;
}

template <typename T>
Pdfs<T> bgk_collide(const Pdfs<T>& f, const RelaxationParams& p) {
  return bgk_collide(f, p.template omega<T>());
}

/// Plain closed-form equilibrium on an arbitrary runtime model. Used by the
/// verification suite, where the model may have been deliberately perturbed.
inline std::array<double, kQ> equilibrium_reference(const LatticeModel& model, double rho,
                                                    const Vec3<double>& u) {
  std::array<double, kQ> feq{};
  const double uu = u.x * u.x + u.y * u.y + u.z * u.z;
  for (int i = 0; i < kQ; ++i) {
    const auto& e = model.velocities[i];
    const double eu = e[0] * u.x + e[1] * u.y + e[2] * u.z;
    feq[i] = model.weights[i].as<double>() * rho * (1.0 + 3.0 * eu + 4.5 * eu * eu - 1.5 * uu);
  }
  return feq;
}

/// Floating-point operations executed per fluid cell update by
/// `bgk_collide` (moments, equilibrium and relaxation). Checked against an
/// instrumented instantiation in the tests.
inline constexpr int kFlopsPerCellUpdate = 188;

}  // namespace lbmpe
