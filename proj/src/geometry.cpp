#include "covertplan/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

namespace covertplan {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double ratio2_at(const Vec2& q, const Vec2& q_b, const Vec2& q_w, double h2) {
  return ((q - q_b).norm2() + h2) / ((q - q_w).norm2() + h2);
}

/// Golden-section maximization on [a, b]; returns (argmax, max).
template <typename F>
std::pair<double, double> golden_max(F&& f, double a, double b, double tol) {
  constexpr double invphi = 0.6180339887498948482;
  double x1 = b - invphi * (b - a);
  double x2 = a + invphi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = f(x1);
    }
  }
  const double xm = 0.5 * (a + b);
  return {xm, f(xm)};
}

}  // namespace

ApolloniusLocus apollonius_locus(double k, const Vec2& q_b, const Vec2& q_w) {
  if (!(k > 0.0)) throw std::invalid_argument("apollonius_locus: k must be > 0");
  ApolloniusLocus loc;
  loc.ratio = k;
  if (k == 1.0) {
    loc.kind = ApolloniusLocus::Kind::bisector;
    loc.line_normal = q_w - q_b;
    loc.line_offset = 0.5 * dot(q_w + q_b, loc.line_normal);
  } else {
    loc.kind = ApolloniusLocus::Kind::sphere;
    const double k2 = k * k;
    loc.center = (q_w * k2 - q_b) / (k2 - 1.0);
    loc.radius = k * distance(q_b, q_w) / std::abs(k2 - 1.0);
  }
  return loc;
}

BisectorFoot bisector_projection(const Vec2& q, const Vec2& q_b,
                                 const Vec2& q_w) {
  const Vec2 n = q_w - q_b;
  const double nn = n.norm2();
  if (nn == 0.0)
    throw std::invalid_argument("bisector_projection: q_b == q_w");
  const double offset = 0.5 * dot(q_w + q_b, n);
  const double excess = (dot(n, q) - offset) / nn;
  return {q - n * excess, std::abs(excess) * std::sqrt(nn)};
}

Vec2 hover_point(const Vec2& q_b, const Vec2& q_w, double altitude) {
  const double c2 = (q_w - q_b).norm2();
  if (c2 == 0.0) throw std::invalid_argument("hover_point: q_b == q_w");
  // Stationary point of the ratio along the focal line: t(t-1)c^2 = H^2.
  const double t = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * altitude * altitude / c2));
  return q_b + (q_w - q_b) * t;
}

SlotMax max_ratio_in_disks(std::span<const DiskConstraint> disks,
                           const Vec2& q_b, const Vec2& q_w, double altitude) {
  if (disks.empty() || disks.size() > 2)
    throw std::invalid_argument("max_ratio_in_disks: expects 1 or 2 disks");
  const double h2 = altitude * altitude;
  const auto value = [&](const Vec2& q) { return ratio2_at(q, q_b, q_w, h2); };
  const auto feasible = [&](const Vec2& q) {
    for (const auto& d : disks)
      if (distance(q, d.center) > d.radius * (1.0 + 1e-12) + 1e-12) return false;
    return true;
  };

  struct Cand {
    Vec2 q;
    double val;
    bool interior;
  };
  std::vector<Cand> cands;
  cands.reserve(64);
  const auto push = [&](const Vec2& q, bool interior = false) {
    if (feasible(q)) cands.push_back({q, value(q), interior});
  };

  if (!(q_b == q_w)) push(hover_point(q_b, q_w, altitude), true);
  for (const auto& d : disks) push(d.center);
  // deepest point of each lens along the line of centers
  for (std::size_t i = 0; i < disks.size(); ++i)
    for (std::size_t j = 0; j < disks.size(); ++j) {
      if (i == j) continue;
      const double dij = distance(disks[i].center, disks[j].center);
      if (dij > disks[j].radius && dij > 0.0) {
        const Vec2 u = (disks[j].center - disks[i].center) / dij;
        push(disks[i].center + u * (dij - disks[j].radius));
      }
    }

  for (std::size_t i = 0; i < disks.size(); ++i) {
    const Vec2 ci = disks[i].center;
    const double ri = disks[i].radius;
    if (ri <= 0.0) continue;
    // feasible arc of circle i within the other disk
    double lo = 0.0, hi = kTwoPi;
    bool empty = false;
    for (std::size_t j = 0; j < disks.size(); ++j) {
      if (i == j) continue;
      const Vec2 dv = ci - disks[j].center;
      const double dn = dv.norm();
      const double rj = disks[j].radius;
      if (dn < 1e-15) {
        if (ri > rj * (1.0 + 1e-12) + 1e-12) empty = true;
        continue;
      }
      const double ccrit = (rj * rj - ri * ri - dn * dn) / (2.0 * ri * dn);
      if (ccrit >= 1.0) continue;  // circle i fully inside disk j
      if (ccrit < -1.0) {
        empty = true;
        continue;
      }
      const double half = std::acos(std::clamp(ccrit, -1.0, 1.0));
      const double dir = std::atan2(dv.y, dv.x);
      lo = dir + half;
      hi = dir + kTwoPi - half;
    }
    if (empty || hi <= lo) continue;

    const auto at = [&](double th) {
      return ci + Vec2{std::cos(th), std::sin(th)} * ri;
    };
    const auto fth = [&](double th) { return value(at(th)); };
    push(at(lo));
    push(at(hi));
    const int segments = 16;
    for (int t = 0; t < segments; ++t) {
      const double a = lo + (hi - lo) * t / segments;
      const double b = lo + (hi - lo) * (t + 1) / segments;
      const auto [th, v] = golden_max(fth, a, b, 1e-11);
      (void)v;
      push(at(th));
    }
  }

  if (cands.empty())
    throw std::runtime_error("max_ratio_in_disks: empty feasible region");

  double best = -1.0;
  for (const auto& c : cands) best = std::max(best, c.val);
  // ties (symmetric geometries) break toward the jamming target; an interior
  // candidate is the exact unconstrained optimum and outranks the tie band
  const Cand* pick = nullptr;
  const double cut = best - std::abs(best) * 1e-9;
  for (const auto& c : cands) {
    if (c.val < cut) continue;
    if (!pick || (c.interior && !pick->interior) ||
        (c.interior == pick->interior &&
         (c.q - q_w).norm2() < (pick->q - q_w).norm2()))
      pick = &c;
  }
  return {pick->q, std::sqrt(pick->val), pick->interior};
}

SlotMax slot_argmax(const Vec2& q_prev, const Vec2& q_b, const Vec2& q_w,
                    double altitude, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("slot_argmax: step must be > 0");
  if (q_b == q_w) return {q_prev, 1.0, false};  // ratio is constant
  const DiskConstraint disk{q_prev, step};
  return max_ratio_in_disks(std::span<const DiskConstraint>(&disk, 1), q_b, q_w,
                            altitude);
}

ClosedFormRatio closed_form_ratio_candidate(const Vec2& q_prev, const Vec2& q_b,
                                            const Vec2& q_w, double altitude,
                                            double step) {
  if (!(step > 0.0))
    throw std::invalid_argument("closed_form_ratio_candidate: step must be > 0");
  constexpr double tol = 1e-9;  // absolute, meters
  const double d1 = bisector_projection(q_prev, q_b, q_w).distance;
  const double d2 = distance(q_prev, q_b);
  const double d3 = distance(q_prev, q_w);

  // the coefficient algebra below is dimensionally inconsistent for general
  // geometries; candidates are flagged, never trusted
  const double h2 = altitude * altitude;
  const double U = q_prev.norm2() - step * step + h2;
  const double S = q_w.norm2() - dot(q_w, q_prev);
  const double V = q_b.norm2() - dot(q_b, q_prev);
  const double c2 = (q_b - q_w).norm2();
  const double k0 = (U + S) * (U + S) + 4.0 * step * step * h2;
  const double k1_base = 2.0 * S * V - 2.0 * U * U - 2.0 * U * S + 2.0 * U * V -
                         4.0 * step;
  const double k1 = k1_base * k1_base * (c2 + h2);
  const double k2 = (U + V) * (U + V) + 4.0 * step * step * h2;

  ClosedFormRatio out;
  const bool below_bisector = d2 < d3 - tol;
  if (std::abs(d1 - step) <= tol && below_bisector) {
    out.case_tag = 2;
    out.k = 1.0;
    out.consistent = true;
    return out;
  }
  const double disc = k1 * k1 - 4.0 * k0 * k2;
  double root = std::numeric_limits<double>::quiet_NaN();
  if (d1 > step + tol && below_bisector) {
    out.case_tag = 1;
    if (disc >= 0.0) root = (k1 - std::sqrt(disc)) / (2.0 * k0);
  } else {
    out.case_tag = 3;
    if (disc >= 0.0) root = (k1 + std::sqrt(disc)) / (2.0 * k0);
  }
  if (disc >= 0.0 && root > 0.0) {
    out.k = std::sqrt(root);
    out.consistent = true;
  }
  return out;
}

}  // namespace covertplan
