#pragma once

#include <span>
#include <vector>

#include "covertplan/vec2.hpp"

namespace covertplan {

/// Locus of points whose distance ratio to two foci is a constant k:
/// a sphere for k != 1 (center in the ground plane), the perpendicular
/// bisector for k == 1.
struct ApolloniusLocus {
  enum class Kind { sphere, bisector };
  Kind kind = Kind::sphere;
  double ratio = 1.0;  // k

  // sphere
  Vec2 center;         // ground-plane center
  double radius = 0.0; // 3-D sphere radius

  // bisector: points p with dot(line_normal, p) == line_offset
  Vec2 line_normal;
  double line_offset = 0.0;

  /// Squared radius of the circle cut by the flight plane at a given
  /// altitude; negative when the plane misses the sphere.
  double planar_radius2(double altitude) const {
    return radius * radius - altitude * altitude;
  }
};

/// Locus of ||p - q_b|| / ||p - q_w|| == k. Requires k > 0.
ApolloniusLocus apollonius_locus(double k, const Vec2& q_b, const Vec2& q_w);

struct BisectorFoot {
  Vec2 foot;        // nearest point of the perpendicular bisector of (q_b, q_w)
  double distance;  // to the query point
};

/// Orthogonal projection onto the bisector plane of the two foci.
/// Rejects q_b == q_w.
BisectorFoot bisector_projection(const Vec2& q, const Vec2& q_b, const Vec2& q_w);

/// Unconstrained maximizer of the slant-distance ratio d_b/d_w over the
/// flight plane. Lies on the ray from q_b through q_w, strictly beyond q_w.
/// Rejects q_b == q_w.
Vec2 hover_point(const Vec2& q_b, const Vec2& q_w, double altitude);

struct SlotMax {
  Vec2 point;
  double ratio = 1.0;    // achieved d_b/d_w
  bool interior = false; // true when the unconstrained optimum was reachable
};

/// Maximizer of the slant-distance ratio over the closed disk of one slot's
/// reachable positions. Boundary solutions satisfy the tangency condition
/// with the k-ratio locus.
SlotMax slot_argmax(const Vec2& q_prev, const Vec2& q_b, const Vec2& q_w,
                    double altitude, double step);

struct DiskConstraint {
  Vec2 center;
  double radius = 0.0;
};

/// Slant-distance-ratio maximization over an intersection of disks (one or
/// two in practice: the reachability disk and the return-feasibility disk).
/// The intersection must be non-empty.
SlotMax max_ratio_in_disks(std::span<const DiskConstraint> disks,
                           const Vec2& q_b, const Vec2& q_w, double altitude);

/// Closed-form tangency ratio candidate. Kept as a cross-check for
/// slot_argmax; its coefficient algebra is internally inconsistent for most
/// geometries, so candidates carry a consistency flag instead of being
/// trusted. The numeric maximizer is the solution path of record.
struct ClosedFormRatio {
  double k = 0.0;
  int case_tag = 0;        // 1: sub-unity root, 2: bisector reachable (k=1), 3: super-unity root
  bool consistent = false; // discriminant and root sign admissible
};

ClosedFormRatio closed_form_ratio_candidate(const Vec2& q_prev, const Vec2& q_b,
                                            const Vec2& q_w, double altitude,
                                            double step);

}  // namespace covertplan
