#pragma once

#include <cmath>
#include <limits>

#include <boost/multiprecision/cpp_int.hpp>

#include "spotlab/geom.hpp"

namespace spotlab {

// Orientation and in-circle tests: fast floating-point evaluation guarded by
// a forward error bound, falling back to exact rational arithmetic when the
// result is too close to zero to trust. The fallback is exact for every
// finite double input, so the returned sign is always correct.
namespace predicates {

using bigrat = boost::multiprecision::cpp_rational;

inline constexpr double kEps = std::numeric_limits<double>::epsilon() / 2.0;  // 2^-53
inline const double kOrientBoundA = (3.0 + 16.0 * kEps) * kEps;
inline const double kIncircleBoundA = (10.0 + 96.0 * kEps) * kEps;

inline int sign_of(const bigrat& v) {
  if (v > 0) return 1;
  if (v < 0) return -1;
  return 0;
}

inline int orient2d_exact(Point a, Point b, Point c) {
  const bigrat ax(a.x), ay(a.y), bx(b.x), by(b.y), cx(c.x), cy(c.y);
  return sign_of((ax - cx) * (by - cy) - (ay - cy) * (bx - cx));
}

// Sign of the signed area of triangle (a, b, c): +1 counterclockwise,
// -1 clockwise, 0 collinear.
inline int orient2d(Point a, Point b, Point c) {
  const double detleft = (a.x - c.x) * (b.y - c.y);
  const double detright = (a.y - c.y) * (b.x - c.x);
  const double det = detleft - detright;

  double detsum;
  if (detleft > 0.0) {
    if (detright <= 0.0) return det > 0.0 ? 1 : (det < 0.0 ? -1 : 0);
    detsum = detleft + detright;
  } else if (detleft < 0.0) {
    if (detright >= 0.0) return det > 0.0 ? 1 : (det < 0.0 ? -1 : 0);
    detsum = -detleft - detright;
  } else {
    return det > 0.0 ? 1 : (det < 0.0 ? -1 : 0);
  }
  const double errbound = kOrientBoundA * detsum;
  if (det >= errbound || -det >= errbound) return det > 0.0 ? 1 : -1;
  return orient2d_exact(a, b, c);
}

inline int incircle_exact(Point a, Point b, Point c, Point d) {
  const bigrat adx = bigrat(a.x) - bigrat(d.x);
  const bigrat ady = bigrat(a.y) - bigrat(d.y);
  const bigrat bdx = bigrat(b.x) - bigrat(d.x);
  const bigrat bdy = bigrat(b.y) - bigrat(d.y);
  const bigrat cdx = bigrat(c.x) - bigrat(d.x);
  const bigrat cdy = bigrat(c.y) - bigrat(d.y);

  const bigrat alift = adx * adx + ady * ady;
  const bigrat blift = bdx * bdx + bdy * bdy;
  const bigrat clift = cdx * cdx + cdy * cdy;

  const bigrat det = alift * (bdx * cdy - cdx * bdy) - blift * (adx * cdy - cdx * ady) +
                     clift * (adx * bdy - bdx * ady);
  return sign_of(det);
}

// Sign of the in-circle determinant: for a counterclockwise triangle
// (a, b, c), +1 means d lies strictly inside the circumcircle, -1 strictly
// outside, 0 exactly on it.
inline int incircle(Point a, Point b, Point c, Point d) {
  const double adx = a.x - d.x;
  const double ady = a.y - d.y;
  const double bdx = b.x - d.x;
  const double bdy = b.y - d.y;
  const double cdx = c.x - d.x;
  const double cdy = c.y - d.y;

  const double bdxcdy = bdx * cdy;
  const double cdxbdy = cdx * bdy;
  const double alift = adx * adx + ady * ady;

  const double cdxady = cdx * ady;
  const double adxcdy = adx * cdy;
  const double blift = bdx * bdx + bdy * bdy;

  const double adxbdy = adx * bdy;
  const double bdxady = bdx * ady;
  const double clift = cdx * cdx + cdy * cdy;

  const double det =
      alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy) + clift * (adxbdy - bdxady);

  const double permanent = (std::fabs(bdxcdy) + std::fabs(cdxbdy)) * alift +
                           (std::fabs(cdxady) + std::fabs(adxcdy)) * blift +
                           (std::fabs(adxbdy) + std::fabs(bdxady)) * clift;
  const double errbound = kIncircleBoundA * permanent;
  if (det > errbound || -det > errbound) return det > 0.0 ? 1 : -1;
  return incircle_exact(a, b, c, d);
}

}  // namespace predicates
}  // namespace spotlab
