#include "lzdeg/cutoff.hpp"

#include <cmath>
#include <sstream>

#include "lzdeg/errors.hpp"

namespace lzdeg {

namespace {

double flat_bump(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

// 0 for t <= 0, 1 for t >= 1.
double smooth_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = flat_bump(t);
  return a / (a + flat_bump(1.0 - t));
}

}  // namespace

void CutoffSpec::validate(const Interval& domain) const {
  if (!(r1 > 0.0 && r2 > r1)) {
    std::ostringstream os;
    os << "cutoff radii must satisfy 0 < r1 < r2 (got r1=" << r1 << ", r2=" << r2 << ")";
    throw BadCutoff(os.str());
  }
  if (!(domain.lo < -r2 && r2 < domain.hi)) {
    std::ostringstream os;
    os << "cutoff support [-" << r2 << ", " << r2 << "] is not inside [" << domain.lo << ", "
       << domain.hi << "]";
    throw BadCutoff(os.str());
  }
}

double CutoffSpec::operator()(double x) const { return smooth_step((r2 - std::abs(x)) / (r2 - r1)); }

}  // namespace lzdeg
