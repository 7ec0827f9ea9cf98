#include "ionwell/clebsch.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ionwell {

double angular_cos_moment(int j, int l, int lp) {
  if (l < 0 || lp < 0) throw std::invalid_argument("angular moment: l >= 0");
  int lo = std::min(l, lp), hi = std::max(l, lp);
  double L = lo;
  int dl = hi - lo;
  switch (j) {
    case 0:
      return dl == 0 ? 1.0 : 0.0;
    case 2:
      if (dl == 0)
        return (2.0 * L * (L + 1.0) - 1.0) / (4.0 * L * (L + 1.0) - 3.0);
      if (dl == 2)
        return (L + 1.0) * (L + 2.0) * std::sqrt(5.0 + 4.0 * L * (L + 3.0)) /
               ((2 * L + 1) * (2 * L + 3) * (2 * L + 5));
      return 0.0;
    case 4:
      if (dl == 0)
        return 3.0 * (3.0 + 2.0 * L * (L + 1.0) * (L * L + L - 4.0)) /
               ((2 * L - 3) * (2 * L - 1) * (2 * L + 3) * (2 * L + 5));
      if (dl == 2)
        return 2.0 * (L + 1.0) * (L + 2.0) * (2.0 * L * (L + 3.0) - 3.0) *
               std::sqrt(5.0 + 4.0 * L * (L + 3.0)) /
               ((2 * L - 1) * (2 * L + 1) * (2 * L + 3) * (2 * L + 5) *
                (2 * L + 7));
      if (dl == 4)
        return (L + 1.0) * (L + 2.0) * (L + 3.0) * (L + 4.0) *
               std::sqrt(9.0 + 4.0 * L * (L + 5.0)) /
               ((2 * L + 1) * (2 * L + 3) * (2 * L + 5) * (2 * L + 7) *
                (2 * L + 9));
      return 0.0;
    default:
      throw std::invalid_argument("angular moment: j must be 0, 2 or 4");
  }
}

}  // namespace ionwell
