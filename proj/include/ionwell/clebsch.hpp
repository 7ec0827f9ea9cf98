#pragma once

namespace ionwell {

// Angular matrix elements C^(j)_{l l'} = <Y_l'^0 | cos^j(theta) | Y_l^0>
// in closed form for j = 0, 2, 4 (vanishing unless |l - l'| <= j, even).
// Symmetric in l <-> l'.
double angular_cos_moment(int j, int l, int lp);

}  // namespace ionwell
