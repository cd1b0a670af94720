#pragma once

#include "core/types.hpp"

namespace g2k {

// Dense matrix exponential, Pade-13 with scaling and squaring.
CMat expm(const CMat& a);

}  // namespace g2k
