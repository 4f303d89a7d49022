#pragma once

// Stream operators so doctest can print library values in failure messages.

#include <ostream>

#include "swarmsafe/auction.hpp"
#include "swarmsafe/qp.hpp"

namespace swarmsafe {

inline std::ostream& operator<<(std::ostream& os, const VecD& v) { return os << v.str(); }
inline std::ostream& operator<<(std::ostream& os, const PairKey& k) {
  return os << '(' << k.lo << ',' << k.hi << ')';
}
inline std::ostream& operator<<(std::ostream& os, Direction d) {
  return os << (d == Direction::LoToHi ? "lo->hi" : d == Direction::HiToLo ? "hi->lo" : "both");
}

}  // namespace swarmsafe
