#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "dproj/error.hpp"

namespace dproj {

inline constexpr int kMaxDepth = 30;

/// Grid depth n; cells have width delta = 2^-n.
class Scale {
 public:
  constexpr Scale() = default;
  explicit Scale(int depth) : depth_(depth) {
    require(depth >= 0 && depth <= kMaxDepth,
            "scale depth must lie in [0, " + std::to_string(kMaxDepth) + "], got " +
                std::to_string(depth));
  }

  [[nodiscard]] constexpr int depth() const { return depth_; }
  [[nodiscard]] double delta() const { return std::ldexp(1.0, -depth_); }
  [[nodiscard]] std::int64_t cells_per_unit() const { return std::int64_t{1} << depth_; }

  friend constexpr bool operator==(Scale, Scale) = default;

 private:
  int depth_ = 0;
};

inline void require_same_scale(Scale a, Scale b, const char* op) {
  require(a == b, std::string(op) + ": scale mismatch (n=" + std::to_string(a.depth()) +
                      " vs n=" + std::to_string(b.depth()) + ")");
}

}  // namespace dproj
