#pragma once

#include <array>
#include <cstdint>
#include <functional>

#include <Eigen/Dense>

namespace cpmeig {

// Points live in R^3 throughout; 2-D surfaces keep z == 0.  The embedding
// dimension travels with the surface / grid, not the point type.
using Vec3 = Eigen::Vector3d;

// Integer grid multi-index (k == 0 in 2-D).
using MultiIndex = std::array<int, 3>;

inline bool lex_less(const MultiIndex& a, const MultiIndex& b) {
    if (a[0] != b[0]) return a[0] < b[0];
    if (a[1] != b[1]) return a[1] < b[1];
    return a[2] < b[2];
}

struct MultiIndexHash {
    std::size_t operator()(const MultiIndex& m) const {
        std::size_t h = 0;
        for (int v : m) {
            h ^= std::hash<int>{}(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        }
        return h;
    }
};

} // namespace cpmeig
