#include "cpmeig/interp.hpp"

#include <cmath>

#include "cpmeig/errors.hpp"

namespace cpmeig {

Eigen::VectorXd barycentric_weights_1d(const Eigen::VectorXd& nodes, double target) {
    const Eigen::Index n = nodes.size();
    if (n < 1) throw DomainError("barycentric_weights_1d: empty node set");
    Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        if (std::abs(target - nodes(j)) < 1e-12) {
            out(j) = 1.0;
            return out;
        }
    }
    // Equispaced barycentric weights are the alternating binomials; the
    // common scale cancels in the normalized form.
    double binom = 1.0;
    double denom = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
        double w = binom / (target - nodes(j));
        out(j) = w;
        denom += w;
        binom *= -static_cast<double>(n - 1 - j) / static_cast<double>(j + 1);
    }
    out /= denom;
    return out;
}

WeightedFootprint extension_weights(const Vec3& target, const Grid& grid, int p) {
    const int n1 = p + 1;
    int base[3] = {0, 0, 0};
    Eigen::VectorXd axis_w[3];
    for (int a = 0; a < 3; ++a) {
        if (a >= grid.dim) {
            axis_w[a] = Eigen::VectorXd::Ones(1);
            continue;
        }
        int fl = grid.floor_index(target[a], a);
        base[a] = (p % 2 == 1) ? fl - (p - 1) / 2 : fl - p / 2 + 1;
        Eigen::VectorXd nodes(n1);
        for (int k = 0; k < n1; ++k) nodes(k) = grid.origin[a] + grid.dx * (base[a] + k);
        axis_w[a] = barycentric_weights_1d(nodes, target[a]);
    }
    const int na = n1;
    const int nb = grid.dim >= 2 ? n1 : 1;
    const int nc = grid.dim >= 3 ? n1 : 1;
    WeightedFootprint out;
    out.nodes.reserve(static_cast<std::size_t>(na) * nb * nc);
    out.weights.reserve(out.nodes.capacity());
    for (int i = 0; i < na; ++i) {
        for (int j = 0; j < nb; ++j) {
            for (int k = 0; k < nc; ++k) {
                out.nodes.push_back({base[0] + i, grid.dim >= 2 ? base[1] + j : 0,
                                     grid.dim >= 3 ? base[2] + k : 0});
                out.weights.push_back(axis_w[0](i) * axis_w[1](j) * axis_w[2](k));
            }
        }
    }
    return out;
}

} // namespace cpmeig
