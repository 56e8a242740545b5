#pragma once

#include <random>

#include "qfvm/geometry.hpp"

namespace qfvm::testing {

// Random tetrahedra with bounded shape ratio, reproducible across runs.
class TetSampler {
  public:
    explicit TetSampler(uint64_t seed = 20240901) : rng_(seed) {}

    Tet next(double min_volume = 0.02) {
        std::uniform_real_distribution<double> U(0.0, 1.0);
        for (;;) {
            Vec3 a(U(rng_), U(rng_), U(rng_)), b(U(rng_), U(rng_), U(rng_));
            Vec3 c(U(rng_), U(rng_), U(rng_)), d(U(rng_), U(rng_), U(rng_));
            double vol6 = (b - a).cross(c - a).dot(d - a);
            if (vol6 < 0) {
                std::swap(c, d);
                vol6 = -vol6;
            }
            if (vol6 / 6.0 < min_volume) continue;
            return make_tet(a, b, c, d);
        }
    }

    // Rejection-sample until the minimum V-angle (degrees) is reached.
    Tet next_with_v_angle(double min_deg) {
        for (;;) {
            Tet t = next(0.005);
            if (min_v_angle(tet_geometry(t)) * 180.0 / 3.14159265358979323846 >= min_deg)
                return t;
        }
    }

    std::mt19937_64& rng() { return rng_; }

  private:
    std::mt19937_64 rng_;
};

inline Tet regular_tet(double edge = 1.0) {
    // Vertices of a regular tetrahedron with the requested edge length.
    double s = edge / std::sqrt(2.0);
    return make_tet(Vec3(s, s, s) * 0.5, Vec3(s, -s, -s) * 0.5, Vec3(-s, -s, s) * 0.5,
                    Vec3(-s, s, -s) * 0.5);
}

inline Tet reference_tet() {
    return make_tet(Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 0), Vec3(0, 0, 1));
}

inline constexpr double kDeg = 3.14159265358979323846 / 180.0;

}  // namespace qfvm::testing
