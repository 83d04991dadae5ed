#pragma once

#include <cmath>
#include <functional>

#include "edlf/errors.hpp"
#include "edlf/vec.hpp"

namespace edlf {

// Target of the reformulated energy: the metric cone over RP^2 (Dk, with the
// antipodal quotient encoded in the edge metric) or over S^2 (Ck, no quotient).
enum class TargetMode : unsigned char { DkQuotient = 0, CkNoQuotient = 1 };

// Optional order-parameter potential psi(s). Both the value and its
// derivative are needed (energy and gradient). Defaults to psi == 0.
struct Potential {
    std::function<double(double)> value;
    std::function<double(double)> derivative;

    bool active() const { return static_cast<bool>(value); }
};

struct ConeParams {
    double k = 4.0;
    TargetMode target_mode = TargetMode::DkQuotient;
    Potential potential;

    bool quotient() const { return target_mode == TargetMode::DkQuotient; }

    void validate() const {
        if (!(k > 1.0)) throw InvalidInputError("ConeParams: k > 1 required");
        if (potential.active()) {
            if (!potential.derivative)
                throw InvalidInputError("ConeParams: potential needs a derivative");
            double d0 = potential.derivative(0.0);
            if (std::abs(d0) > 1e-12)
                throw InvalidInputError("ConeParams: potential must have psi'(0) = 0");
        }
    }
};

// u = (sqrt(k-1) * |w|, w).  |u|^2 = k |w|^2 exactly.
inline Vec4 embed(const Vec3& w, const ConeParams& p) {
    if (!finite(w)) throw InvalidInputError("embed: non-finite input");
    double s = norm(w);
    return {std::sqrt(p.k - 1.0) * s, w.x, w.y, w.z};
}

// Sign sigma in {+1,-1} minimizing |w_i - sigma w_j|. Tie (w_i . w_j == 0)
// resolves to +1. In Ck mode there is no sign freedom and +1 is returned.
inline double align_sign(const Vec3& wi, const Vec3& wj, const ConeParams& p) {
    if (!finite(wi) || !finite(wj)) throw InvalidInputError("align_sign: non-finite input");
    if (!p.quotient()) return 1.0;
    return dot(wi, wj) >= 0.0 ? 1.0 : -1.0;
}

// Squared chordal distance realizing the cone metric on one grid edge:
//   (k-1)(|w_i| - |w_j|)^2 + min_sigma |w_i - sigma w_j|^2,
// which equals |embed(w_i) - embed(sigma* w_j)|^2 for the minimizing sign.
inline double edge_sq_distance(const Vec3& wi, const Vec3& wj, const ConeParams& p) {
    if (!finite(wi) || !finite(wj)) throw InvalidInputError("edge_sq_distance: non-finite input");
    double si = norm(wi);
    double sj = norm(wj);
    double ds = si - sj;
    double d = dot(wi, wj);
    if (p.quotient()) d = std::abs(d);
    double vec_sq = si * si + sj * sj - 2.0 * d;
    if (vec_sq < 0.0) vec_sq = 0.0;
    return (p.k - 1.0) * ds * ds + vec_sq;
}

}  // namespace edlf
