#pragma once

#include "mobiuse/ring.hpp"

#include <Eigen/Core>

namespace mobiuse {

enum class GeometryKind { Mobius, Torus, Euclidean };

// Embedding-space descriptor.  Mobius vectors live on the n-fold direct
// sum M^{q/p}_n and carry 2n coordinates stored as [x1 block | x2 block];
// Torus and Euclidean vectors carry n coordinates.
struct Geometry {
    GeometryKind kind = GeometryKind::Mobius;
    RingSpec spec{2, 1};  // used by Mobius only
    Norm norm = Norm::L1;

    static Geometry mobius(const RingSpec& spec, Norm norm = Norm::L1);
    static Geometry torus(Norm norm = Norm::L1);
    static Geometry euclidean(Norm norm = Norm::L1);

    int coords_per_dim() const noexcept { return kind == GeometryKind::Mobius ? 2 : 1; }
    int width(int n) const noexcept { return n * coords_per_dim(); }

    friend bool operator==(const Geometry&, const Geometry&) = default;
};

// An element of M^{q/p}_n.
struct RingVector {
    RingSpec spec{2, 1};
    Eigen::ArrayXd coords;  // size 2n: [x1_0..x1_{n-1}, x2_0..x2_{n-1}]

    int rings() const noexcept { return static_cast<int>(coords.size()) / 2; }
    RingPoint point(int i) const { return {coords[i], coords[rings() + i]}; }

    static RingVector from_points(const RingSpec& spec, const std::vector<RingPoint>& pts);
};

RingVector vec_add(const RingVector& u, const RingVector& v);
double vec_dist(const RingVector& u, const RingVector& v, Norm norm = Norm::L1);

// Subgradients of the score with respect to each raw coordinate.  For L1
// geometries every entry is the inner slope in {-1, 0, +1}; L2 scales it
// by component/norm.  grad_h == grad_r always (the translation enters
// the score only through h (+) r).
struct ScoreGradient {
    Eigen::ArrayXd grad_h;
    Eigen::ArrayXd grad_r;
    Eigen::ArrayXd grad_t;
};

// h (+) r, canonicalized for the compact geometries; plain sum for Euclidean.
Eigen::ArrayXd translate(const Geometry& g, const Eigen::Ref<const Eigen::ArrayXd>& h,
                         const Eigen::Ref<const Eigen::ArrayXd>& r);

// dist(s, t) under the geometry's norm (Euclidean: norm of s - t).
double pair_dist(const Geometry& g, const Eigen::Ref<const Eigen::ArrayXd>& s,
                 const Eigen::Ref<const Eigen::ArrayXd>& t);

// Scoring function dist(h (+) r, t); smaller means more plausible.
double score(const Geometry& g, const Eigen::Ref<const Eigen::ArrayXd>& h,
             const Eigen::Ref<const Eigen::ArrayXd>& r,
             const Eigen::Ref<const Eigen::ArrayXd>& t);

// Score plus a valid subgradient at every point (the true gradient
// wherever the score is differentiable).  Branch ties resolve to the
// lowest j; at kinks and exact minima the chosen subgradient is 0.
double score_subgradient(const Geometry& g, const Eigen::Ref<const Eigen::ArrayXd>& h,
                         const Eigen::Ref<const Eigen::ArrayXd>& r,
                         const Eigen::Ref<const Eigen::ArrayXd>& t, ScoreGradient& out);

// Wrap a raw coordinate vector back onto the geometry in place.  No-op
// for Euclidean.
void canonicalize(const Geometry& g, Eigen::Ref<Eigen::ArrayXd> v);

}  // namespace mobiuse
