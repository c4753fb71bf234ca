#pragma once

#include <Eigen/Core>

#include <vector>

namespace mobiuse {

enum class Norm { L1, L2 };

// Selects the Mobius ring M^{q/p}, the quotient space on [0,q) x [0,p)
// whose points are identified along the twisted lattice of shifts
// (j/p, j/q), j = 0..pq-1.  q and p must be co-prime positive integers.
struct RingSpec {
    int q;
    int p;

    RingSpec(int q_, int p_);

    // Number of identification branches in the distance formula.
    int branch_count() const noexcept { return p * q; }

    friend bool operator==(const RingSpec&, const RingSpec&) = default;
};

// One point of M^{q/p}.  Canonical iff x1 in [0,q) and x2 in [0,p).
struct RingPoint {
    double x1 = 0.0;
    double x2 = 0.0;

    friend bool operator==(const RingPoint&, const RingPoint&) = default;
};

// Radii of the 3D surface used for mesh export: hole center to tube
// center, and tube.  Requires 0 < tube_radius < hole_radius.
struct SurfaceParams {
    double hole_radius;
    double tube_radius;

    SurfaceParams(double hole_radius_ = 2.0, double tube_radius_ = 1.0);
};

namespace detail {

// Wrap into [0, k).  k > 0, no validation; shared kernel of every
// modulus path so that scalar and vectorized code agree bit-for-bit.
double wrap(double u, double k) noexcept;

// Circular distance min(wrap(u), k - wrap(u)) in [0, k/2].
double circ(double u, double k) noexcept;

// Derivative of circ at a differentiable point; 0 at the kinks
// wrap(u) in {0, k/2} and at exact minima.
double circ_slope(double u, double k) noexcept;

}  // namespace detail

// Modulus into [0, k): u == mod_k(u, k) (mod k).  Throws
// std::domain_error for non-finite u, std::invalid_argument for k < 1.
double mod_k(double u, int k);

// Circular distance min over integer shifts of |u + i*k|, in [0, k/2].
double dist_k(double u, int k);

bool is_canonical(const RingPoint& a, const RingSpec& spec) noexcept;
RingPoint canonical_point(double x1, double x2, const RingSpec& spec);

// Componentwise modulus addition on M^{q/p}.  Commutative group law:
// (0,0) is the identity and every point has an inverse.
RingPoint mobius_add(const RingPoint& a, const RingPoint& b, const RingSpec& spec);

// Quotient distance on M^{q/p}:
//   min_{j=0..pq-1}  d_q(y1 - x1 + j/p) + d_p(y2 - x2 + j/q).
// Symmetric, zero exactly on identified points, triangle inequality in
// the translated form dist(x (+) y, 0) <= dist(x, 0) + dist(y, 0).
double mobius_dist(const RingPoint& a, const RingPoint& b, const RingSpec& spec);

// All points of [0,q) x [0,p) at distance zero from the origin:
// (m_q(j/p), m_p(j/q)) for j = 0..pq-1.  Exactly p*q distinct points.
std::vector<RingPoint> zero_points(const RingSpec& spec);

// Componentwise mod-1 addition on T^n.
Eigen::ArrayXd torus_add(const Eigen::Ref<const Eigen::ArrayXd>& a,
                         const Eigen::Ref<const Eigen::ArrayXd>& b);

// Norm of the componentwise circular distances on T^n.
double torus_dist(const Eigen::Ref<const Eigen::ArrayXd>& a,
                  const Eigen::Ref<const Eigen::ArrayXd>& b, Norm norm = Norm::L1);

// Parametric surface points.  The Mobius tube angle is theta/2 + omega,
// so theta has period 4*pi and (theta, omega) ~ (theta + 2pi, omega + pi).
Eigen::Vector3d surface_point_mobius(double theta, double omega,
                                     const SurfaceParams& params = {});
Eigen::Vector3d surface_point_torus(double theta, double omega,
                                    const SurfaceParams& params = {});

}  // namespace mobiuse
