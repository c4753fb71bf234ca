#include "mobiuse/ring.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace mobiuse {

RingSpec::RingSpec(int q_, int p_) : q(q_), p(p_) {
    if (q < 1 || p < 1)
        throw std::invalid_argument("RingSpec: q and p must be positive");
    if (std::gcd(q, p) != 1)
        throw std::invalid_argument("RingSpec: q and p must be co-prime, got (" +
                                    std::to_string(q) + "," + std::to_string(p) + ")");
}

SurfaceParams::SurfaceParams(double hole_radius_, double tube_radius_)
    : hole_radius(hole_radius_), tube_radius(tube_radius_) {
    if (!(hole_radius > 0.0) || !(tube_radius > 0.0))
        throw std::invalid_argument("SurfaceParams: radii must be positive");
    if (!(tube_radius < hole_radius))
        throw std::invalid_argument("SurfaceParams: tube radius must be below hole radius");
}

namespace detail {

double wrap(double u, double k) noexcept {
    double r = u - k * std::floor(u / k);
    // floor rounding can land one step outside [0, k); fold back, and a
    // boundary hit (r == k, possible after the += below) collapses to 0.
    if (r < 0.0) r += k;
    if (r >= k) r -= k;
    return r;
}

double circ(double u, double k) noexcept {
    const double m = wrap(u, k);
    return std::min(m, k - m);
}

double circ_slope(double u, double k) noexcept {
    const double m = wrap(u, k);
    const double half = 0.5 * k;
    if (m == 0.0 || m == half) return 0.0;
    return m < half ? 1.0 : -1.0;
}

}  // namespace detail

namespace {

void check_finite(double u) {
    if (!std::isfinite(u)) throw std::domain_error("mod/dist: non-finite argument");
}

void check_modulus(int k) {
    if (k < 1) throw std::invalid_argument("mod/dist: modulus must be a positive integer");
}

void check_point(const RingPoint& a, const RingSpec& spec) {
    if (!is_canonical(a, spec))
        throw std::invalid_argument("RingPoint (" + std::to_string(a.x1) + "," +
                                    std::to_string(a.x2) + ") is not canonical for M^{" +
                                    std::to_string(spec.q) + "/" + std::to_string(spec.p) + "}");
}

}  // namespace

double mod_k(double u, int k) {
    check_modulus(k);
    check_finite(u);
    return detail::wrap(u, static_cast<double>(k));
}

double dist_k(double u, int k) {
    check_modulus(k);
    check_finite(u);
    return detail::circ(u, static_cast<double>(k));
}

bool is_canonical(const RingPoint& a, const RingSpec& spec) noexcept {
    return a.x1 >= 0.0 && a.x1 < spec.q && a.x2 >= 0.0 && a.x2 < spec.p;
}

RingPoint canonical_point(double x1, double x2, const RingSpec& spec) {
    check_finite(x1);
    check_finite(x2);
    return {detail::wrap(x1, spec.q), detail::wrap(x2, spec.p)};
}

RingPoint mobius_add(const RingPoint& a, const RingPoint& b, const RingSpec& spec) {
    check_point(a, spec);
    check_point(b, spec);
    return {detail::wrap(a.x1 + b.x1, spec.q), detail::wrap(a.x2 + b.x2, spec.p)};
}

double mobius_dist(const RingPoint& a, const RingPoint& b, const RingSpec& spec) {
    check_point(a, spec);
    check_point(b, spec);
    const double d1 = b.x1 - a.x1;
    const double d2 = b.x2 - a.x2;
    const double q = spec.q;
    const double p = spec.p;
    double best = detail::circ(d1, q) + detail::circ(d2, p);
    for (int j = 1; j < spec.branch_count(); ++j) {
        const double cand = detail::circ(d1 + j / p, q) + detail::circ(d2 + j / q, p);
        if (cand < best) best = cand;
    }
    return best;
}

std::vector<RingPoint> zero_points(const RingSpec& spec) {
    std::vector<RingPoint> zeros;
    zeros.reserve(static_cast<std::size_t>(spec.branch_count()));
    const double q = spec.q;
    const double p = spec.p;
    for (int j = 0; j < spec.branch_count(); ++j) {
        zeros.push_back({detail::wrap(j / p, q), detail::wrap(j / q, p)});
    }
    return zeros;
}

Eigen::ArrayXd torus_add(const Eigen::Ref<const Eigen::ArrayXd>& a,
                         const Eigen::Ref<const Eigen::ArrayXd>& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("torus_add: length mismatch");
    return (a + b).unaryExpr([](double v) { return detail::wrap(v, 1.0); });
}

double torus_dist(const Eigen::Ref<const Eigen::ArrayXd>& a,
                  const Eigen::Ref<const Eigen::ArrayXd>& b, Norm norm) {
    if (a.size() != b.size())
        throw std::invalid_argument("torus_dist: length mismatch");
    Eigen::ArrayXd comp =
        (b - a).unaryExpr([](double v) { return detail::circ(v, 1.0); });
    return norm == Norm::L1 ? comp.sum() : std::sqrt((comp * comp).sum());
}

Eigen::Vector3d surface_point_mobius(double theta, double omega,
                                     const SurfaceParams& params) {
    check_finite(theta);
    check_finite(omega);
    const double tube = 0.5 * theta + omega;
    const double radial = params.hole_radius + params.tube_radius * std::cos(tube);
    return {radial * std::cos(theta), radial * std::sin(theta),
            params.tube_radius * std::sin(tube)};
}

Eigen::Vector3d surface_point_torus(double theta, double omega,
                                    const SurfaceParams& params) {
    check_finite(theta);
    check_finite(omega);
    const double radial = params.hole_radius + params.tube_radius * std::cos(omega);
    return {radial * std::cos(theta), radial * std::sin(theta),
            params.tube_radius * std::sin(omega)};
}

}  // namespace mobiuse
