#include "mobiuse/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace mobiuse {

Geometry Geometry::mobius(const RingSpec& spec, Norm norm) {
    return Geometry{GeometryKind::Mobius, spec, norm};
}

Geometry Geometry::torus(Norm norm) {
    return Geometry{GeometryKind::Torus, RingSpec{2, 1}, norm};
}

Geometry Geometry::euclidean(Norm norm) {
    return Geometry{GeometryKind::Euclidean, RingSpec{2, 1}, norm};
}

RingVector RingVector::from_points(const RingSpec& spec, const std::vector<RingPoint>& pts) {
    if (pts.empty()) throw std::invalid_argument("RingVector: needs at least one ring");
    RingVector v{spec, Eigen::ArrayXd(2 * pts.size())};
    const auto n = static_cast<Eigen::Index>(pts.size());
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!is_canonical(pts[i], spec))
            throw std::invalid_argument("RingVector: point not canonical for its spec");
        v.coords[i] = pts[i].x1;
        v.coords[n + i] = pts[i].x2;
    }
    return v;
}

namespace {

using detail::circ;
using detail::circ_slope;
using detail::wrap;

void check_same_shape(const RingVector& u, const RingVector& v) {
    if (!(u.spec == v.spec))
        throw std::invalid_argument("RingVector: ring spec mismatch");
    if (u.coords.size() != v.coords.size())
        throw std::invalid_argument("RingVector: dimension mismatch");
}

void check_vec(const Geometry& g, const Eigen::Ref<const Eigen::ArrayXd>& a,
               const Eigen::Ref<const Eigen::ArrayXd>& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("embedding vectors: dimension mismatch");
    if (a.size() < 1 || (g.kind == GeometryKind::Mobius && a.size() % 2 != 0))
        throw std::invalid_argument("embedding vectors: width inconsistent with geometry");
}

Eigen::ArrayXd mobius_vec_add(const Eigen::Ref<const Eigen::ArrayXd>& u,
                              const Eigen::Ref<const Eigen::ArrayXd>& v,
                              const RingSpec& spec) {
    const Eigen::Index n = u.size() / 2;
    const double q = spec.q;
    const double p = spec.p;
    Eigen::ArrayXd out(u.size());
    out.head(n) = (u.head(n) + v.head(n)).unaryExpr([q](double x) { return wrap(x, q); });
    out.tail(n) = (u.tail(n) + v.tail(n)).unaryExpr([p](double x) { return wrap(x, p); });
    return out;
}

double reduce_norm(const Eigen::ArrayXd& comp, Norm norm) {
    return norm == Norm::L1 ? comp.sum() : std::sqrt((comp * comp).sum());
}

// Per-ring branch minimum over the pq identification shifts.
Eigen::ArrayXd mobius_ring_dists(const Eigen::Ref<const Eigen::ArrayXd>& s,
                                 const Eigen::Ref<const Eigen::ArrayXd>& t,
                                 const RingSpec& spec) {
    const Eigen::Index n = s.size() / 2;
    const double q = spec.q;
    const double p = spec.p;
    const Eigen::ArrayXd d1 = t.head(n) - s.head(n);
    const Eigen::ArrayXd d2 = t.tail(n) - s.tail(n);
    Eigen::ArrayXd best = d1.unaryExpr([q](double x) { return circ(x, q); }) +
                          d2.unaryExpr([p](double x) { return circ(x, p); });
    for (int j = 1; j < spec.branch_count(); ++j) {
        const double s1 = j / p;
        const double s2 = j / q;
        best = best.min(d1.unaryExpr([q, s1](double x) { return circ(x + s1, q); }) +
                        d2.unaryExpr([p, s2](double x) { return circ(x + s2, p); }));
    }
    return best;
}

double mobius_vec_dist(const Eigen::Ref<const Eigen::ArrayXd>& s,
                       const Eigen::Ref<const Eigen::ArrayXd>& t, const RingSpec& spec,
                       Norm norm) {
    return reduce_norm(mobius_ring_dists(s, t, spec), norm);
}

// dist(s, t) plus d(dist)/dt; d(dist)/ds is its negation.
double mobius_dist_grad(const Eigen::Ref<const Eigen::ArrayXd>& s,
                        const Eigen::Ref<const Eigen::ArrayXd>& t, const RingSpec& spec,
                        Norm norm, Eigen::ArrayXd& dt) {
    const Eigen::Index n = s.size() / 2;
    const double q = spec.q;
    const double p = spec.p;
    dt.resize(s.size());
    Eigen::ArrayXd ring_best(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double u1 = t[i] - s[i];
        const double u2 = t[n + i] - s[n + i];
        double best = circ(u1, q) + circ(u2, p);
        int best_j = 0;
        for (int j = 1; j < spec.branch_count(); ++j) {
            const double cand = circ(u1 + j / p, q) + circ(u2 + j / q, p);
            if (cand < best) {  // strict: ties keep the lowest branch
                best = cand;
                best_j = j;
            }
        }
        ring_best[i] = best;
        dt[i] = circ_slope(u1 + best_j / p, q);
        dt[n + i] = circ_slope(u2 + best_j / q, p);
    }
    const double total = reduce_norm(ring_best, norm);
    if (norm == Norm::L2) {
        if (total > 0.0) {
            for (Eigen::Index i = 0; i < n; ++i) {
                const double w = ring_best[i] / total;
                dt[i] *= w;
                dt[n + i] *= w;
            }
        } else {
            dt.setZero();
        }
    }
    return total;
}

double torus_dist_grad(const Eigen::Ref<const Eigen::ArrayXd>& s,
                       const Eigen::Ref<const Eigen::ArrayXd>& t, Norm norm,
                       Eigen::ArrayXd& dt) {
    dt.resize(s.size());
    Eigen::ArrayXd comp(s.size());
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        const double u = t[i] - s[i];
        comp[i] = circ(u, 1.0);
        dt[i] = circ_slope(u, 1.0);
    }
    const double total = reduce_norm(comp, norm);
    if (norm == Norm::L2) {
        if (total > 0.0)
            dt *= comp / total;
        else
            dt.setZero();
    }
    return total;
}

double euclidean_dist_grad(const Eigen::Ref<const Eigen::ArrayXd>& s,
                           const Eigen::Ref<const Eigen::ArrayXd>& t, Norm norm,
                           Eigen::ArrayXd& dt) {
    const Eigen::ArrayXd e = s - t;
    dt.resize(s.size());
    if (norm == Norm::L1) {
        dt = -e.unaryExpr([](double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); });
        return e.abs().sum();
    }
    const double total = std::sqrt((e * e).sum());
    if (total > 0.0)
        dt = -e / total;
    else
        dt.setZero();
    return total;
}

}  // namespace

RingVector vec_add(const RingVector& u, const RingVector& v) {
    check_same_shape(u, v);
    return RingVector{u.spec, mobius_vec_add(u.coords, v.coords, u.spec)};
}

double vec_dist(const RingVector& u, const RingVector& v, Norm norm) {
    check_same_shape(u, v);
    return mobius_vec_dist(u.coords, v.coords, u.spec, norm);
}

Eigen::ArrayXd translate(const Geometry& g, const Eigen::Ref<const Eigen::ArrayXd>& h,
                         const Eigen::Ref<const Eigen::ArrayXd>& r) {
    check_vec(g, h, r);
    switch (g.kind) {
        case GeometryKind::Mobius:
            return mobius_vec_add(h, r, g.spec);
        case GeometryKind::Torus:
            return (h + r).unaryExpr([](double x) { return wrap(x, 1.0); });
        case GeometryKind::Euclidean:
        default:
            return h + r;
    }
}

double pair_dist(const Geometry& g, const Eigen::Ref<const Eigen::ArrayXd>& s,
                 const Eigen::Ref<const Eigen::ArrayXd>& t) {
    check_vec(g, s, t);
    switch (g.kind) {
        case GeometryKind::Mobius:
            return mobius_vec_dist(s, t, g.spec, g.norm);
        case GeometryKind::Torus: {
            Eigen::ArrayXd comp =
                (t - s).unaryExpr([](double x) { return circ(x, 1.0); });
            return reduce_norm(comp, g.norm);
        }
        case GeometryKind::Euclidean:
        default: {
            const Eigen::ArrayXd e = s - t;
            return g.norm == Norm::L1 ? e.abs().sum() : std::sqrt((e * e).sum());
        }
    }
}

double score(const Geometry& g, const Eigen::Ref<const Eigen::ArrayXd>& h,
             const Eigen::Ref<const Eigen::ArrayXd>& r,
             const Eigen::Ref<const Eigen::ArrayXd>& t) {
    check_vec(g, h, t);
    return pair_dist(g, translate(g, h, r), t);
}

double score_subgradient(const Geometry& g, const Eigen::Ref<const Eigen::ArrayXd>& h,
                         const Eigen::Ref<const Eigen::ArrayXd>& r,
                         const Eigen::Ref<const Eigen::ArrayXd>& t, ScoreGradient& out) {
    check_vec(g, h, t);
    const Eigen::ArrayXd s = translate(g, h, r);
    double value = 0.0;
    switch (g.kind) {
        case GeometryKind::Mobius:
            value = mobius_dist_grad(s, t, g.spec, g.norm, out.grad_t);
            break;
        case GeometryKind::Torus:
            value = torus_dist_grad(s, t, g.norm, out.grad_t);
            break;
        case GeometryKind::Euclidean:
        default:
            value = euclidean_dist_grad(s, t, g.norm, out.grad_t);
            break;
    }
    // s = h (+) r enters every branch with unit inner slope, so the pair
    // (h, r) shares -d(dist)/dt.
    out.grad_h = -out.grad_t;
    out.grad_r = out.grad_h;
    return value;
}

void canonicalize(const Geometry& g, Eigen::Ref<Eigen::ArrayXd> v) {
    switch (g.kind) {
        case GeometryKind::Mobius: {
            const Eigen::Index n = v.size() / 2;
            const double q = g.spec.q;
            const double p = g.spec.p;
            v.head(n) = v.head(n).unaryExpr([q](double x) { return wrap(x, q); });
            v.tail(n) = v.tail(n).unaryExpr([p](double x) { return wrap(x, p); });
            break;
        }
        case GeometryKind::Torus:
            v = v.unaryExpr([](double x) { return wrap(x, 1.0); });
            break;
        case GeometryKind::Euclidean:
            break;
    }
}

}  // namespace mobiuse
