#pragma once

#include <optional>
#include <vector>

#include "openbook/rational.hpp"

// Exact PL geometry in the universal cover of a torus. Polylines are lists of
// lifted points (theta, z) in Q^2; the projection to the torus reduces both
// coordinates mod 1. Working in the cover keeps winding and monotonicity
// visible; all torus-level queries enumerate the finitely many integer
// translates whose bounding boxes can meet.

namespace openbook {

struct Pt {
    Rat t; // theta lift
    Rat z; // z lift

    friend bool operator==(const Pt& a, const Pt& b) { return a.t == b.t && a.z == b.z; }
    friend bool operator!=(const Pt& a, const Pt& b) { return !(a == b); }
    friend Pt operator+(const Pt& a, const Pt& b) { return {a.t + b.t, a.z + b.z}; }
    friend Pt operator-(const Pt& a, const Pt& b) { return {a.t - b.t, a.z - b.z}; }
};

inline Pt canon(const Pt& p) { return {mod1(p.t), mod1(p.z)}; }

inline bool same_on_torus(const Pt& p, const Pt& q) {
    return mod1(p.t - q.t) == 0 && mod1(p.z - q.z) == 0;
}

inline Rat cross(const Pt& u, const Pt& v) { return u.t * v.z - u.z * v.t; }

// Sign of the signed area of triangle (a,b,c): +1 ccw, -1 cw, 0 collinear.
inline int orient(const Pt& a, const Pt& b, const Pt& c) {
    Rat x = cross(b - a, c - a);
    return x > 0 ? 1 : (x < 0 ? -1 : 0);
}

inline Rat seg_slope(const Pt& a, const Pt& b) { return (b.z - a.z) / (b.t - a.t); }

// z on segment a->b at theta = t; requires a.t != b.t and t within [a.t,b.t].
inline Rat seg_z_at(const Pt& a, const Pt& b, const Rat& t) {
    return a.z + (b.z - a.z) * (t - a.t) / (b.t - a.t);
}

inline bool in_closed_range(const Rat& x, const Rat& lo, const Rat& hi) {
    return (lo <= x && x <= hi) || (hi <= x && x <= lo);
}

// p collinear with and inside segment [a,b]; `closed` includes the endpoints.
inline bool point_on_segment(const Pt& a, const Pt& b, const Pt& p, bool closed) {
    if (orient(a, b, p) != 0) return false;
    if (!in_closed_range(p.t, a.t, b.t) || !in_closed_range(p.z, a.z, b.z)) return false;
    if (!closed && (p == a || p == b)) return false;
    return true;
}

enum class SegX { none, proper, touch, overlap };

struct SegHit {
    SegX kind = SegX::none;
    Pt p{}; // the single intersection point for proper/touch
};

// Exact intersection of closed segments [a,b] and [c,d] (both non-degenerate).
// proper  : interiors cross transversally at one point
// touch   : exactly one common point, involving an endpoint
// overlap : collinear with a common sub-segment of positive length
inline SegHit seg_intersect(const Pt& a, const Pt& b, const Pt& c, const Pt& d) {
    int o1 = orient(a, b, c), o2 = orient(a, b, d);
    int o3 = orient(c, d, a), o4 = orient(c, d, b);

    if (o1 == 0 && o2 == 0 && o3 == 0 && o4 == 0) {
        // collinear: project on the dominant axis
        bool byT = a.t != b.t;
        auto key = [&](const Pt& p) { return byT ? p.t : p.z; };
        Rat alo = key(a), ahi = key(b);
        if (alo > ahi) std::swap(alo, ahi);
        Rat clo = key(c), chi = key(d);
        if (clo > chi) std::swap(clo, chi);
        Rat lo = alo > clo ? alo : clo;
        Rat hi = ahi < chi ? ahi : chi;
        if (lo > hi) return {};
        if (lo == hi) {
            Pt p = key(a) == lo ? a : (key(b) == lo ? b : (key(c) == lo ? c : d));
            return {SegX::touch, p};
        }
        return {SegX::overlap, {}};
    }

    auto solve = [&]() {
        Rat denom = cross(b - a, d - c);
        Rat s = cross(c - a, d - c) / denom;
        return Pt{a.t + s * (b.t - a.t), a.z + s * (b.z - a.z)};
    };

    if (o1 * o2 < 0 && o3 * o4 < 0) return {SegX::proper, solve()};

    // touching cases: an endpoint of one lies on the other
    if (o1 == 0 && point_on_segment(a, b, c, true)) return {SegX::touch, c};
    if (o2 == 0 && point_on_segment(a, b, d, true)) return {SegX::touch, d};
    if (o3 == 0 && point_on_segment(c, d, a, true)) return {SegX::touch, a};
    if (o4 == 0 && point_on_segment(c, d, b, true)) return {SegX::touch, b};
    return {};
}

struct BBox {
    Rat tlo, thi, zlo, zhi;
};

inline BBox poly_bbox(const std::vector<Pt>& poly) {
    BBox b{poly[0].t, poly[0].t, poly[0].z, poly[0].z};
    for (const auto& p : poly) {
        if (p.t < b.tlo) b.tlo = p.t;
        if (p.t > b.thi) b.thi = p.t;
        if (p.z < b.zlo) b.zlo = p.z;
        if (p.z > b.zhi) b.zhi = p.z;
    }
    return b;
}

inline Int iceil(const Rat& r) { return -rfloor(-r); }

struct TorusHit {
    std::size_t seg_a, seg_b;
    Int shift_t, shift_z; // translate applied to polyline B
    SegHit hit;           // hit.p lies on polyline A's lift
};

// All intersections, on the torus, between lifted polylines A and B
// (B may equal A; pass self=true then, so identical translate pairs are
// deduplicated and only (0,0)-shift distinct-segment pairs are reported once).
inline std::vector<TorusHit> torus_intersections(const std::vector<Pt>& A,
                                                 const std::vector<Pt>& B,
                                                 bool self) {
    std::vector<TorusHit> out;
    if (A.size() < 2 || B.size() < 2) return out;
    BBox ba = poly_bbox(A), bb = poly_bbox(B);
    Int mlo = iceil(ba.tlo - bb.thi), mhi = rfloor(ba.thi - bb.tlo);
    Int klo = iceil(ba.zlo - bb.zhi), khi = rfloor(ba.zhi - bb.zlo);
    for (Int m = mlo; m <= mhi; ++m) {
        for (Int k = klo; k <= khi; ++k) {
            bool zero_shift = m == 0 && k == 0;
            if (self && (m < 0 || (m == 0 && k < 0))) continue; // symmetric halves
            Pt sh{Rat(m), Rat(k)};
            for (std::size_t i = 0; i + 1 < A.size(); ++i) {
                for (std::size_t j = 0; j + 1 < B.size(); ++j) {
                    if (self && zero_shift && j <= i) continue;
                    SegHit h = seg_intersect(A[i], A[i + 1], B[j] + sh, B[j + 1] + sh);
                    if (h.kind != SegX::none) out.push_back({i, j, m, k, h});
                }
            }
        }
    }
    return out;
}

} // namespace openbook
