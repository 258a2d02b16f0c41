#pragma once

#include <string>
#include <vector>

#include "openbook/front.hpp"

// Seeded generation of valid graph fronts on a given Morse diagram. Candidate
// components are drawn with exact coordinates on an odd/65536 grid (so exact
// coincidences between independent draws are rare), validated as a whole, and
// redrawn on failure. Generation is fully deterministic in (diagram, seed,
// size).

namespace openbook {

namespace detail {

inline Rat odd_frac(Rng& rng) {
    return Rat(2 * Int(rng.below(32768)) + 1, 65536);
}

// small positive width in [1025/65536, 5119/65536]
inline Rat small_span(Rng& rng) {
    return Rat(1025 + 2 * Int(rng.below(2048)), 65536);
}

// closed two-cusp loop: straight upper branch, bent lower branch
inline FrontStrand lens_component(Rng& rng, int torus) {
    Rat tl = odd_frac(rng), w = small_span(rng);
    Rat zt = odd_frac(rng), h = small_span(rng);
    Pt L{tl, zt}, R{tl + w, zt - h};
    Pt M{tl + w / 2, zt - 3 * h / 4};
    FrontStrand s;
    s.torus = torus;
    s.poly = {L, R, M, L};
    s.cusp = {1, 1, 0, 1};
    return s;
}

// one-vertex bouquet with `loops` one-cusp loop edges, all leaving rightward
inline void bouquet_component(Rng& rng, int torus, int loops, GraphFront& f) {
    Rat tv = odd_frac(rng), zv = odd_frac(rng);
    Rat w0 = small_span(rng), a0 = small_span(rng);
    FrontVertex v;
    v.id = 0;
    for (const auto& u : f.vertices) v.id = std::max(v.id, u.id + 1);
    v.torus = torus;
    v.theta = tv;
    v.z = zv;
    std::vector<std::pair<StrandEndRef, Pt>> germs;
    for (int i = 0; i < loops; ++i) {
        Rat w = w0 / (i + 1), a = a0 * (i + 1);
        Rat a1 = 3 * a / 8;
        Pt V{tv, zv};
        Pt M1{tv + w / 2, zv - a1};
        Pt P{tv + w, zv - a};
        FrontStrand s;
        s.torus = torus;
        s.poly = {V, M1, P, V};
        s.cusp = {0, 0, 1, 0};
        s.start = {FrontEnd::Kind::vertex, v.id, false};
        s.end = {FrontEnd::Kind::vertex, v.id, false};
        int sid = static_cast<int>(f.strands.size());
        f.strands.push_back(s);
        germs.push_back({{sid, 0}, M1 - V});
        germs.push_back({{sid, 1}, P - V});
    }
    std::sort(germs.begin(), germs.end(), [](const auto& x, const auto& y) {
        return angle_less(x.second, y.second);
    });
    for (const auto& g : germs) v.cyc.push_back(g.first);
    f.vertices.push_back(v);
}

// strand between two graph-curve ends at slices ta < tb on the same edge,
// running through the lift window [ta + shift, tb + shift]
inline FrontStrand span_strand(int torus, int edge, Pt pa, Pt pb, bool left_a,
                               bool left_b) {
    FrontStrand s;
    s.torus = torus;
    Rat w = pb.t - pa.t;
    Rat d = w / 8;
    Pt A{pa.t + d, pa.z}, B{pb.t - d, pb.z};
    s.poly.push_back(pa);
    s.cusp.push_back(0);
    s.poly.push_back(A);
    s.cusp.push_back(0);
    if (pb.z < pa.z) {
        // plain descending connector
    } else {
        // detour over the top: down-right, cusp, up-left, cusp, down-right
        Rat eta = w / 16;
        Pt C1{A.t + d / 2, A.z - eta};
        Pt C2{A.t + d / 4, B.z + eta};
        s.poly.push_back(C1);
        s.cusp.push_back(1);
        s.poly.push_back(C2);
        s.cusp.push_back(1);
    }
    s.poly.push_back(B);
    s.cusp.push_back(0);
    s.poly.push_back(pb);
    s.cusp.push_back(0);
    s.start = {FrontEnd::Kind::tedge, edge, left_a};
    s.end = {FrontEnd::Kind::tedge, edge, left_b};
    return s;
}

// two-strand cycle over one label pair, jumped at two slices
inline bool pair_cycle_component(Rng& rng, const MorseDiagram& d, GraphFront& f) {
    auto crit = critical_thetas(d);
    if (crit.empty()) return false;
    std::vector<std::pair<Rat, Rat>> intervals;
    std::vector<Rat> cs(crit.begin(), crit.end());
    for (std::size_t i = 0; i < cs.size(); ++i) {
        Rat lo = cs[i];
        Rat hi = i + 1 < cs.size() ? cs[i + 1] : cs[0] + 1;
        if (hi > lo) intervals.push_back({lo, hi});
    }
    auto [lo, hi] = intervals[static_cast<std::size_t>(
        rng.below(static_cast<std::uint64_t>(intervals.size())))];
    Rat width = hi - lo;
    Rat ta = lo + width * Rat(2 * Int(rng.below(4096)) + 1, 16384);
    Rat tb = lo + width * Rat(8193 + 2 * Int(rng.below(4095)), 16384);
    if (ta >= tb) return false;

    auto pairs = slice_pairs(d, mod1(ta));
    if (pairs.empty()) return false;
    const SlicePair pr =
        pairs[static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(pairs.size())))];
    auto pairs_b = slice_pairs(d, mod1(tb));
    const SlicePair* prb = nullptr;
    for (const auto& q : pairs_b)
        if (q.label == pr.label) prb = &q;
    if (!prb) return false;
    const SlicePoint* a1 = &pr.a;
    const SlicePoint* a2 = &pr.b;
    const SlicePoint* b1 = prb->a.edge == a1->edge ? &prb->a : &prb->b;
    const SlicePoint* b2 = prb->a.edge == a1->edge ? &prb->b : &prb->a;
    if (b1->edge != a1->edge || b2->edge != a2->edge) return false;

    auto slope_at = [&](const SlicePoint& sp) {
        auto spot = locate_on_tedge(d.edges[static_cast<std::size_t>(sp.edge)],
                                    Pt{mod1(sp.lift_t), sp.z});
        return spot.slope;
    };
    Rat s1a = slope_at(*a1), s1b = slope_at(*b1);
    Rat s2a = slope_at(*a2), s2b = slope_at(*b2);
    if (s1a == 0 || s1b == 0 || s2a == 0 || s2b == 0) return false;

    bool diff_a = (s1a > 0) != (s2a > 0);
    bool diff_b = (s1b > 0) != (s2b > 0);
    if (diff_a != diff_b) return false; // would need an approach-flipping detour

    // strand polylines stay in the lifted window [ta, tb] (which may straddle
    // the seam); only the slice lookups reduce theta
    FrontStrand U = span_strand(a1->torus, a1->edge, Pt{ta, a1->z}, Pt{tb, b1->z},
                                s1a > 0, s1b < 0);
    FrontStrand V;
    if (diff_a) {
        V = span_strand(a2->torus, a2->edge, Pt{ta, a2->z}, Pt{tb, b2->z}, s2a > 0,
                        s2b < 0);
    } else {
        // complementary window [tb, ta + 1]
        V = span_strand(a2->torus, a2->edge, Pt{tb, b2->z}, Pt{ta + 1, a2->z},
                        s2b > 0, s2a < 0);
    }
    f.strands.push_back(U);
    f.strands.push_back(V);
    return true;
}

} // namespace detail

inline GraphFront random_graph_front(const MorseDiagram& d, std::uint64_t seed,
                                     int size) {
    if (size < 1)
        throw PreconditionError("GenerationFailure", "size must be positive");
    Rng rng(seed);
    for (int attempt = 0; attempt < 100; ++attempt) {
        GraphFront f;
        bool broken = false;
        for (int c = 0; c < size && !broken; ++c) {
            int kind = c == 0 ? 0 : static_cast<int>(rng.below(3));
            int torus = static_cast<int>(rng.below(static_cast<std::uint64_t>(d.n)));
            switch (kind) {
            case 0:
                f.strands.push_back(detail::lens_component(rng, torus));
                break;
            case 1:
                detail::bouquet_component(rng, torus, 1 + static_cast<int>(rng.below(2)),
                                          f);
                break;
            default:
                if (!detail::pair_cycle_component(rng, d, f))
                    f.strands.push_back(detail::lens_component(rng, torus));
                break;
            }
        }
        if (broken) continue;
        if (validate_front(f, d).ok()) return f;
    }
    throw PreconditionError("GenerationFailure",
                            "no valid front after 100 attempts (seed " +
                                std::to_string(seed) + ")");
}

} // namespace openbook
