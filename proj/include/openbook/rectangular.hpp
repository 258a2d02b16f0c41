#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "openbook/front.hpp"

// Staircase redraws of graph fronts: every segment of the redraw has slope
// -eps or -1/eps, cusps stay exactly where they were, and the redraw meets
// the graph curves in exactly the same points as the source front. Contact
// is steep (-1/eps) wherever a monotone path can pass or land on the curve
// from above; where the curve falls away under the contact point the redraw
// instead hugs it from the horizontal side at slope -eps, since any steeper
// approach would cut the curve a second time. Horizontal end runs do not
// survive: their corner is dropped and the end point is approached directly.

namespace openbook {

struct RectangularPiece {
    int torus = 0;
    std::vector<Pt> poly;                  // lifted, theta strictly increasing
    bool closed = false;                   // last point = first + one full turn
    std::vector<std::size_t> graph_marks;  // poly indices sitting on the graph
};

struct RectangularGraph {
    Rat epsilon;
    std::vector<RectangularPiece> pieces;   // one per cusp-free monotone run
    std::vector<std::pair<int, Pt>> cusps;  // canonical cusp positions
};

namespace detail {

// one monotone stretch of one strand, normalized to increasing theta
struct RectRun {
    int torus = 0;
    std::vector<Pt> pts;    // original geometry, lifted
    bool closed = false;
    bool graph_lo = false;  // leftmost point sits on a graph curve
    bool graph_hi = false;
    bool stub_lo = false;   // ...reached through a horizontal end run
    bool stub_hi = false;
};

// 0 = plain corner, 1 = steep contact, 2 = flat contact
struct RectAnchor {
    Pt p;
    int contact = 0;
};

inline void append_runs(const FrontStrand& s, std::vector<RectRun>& out) {
    const std::size_t n = s.poly.size();

    auto push = [&](std::vector<Pt> pts, bool has_start, bool has_end) {
        RectRun r;
        r.torus = s.torus;
        bool rev = pts.back().t < pts.front().t;
        if (rev) std::reverse(pts.begin(), pts.end());
        r.pts = std::move(pts);
        auto flag = [&](bool at_lo, const FrontEnd& e) {
            if (e.kind != FrontEnd::Kind::tedge) return;
            (at_lo ? r.graph_lo : r.graph_hi) = true;
            (at_lo ? r.stub_lo : r.stub_hi) = true;
        };
        if (has_start) flag(!rev, s.start);
        if (has_end) flag(rev, s.end);
        out.push_back(std::move(r));
    };

    if (s.closed()) {
        std::vector<std::size_t> marks;  // circle indices of cusps
        for (std::size_t i = 0; i + 1 < n; ++i)
            if (s.cusp[i]) marks.push_back(i);
        if (marks.empty()) {
            RectRun r;
            r.torus = s.torus;
            r.pts = s.poly;
            r.closed = true;
            if (r.pts.back().t < r.pts.front().t)
                std::reverse(r.pts.begin(), r.pts.end());
            out.push_back(std::move(r));
            return;
        }
        Pt wind = s.poly.back() - s.poly.front();
        auto at = [&](std::size_t j) {  // unrolled circle point
            return j < n - 1 ? s.poly[j] : s.poly[j - (n - 1)] + wind;
        };
        for (std::size_t k = 0; k < marks.size(); ++k) {
            std::size_t a = marks[k];
            std::size_t b = k + 1 < marks.size() ? marks[k + 1] : marks[0] + (n - 1);
            std::vector<Pt> pts;
            for (std::size_t j = a; j <= b; ++j) pts.push_back(at(j));
            push(std::move(pts), false, false);
        }
        return;
    }

    std::vector<std::size_t> cuts;
    for (std::size_t i = 1; i + 1 < n; ++i)
        if (s.cusp[i]) cuts.push_back(i);
    std::size_t prev = 0;
    for (std::size_t c : cuts) {
        push({s.poly.begin() + static_cast<long>(prev),
              s.poly.begin() + static_cast<long>(c) + 1},
             prev == 0, false);
        prev = c;
    }
    push({s.poly.begin() + static_cast<long>(prev), s.poly.end()}, prev == 0, true);
}

struct RunCrossing {
    Pt p;  // in the polyline's own lift frame
    Rat strand_slope;
    Rat edge_slope;
};

inline std::vector<RunCrossing> run_crossings(const MorseDiagram& d, int torus,
                                              const std::vector<Pt>& poly) {
    std::vector<RunCrossing> out;
    for (const auto& e : d.edges) {
        if (e.torus != torus) continue;
        for (const TorusHit& h : torus_intersections(poly, e.poly, false))
            if (h.hit.kind == SegX::proper)
                out.push_back({h.hit.p, seg_slope(poly[h.seg_a], poly[h.seg_a + 1]),
                               seg_slope(e.poly[h.seg_b], e.poly[h.seg_b + 1])});
    }
    return out;
}

// slope of the curve carrying point p, on the approach side
inline std::optional<Rat> host_germ_slope(const MorseDiagram& d, int torus,
                                          const Pt& p, bool left_side) {
    for (const auto& e : d.edges) {
        if (e.torus != torus) continue;
        for (std::size_t i = 0; i + 1 < e.poly.size(); ++i) {
            const Pt &a = e.poly[i], &b = e.poly[i + 1];
            BBox bb = poly_bbox({a, b});
            for (Int m = iceil(bb.tlo - p.t); Rat(m) + p.t <= bb.thi; ++m)
                for (Int k = iceil(bb.zlo - p.z); Rat(k) + p.z <= bb.zhi; ++k) {
                    Pt q{p.t + Rat(m), p.z + Rat(k)};
                    if (!point_on_segment(a, b, q, true)) continue;
                    if (left_side ? a.t < q.t : b.t > q.t) return seg_slope(a, b);
                }
        }
    }
    return std::nullopt;
}

// every graph contact of a redrawn polyline, with the segment that hit
inline void collect_contact(
    const MorseDiagram& d, int torus, const std::vector<Pt>& poly,
    std::set<std::pair<int, std::pair<Rat, Rat>>>& acc,
    std::vector<std::size_t>& offending_segs,
    const std::set<std::pair<int, std::pair<Rat, Rat>>>& want) {
    for (const auto& e : d.edges) {
        if (e.torus != torus) continue;
        for (const TorusHit& h : torus_intersections(poly, e.poly, false)) {
            if (h.hit.kind == SegX::overlap) {
                offending_segs.push_back(h.seg_a);
                continue;
            }
            Pt p = canon(h.hit.p);
            std::pair<int, std::pair<Rat, Rat>> key{torus, {p.t, p.z}};
            if (!want.count(key)) offending_segs.push_back(h.seg_a);
            acc.insert(key);
        }
    }
}

}  // namespace detail

inline RectangularGraph slanted_rectangular_approximation(const GraphFront& f,
                                                          const MorseDiagram& d,
                                                          const Rat& eps) {
    {
        ValidationReport rep = validate_front(f, d);
        if (!rep.ok())
            throw PreconditionError("InvalidFront", rep.issues.front().code + " at " +
                                                        rep.issues.front().where);
    }

    // the contact set the redraw must reproduce
    std::set<std::pair<int, std::pair<Rat, Rat>>> want;
    for (const auto& s : f.strands) {
        for (const auto& c : detail::run_crossings(d, s.torus, s.poly)) {
            Pt q = canon(c.p);
            want.insert({s.torus, {q.t, q.z}});
        }
        if (s.closed()) continue;
        for (int which = 0; which < 2; ++which) {
            const FrontEnd& e = which == 0 ? s.start : s.end;
            if (e.kind != FrontEnd::Kind::tedge) continue;
            Pt q = canon(detail::end_point(s, which));
            want.insert({s.torus, {q.t, q.z}});
        }
    }

    std::vector<detail::RectRun> runs;
    for (const auto& s : f.strands) detail::append_runs(s, runs);

    // anchor chains; the redraw is drawn chunk by chunk between anchors
    std::vector<std::vector<detail::RectAnchor>> chains;
    Rat bound(1);
    auto end_contact = [&](const detail::RectRun& r, bool hi) {
        Pt p = canon(hi ? r.pts.back() : r.pts.front());
        auto s = detail::host_germ_slope(d, r.torus, p, hi);
        if (!s)
            throw PreconditionError("InternalError",
                                    "strand end is not on any graph curve");
        if (*s > 0) return 1;           // curve rises: pass above it, steeply
        bound = std::min(bound, Rat(-*s));  // hug below/above at the flat slope
        return 2;
    };
    for (const auto& r : runs) {
        std::vector<detail::RectAnchor> chain;
        std::size_t npts = r.pts.size() - (r.closed ? 1 : 0);
        for (std::size_t i = 0; i < npts; ++i) {
            if (!r.closed && r.stub_lo && i == 1) continue;  // stub corners vanish
            if (!r.closed && r.stub_hi && i == r.pts.size() - 2) continue;
            chain.push_back({r.pts[i], 0});
        }
        if (chain.size() < 2 && !r.closed) {
            bound = 0;
            chains.push_back(std::move(chain));
            continue;
        }
        if (!r.closed && r.graph_lo) chain.front().contact = end_contact(r, false);
        if (!r.closed && r.graph_hi) chain.back().contact = end_contact(r, true);

        // transverse crossings: steep when the redraw can dive through from
        // above (curve flatter than the strand), flat when the curve falls
        // through the strand from above
        for (const auto& c : detail::run_crossings(d, r.torus, r.pts)) {
            bool dup = false;
            for (const auto& a : chain)
                if (a.p.t == c.p.t) dup = true;
            if (dup) continue;
            int mode = c.strand_slope < c.edge_slope ? 1 : 2;
            if (mode == 1 && c.edge_slope < 0)
                bound = std::min(bound, Rat(Rat(-1) / c.edge_slope));
            if (mode == 2) bound = std::min(bound, Rat(-c.edge_slope));
            chain.push_back({c.p, mode});
        }
        std::sort(chain.begin(), chain.end(),
                  [](const detail::RectAnchor& a, const detail::RectAnchor& b) {
                      return a.p.t < b.p.t;
                  });

        std::size_t m = chain.size();
        std::size_t pairs = r.closed ? m : m - 1;
        for (std::size_t i = 0; i < pairs; ++i) {
            const Pt& a = chain[i].p;
            Pt b = i + 1 < m ? chain[i + 1].p
                             : chain[0].p + (r.pts.back() - r.pts.front());
            Rat dt = b.t - a.t, dz = a.z - b.z;
            if (dt <= 0 || dz <= 0) {
                bound = 0;
                continue;
            }
            bound = std::min(bound, std::min(Rat(dz / dt), Rat(dt / dz)));
        }
        chains.push_back(std::move(chain));
    }

    if (eps <= 0 || eps >= bound)
        throw PreconditionError("EpsilonTooLarge",
                                "epsilon must lie in (0, " + rat_str(bound) + ")");

    // one chunk between anchors; the flat share u solves
    // eps*u + (dt-u)/eps = dz, kept strictly interior by the slope bound
    auto draw_chunk = [&](const Pt& a, const Pt& b, int cstart, int cend,
                          std::vector<Pt>& out) {
        Rat dt = b.t - a.t, dz = a.z - b.z;
        Rat u = (dt - eps * dz) / (1 - eps * eps);
        Rat v = dt - u;
        bool dive_out = cstart == 1;
        bool land_flat = cend == 2;
        if (dive_out && !land_flat) {
            Pt p1{a.t + v / 2, a.z - v / (2 * eps)};
            Pt p2{p1.t + u, p1.z - eps * u};
            out.push_back(p1);
            out.push_back(p2);
        } else if (dive_out && land_flat) {
            out.push_back(Pt{a.t + v, a.z - v / eps});
        } else if (land_flat) {
            Pt p1{a.t + u / 2, a.z - eps * u / 2};
            Pt p2{p1.t + v, p1.z - v / eps};
            out.push_back(p1);
            out.push_back(p2);
        } else {
            out.push_back(Pt{a.t + u, a.z - eps * u});
        }
        out.push_back(b);
    };

    for (int round = 0;; ++round) {
        if (round > 12)
            throw PreconditionError(
                "EpsilonTooLarge",
                "redraw keeps grazing the graph; use a smaller epsilon");

        RectangularGraph out;
        out.epsilon = eps;
        for (const auto& s : f.strands) {
            std::size_t n = s.poly.size();
            for (std::size_t i = s.closed() ? 0 : 1; i + 1 < n; ++i)
                if (s.cusp[i]) out.cusps.push_back({s.torus, canon(s.poly[i])});
        }

        std::vector<std::vector<std::size_t>> seg_chunk(runs.size());
        for (std::size_t ri = 0; ri < runs.size(); ++ri) {
            const detail::RectRun& r = runs[ri];
            const auto& chain = chains[ri];
            RectangularPiece pc;
            pc.torus = r.torus;
            pc.closed = r.closed;
            pc.poly.push_back(chain.front().p);
            if (chain.front().contact) pc.graph_marks.push_back(0);
            std::size_t m = chain.size();
            std::size_t pairs = r.closed ? m : m - 1;
            for (std::size_t i = 0; i < pairs; ++i) {
                const Pt& a = chain[i].p;
                bool wrap = i + 1 == m;
                Pt b = wrap ? chain[0].p + (r.pts.back() - r.pts.front())
                            : chain[i + 1].p;
                int cend = wrap ? chain[0].contact : chain[i + 1].contact;
                std::size_t first_seg = pc.poly.size() - 1;
                draw_chunk(a, b, chain[i].contact, cend, pc.poly);
                for (std::size_t k = first_seg; k + 1 < pc.poly.size(); ++k)
                    seg_chunk[ri].push_back(i);
                if (!wrap && cend) pc.graph_marks.push_back(pc.poly.size() - 1);
            }
            out.pieces.push_back(std::move(pc));
        }

        std::set<std::pair<int, std::pair<Rat, Rat>>> got;
        std::vector<std::set<std::size_t>> split(runs.size());
        bool clean = true;
        for (std::size_t ri = 0; ri < runs.size(); ++ri) {
            std::vector<std::size_t> bad_segs;
            detail::collect_contact(d, out.pieces[ri].torus, out.pieces[ri].poly,
                                    got, bad_segs, want);
            for (std::size_t sgi : bad_segs) {
                split[ri].insert(seg_chunk[ri][sgi]);
                clean = false;
            }
        }
        if (clean && got == want) return out;

        // pull only the offending chunks toward their anchor chord, which
        // retraces the source geometry and carries no stray contact
        for (std::size_t ri = 0; ri < runs.size(); ++ri) {
            if (split[ri].empty()) continue;
            const detail::RectRun& r = runs[ri];
            auto& chain = chains[ri];
            std::vector<detail::RectAnchor> finer;
            std::size_t m = chain.size();
            std::size_t pairs = r.closed ? m : m - 1;
            for (std::size_t i = 0; i < pairs; ++i) {
                Pt b = i + 1 < m ? chain[i + 1].p
                                 : chain[0].p + (r.pts.back() - r.pts.front());
                finer.push_back(chain[i]);
                if (split[ri].count(i))
                    finer.push_back(
                        {Pt{(chain[i].p.t + b.t) / 2, (chain[i].p.z + b.z) / 2}, 0});
            }
            if (!r.closed) finer.push_back(chain.back());
            chain = std::move(finer);
        }
    }
}

}  // namespace openbook
