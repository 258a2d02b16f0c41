#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "openbook/arc.hpp"
#include "openbook/front.hpp"

// Contraction of a validated front onto finitely many page angles. Every
// cusp and every front vertex becomes a binding vertex; extra valence-2
// vertices are inserted where a run of material would otherwise sweep a full
// turn, overlap itself at its angle, or straddle angles where the graph
// changes shape. Each remaining vertex-to-vertex chain is flattened to one
// wire: its strand pieces become vertical arcs at the wire angle, joined by
// jumps across the label pairing. Wires that cannot be flattened in one go
// are split into single-jump stubs and short material runs, which always fit.

namespace openbook {

struct SubdivisionEntry {
    int vertex = -1;
    std::string kind; // "vertex" | "cusp" | "adapter" | "cut"
    int torus = 0;
    Pt at; // canonical
};

struct ArcPositionResult {
    ArcDiagram arcs;
    GraphFront subdivided;
    std::vector<SubdivisionEntry> record;
};

namespace detail {

// The circle cut at the angles where some graph curve has a breakpoint or a
// graph vertex sits. Inside one cell every curve branch is a single straight
// segment, so branches can be followed exactly.
struct CritCells {
    std::vector<Rat> crit; // sorted canonical

    explicit CritCells(const MorseDiagram& d) : crit(critical_thetas(d)) {}

    int count() const { return crit.empty() ? 1 : static_cast<int>(crit.size()); }

    // cell whose open interior contains theta; a critical angle counts as the
    // top of the cell below it
    int index_of(const Rat& theta) const {
        if (crit.empty()) return 0;
        Rat t = crit.front() + mod1(theta - crit.front());
        int k = 0;
        for (std::size_t i = 1; i < crit.size(); ++i)
            if (crit[i] < t) k = static_cast<int>(i);
        return k;
    }

    std::pair<Rat, Rat> bounds(int k) const {
        if (crit.empty()) return {Rat(0), Rat(1)};
        Rat lo = crit[k];
        Rat hi = k + 1 < static_cast<int>(crit.size()) ? crit[k + 1] : crit.front() + 1;
        return {lo, hi};
    }

    Rat lift(int k, const Rat& theta) const {
        Rat lo = bounds(k).first;
        return lo + mod1(theta - lo);
    }
};

// Slice data for a strand end sitting on a graph curve, built from the
// endpoint itself (the slice through that angle need not be generic away
// from the end).
inline SlicePoint end_slice_point(const MorseDiagram& d, const FrontStrand& s, int which) {
    const FrontEnd& e = which == 0 ? s.start : s.end;
    Pt p = canon(end_point(s, which));
    const auto& ed = d.edges[e.ref];
    TEdgeSpot spot = locate_on_tedge(ed, p);
    if (!spot.ok)
        throw PreconditionError("InternalError", "strand end left its graph curve");
    SlicePoint out;
    out.torus = ed.torus;
    out.z = p.z;
    out.label = ed.label;
    out.edge = e.ref;
    out.lift_t = p.t + spot.lift_shift;
    out.lift_z = seg_z_at(ed.poly[spot.seg], ed.poly[spot.seg + 1], out.lift_t);
    return out;
}

// The same curve branch a little later: two slices in one critical-free cell
// meet each straight piece in points whose polyline parameters differ by
// exactly the angle difference.
inline SlicePoint branch_at(const MorseDiagram& d, const SlicePoint& p, const Rat& delta) {
    if (delta == 0) return p;
    for (const SlicePoint& q : points_at_slice(d, mod1(p.lift_t + delta)))
        if (q.edge == p.edge && q.lift_t == p.lift_t + delta) return q;
    throw PreconditionError("InternalError", "curve branch lost between slices");
}

// How many drawn strand points of the front sit at this torus point.
inline int front_hits(const GraphFront& g, int torus, const Pt& p) {
    int hits = 0;
    for (const auto& s : g.strands) {
        if (s.torus != torus) continue;
        for (std::size_t i = 0; i + 1 < s.poly.size(); ++i) {
            const Pt &a = s.poly[i], &b = s.poly[i + 1];
            BBox bb = poly_bbox({a, b});
            for (Int m = iceil(bb.tlo - p.t); Rat(m) + p.t <= bb.thi; ++m)
                for (Int k = iceil(bb.zlo - p.z); Rat(k) + p.z <= bb.zhi; ++k)
                    if (point_on_segment(a, b, Pt{p.t + Rat(m), p.z + Rat(k)}, true))
                        ++hits;
        }
    }
    return hits;
}

// A usable spot for a new valence-2 vertex on a strand, with z strictly
// inside (zlo, zhi) in the strand lift frame: off the graph, through no other
// drawn point, at a fresh binding height. Scans dyadic grids of the window.
inline Pt pick_cut(const GraphFront& g, const MorseDiagram& d, int strand, Rat zlo,
                   Rat zhi, const std::set<std::pair<int, Rat>>& taken) {
    const FrontStrand& s = g.strands[strand];
    if (zhi < zlo) std::swap(zlo, zhi);
    int tries = 0;
    for (int level = 2; level <= 24; ++level) {
        long long cells = 1LL << (level - 1);
        for (long long j = 0; j < cells && tries < 5000; ++j) {
            ++tries;
            Rat z = zlo + (zhi - zlo) * Rat(2 * j + 1) / Rat(2 * cells);
            for (std::size_t i = 0; i + 1 < s.poly.size(); ++i) {
                Rat a = s.poly[i].z, b = s.poly[i + 1].z;
                Rat lo = a < b ? a : b, hi = a < b ? b : a;
                if (!(z > lo && z < hi)) continue;
                Rat t = s.poly[i].t + (z - a) * (s.poly[i + 1].t - s.poly[i].t) / (b - a);
                Pt p = canon(Pt{t, z});
                if (front_hits(g, s.torus, p) == 1 && !on_skeleton(d, s.torus, p) &&
                    !taken.count({s.torus, p.z}))
                    return Pt{t, z};
            }
        }
    }
    throw PreconditionError("InternalError",
                            "no usable cut point on strand " + std::to_string(strand));
}

// Open the front at a marked reversal: the cusp point becomes a valence-2
// front vertex, the flag is cleared, and the drawn point set is unchanged.
inline GraphFront split_at_cusp(const GraphFront& f, int strand_id, std::size_t idx,
                                int* new_vid) {
    GraphFront out = f;
    const FrontStrand s = f.strands[strand_id];
    int vid = 0;
    for (const auto& v : f.vertices) vid = std::max(vid, v.id + 1);

    FrontVertex v;
    v.id = vid;
    v.torus = s.torus;
    Pt at = canon(s.poly[idx]);
    v.theta = at.t;
    v.z = at.z;

    std::size_t n = s.poly.size();
    if (s.closed()) {
        FrontStrand ns;
        ns.torus = s.torus;
        ns.start = {FrontEnd::Kind::vertex, vid, false};
        ns.end = {FrontEnd::Kind::vertex, vid, false};
        if (idx == 0) { // the seam already sits at the cusp
            ns.poly = s.poly;
            ns.cusp = s.cusp;
        } else {
            Pt wind = s.poly.back() - s.poly.front();
            for (std::size_t i = idx; i + 1 < n; ++i) {
                ns.poly.push_back(s.poly[i]);
                ns.cusp.push_back(s.cusp[i]);
            }
            for (std::size_t i = 0; i <= idx; ++i) {
                ns.poly.push_back(s.poly[i] + wind);
                ns.cusp.push_back(s.cusp[i]);
            }
        }
        ns.cusp.front() = 0;
        ns.cusp.back() = 0;
        out.strands[strand_id] = ns;
        v.cyc = {{strand_id, 0}, {strand_id, 1}};
    } else {
        FrontStrand s1, s2;
        s1.torus = s2.torus = s.torus;
        s1.start = s.start;
        s1.end = {FrontEnd::Kind::vertex, vid, false};
        s2.start = {FrontEnd::Kind::vertex, vid, false};
        s2.end = s.end;
        for (std::size_t i = 0; i <= idx; ++i) {
            s1.poly.push_back(s.poly[i]);
            s1.cusp.push_back(s.cusp[i]);
        }
        for (std::size_t i = idx; i < n; ++i) {
            s2.poly.push_back(s.poly[i]);
            s2.cusp.push_back(s.cusp[i]);
        }
        s1.cusp.back() = 0;
        s2.cusp.front() = 0;
        int id2 = static_cast<int>(out.strands.size());
        out.strands[strand_id] = s1;
        out.strands.push_back(s2);
        for (auto& fv : out.vertices)
            for (auto& r : fv.cyc)
                if (r.strand == strand_id && r.which == 1) r.strand = id2;
        v.cyc = {{strand_id, 1}, {id2, 0}};
    }
    {
        Pt g0 = end_germ(out.strands[v.cyc[0].strand], v.cyc[0].which);
        Pt g1 = end_germ(out.strands[v.cyc[1].strand], v.cyc[1].which);
        if (!angle_less(g0, g1)) std::swap(v.cyc[0], v.cyc[1]);
    }
    out.vertices.push_back(v);
    out.crossings.clear();
    *new_vid = vid;
    return out;
}

// free-angle bookkeeping inside one critical-free cell
struct CellAlloc {
    Rat lo, hi;          // lifted, hi <= lo + 1
    std::set<Rat> used;  // lifted into [lo, hi)
};

inline Rat any_theta(CellAlloc& A) {
    if (A.used.empty()) {
        Rat th = simplest_in(A.lo, A.hi);
        A.used.insert(th);
        return th;
    }
    std::vector<Rat> u(A.used.begin(), A.used.end());
    Rat bl = A.lo, bh = u.front();
    for (std::size_t i = 0; i < u.size(); ++i) {
        Rat lo2 = u[i];
        Rat hi2 = i + 1 < u.size() ? u[i + 1] : A.hi;
        if (hi2 - lo2 > bh - bl) {
            bl = lo2;
            bh = hi2;
        }
    }
    Rat th = simplest_in(bl, bh);
    A.used.insert(th);
    return th;
}

inline std::optional<Rat> near_theta(const CellAlloc& A, const Rat& target, const Rat& r) {
    Rat wlo = target - r < A.lo ? A.lo : target - r;
    Rat whi = target + r > A.hi ? A.hi : target + r;
    if (wlo < whi) {
        Rat th = simplest_in(wlo, whi);
        if (!A.used.count(th)) return th;
    }
    if (wlo < target) { // the target itself may be occupied: try one-sided
        Rat th = simplest_in(wlo, target);
        if (!A.used.count(th)) return th;
    }
    if (target < whi) {
        Rat th = simplest_in(target, whi);
        if (!A.used.count(th)) return th;
    }
    return std::nullopt;
}

} // namespace detail

inline ArcPositionResult to_arc_position(const GraphFront& f_in, const MorseDiagram& d) {
    {
        ValidationReport rep = validate_front(f_in, d);
        if (!rep.ok())
            throw PreconditionError("InvalidFront", rep.issues.front().code + " at " +
                                                        rep.issues.front().where);
    }

    GraphFront g = f_in;
    g.crossings.clear();
    std::vector<SubdivisionEntry> rec;
    std::set<std::pair<int, Rat>> taken; // occupied binding heights

    for (const auto& v : g.vertices) {
        if (!taken.insert({v.torus, v.z}).second)
            throw PreconditionError("DegeneratePositions",
                                    "two front vertices share a binding height");
        rec.push_back({v.id, "vertex", v.torus, Pt{v.theta, v.z}});
    }
    std::set<int> big; // vertices whose rotational order must be re-created
    for (const auto& v : g.vertices)
        if (v.cyc.size() >= 3) big.insert(v.id);

    // --- every cusp becomes a binding vertex ---------------------------------
    for (bool again = true; again;) {
        again = false;
        for (std::size_t si = 0; si < g.strands.size() && !again; ++si) {
            const FrontStrand& s = g.strands[si];
            std::size_t n = s.poly.size();
            for (std::size_t i = s.closed() ? 0 : 1; i + 1 < n && !again; ++i) {
                if (!s.cusp[i]) continue;
                int tor = s.torus;
                Pt at = canon(s.poly[i]);
                if (!taken.insert({tor, at.z}).second)
                    throw PreconditionError("DegeneratePositions",
                                            "cusp at an occupied binding height");
                int vid = -1;
                g = detail::split_at_cusp(g, static_cast<int>(si), i, &vid);
                rec.push_back({vid, "cusp", tor, at});
                again = true;
            }
        }
    }

    // --- stub off every end at a high-valence vertex --------------------------
    // One cut just past each germ decouples the rotational constraint: the
    // stubs get consecutive angles in the listed order, everything else ends
    // at valence-2 vertices where any order is correct.
    std::map<int, std::pair<int, int>> amap; // adapter cut vid -> (owner, slot)
    for (int ow : big) {
        std::size_t val = g.vertex_by_id(ow)->cyc.size();
        for (std::size_t k = 0; k < val; ++k) {
            StrandEndRef r = g.vertex_by_id(ow)->cyc[k]; // fresh: earlier cuts rewire
            const FrontStrand& s = g.strands[r.strand];
            Pt pv = detail::end_point(s, r.which);
            Pt nb = r.which == 0 ? s.poly[1] : s.poly[s.poly.size() - 2];
            int tor = s.torus;
            Rat span = nb.z - pv.z; // vertex germs are never horizontal
            Rat sgn = span > 0 ? Rat(1) : Rat(-1);
            Rat w = span > 0 ? span : -span;
            Rat wmax = std::min(Rat(w / 4), Rat(1, 4));
            Pt cut = detail::pick_cut(g, d, r.strand, pv.z + sgn * wmax / 8,
                                      pv.z + sgn * wmax, taken);
            g = subdivide_edge(g, r.strand, cut);
            int vid = g.vertices.back().id;
            taken.insert({tor, mod1(cut.z)});
            rec.push_back({vid, "adapter", tor, canon(cut)});
            amap[vid] = {ow, static_cast<int>(k)};
        }
    }

    // --- open every closed circuit at one point -------------------------------
    {
        struct Plan {
            int strand;
            Rat zlo, zhi;
        };
        std::vector<Plan> plans;
        for (const auto& ch : front_chains(g, d)) {
            if (!ch.cycle) continue;
            const FrontStrand& s = g.strands[ch.steps.front().strand];
            Rat zmin = s.poly.front().z, zmax = zmin;
            for (const Pt& p : s.poly) {
                zmin = std::min(zmin, p.z);
                zmax = std::max(zmax, p.z);
            }
            Rat span = zmax - zmin;
            plans.push_back({ch.steps.front().strand, zmin + span / 4, zmax - span / 4});
        }
        for (const auto& pl : plans) {
            int tor = g.strands[pl.strand].torus;
            Pt cut = detail::pick_cut(g, d, pl.strand, pl.zlo, pl.zhi, taken);
            g = subdivide_edge(g, pl.strand, cut);
            taken.insert({tor, mod1(cut.z)});
            rec.push_back({g.vertices.back().id, "cut", tor, canon(cut)});
        }
    }

    // --- separate jumps living in different critical-free cells ---------------
    detail::CritCells cells(d);
    {
        struct Plan {
            int strand;
            Rat zlo, zhi;
        };
        std::vector<Plan> plans;
        for (const auto& ch : front_chains(g, d)) {
            std::vector<int> cellIdx;
            for (std::size_t k = 0; k + 1 < ch.steps.size(); ++k) {
                const FrontStrand& s = g.strands[ch.steps[k].strand];
                Pt ep = canon(detail::end_point(s, ch.steps[k].forward ? 1 : 0));
                cellIdx.push_back(cells.index_of(ep.t));
            }
            for (std::size_t k = 0; k + 1 < cellIdx.size(); ++k) {
                if (cellIdx[k] == cellIdx[k + 1]) continue;
                const FrontStrand& s = g.strands[ch.steps[k + 1].strand];
                Rat zmin = s.poly.front().z, zmax = zmin;
                for (const Pt& p : s.poly) {
                    zmin = std::min(zmin, p.z);
                    zmax = std::max(zmax, p.z);
                }
                Rat span = zmax - zmin;
                plans.push_back(
                    {ch.steps[k + 1].strand, zmin + span / 4, zmax - span / 4});
            }
        }
        for (const auto& pl : plans) {
            int tor = g.strands[pl.strand].torus;
            Pt cut = detail::pick_cut(g, d, pl.strand, pl.zlo, pl.zhi, taken);
            g = subdivide_edge(g, pl.strand, cut);
            taken.insert({tor, mod1(cut.z)});
            rec.push_back({g.vertices.back().id, "cut", tor, canon(cut)});
        }
    }

    // --- chains become wire plans ---------------------------------------------
    struct LegSpec {
        int strand;
        bool fwd;
        int torus;
        Rat z_in, z_out; // strand lift frame, traversal order
    };
    struct JumpSpec {
        Rat theta; // canonical
        SlicePoint pe, pn;
        int cell;
    };
    struct WireSpec {
        std::vector<LegSpec> legs;
        std::vector<JumpSpec> jumps;
        int vf = -1, vb = -1;
        int cell = 0;
        bool adapter = false;
        std::pair<int, int> akey{0, 0};
    };

    std::vector<WireSpec> specs;
    for (const auto& ch : front_chains(g, d)) {
        WireSpec W;
        W.vf = ch.vertex_front;
        W.vb = ch.vertex_back;
        for (const ChainStep& st : ch.steps) {
            const FrontStrand& s = g.strands[st.strand];
            LegSpec L;
            L.strand = st.strand;
            L.fwd = st.forward;
            L.torus = s.torus;
            L.z_in = st.forward ? s.poly.front().z : s.poly.back().z;
            L.z_out = st.forward ? s.poly.back().z : s.poly.front().z;
            W.legs.push_back(L);
        }
        for (std::size_t k = 0; k + 1 < ch.steps.size(); ++k) {
            const ChainStep &sa = ch.steps[k], &sb = ch.steps[k + 1];
            JumpSpec J;
            J.pe = detail::end_slice_point(d, g.strands[sa.strand], sa.forward ? 1 : 0);
            J.pn = detail::end_slice_point(d, g.strands[sb.strand], sb.forward ? 0 : 1);
            J.theta = mod1(detail::end_point(g.strands[sa.strand], sa.forward ? 1 : 0).t);
            J.cell = cells.index_of(J.theta);
            W.jumps.push_back(J);
        }
        for (std::size_t k = 1; k < W.jumps.size(); ++k)
            if (W.jumps[k].cell != W.jumps[0].cell)
                throw PreconditionError("InternalError", "jump cells not separated");
        if (!W.jumps.empty()) W.cell = W.jumps.front().cell;
        if (W.legs.size() == 1 && W.jumps.empty()) {
            for (int vid : {W.vf, W.vb}) {
                auto it = amap.find(vid == W.vf ? W.vb : W.vf);
                if (big.count(vid) && it != amap.end()) {
                    W.adapter = true;
                    W.akey = it->second;
                }
            }
        }
        specs.push_back(std::move(W));
    }

    // --- angle assignment ------------------------------------------------------
    int ncells = cells.count();
    std::vector<detail::CellAlloc> alloc;
    for (int c = 0; c < ncells; ++c) {
        auto [lo, hi] = cells.bounds(c);
        alloc.push_back({lo, hi, {}});
    }
    int cell0 = 0; // widest cell hosts everything without jumps
    for (int c = 1; c < ncells; ++c) {
        if (alloc[c].hi - alloc[c].lo > alloc[cell0].hi - alloc[cell0].lo) cell0 = c;
    }

    std::vector<std::vector<std::size_t>> byCell(ncells);
    std::vector<std::size_t> adapters;
    for (std::size_t i = 0; i < specs.size(); ++i) {
        if (!specs[i].jumps.empty())
            byCell[specs[i].cell].push_back(i);
        else if (specs[i].adapter)
            adapters.push_back(i);
        else {
            specs[i].cell = cell0;
            byCell[cell0].push_back(i);
        }
    }
    std::sort(adapters.begin(), adapters.end(), [&](std::size_t a, std::size_t b) {
        return specs[a].akey < specs[b].akey;
    });
    for (std::size_t i : adapters) {
        specs[i].cell = cell0;
        byCell[cell0].push_back(i);
    }

    std::vector<Rat> wireTheta(specs.size()); // lifted into the wire's cell
    for (int c = 0; c < ncells; ++c) {
        std::size_t m = byCell[c].size();
        for (std::size_t r = 0; r < m; ++r) {
            Rat th = alloc[c].lo +
                     (alloc[c].hi - alloc[c].lo) * Rat(2 * r + 1) / Rat(2 * m);
            wireTheta[byCell[c][r]] = th;
            alloc[c].used.insert(th);
        }
    }

    // --- realize each wire ------------------------------------------------------
    auto vheight = [&](int vid) { return g.vertex_by_id(vid)->z; };

    // flatten the whole chain at one angle; empty on any extent or overlap breach
    auto try_nice = [&](const WireSpec& W,
                        const Rat& thw) -> std::optional<std::vector<WireArc>> {
        std::vector<WireArc> arcs;
        Rat cur = vheight(W.vf);
        for (std::size_t k = 0; k < W.legs.size(); ++k) {
            const LegSpec& L = W.legs[k];
            Rat slide_in = 0, slide_out = 0;
            if (k > 0) {
                const JumpSpec& J = W.jumps[k - 1];
                Rat delta = thw - cells.lift(W.cell, J.theta);
                slide_in = detail::branch_at(d, J.pn, delta).lift_z - J.pn.lift_z;
            }
            if (k + 1 < W.legs.size()) {
                const JumpSpec& J = W.jumps[k];
                Rat delta = thw - cells.lift(W.cell, J.theta);
                slide_out = detail::branch_at(d, J.pe, delta).lift_z - J.pe.lift_z;
            }
            Rat to = cur + (L.z_out - L.z_in) + slide_out - slide_in;
            Rat len = to > cur ? to - cur : cur - to;
            if (len == 0 || len > 1) return std::nullopt;
            if (len == 1 && !(W.legs.size() == 1 && W.vf == W.vb)) return std::nullopt;
            for (const WireArc& a : arcs) {
                if (a.torus != L.torus) continue;
                auto [sa, la] = detail::arc_interval(a);
                auto [sb, lb] = detail::arc_interval(WireArc{L.torus, cur, to});
                if (detail::circ_overlap(sa, la, sb, lb)) return std::nullopt;
            }
            arcs.push_back({L.torus, cur, to});
            if (k + 1 < W.legs.size()) {
                const JumpSpec& J = W.jumps[k];
                Rat delta = thw - cells.lift(W.cell, J.theta);
                cur = detail::branch_at(d, J.pn, delta).z;
            }
        }
        return arcs;
    };

    // fallback: isolate every jump in a tiny stub at its own angle and chop the
    // material between into short single-arc runs
    auto atomize = [&](const WireSpec& W, std::vector<Wire>& out) {
        std::size_t m = W.legs.size();
        detail::CellAlloc& A = alloc[W.cell];

        struct Stub {
            Rat theta; // lifted
            Rat w1, w2;
            SlicePoint qe, qn;
        };
        std::vector<Stub> stubs;
        for (std::size_t j = 0; j < W.jumps.size(); ++j) {
            const JumpSpec& J = W.jumps[j];
            const LegSpec &La = W.legs[j], &Lb = W.legs[j + 1];
            Rat te = cells.lift(W.cell, J.theta);
            Rat spanA = La.z_out > La.z_in ? La.z_out - La.z_in : La.z_in - La.z_out;
            Rat spanB = Lb.z_out > Lb.z_in ? Lb.z_out - Lb.z_in : Lb.z_in - Lb.z_out;
            Rat r = (A.hi - A.lo) / 8;
            for (int guard = 0;; ++guard, r /= 2) {
                if (guard > 300)
                    throw PreconditionError("InternalError", "no stub angle found");
                auto cand = detail::near_theta(A, te, r);
                if (!cand) continue;
                Rat delta = *cand - te;
                SlicePoint qe = detail::branch_at(d, J.pe, delta);
                SlicePoint qn = detail::branch_at(d, J.pn, delta);
                Rat s1 = qe.lift_z - J.pe.lift_z;
                if (s1 < 0) s1 = -s1;
                Rat s2 = qn.lift_z - J.pn.lift_z;
                if (s2 < 0) s2 = -s2;
                Rat gz(1);
                if (La.torus == Lb.torus) {
                    Rat dz = mod1(qe.z - qn.z);
                    gz = std::min(dz, Rat(1 - dz));
                    if (gz == 0) continue; // distinct pair points: defensive
                }
                Rat w1 = std::min({Rat(1, 8), Rat(spanA / 4), Rat(gz / 8)});
                Rat w2 = std::min({Rat(1, 8), Rat(spanB / 4), Rat(gz / 8)});
                bool fit = w1 + s1 < Rat(1, 2) && w2 + s2 < Rat(1, 2) &&
                           (La.torus != Lb.torus || (w1 + s1) + (w2 + s2) < gz);
                if (!fit) continue;
                A.used.insert(*cand);
                stubs.push_back({*cand, w1, w2, qe, qn});
                break;
            }
        }

        // cut points per leg, traversal order; stub cuts hug the jump ends and
        // material cuts keep every run under a full turn
        std::vector<std::vector<std::pair<Rat, int>>> cutsOf(m); // (strand z, vid)
        for (std::size_t k = 0; k < m; ++k) {
            const LegSpec& L = W.legs[k];
            Rat sgn = L.z_out > L.z_in ? Rat(1) : Rat(-1);
            std::vector<std::pair<Rat, Rat>> wins; // traversal order
            Rat c0 = L.z_in, c1 = L.z_out;
            if (k > 0) {
                Rat w = stubs[k - 1].w2;
                // keep the post-jump stub short but nonzero next to the slide
                Rat s2 = stubs[k - 1].qn.lift_z - W.jumps[k - 1].pn.lift_z;
                if (s2 < 0) s2 = -s2;
                while (s2 > 0 && w > s2) w /= 2;
                wins.push_back({L.z_in, L.z_in + sgn * w});
                c0 = L.z_in + sgn * stubs[k - 1].w2;
            }
            std::vector<std::pair<Rat, Rat>> endwin;
            if (k + 1 < m) {
                Rat w = stubs[k].w1;
                Rat s1 = stubs[k].qe.lift_z - W.jumps[k].pe.lift_z;
                if (s1 < 0) s1 = -s1;
                while (s1 > 0 && w > s1) w /= 2;
                endwin.push_back({L.z_out - sgn * w, L.z_out});
                c1 = L.z_out - sgn * stubs[k].w1;
            }
            Rat span = c1 > c0 ? c1 - c0 : c0 - c1;
            Int P = iceil(span * 4 / 3);
            if (P < 1) P = 1;
            Rat hw = span / (Rat(8) * Rat(P));
            for (Int j2 = 1; j2 < P; ++j2) {
                Rat zj = c0 + (c1 - c0) * Rat(j2) / Rat(P);
                wins.push_back({zj - hw, zj + hw});
            }
            for (auto& wpair : endwin) wins.push_back(wpair);

            // apply in z order; each later window stays inside one piece
            std::vector<std::pair<Rat, Rat>> ordered = wins;
            std::sort(ordered.begin(), ordered.end(),
                      [](const auto& a, const auto& b) { return a.first + a.second < b.first + b.second; });
            std::vector<int> ids{L.strand};
            std::vector<std::pair<Rat, int>> made; // (strand z, vid)
            for (const auto& wpair : ordered) {
                Rat mid = (wpair.first + wpair.second) / 2;
                int host = -1;
                for (int id : ids) {
                    const FrontStrand& s = g.strands[id];
                    Rat zmin = s.poly.front().z, zmax = zmin;
                    for (const Pt& p : s.poly) {
                        zmin = std::min(zmin, p.z);
                        zmax = std::max(zmax, p.z);
                    }
                    if (mid > zmin && mid < zmax) {
                        host = id;
                        break;
                    }
                }
                if (host < 0)
                    throw PreconditionError("InternalError", "cut window left its leg");
                Pt cut = detail::pick_cut(g, d, host, wpair.first, wpair.second, taken);
                g = subdivide_edge(g, host, cut);
                int vid = g.vertices.back().id;
                ids.push_back(static_cast<int>(g.strands.size()) - 1);
                taken.insert({L.torus, mod1(cut.z)});
                rec.push_back({vid, "cut", L.torus, canon(cut)});
                made.push_back({cut.z, vid});
            }
            std::sort(made.begin(), made.end());
            if (sgn < 0) std::reverse(made.begin(), made.end());
            cutsOf[k] = made;
        }

        // stitch: material wires run between consecutive marks of one leg; the
        // spans across each jump (last pre-cut to first post-cut) become stubs
        for (std::size_t k = 0; k < m; ++k) {
            const LegSpec& L = W.legs[k];
            std::vector<std::pair<Rat, int>> seq; // (strand z, vid)
            if (k == 0) seq.push_back({L.z_in, W.vf});
            for (const auto& c : cutsOf[k]) seq.push_back(c);
            if (k + 1 == m) seq.push_back({L.z_out, W.vb});
            for (std::size_t t = 0; t + 1 < seq.size(); ++t) {
                Wire wmat;
                wmat.theta = mod1(detail::any_theta(A));
                wmat.v_front = seq[t].second;
                wmat.v_back = seq[t + 1].second;
                Rat zf = mod1(seq[t].first);
                wmat.arcs = {{L.torus, zf, zf + (seq[t + 1].first - seq[t].first)}};
                out.push_back(wmat);
            }
        }
        for (std::size_t j = 0; j < W.jumps.size(); ++j) {
            const LegSpec &La = W.legs[j], &Lb = W.legs[j + 1];
            const Stub& S = stubs[j];
            Rat zpre = cutsOf[j].back().first;
            int vpre = cutsOf[j].back().second;
            Rat zpost = cutsOf[j + 1].front().first;
            int vpost = cutsOf[j + 1].front().second;
            Rat s1 = S.qe.lift_z - W.jumps[j].pe.lift_z;
            Rat s2 = S.qn.lift_z - W.jumps[j].pn.lift_z;
            Wire ws;
            ws.theta = mod1(S.theta);
            ws.v_front = vpre;
            ws.v_back = vpost;
            Rat a0 = mod1(zpre);
            Rat b0 = S.qn.z;
            ws.arcs = {{La.torus, a0, a0 + (La.z_out - zpre) + s1},
                       {Lb.torus, b0, b0 + (zpost - Lb.z_in) - s2}};
            out.push_back(ws);
        }
    };

    std::vector<Wire> wires;
    for (std::size_t wi = 0; wi < specs.size(); ++wi) {
        auto nice = try_nice(specs[wi], wireTheta[wi]);
        if (nice) {
            wires.push_back({mod1(wireTheta[wi]), specs[wi].vf, specs[wi].vb, *nice});
            continue;
        }
        alloc[specs[wi].cell].used.erase(wireTheta[wi]);
        atomize(specs[wi], wires);
    }

    ArcDiagram out;
    for (const auto& v : g.vertices) out.vertices.push_back({v.id, v.torus, mod1(v.z)});
    out.wires = std::move(wires);
    {
        ValidationReport rep = validate_arc_diagram(out, d);
        if (!rep.ok())
            throw PreconditionError("ArcPositionFailed",
                                    rep.issues.front().code + " at " +
                                        rep.issues.front().where + ": " +
                                        rep.issues.front().detail);
    }
    return {std::move(out), std::move(g), std::move(rec)};
}

// ---------------------------------------------------------------------------
// drawing an arc position as a front: steep diagonals with horizontal lead-in
// stubs at binding vertices and vertical dives onto the graph at the jumps

struct CuspedPiece {
    int torus = 0;
    std::vector<Pt> poly;                 // lifted
    std::vector<std::size_t> skel_marks;  // poly indices landing on the graph
};

struct CuspedWire {
    Rat theta; // canonical
    std::vector<CuspedPiece> pieces;
};

struct CuspedArcDiagram {
    Rat epsilon;
    std::vector<CuspedWire> wires;
};

// Largest width at which every wire's drawing stays inside its own slot:
// within half the angular gap to the nearest other wire, and for wires with
// jumps also clear of the angles where the graph changes shape.
inline Rat cusped_epsilon_bound(const ArcDiagram& a, const MorseDiagram& d) {
    Rat best(1, 8);
    std::vector<Rat> crit = critical_thetas(d);
    for (std::size_t i = 0; i < a.wires.size(); ++i) {
        Rat ti = mod1(a.wires[i].theta);
        Rat gap(1);
        auto consider = [&](const Rat& other) {
            Rat dz = mod1(other - ti);
            gap = std::min(gap, std::min(dz, Rat(1 - dz)));
        };
        for (std::size_t j = 0; j < a.wires.size(); ++j)
            if (j != i) consider(a.wires[j].theta);
        if (a.wires[i].arcs.size() > 1)
            for (const Rat& c : crit) consider(c);
        Rat t = Rat(static_cast<long long>(a.wires[i].arcs.size()));
        best = std::min(best, Rat(gap / (2 * (t + 1))));
    }
    return best;
}

inline CuspedArcDiagram to_cusped(const ArcDiagram& a, const MorseDiagram& d,
                                  const Rat& eps) {
    {
        ValidationReport rep = validate_arc_diagram(a, d);
        if (!rep.ok())
            throw PreconditionError("InvalidArcs", rep.issues.front().code + " at " +
                                                       rep.issues.front().where);
    }
    Rat bound = cusped_epsilon_bound(a, d);
    if (eps <= 0 || eps > bound)
        throw PreconditionError("EpsilonTooLarge",
                                "epsilon must lie in (0, " + rat_str(bound) + "]");

    CuspedArcDiagram out;
    out.epsilon = eps;
    for (const Wire& w : a.wires) {
        CuspedWire cw;
        cw.theta = mod1(w.theta);
        std::vector<SlicePoint> pts = points_at_slice(d, cw.theta);
        auto at_height = [&](int torus, const Rat& z) -> const SlicePoint& {
            for (const SlicePoint& q : pts)
                if (q.torus == torus && q.z == mod1(z)) return q;
            throw PreconditionError("InternalError", "junction off the graph");
        };
        for (std::size_t k = 0; k < w.arcs.size(); ++k) {
            const WireArc& arc = w.arcs[k];
            Rat len = arc.z_to > arc.z_from ? arc.z_to - arc.z_from
                                            : arc.z_from - arc.z_to;
            Rat half = eps * len / 2;
            Rat ztop = std::max(arc.z_from, arc.z_to);
            Rat zbot = std::min(arc.z_from, arc.z_to);
            bool fromTop = arc.z_from >= arc.z_to;
            bool fromJump = k > 0;
            bool toJump = k + 1 < w.arcs.size();
            bool topJump = fromTop ? fromJump : toJump;
            bool botJump = fromTop ? toJump : fromJump;

            CuspedPiece pc;
            pc.torus = arc.torus;
            Rat tl = cw.theta - half, tr = cw.theta + half;
            if (topJump) {
                const SlicePoint& q = at_height(arc.torus, ztop);
                Rat land = ztop + (detail::branch_at(d, q, -half).lift_z - q.lift_z);
                if (land != ztop) { // dive onto the moved curve branch
                    pc.poly.push_back({tl, land});
                    pc.skel_marks.push_back(0);
                    pc.poly.push_back({tl, ztop});
                } else { // level branch: the corner already sits on it
                    pc.poly.push_back({tl, ztop});
                    pc.skel_marks.push_back(0);
                }
            } else {
                pc.poly.push_back({tl - eps / 4, ztop});
                pc.poly.push_back({tl, ztop});
            }
            pc.poly.push_back({tr, zbot});
            if (botJump) {
                const SlicePoint& q = at_height(arc.torus, zbot);
                Rat land = zbot + (detail::branch_at(d, q, half).lift_z - q.lift_z);
                if (land != zbot) {
                    pc.poly.push_back({tr, land});
                }
                pc.skel_marks.push_back(pc.poly.size() - 1);
            } else {
                pc.poly.push_back({tr + eps / 4, zbot});
            }
            cw.pieces.push_back(std::move(pc));
        }
        out.wires.push_back(std::move(cw));
    }
    return out;
}

} // namespace openbook
