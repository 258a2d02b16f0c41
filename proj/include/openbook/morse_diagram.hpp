#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "openbook/errors.hpp"
#include "openbook/geometry.hpp"

// Decorated tori with a labeled trivalent graph; the structure that pins down
// an open book. Validation is staged: structural geometry first, then the
// four axioms in order (i) edge monotonicity, (ii) label pairing on generic
// slices, (iv) vertex pair structure, (iii) slice surgery connectivity.
// A report cites the earliest failing stage so that a single mutation maps to
// a single cited axiom.

namespace openbook {

struct TrivalentGraphEdge {
    int torus = 0;
    std::string label;
    std::vector<Pt> poly; // lifted; valid edges are strictly increasing in theta
    int orient = 1;       // left/right bookkeeping flag, carried through I/O

    bool closed() const {
        return poly.size() >= 2 && same_on_torus(poly.front(), poly.back());
    }
};

struct TrivalentVertex {
    int id = 0;
    int torus = 0;
    Rat theta, z; // canonical in [0,1)
    int partner = 0;
    std::string x_label; // the curve that merges/emerges
    std::string y_label; // the curve that passes through
    bool side_left = false;
};

struct MorseDiagram {
    int n = 1;
    std::vector<TrivalentGraphEdge> edges;
    std::vector<TrivalentVertex> vertices;

    const TrivalentVertex* vertex_by_id(int id) const {
        for (const auto& v : vertices)
            if (v.id == id) return &v;
        return nullptr;
    }
};

struct PageInvariants {
    int n_binding = 0;
    int h_handles = 0;
    int euler_char = 0;
    int genus = 0;
};

struct SlicePoint {
    int torus = 0;
    Rat z;             // canonical
    std::string label;
    int edge = -1;     // index into MorseDiagram::edges
    Rat lift_t, lift_z; // the lift on that edge's polyline where the hit lives
};

struct SlicePair {
    std::string label;
    SlicePoint a, b; // ordered by (torus, z)
};

// ---------------------------------------------------------------------------
// slicing

inline std::vector<Rat> critical_thetas(const MorseDiagram& d) {
    std::set<Rat> s;
    for (const auto& e : d.edges)
        for (const auto& p : e.poly) s.insert(mod1(p.t));
    for (const auto& v : d.vertices) s.insert(mod1(v.theta));
    return {s.begin(), s.end()};
}

// One sample theta inside each maximal critical-free interval; {1/2} when the
// diagram has no critical values at all.
inline std::vector<Rat> generic_samples(const MorseDiagram& d) {
    std::vector<Rat> crit = critical_thetas(d);
    if (crit.empty()) return {Rat(1, 2)};
    std::vector<Rat> out;
    for (std::size_t i = 0; i < crit.size(); ++i) {
        Rat lo = crit[i];
        Rat hi = i + 1 < crit.size() ? crit[i + 1] : crit[0] + 1;
        if (lo == hi) continue;
        out.push_back(mod1((lo + hi) / 2));
    }
    return out;
}

inline bool slice_is_generic(const MorseDiagram& d, const Rat& c) {
    Rat cc = mod1(c);
    for (const Rat& t : critical_thetas(d))
        if (t == cc) return false;
    return true;
}

inline std::vector<SlicePoint> points_at_slice(const MorseDiagram& d, const Rat& c_in) {
    Rat c = mod1(c_in);
    if (!slice_is_generic(d, c))
        throw PreconditionError("NonGenericSlice",
                                "slice theta=" + rat_str(c) + " meets a vertex or breakpoint");
    std::vector<SlicePoint> out;
    for (std::size_t ei = 0; ei < d.edges.size(); ++ei) {
        const auto& e = d.edges[ei];
        for (std::size_t i = 0; i + 1 < e.poly.size(); ++i) {
            Rat lo = e.poly[i].t, hi = e.poly[i + 1].t;
            if (lo == hi) continue; // degenerate (only in malformed inputs)
            if (lo > hi) std::swap(lo, hi);
            for (Int m = iceil(lo - c); Rat(m) + c <= hi; ++m) {
                Rat t = c + Rat(m);
                if (t <= lo || t >= hi) continue; // genericity keeps this strict
                Rat z = seg_z_at(e.poly[i], e.poly[i + 1], t);
                out.push_back({e.torus, mod1(z), e.label, static_cast<int>(ei), t, z});
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const SlicePoint& a, const SlicePoint& b) {
        if (a.torus != b.torus) return a.torus < b.torus;
        if (a.z != b.z) return a.z < b.z;
        return a.label < b.label;
    });
    return out;
}

inline std::vector<SlicePair> slice_pairs(const MorseDiagram& d, const Rat& c) {
    std::vector<SlicePoint> pts = points_at_slice(d, c);
    std::map<std::string, std::vector<SlicePoint>> by_label;
    for (const auto& p : pts) by_label[p.label].push_back(p);
    std::vector<SlicePair> out;
    for (auto& [label, group] : by_label) {
        if (group.size() != 2)
            throw PreconditionError("UnpairedSlicePoints",
                                    "label '" + label + "' meets slice theta=" +
                                        rat_str(mod1(c)) + " in " +
                                        std::to_string(group.size()) + " points");
        out.push_back({label, group[0], group[1]});
    }
    return out;
}

// Cut every slice circle at the paired points and reglue across each pair
// (below one point continues above its partner); returns the circle count.
// Tori untouched by the graph contribute one circle each.
inline int reconstruct_page_boundary(const MorseDiagram& d, const Rat& c) {
    std::vector<SlicePair> pairs = slice_pairs(d, c);

    // points grouped per torus, sorted by z (slice_pairs already sorted them)
    std::vector<std::vector<std::pair<Rat, int>>> ring(d.n); // (z, pair point id)
    // pair point ids: 2*i and 2*i+1 for pairs[i].a/.b
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        ring[pairs[i].a.torus].push_back({pairs[i].a.z, static_cast<int>(2 * i)});
        ring[pairs[i].b.torus].push_back({pairs[i].b.z, static_cast<int>(2 * i + 1)});
    }
    int circles = 0;
    std::map<int, std::pair<int, int>> arc_of; // point id -> (below arc, above arc), global arc ids
    int arc_base = 0;
    for (auto& r : ring) {
        if (r.empty()) {
            ++circles;
            continue;
        }
        std::sort(r.begin(), r.end());
        int sz = static_cast<int>(r.size());
        for (int k = 0; k < sz; ++k) {
            int above = arc_base + k;                 // arc from r[k] up to r[k+1]
            int below = arc_base + (k + sz - 1) % sz; // arc arriving at r[k]
            arc_of[r[k].second] = {below, above};
        }
        arc_base += sz;
    }
    std::vector<int> succ(arc_base, -1);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        auto [below_a, above_a] = arc_of[static_cast<int>(2 * i)];
        auto [below_b, above_b] = arc_of[static_cast<int>(2 * i + 1)];
        succ[below_a] = above_b;
        succ[below_b] = above_a;
    }
    std::vector<char> seen(arc_base, 0);
    for (int a = 0; a < arc_base; ++a) {
        if (seen[a]) continue;
        ++circles;
        for (int x = a; !seen[x]; x = succ[x]) seen[x] = 1;
    }
    return circles;
}

// ---------------------------------------------------------------------------
// validation

namespace detail {

// Self-contact of one torus polyline beyond the shared junctions of
// consecutive segments (plus, for closed curves, the seam).
inline bool polyline_self_embedded(const std::vector<Pt>& poly, bool closed) {
    std::size_t nseg = poly.size() - 1;
    for (const TorusHit& h : torus_intersections(poly, poly, true)) {
        if (h.hit.kind == SegX::touch) {
            bool zero = h.shift_t == 0 && h.shift_z == 0;
            if (zero && h.seg_b == h.seg_a + 1 && h.hit.p == poly[h.seg_a + 1]) continue;
            bool seam_pair = (h.seg_a == 0 && h.seg_b == nseg - 1) ||
                             (h.seg_a == nseg - 1 && h.seg_b == 0) ||
                             (nseg == 1 && h.seg_a == 0 && h.seg_b == 0 && !zero);
            if (closed && seam_pair && same_on_torus(h.hit.p, poly.front())) continue;
        }
        return false;
    }
    return true;
}

struct VertexGeometry {
    bool ok = false;
    std::string why;
    int x_edge = -1;
    int y_edge = -1;
    bool x_dies = false;   // x edge ends at the vertex (as theta increases)
    bool left = false;     // computed approach side of the x curve
};

// Locate the x-edge endpoint and the y-edge pass-through at a vertex, then
// derive the approach side from the incident slopes.
inline VertexGeometry vertex_geometry(const MorseDiagram& d, const TrivalentVertex& v) {
    VertexGeometry g;
    Pt vp{v.theta, v.z};

    int end_edge = -1;
    bool at_front = false;
    for (std::size_t ei = 0; ei < d.edges.size(); ++ei) {
        const auto& e = d.edges[ei];
        if (e.torus != v.torus || e.closed()) continue;
        bool f = same_on_torus(e.poly.front(), vp);
        bool b = same_on_torus(e.poly.back(), vp);
        if (f && b) { g.why = "edge has both endpoints at the vertex"; return g; }
        if (f || b) {
            if (end_edge != -1) { g.why = "several edge endpoints at one vertex"; return g; }
            end_edge = static_cast<int>(ei);
            at_front = f;
        }
    }
    if (end_edge == -1) { g.why = "no edge endpoint at the vertex"; return g; }
    if (d.edges[end_edge].label != v.x_label) {
        g.why = "edge ending at the vertex is not labeled '" + v.x_label + "'";
        return g;
    }
    g.x_edge = end_edge;
    g.x_dies = !at_front;

    // pass-through edge: vp on the polyline, not at a free endpoint
    int thru = -1;
    Rat sy_in, sy_out;
    for (std::size_t ei = 0; ei < d.edges.size(); ++ei) {
        const auto& e = d.edges[ei];
        if (e.torus != v.torus || static_cast<int>(ei) == end_edge) continue;
        std::size_t nseg = e.poly.size() - 1;
        for (std::size_t i = 0; i < nseg; ++i) {
            const Pt &a = e.poly[i], &b = e.poly[i + 1];
            // lift vp into the segment's theta range (edges are theta monotone)
            Rat lo = a.t < b.t ? a.t : b.t, hi = a.t < b.t ? b.t : a.t;
            for (Int m = iceil(lo - v.theta); Rat(m) + v.theta <= hi; ++m) {
                Pt q{v.theta + Rat(m), Rat(0)};
                q.z = seg_z_at(a, b, q.t);
                if (mod1(q.z - v.z) != 0) continue;
                bool at_a = q == a, at_b = q == b;
                if (at_a && i == 0 && !e.closed()) continue;          // free start
                if (at_b && i + 1 == nseg && !e.closed()) continue;   // free end
                if (thru != -1 && thru != static_cast<int>(ei)) {
                    g.why = "several edges pass through the vertex";
                    return g;
                }
                thru = static_cast<int>(ei);
                if (at_a) { // junction: slopes from neighbours (seam-aware)
                    std::size_t prev = i > 0 ? i - 1 : nseg - 1;
                    sy_in = seg_slope(e.poly[prev], e.poly[prev + 1]);
                    sy_out = seg_slope(a, b);
                } else if (at_b) {
                    std::size_t next = i + 1 < nseg ? i + 1 : 0;
                    sy_in = seg_slope(a, b);
                    sy_out = seg_slope(e.poly[next], e.poly[next + 1]);
                } else {
                    sy_in = sy_out = seg_slope(a, b);
                }
            }
        }
    }
    if (thru == -1) { g.why = "no edge passes through the vertex"; return g; }
    if (d.edges[thru].label != v.y_label) {
        g.why = "edge through the vertex is not labeled '" + v.y_label + "'";
        return g;
    }
    g.y_edge = thru;

    const auto& xe = d.edges[end_edge].poly;
    Rat sx = g.x_dies ? seg_slope(xe[xe.size() - 2], xe.back())
                      : seg_slope(xe[0], xe[1]);
    Rat sy = g.x_dies ? sy_in : sy_out;
    if (sx == sy) { g.why = "tangential merge at the vertex"; return g; }
    g.left = g.x_dies ? sx > sy : sx < sy;
    g.ok = true;
    return g;
}

} // namespace detail

inline ValidationReport validate_morse_diagram(const MorseDiagram& d) {
    ValidationReport rep;

    // --- structural geometry ---------------------------------------------
    if (d.n < 1) {
        rep.add("MalformedGeometry", "diagram", "torus count must be at least 1");
        return rep;
    }
    for (std::size_t ei = 0; ei < d.edges.size(); ++ei) {
        const auto& e = d.edges[ei];
        std::string where = "edge " + std::to_string(ei);
        if (e.torus < 0 || e.torus >= d.n)
            rep.add("MalformedGeometry", where, "torus index out of range");
        if (e.label.empty()) rep.add("MalformedGeometry", where, "empty label");
        if (e.poly.size() < 2) {
            rep.add("MalformedGeometry", where, "polyline needs at least 2 points");
            continue;
        }
        for (std::size_t i = 0; i + 1 < e.poly.size(); ++i)
            if (e.poly[i] == e.poly[i + 1])
                rep.add("MalformedGeometry", where, "repeated polyline point");
    }
    std::set<int> ids;
    for (const auto& v : d.vertices) {
        std::string where = "vertex " + std::to_string(v.id);
        if (!ids.insert(v.id).second) rep.add("MalformedGeometry", where, "duplicate id");
        if (v.torus < 0 || v.torus >= d.n)
            rep.add("MalformedGeometry", where, "torus index out of range");
        if (v.theta < 0 || v.theta >= 1 || v.z < 0 || v.z >= 1)
            rep.add("MalformedGeometry", where, "coordinates not canonical");
        if (!d.vertex_by_id(v.partner) || v.partner == v.id)
            rep.add("MalformedGeometry", where, "bad partner id");
        if (v.x_label.empty() || v.y_label.empty())
            rep.add("MalformedGeometry", where, "empty merge labels");
    }
    if (!rep.ok()) return rep;

    std::map<int, std::set<std::pair<Rat, Rat>>> vertex_pos;
    for (const auto& v : d.vertices) vertex_pos[v.torus].insert({v.theta, v.z});

    for (std::size_t ei = 0; ei < d.edges.size(); ++ei) {
        const auto& e = d.edges[ei];
        if (!detail::polyline_self_embedded(e.poly, e.closed()))
            rep.add("MalformedGeometry", "edge " + std::to_string(ei),
                    "polyline self-intersects on the torus");
        if (!e.closed()) {
            // trivalence: a free polyline end must sit at a declared vertex
            for (const Pt* endp : {&e.poly.front(), &e.poly.back()}) {
                Pt tp = canon(*endp);
                if (!vertex_pos[e.torus].count({tp.t, tp.z}))
                    rep.add("MalformedGeometry", "edge " + std::to_string(ei),
                            "open end at (" + rat_str(tp.t) + "," + rat_str(tp.z) +
                                ") is not a trivalent vertex");
            }
        }
    }
    for (std::size_t ei = 0; ei < d.edges.size(); ++ei) {
        for (std::size_t fj = ei + 1; fj < d.edges.size(); ++fj) {
            const auto &e = d.edges[ei], &f = d.edges[fj];
            if (e.torus != f.torus) continue;
            for (const TorusHit& h : torus_intersections(e.poly, f.poly, false)) {
                Pt tp = canon(h.hit.p);
                if (h.hit.kind == SegX::touch &&
                    vertex_pos[e.torus].count({tp.t, tp.z}))
                    continue; // contact at a declared trivalent vertex
                rep.add("MalformedGeometry",
                        "edges " + std::to_string(ei) + "," + std::to_string(fj),
                        "graph curves meet off the declared vertices near theta=" +
                            rat_str(tp.t));
            }
        }
    }
    if (!rep.ok()) return rep;

    // --- axiom (i): theta monotonicity ------------------------------------
    for (std::size_t ei = 0; ei < d.edges.size(); ++ei) {
        const auto& e = d.edges[ei];
        for (std::size_t i = 0; i + 1 < e.poly.size(); ++i) {
            if (!(e.poly[i].t < e.poly[i + 1].t)) {
                rep.add("axiom(i)", "edge " + std::to_string(ei),
                        "polyline not strictly monotone in theta at breakpoint " +
                            std::to_string(i));
                break;
            }
        }
    }
    if (!rep.ok()) return rep;

    // --- axioms (ii) and (iv) ---------------------------------------------
    std::vector<Rat> samples = generic_samples(d);
    long long h_first = -1;
    for (const Rat& c : samples) {
        std::vector<SlicePoint> pts = points_at_slice(d, c);
        std::map<std::string, int> count;
        for (const auto& p : pts) ++count[p.label];
        bool slice_ok = true;
        for (const auto& [label, k] : count) {
            if (k != 2) {
                rep.add("axiom(ii)", "slice theta=" + rat_str(c),
                        "label '" + label + "' appears " + std::to_string(k) +
                            " times, expected 2");
                slice_ok = false;
            }
        }
        if (slice_ok) {
            long long h = static_cast<long long>(count.size());
            if (h_first == -1) h_first = h;
            else if (h != h_first)
                rep.add("axiom(ii)", "slice theta=" + rat_str(c),
                        "pair count not constant across generic slices");
        }
    }

    std::map<Rat, std::vector<const TrivalentVertex*>> by_theta;
    for (const auto& v : d.vertices) by_theta[v.theta].push_back(&v);
    for (const auto& [theta, group] : by_theta) {
        if (group.size() != 2) {
            rep.add("axiom(iv)", "slice theta=" + rat_str(theta),
                    "trivalent points must occur in partner pairs on one slice");
            continue;
        }
        const TrivalentVertex &a = *group[0], &b = *group[1];
        if (a.partner != b.id || b.partner != a.id) {
            rep.add("axiom(iv)", "slice theta=" + rat_str(theta),
                    "vertices on one slice are not partnered with each other");
            continue;
        }
        if (a.x_label != b.x_label || a.y_label != b.y_label)
            rep.add("axiom(iv)", "slice theta=" + rat_str(theta),
                    "partner vertices disagree on the merging label pair");
        if (a.side_left == b.side_left)
            rep.add("axiom(iv)", "slice theta=" + rat_str(theta),
                    "partner vertices must approach from opposite sides");
        auto ga = detail::vertex_geometry(d, a);
        auto gb = detail::vertex_geometry(d, b);
        for (const auto* p : {&a, &b}) {
            const auto& g = p == &a ? ga : gb;
            if (!g.ok)
                rep.add("axiom(iv)", "vertex " + std::to_string(p->id), g.why);
            else if (g.left != p->side_left)
                rep.add("axiom(iv)", "vertex " + std::to_string(p->id),
                        "stored side flag contradicts the local geometry");
        }
        if (ga.ok && gb.ok) {
            if (ga.x_dies == gb.x_dies)
                rep.add("axiom(iv)", "slice theta=" + rat_str(theta),
                        "one x-curve must merge and its partner must emerge");
            if (ga.y_edge == gb.y_edge)
                rep.add("axiom(iv)", "slice theta=" + rat_str(theta),
                        "partner vertices must sit on the two distinct y-curves");
        }
    }
    if (!rep.ok()) return rep;

    // --- axiom (iii): slice surgery yields one circle ----------------------
    for (const Rat& c : samples) {
        int circles = reconstruct_page_boundary(d, c);
        if (circles != 1)
            rep.add("axiom(iii)", "slice theta=" + rat_str(c),
                    "surgery yields " + std::to_string(circles) + " circles, expected 1");
    }
    return rep;
}

inline PageInvariants page_invariants(const MorseDiagram& d) {
    ValidationReport rep = validate_morse_diagram(d);
    if (!rep.ok())
        throw PreconditionError("InvalidDiagram",
                                rep.issues[0].code + " at " + rep.issues[0].where +
                                    ": " + rep.issues[0].detail);
    Rat c = generic_samples(d)[0];
    int h = static_cast<int>(slice_pairs(d, c).size());
    PageInvariants pi;
    pi.n_binding = d.n;
    pi.h_handles = h;
    pi.euler_char = 1 - h;
    Rat g = Rat(1 + h - d.n) / 2;
    if (den(g) != 1 || g < 0)
        throw PreconditionError("InvalidDiagram", "page genus is not a non-negative integer");
    pi.genus = static_cast<int>(num(g));
    return pi;
}

// Hand-built reference diagrams. The two annular open books differ by the
// twisting of the handle curve on the second torus; the once-punctured-torus
// diagram carries two merge/emerge vertex pairs on one torus.
inline MorseDiagram builtin_diagram(const std::string& name) {
    auto R = [](long a, long b) { return Rat(a, b); };
    MorseDiagram d;
    if (name == "disk_identity") {
        d.n = 1;
        return d;
    }
    if (name == "ex_2_1_a" || name == "ex_2_1_c") {
        d.n = 2;
        TrivalentGraphEdge zig;
        zig.torus = 0;
        zig.label = "a";
        zig.poly = {{R(0, 1), R(1, 4)}, {R(1, 2), R(5, 16)}, {R(1, 1), R(1, 4)}};
        d.edges.push_back(zig);
        TrivalentGraphEdge core;
        core.torus = 1;
        core.label = "a";
        if (name == "ex_2_1_a")
            core.poly = {{R(0, 1), R(3, 4)}, {R(1, 1), R(-5, 4)}};
        else
            core.poly = {{R(0, 1), R(3, 4)}, {R(1, 1), R(7, 4)}};
        d.edges.push_back(core);
        return d;
    }
    if (name == "ex_2_1_b") {
        d.n = 1;
        TrivalentGraphEdge a1; // closed a-curve, zigzag through the first vertex
        a1.torus = 0;
        a1.label = "a";
        a1.poly = {{R(0, 1), R(3, 16)}, {R(1, 2), R(1, 4)}, {R(1, 1), R(3, 16)}};
        TrivalentGraphEdge b1; // closed b-curve, zigzag through the second vertex
        b1.torus = 0;
        b1.label = "b";
        b1.poly = {{R(0, 1), R(13, 16)}, {R(3, 4), R(7, 8)}, {R(1, 1), R(13, 16)}};
        TrivalentGraphEdge b2; // open b-curve between the first vertex pair
        b2.torus = 0;
        b2.label = "b";
        b2.poly = {{R(1, 2), R(5, 8)}, {R(3, 4), R(1, 2)}, {R(1, 1), R(3, 8)},
                   {R(3, 2), R(1, 4)}};
        TrivalentGraphEdge a2; // open a-curve between the second vertex pair
        a2.torus = 0;
        a2.label = "a";
        a2.poly = {{R(3, 4), R(1, 2)}, {R(1, 1), R(9, 16)}, {R(3, 2), R(5, 8)},
                   {R(7, 4), R(7, 8)}};
        d.edges = {a1, b1, b2, a2};
        d.vertices = {
            {0, 0, R(1, 2), R(1, 4), 1, "b", "a", false}, // b2 merges into a1
            {1, 0, R(1, 2), R(5, 8), 0, "b", "a", true},  // b2 emerges off a2
            {2, 0, R(3, 4), R(7, 8), 3, "a", "b", true},  // a2 merges into b1
            {3, 0, R(3, 4), R(1, 2), 2, "a", "b", false}, // a2 emerges off b2
        };
        return d;
    }
    throw PreconditionError("UnknownName", "no builtin diagram named '" + name + "'");
}

} // namespace openbook
