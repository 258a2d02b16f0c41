#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "openbook/morse_diagram.hpp"

// Piecewise-linear fronts of Legendrian graphs/links drawn on a Morse
// diagram. Strand polylines are lifted; cusps are marked breakpoints where
// the theta direction reverses. A strand end either closes up, sits on the
// interior of a graph curve (with a horizontal terminal segment and a
// left/right approach side), or attaches to a graph vertex. Ends on graph
// curves must come in label-matched pairs at the same slice from opposite
// sides; interior crossings of the skeleton graph are incidental and carry
// no combinatorial meaning.

namespace openbook {

struct FrontEnd {
    enum class Kind { closed, tedge, vertex };
    Kind kind = Kind::closed;
    int ref = -1;           // graph edge index (tedge) or vertex id (vertex)
    bool side_left = false; // approach side for tedge ends

    friend bool operator==(const FrontEnd& a, const FrontEnd& b) {
        return a.kind == b.kind && a.ref == b.ref && a.side_left == b.side_left;
    }
};

struct FrontStrand {
    int torus = 0;
    std::vector<Pt> poly;   // lifted
    std::vector<char> cusp; // aligned with poly; [0] is the seam flag when closed
    FrontEnd start, end;

    bool closed() const { return start.kind == FrontEnd::Kind::closed; }
};

struct StrandEndRef {
    int strand = -1;
    int which = 0; // 0 = start, 1 = end

    friend bool operator==(const StrandEndRef& a, const StrandEndRef& b) {
        return a.strand == b.strand && a.which == b.which;
    }
    friend bool operator<(const StrandEndRef& a, const StrandEndRef& b) {
        return a.strand != b.strand ? a.strand < b.strand : a.which < b.which;
    }
};

struct FrontVertex {
    int id = -1;
    int torus = 0;
    Rat theta, z;                  // canonical
    std::vector<StrandEndRef> cyc; // incident ends in rotational order
};

struct Crossing {
    int strand_a = -1, strand_b = -1;
    std::size_t seg_a = 0, seg_b = 0;
    Rat theta, z; // canonical
    Rat slope_a, slope_b;
    int nearer = -1; // 0 or 1 once resolved: which strand is nearer the binding
};

struct GraphFront {
    std::vector<FrontStrand> strands;
    std::vector<FrontVertex> vertices;
    std::vector<Crossing> crossings; // derived; fill via resolve_crossings

    const FrontVertex* vertex_by_id(int id) const {
        for (const auto& v : vertices)
            if (v.id == id) return &v;
        return nullptr;
    }
};

namespace detail {

// CCW angular order of nonzero direction vectors starting just above the
// positive theta axis. Exact: half plane first, then cross product.
inline bool angle_less(const Pt& a, const Pt& b) {
    auto half = [](const Pt& v) { return (v.z > 0 || (v.z == 0 && v.t > 0)) ? 0 : 1; };
    int ha = half(a), hb = half(b);
    if (ha != hb) return ha < hb;
    return cross(a, b) > 0;
}

// Direction from a strand end into the strand body.
inline Pt end_germ(const FrontStrand& s, int which) {
    if (which == 0) return s.poly[1] - s.poly[0];
    return s.poly[s.poly.size() - 2] - s.poly.back();
}

inline Pt end_point(const FrontStrand& s, int which) {
    return which == 0 ? s.poly.front() : s.poly.back();
}

// Position of a tedge end on its graph edge: the edge segment containing the
// endpoint (as a torus point) strictly in its interior, plus that segment's
// slope. Fails at edge endpoints, edge breakpoints, and off-edge points.
struct TEdgeSpot {
    bool ok = false;
    std::size_t seg = 0;
    Rat slope;
    Rat lift_shift; // integer: edge lift theta - end lift theta
};

inline TEdgeSpot locate_on_tedge(const TrivalentGraphEdge& e, const Pt& p) {
    TEdgeSpot out;
    for (std::size_t i = 0; i + 1 < e.poly.size(); ++i) {
        const Pt &a = e.poly[i], &b = e.poly[i + 1];
        if (a.t == b.t) continue;
        Rat lo = a.t < b.t ? a.t : b.t, hi = a.t < b.t ? b.t : a.t;
        for (Int m = iceil(lo - p.t); Rat(m) + p.t <= hi; ++m) {
            Rat t = p.t + Rat(m);
            if (t <= lo || t >= hi) continue;
            if (mod1(seg_z_at(a, b, t) - p.z) != 0) continue;
            out.ok = true;
            out.seg = i;
            out.slope = seg_slope(a, b);
            out.lift_shift = Rat(m);
            return out;
        }
    }
    return out;
}

// True when the torus point lies anywhere on the graph (closed test).
inline bool on_skeleton(const MorseDiagram& d, int torus, const Pt& p) {
    for (const auto& e : d.edges) {
        if (e.torus != torus) continue;
        for (std::size_t i = 0; i + 1 < e.poly.size(); ++i) {
            const Pt &a = e.poly[i], &b = e.poly[i + 1];
            BBox bb = poly_bbox({a, b});
            for (Int m = iceil(bb.tlo - p.t); Rat(m) + p.t <= bb.thi; ++m) {
                for (Int k = iceil(bb.zlo - p.z); Rat(k) + p.z <= bb.zhi; ++k) {
                    if (point_on_segment(a, b, Pt{p.t + Rat(m), p.z + Rat(k)}, true))
                        return true;
                }
            }
        }
    }
    return false;
}

} // namespace detail

// All transverse double points between strand interiors, sorted canonically.
// Degenerate contact (tangency, overlap, triple point, contact with an
// endpoint off the declared vertices) is reported through `issues` when a
// report is supplied, and those contacts are skipped.
inline std::vector<Crossing> compute_crossings(const GraphFront& f,
                                               ValidationReport* issues = nullptr) {
    auto complain = [&](const std::string& where, const std::string& what) {
        if (issues) issues->add("TangentialCrossing", where, what);
    };
    // A touch is legal only where the touching piece is a strand end declared
    // at a front vertex sitting at that very point.
    auto vertex_end_here = [&](const FrontStrand& s, std::size_t seg, const Pt& p) {
        if (seg == 0 && same_on_torus(s.poly.front(), p) &&
            s.start.kind == FrontEnd::Kind::vertex)
            return true;
        if (seg + 2 == s.poly.size() && same_on_torus(s.poly.back(), p) &&
            s.end.kind == FrontEnd::Kind::vertex)
            return true;
        return false;
    };

    std::vector<Crossing> out;
    for (std::size_t i = 0; i < f.strands.size(); ++i) {
        for (std::size_t j = i; j < f.strands.size(); ++j) {
            const auto &A = f.strands[i], &B = f.strands[j];
            if (A.torus != B.torus) continue;
            bool self = i == j;
            std::size_t nseg = A.poly.size() - 1;
            for (const TorusHit& h : torus_intersections(A.poly, B.poly, self)) {
                if (h.hit.kind == SegX::proper) {
                    Pt cp = canon(h.hit.p);
                    Crossing c;
                    c.strand_a = static_cast<int>(i);
                    c.strand_b = static_cast<int>(j);
                    c.seg_a = h.seg_a;
                    c.seg_b = h.seg_b;
                    c.theta = cp.t;
                    c.z = cp.z;
                    c.slope_a = seg_slope(A.poly[h.seg_a], A.poly[h.seg_a + 1]);
                    c.slope_b = seg_slope(B.poly[h.seg_b], B.poly[h.seg_b + 1]);
                    out.push_back(c);
                    continue;
                }
                if (h.hit.kind == SegX::touch) {
                    bool zero = h.shift_t == 0 && h.shift_z == 0;
                    if (self) {
                        if (zero && h.seg_b == h.seg_a + 1 && h.hit.p == A.poly[h.seg_a + 1])
                            continue;
                        bool seam_pair = (h.seg_a == 0 && h.seg_b == nseg - 1) ||
                                         (h.seg_a == nseg - 1 && h.seg_b == 0) ||
                                         (nseg == 1 && !zero);
                        if (A.closed() && seam_pair && same_on_torus(h.hit.p, A.poly.front()))
                            continue;
                    }
                    Pt shifted{h.hit.p.t - h.shift_t, h.hit.p.z - h.shift_z};
                    if (vertex_end_here(A, h.seg_a, h.hit.p) &&
                        vertex_end_here(B, h.seg_b, self ? h.hit.p : shifted))
                        continue;
                }
                complain("strands " + std::to_string(i) + "," + std::to_string(j),
                         "non-transverse contact near theta=" + rat_str(mod1(h.hit.p.t)));
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const Crossing& a, const Crossing& b) {
        if (a.theta != b.theta) return a.theta < b.theta;
        if (a.z != b.z) return a.z < b.z;
        if (a.strand_a != b.strand_a) return a.strand_a < b.strand_a;
        return a.strand_b < b.strand_b;
    });
    for (std::size_t k = 0; k + 1 < out.size(); ++k)
        if (out[k].theta == out[k + 1].theta && out[k].z == out[k + 1].z)
            complain("crossing at theta=" + rat_str(out[k].theta),
                     "more than two strand branches meet in one point");
    return out;
}

// Depth from the page model: distance from the binding is minus the slope,
// so the strand whose slope is closer to zero passes nearer the binding.
inline GraphFront resolve_crossings(const GraphFront& f) {
    GraphFront out = f;
    ValidationReport issues;
    out.crossings = compute_crossings(f, &issues);
    if (!issues.ok())
        throw PreconditionError("TangentialCrossing", issues.issues[0].detail);
    for (auto& c : out.crossings) {
        if (c.slope_a == c.slope_b)
            throw PreconditionError("TangentialCrossing",
                                    "equal slopes at theta=" + rat_str(c.theta));
        c.nearer = (-c.slope_a < -c.slope_b) ? 0 : 1;
    }
    return out;
}

inline ValidationReport validate_front(const GraphFront& f, const MorseDiagram& d) {
    ValidationReport rep;

    // --- structure: sizes and references ------------------------------------
    for (std::size_t si = 0; si < f.strands.size(); ++si) {
        const auto& s = f.strands[si];
        std::string where = "strand " + std::to_string(si);
        if (s.torus < 0 || s.torus >= d.n)
            rep.add("MalformedGeometry", where, "torus index out of range");
        if (s.poly.size() < 2) {
            rep.add("MalformedGeometry", where, "polyline needs at least 2 points");
            continue;
        }
        if (s.cusp.size() != s.poly.size())
            rep.add("MalformedGeometry", where, "cusp flags misaligned with polyline");
        for (std::size_t i = 0; i + 1 < s.poly.size(); ++i)
            if (s.poly[i] == s.poly[i + 1])
                rep.add("MalformedGeometry", where, "repeated polyline point");
        bool geo_closed = same_on_torus(s.poly.front(), s.poly.back());
        bool closed_ends = s.start.kind == FrontEnd::Kind::closed &&
                           s.end.kind == FrontEnd::Kind::closed;
        if (s.closed() != closed_ends || (s.closed() && !geo_closed))
            rep.add("MalformedGeometry", where, "closure flags disagree with geometry");
        for (const FrontEnd* e : {&s.start, &s.end}) {
            if (e->kind == FrontEnd::Kind::tedge &&
                (e->ref < 0 || e->ref >= static_cast<int>(d.edges.size())))
                rep.add("MalformedGeometry", where, "graph edge reference out of range");
            if (e->kind == FrontEnd::Kind::vertex && !f.vertex_by_id(e->ref))
                rep.add("DanglingEnd", where, "vertex reference out of range");
        }
    }
    std::set<int> vids;
    for (const auto& v : f.vertices) {
        std::string where = "front vertex " + std::to_string(v.id);
        if (!vids.insert(v.id).second)
            rep.add("MalformedGeometry", where, "duplicate id");
        if (v.torus < 0 || v.torus >= d.n)
            rep.add("MalformedGeometry", where, "torus index out of range");
        if (v.cyc.empty())
            rep.add("MalformedGeometry", where, "isolated vertex");
        for (const auto& r : v.cyc)
            if (r.strand < 0 || r.strand >= static_cast<int>(f.strands.size()) ||
                (r.which != 0 && r.which != 1))
                rep.add("MalformedGeometry", where, "bad strand end reference");
    }
    if (!rep.ok()) return rep;

    // --- slopes, cusps, terminal segments -----------------------------------
    for (std::size_t si = 0; si < f.strands.size(); ++si) {
        const auto& s = f.strands[si];
        std::string where = "strand " + std::to_string(si);
        std::size_t nseg = s.poly.size() - 1;
        for (std::size_t i = 0; i < nseg; ++i) {
            Rat dt = s.poly[i + 1].t - s.poly[i].t;
            Rat dz = s.poly[i + 1].z - s.poly[i].z;
            if (dt == 0) {
                rep.add("SlopeViolation", where,
                        "vertical segment " + std::to_string(i));
                continue;
            }
            if (dz == 0) {
                bool terminal = (i == 0 && s.start.kind == FrontEnd::Kind::tedge) ||
                                (i + 1 == nseg && s.end.kind == FrontEnd::Kind::tedge);
                if (!terminal)
                    rep.add("SlopeViolation", where,
                            "horizontal segment " + std::to_string(i) +
                                " away from a graph endpoint");
            } else if (dz / dt > 0) {
                rep.add("SlopeViolation", where,
                        "positive slope on segment " + std::to_string(i));
            }
        }
        // cusp flags must mark exactly the theta reversals
        for (std::size_t i = 1; i < nseg; ++i) {
            bool rev = (s.poly[i].t - s.poly[i - 1].t > 0) !=
                       (s.poly[i + 1].t - s.poly[i].t > 0);
            if (rev != static_cast<bool>(s.cusp[i]))
                rep.add("BadCuspMarker", where,
                        "breakpoint " + std::to_string(i) +
                            (rev ? " reverses direction but is unmarked"
                                 : " is marked but does not reverse direction"));
        }
        if (s.closed()) {
            bool rev = (s.poly.back().t - s.poly[s.poly.size() - 2].t > 0) !=
                       (s.poly[1].t - s.poly[0].t > 0);
            if (rev != static_cast<bool>(s.cusp[0]) || s.cusp[0] != s.cusp.back())
                rep.add("BadCuspMarker", where, "seam cusp flag wrong");
        } else if (s.cusp[0] || s.cusp.back()) {
            rep.add("BadCuspMarker", where, "open strand ends cannot be cusps");
        }
    }
    if (!rep.ok()) return rep;

    // --- ends on the graph ----------------------------------------------------
    struct TEnd {
        StrandEndRef ref;
        int edge;
        Pt p; // canonical
        bool side_left;
    };
    std::vector<TEnd> tends;
    for (std::size_t si = 0; si < f.strands.size(); ++si) {
        const auto& s = f.strands[si];
        std::string where = "strand " + std::to_string(si);
        for (int which = 0; which < 2 && !s.closed(); ++which) {
            const FrontEnd& e = which == 0 ? s.start : s.end;
            Pt p = canon(detail::end_point(s, which));
            if (e.kind == FrontEnd::Kind::tedge) {
                const auto& ge = d.edges[e.ref];
                if (ge.torus != s.torus) {
                    rep.add("DanglingEnd", where, "end references a curve on another torus");
                    continue;
                }
                if (!slice_is_generic(d, p.t)) {
                    rep.add("DanglingEnd", where,
                            "end slice theta=" + rat_str(p.t) + " is not generic");
                    continue;
                }
                auto spot = detail::locate_on_tedge(ge, p);
                if (!spot.ok) {
                    rep.add("DanglingEnd", where,
                            "endpoint is not in the interior of graph edge " +
                                std::to_string(e.ref));
                    continue;
                }
                // terminal segment horizontal: enforced above; approach side
                Pt q = which == 0 ? f.strands[si].poly[1]
                                  : f.strands[si].poly[s.poly.size() - 2];
                Pt p0 = detail::end_point(s, which);
                int sgn = q.t > p0.t ? 1 : -1;
                if (spot.slope == 0) {
                    rep.add("DanglingEnd", where,
                            "approach side undefined on a horizontal graph segment");
                    continue;
                }
                bool left = (sgn > 0) == (spot.slope > 0);
                if (left != e.side_left) {
                    rep.add("UnmatchedEnd", where,
                            "stored approach side contradicts the geometry");
                    continue;
                }
                tends.push_back({{static_cast<int>(si), which}, e.ref, p, left});
            } else if (e.kind == FrontEnd::Kind::vertex) {
                const FrontVertex* v = f.vertex_by_id(e.ref);
                if (v->torus != s.torus || mod1(p.t - v->theta) != 0 ||
                    mod1(p.z - v->z) != 0) {
                    rep.add("DanglingEnd", where, "endpoint is not at its vertex");
                    continue;
                }
                int hits = 0;
                for (const auto& r : v->cyc)
                    if (r == StrandEndRef{static_cast<int>(si), which}) ++hits;
                if (hits != 1)
                    rep.add("DanglingEnd", where,
                            "vertex does not list this end exactly once");
            }
        }
    }

    // --- vertices: incident ends, tangency, rotational order -----------------
    for (const auto& v : f.vertices) {
        std::string where = "front vertex " + std::to_string(v.id);
        bool refs_ok = true;
        std::vector<Pt> germs;
        for (const auto& r : v.cyc) {
            const auto& s = f.strands[r.strand];
            const FrontEnd& e = r.which == 0 ? s.start : s.end;
            Pt p = canon(detail::end_point(s, r.which));
            if (e.kind != FrontEnd::Kind::vertex || e.ref != v.id ||
                mod1(p.t - v.theta) != 0 || mod1(p.z - v.z) != 0) {
                rep.add("DanglingEnd", where, "listed end does not terminate here");
                refs_ok = false;
                continue;
            }
            germs.push_back(detail::end_germ(s, r.which));
        }
        if (!refs_ok || germs.size() < 2) continue;
        for (std::size_t i = 0; i < germs.size(); ++i)
            for (std::size_t j = i + 1; j < germs.size(); ++j)
                if (cross(germs[i], germs[j]) == 0 &&
                    germs[i].t * germs[j].t + germs[i].z * germs[j].z > 0)
                    rep.add("TangentialCrossing", where, "parallel germs at a vertex");
        // stored order must be a rotation of the geometric CCW order
        std::vector<std::size_t> idx(germs.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
            return detail::angle_less(germs[a], germs[b]);
        });
        std::size_t n = idx.size();
        bool match = false;
        for (std::size_t rot = 0; rot < n && !match; ++rot) {
            bool eq = true;
            for (std::size_t k = 0; k < n; ++k)
                eq = eq && idx[(rot + k) % n] == k;
            match = eq;
        }
        if (!match)
            rep.add("BadVertexOrder", where,
                    "stored rotational order disagrees with the drawn germs");
    }

    // --- matched ends across the label pairing -------------------------------
    for (const auto& te : tends) {
        std::vector<SlicePair> pairs;
        try {
            pairs = slice_pairs(d, te.p.t);
        } catch (const PreconditionError& e) {
            rep.add("UnmatchedEnd", "strand " + std::to_string(te.ref.strand),
                    std::string("slice pairing unavailable: ") + e.what());
            continue;
        }
        const SlicePoint* self = nullptr;
        const SlicePoint* partner = nullptr;
        for (const auto& pr : pairs) {
            for (const SlicePoint* sp : {&pr.a, &pr.b}) {
                if (sp->edge == te.edge && sp->torus == f.strands[te.ref.strand].torus &&
                    sp->z == te.p.z) {
                    self = sp;
                    partner = sp == &pr.a ? &pr.b : &pr.a;
                }
            }
        }
        if (!self) {
            rep.add("UnmatchedEnd", "strand " + std::to_string(te.ref.strand),
                    "endpoint is not a slice point of its edge");
            continue;
        }
        int found = 0;
        for (const auto& other : tends) {
            if (other.ref == te.ref) continue;
            if (other.edge == partner->edge && other.p.t == te.p.t &&
                other.p.z == partner->z &&
                f.strands[other.ref.strand].torus == partner->torus) {
                ++found;
                if (other.side_left == te.side_left)
                    rep.add("UnmatchedEnd", "strand " + std::to_string(te.ref.strand),
                            "partner end approaches from the same side");
            }
        }
        if (found != 1)
            rep.add("UnmatchedEnd", "strand " + std::to_string(te.ref.strand),
                    "expected exactly one partner end at theta=" + rat_str(te.p.t) +
                        ", found " + std::to_string(found));
    }

    // --- cusps and vertices stay off the graph; crossings transverse ---------
    for (std::size_t si = 0; si < f.strands.size(); ++si) {
        const auto& s = f.strands[si];
        for (std::size_t i = 0; i < s.poly.size(); ++i) {
            if (!s.cusp[i]) continue;
            if (i == s.poly.size() - 1 && s.closed()) continue; // seam counted once
            if (detail::on_skeleton(d, s.torus, canon(s.poly[i])))
                rep.add("CuspOnSkeleton", "strand " + std::to_string(si),
                        "cusp lies on the graph at theta=" + rat_str(mod1(s.poly[i].t)));
        }
    }
    for (const auto& v : f.vertices)
        if (detail::on_skeleton(d, v.torus, Pt{v.theta, v.z}))
            rep.add("CuspOnSkeleton", "front vertex " + std::to_string(v.id),
                    "vertex lies on the graph");

    // strand interiors may pass over the graph transversally; any tangency,
    // overlap, or contact away from a declared endpoint is degenerate
    for (std::size_t si = 0; si < f.strands.size(); ++si) {
        const auto& s = f.strands[si];
        std::set<std::pair<Rat, Rat>> own_ends;
        for (int which = 0; which < 2 && !s.closed(); ++which) {
            const FrontEnd& e = which == 0 ? s.start : s.end;
            if (e.kind == FrontEnd::Kind::tedge) {
                Pt p = canon(detail::end_point(s, which));
                own_ends.insert({p.t, p.z});
            }
        }
        for (std::size_t ei = 0; ei < d.edges.size(); ++ei) {
            if (d.edges[ei].torus != s.torus) continue;
            for (const TorusHit& h : torus_intersections(s.poly, d.edges[ei].poly, false)) {
                if (h.hit.kind == SegX::proper) continue;
                Pt p = canon(h.hit.p);
                if (h.hit.kind == SegX::touch && own_ends.count({p.t, p.z})) continue;
                rep.add("TangentialCrossing", "strand " + std::to_string(si),
                        "meets graph curve " + std::to_string(ei) +
                            " non-transversally at theta=" + rat_str(p.t));
            }
        }
    }

    compute_crossings(f, &rep);

    // crossings must avoid the graph (else depth resolution is ambiguous there)
    // and the horizontal end runs (a double point pinned at the height of an
    // end run would block any strictly monotone redraw of that approach)
    for (const auto& c : compute_crossings(f)) {
        if (detail::on_skeleton(d, f.strands[c.strand_a].torus, Pt{c.theta, c.z}))
            rep.add("TangentialCrossing", "crossing at theta=" + rat_str(c.theta),
                    "double point lies on the graph");
        if (c.slope_a == 0 || c.slope_b == 0)
            rep.add("TangentialCrossing", "crossing at theta=" + rat_str(c.theta),
                    "double point on a horizontal end run");
    }
    return rep;
}

// Insert a valence-2 vertex at an interior smooth point. A closed strand
// becomes one open strand with both ends at the new vertex; an open strand
// splits in two. The drawn point set is unchanged.
inline GraphFront subdivide_edge(const GraphFront& f, int strand_id, const Pt& where) {
    if (strand_id < 0 || strand_id >= static_cast<int>(f.strands.size()))
        throw PreconditionError("PointNotOnStrand", "no such strand");
    const FrontStrand& s = f.strands[strand_id];
    Pt target = canon(where);

    // locate: strictly inside a non-horizontal segment, not at a breakpoint
    std::optional<std::pair<std::size_t, Pt>> found;
    for (std::size_t i = 0; i + 1 < s.poly.size(); ++i) {
        const Pt &a = s.poly[i], &b = s.poly[i + 1];
        if (a.t == b.t || a.z == b.z) continue;
        BBox bb = poly_bbox({a, b});
        for (Int m = iceil(bb.tlo - target.t); Rat(m) + target.t <= bb.thi; ++m) {
            for (Int k = iceil(bb.zlo - target.z); Rat(k) + target.z <= bb.zhi; ++k) {
                Pt lift{target.t + Rat(m), target.z + Rat(k)};
                if (point_on_segment(a, b, lift, false)) {
                    if (found)
                        throw PreconditionError("PointNotOnStrand",
                                                "point hit more than once (double point?)");
                    found = {i, lift};
                }
            }
        }
    }
    if (!found)
        throw PreconditionError("PointNotOnStrand",
                                "point is not an interior smooth point of the strand");
    auto [seg, lift] = *found;

    GraphFront out = f;
    int vid = 0;
    for (const auto& v : f.vertices) vid = std::max(vid, v.id + 1);

    FrontVertex v;
    v.id = vid;
    v.torus = s.torus;
    v.theta = target.t;
    v.z = target.z;

    if (s.closed()) {
        // rotate the cycle so it starts and ends at the new vertex
        FrontStrand ns;
        ns.torus = s.torus;
        ns.start = {FrontEnd::Kind::vertex, vid, false};
        ns.end = {FrontEnd::Kind::vertex, vid, false};
        Pt wind = s.poly.back() - s.poly.front();
        ns.poly.push_back(lift);
        ns.cusp.push_back(0);
        for (std::size_t i = seg + 1; i + 1 < s.poly.size(); ++i) { // skip seam copy
            ns.poly.push_back(s.poly[i]);
            ns.cusp.push_back(s.cusp[i]);
        }
        for (std::size_t i = 0; i <= seg; ++i) {
            ns.poly.push_back(s.poly[i] + wind);
            ns.cusp.push_back(i == 0 ? s.cusp[0] : s.cusp[i]);
        }
        ns.poly.push_back(lift + wind);
        ns.cusp.push_back(0);
        out.strands[strand_id] = ns;
        v.cyc = {{strand_id, 0}, {strand_id, 1}};
    } else {
        FrontStrand s1, s2;
        s1.torus = s2.torus = s.torus;
        s1.start = s.start;
        s1.end = {FrontEnd::Kind::vertex, vid, false};
        s2.start = {FrontEnd::Kind::vertex, vid, false};
        s2.end = s.end;
        for (std::size_t i = 0; i <= seg; ++i) {
            s1.poly.push_back(s.poly[i]);
            s1.cusp.push_back(s.cusp[i]);
        }
        s1.poly.push_back(lift);
        s1.cusp.push_back(0);
        s2.poly.push_back(lift);
        s2.cusp.push_back(0);
        for (std::size_t i = seg + 1; i < s.poly.size(); ++i) {
            s2.poly.push_back(s.poly[i]);
            s2.cusp.push_back(s.cusp[i]);
        }
        int id2 = static_cast<int>(out.strands.size());
        out.strands[strand_id] = s1;
        out.strands.push_back(s2);
        // rewire the far end of s2 (vertex lists referencing the old end)
        for (auto& fv : out.vertices)
            for (auto& r : fv.cyc)
                if (r.strand == strand_id && r.which == 1) r.strand = id2;
        v.cyc = {{strand_id, 1}, {id2, 0}};
    }
    // order the two germs geometrically
    {
        Pt g0 = detail::end_germ(out.strands[v.cyc[0].strand], v.cyc[0].which);
        Pt g1 = detail::end_germ(out.strands[v.cyc[1].strand], v.cyc[1].which);
        if (!detail::angle_less(g0, g1)) std::swap(v.cyc[0], v.cyc[1]);
    }
    out.vertices.push_back(v);
    out.crossings.clear();
    return out;
}

// ---------------------------------------------------------------------------
// abstract graph: chains of strands glued across matched graph-curve ends

struct ChainStep {
    int strand = -1;
    bool forward = true; // traversal from start to end
};

struct Chain {
    std::vector<ChainStep> steps;
    bool cycle = false;
    // for open chains: the vertex ends (id) at front/back
    int vertex_front = -1, vertex_back = -1;
};

// Pair up tedge ends via the slice pairing. Requires a validated front.
inline std::map<StrandEndRef, StrandEndRef> matched_end_partners(const GraphFront& f,
                                                                 const MorseDiagram& d) {
    struct TE {
        StrandEndRef ref;
        int edge;
        Pt p;
    };
    std::vector<TE> tends;
    for (std::size_t si = 0; si < f.strands.size(); ++si) {
        const auto& s = f.strands[si];
        if (s.closed()) continue;
        for (int which = 0; which < 2; ++which) {
            const FrontEnd& e = which == 0 ? s.start : s.end;
            if (e.kind != FrontEnd::Kind::tedge) continue;
            tends.push_back({{static_cast<int>(si), which}, e.ref,
                             canon(detail::end_point(s, which))});
        }
    }
    std::map<StrandEndRef, StrandEndRef> out;
    for (const auto& te : tends) {
        std::vector<SlicePair> pairs = slice_pairs(d, te.p.t);
        const SlicePoint* partner = nullptr;
        for (const auto& pr : pairs)
            for (const SlicePoint* sp : {&pr.a, &pr.b})
                if (sp->edge == te.edge && sp->z == te.p.z)
                    partner = sp == &pr.a ? &pr.b : &pr.a;
        if (!partner)
            throw PreconditionError("UnmatchedEnd", "front is not validated");
        bool hooked = false;
        for (const auto& other : tends) {
            if (other.edge == partner->edge && other.p.t == te.p.t &&
                other.p.z == partner->z) {
                out[te.ref] = other.ref;
                hooked = true;
            }
        }
        if (!hooked) throw PreconditionError("UnmatchedEnd", "front is not validated");
    }
    return out;
}

inline std::vector<Chain> front_chains(const GraphFront& f, const MorseDiagram& d) {
    auto partners = matched_end_partners(f, d);
    std::vector<Chain> out;
    std::set<int> used;
    auto end_of = [&](int strand, bool forward) {
        return forward ? f.strands[strand].end : f.strands[strand].start;
    };
    // walk from a given oriented strand until a vertex end or cycle closure
    auto walk = [&](int s0, bool fwd0, Chain& ch) {
        int s = s0;
        bool fwd = fwd0;
        while (true) {
            ch.steps.push_back({s, fwd});
            used.insert(s);
            FrontEnd e = end_of(s, fwd);
            if (e.kind == FrontEnd::Kind::vertex) {
                ch.vertex_back = e.ref;
                return;
            }
            StrandEndRef exit{s, fwd ? 1 : 0};
            StrandEndRef entry = partners.at(exit);
            if (entry.strand == s0 && entry.which == (fwd0 ? 0 : 1)) {
                ch.cycle = true;
                return;
            }
            s = entry.strand;
            fwd = entry.which == 0;
        }
    };
    for (std::size_t si = 0; si < f.strands.size(); ++si) {
        const auto& s = f.strands[si];
        if (used.count(static_cast<int>(si))) continue;
        if (s.closed()) {
            Chain ch;
            ch.cycle = true;
            ch.steps.push_back({static_cast<int>(si), true});
            used.insert(static_cast<int>(si));
            out.push_back(ch);
            continue;
        }
        // prefer starting at a vertex end so open chains run vertex-to-vertex
        bool starts_at_vertex = s.start.kind == FrontEnd::Kind::vertex;
        bool ends_at_vertex = s.end.kind == FrontEnd::Kind::vertex;
        if (starts_at_vertex || ends_at_vertex) {
            Chain ch;
            bool fwd = starts_at_vertex;
            ch.vertex_front = fwd ? s.start.ref : s.end.ref;
            walk(static_cast<int>(si), fwd, ch);
            out.push_back(ch);
        }
    }
    // remaining: cycles made purely of tedge-ended strands
    for (std::size_t si = 0; si < f.strands.size(); ++si) {
        if (used.count(static_cast<int>(si))) continue;
        Chain ch;
        walk(static_cast<int>(si), true, ch);
        if (!ch.cycle)
            throw PreconditionError("UnmatchedEnd", "open chain without vertex ends");
        out.push_back(ch);
    }
    return out;
}

} // namespace openbook
