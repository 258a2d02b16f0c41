#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "openbook/morse_diagram.hpp"

// Arc position: links and graphs presented as wires. A binding vertex is a
// point of the binding circle of some torus, recorded by its z coordinate. A
// wire holds a single page angle theta and a run of vertical arcs; successive
// arcs are joined by jumps across the label pairing at that slice, and the
// outer ends of the run sit on binding vertices. Arcs are z-intervals given
// with their traversal direction; an interval of length exactly 1 (a full
// turn) is allowed only as the single arc of a loop wire.

namespace openbook {

struct BindingVertex {
    int id = -1;
    int torus = 0;
    Rat z; // canonical
};

struct WireArc {
    int torus = 0;
    Rat z_from, z_to; // lifted; |z_to - z_from| <= 1
};

struct Wire {
    Rat theta; // canonical, distinct per wire
    int v_front = -1, v_back = -1;
    std::vector<WireArc> arcs;
};

struct ArcDiagram {
    std::vector<BindingVertex> vertices;
    std::vector<Wire> wires;

    const BindingVertex* vertex_by_id(int id) const {
        for (const auto& v : vertices)
            if (v.id == id) return &v;
        return nullptr;
    }
};

namespace detail {

// open-interior overlap of two circular z-intervals, given as (start, len)
inline bool circ_overlap(const Rat& sa, const Rat& la, const Rat& sb, const Rat& lb) {
    Rat b0 = sa + mod1(sb - sa);
    return (b0 < sa + la) || (b0 + lb > sa + 1);
}

inline std::pair<Rat, Rat> arc_interval(const WireArc& a) {
    Rat lo = a.z_from < a.z_to ? a.z_from : a.z_to;
    Rat len = a.z_from < a.z_to ? a.z_to - a.z_from : a.z_from - a.z_to;
    return {mod1(lo), len};
}

} // namespace detail

inline ValidationReport validate_arc_diagram(const ArcDiagram& a,
                                             const MorseDiagram& d) {
    ValidationReport rep;

    // --- structure ------------------------------------------------------------
    std::set<int> vids;
    std::set<std::pair<int, Rat>> vpos;
    for (const auto& v : a.vertices) {
        std::string where = "binding vertex " + std::to_string(v.id);
        if (!vids.insert(v.id).second)
            rep.add("MalformedGeometry", where, "duplicate id");
        if (v.torus < 0 || v.torus >= d.n)
            rep.add("MalformedGeometry", where, "torus index out of range");
        if (v.z < 0 || v.z >= 1)
            rep.add("MalformedGeometry", where, "z must be canonical");
        if (!vpos.insert({v.torus, v.z}).second)
            rep.add("MalformedGeometry", where, "two vertices at one binding point");
    }
    for (std::size_t wi = 0; wi < a.wires.size(); ++wi) {
        const Wire& w = a.wires[wi];
        std::string where = "wire " + std::to_string(wi);
        if (w.arcs.empty()) {
            rep.add("MalformedGeometry", where, "wire without arcs");
            continue;
        }
        for (const auto& arc : w.arcs) {
            if (arc.torus < 0 || arc.torus >= d.n)
                rep.add("MalformedGeometry", where, "arc torus out of range");
            Rat len = arc.z_from < arc.z_to ? arc.z_to - arc.z_from
                                            : arc.z_from - arc.z_to;
            if (len == 0) rep.add("MalformedGeometry", where, "degenerate arc");
            if (len > 1)
                rep.add("MalformedGeometry", where, "arc winds more than a full turn");
            if (len == 1 && !(w.arcs.size() == 1 && w.v_front == w.v_back))
                rep.add("MalformedGeometry", where,
                        "full-turn arc outside a loop wire");
        }
        for (int vref : {w.v_front, w.v_back})
            if (!a.vertex_by_id(vref)) rep.add("OrphanEnd", where, "end vertex missing");
        const BindingVertex* vf = a.vertex_by_id(w.v_front);
        const BindingVertex* vb = a.vertex_by_id(w.v_back);
        if (vf && (w.arcs.front().torus != vf->torus ||
                   mod1(w.arcs.front().z_from - vf->z) != 0))
            rep.add("OrphanEnd", where, "first arc does not start at its vertex");
        if (vb && (w.arcs.back().torus != vb->torus ||
                   mod1(w.arcs.back().z_to - vb->z) != 0))
            rep.add("OrphanEnd", where, "last arc does not end at its vertex");
        // arcs of one wire are drawn at one angle: interiors must be disjoint
        for (std::size_t i = 0; i < w.arcs.size(); ++i) {
            for (std::size_t j = i + 1; j < w.arcs.size(); ++j) {
                if (w.arcs[i].torus != w.arcs[j].torus) continue;
                auto [sa, la] = detail::arc_interval(w.arcs[i]);
                auto [sb, lb] = detail::arc_interval(w.arcs[j]);
                if (detail::circ_overlap(sa, la, sb, lb))
                    rep.add("MalformedGeometry", where,
                            "arcs " + std::to_string(i) + "," + std::to_string(j) +
                                " overlap");
            }
        }
    }
    if (!rep.ok()) return rep;

    // --- angles ---------------------------------------------------------------
    std::map<Rat, int> seen;
    for (std::size_t wi = 0; wi < a.wires.size(); ++wi) {
        Rat th = mod1(a.wires[wi].theta);
        auto it = seen.find(th);
        if (it != seen.end())
            rep.add("ThetaCollision", "wire " + std::to_string(wi),
                    "shares theta=" + rat_str(th) + " with wire " +
                        std::to_string(it->second));
        else
            seen[th] = static_cast<int>(wi);
        if (!slice_is_generic(d, th))
            rep.add("MalformedGeometry", "wire " + std::to_string(wi),
                    "theta=" + rat_str(th) + " is not a generic slice");
    }
    if (!rep.ok()) return rep;

    // --- jumps follow the label pairing ----------------------------------------
    for (std::size_t wi = 0; wi < a.wires.size(); ++wi) {
        const Wire& w = a.wires[wi];
        std::string where = "wire " + std::to_string(wi);
        auto pairs = slice_pairs(d, mod1(w.theta));
        auto find_point = [&](int torus, const Rat& z)
            -> std::pair<const SlicePair*, const SlicePoint*> {
            for (const auto& pr : pairs)
                for (const SlicePoint* sp : {&pr.a, &pr.b})
                    if (sp->torus == torus && sp->z == mod1(z)) return {&pr, sp};
            return {nullptr, nullptr};
        };
        for (std::size_t k = 0; k + 1 < w.arcs.size(); ++k) {
            auto [pr, sp] = find_point(w.arcs[k].torus, w.arcs[k].z_to);
            if (!pr) {
                rep.add("UnmatchedInternalEnd", where,
                        "arc " + std::to_string(k) +
                            " ends away from any graph point");
                continue;
            }
            const SlicePoint* partner = sp == &pr->a ? &pr->b : &pr->a;
            if (w.arcs[k + 1].torus != partner->torus ||
                mod1(w.arcs[k + 1].z_from) != partner->z)
                rep.add("UnmatchedInternalEnd", where,
                        "arc " + std::to_string(k + 1) +
                            " does not resume at the paired point");
        }
    }
    return rep;
}

} // namespace openbook
