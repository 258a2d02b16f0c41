#pragma once

#include <algorithm>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "openbook/arc.hpp"
#include "openbook/arc_position.hpp"
#include "openbook/front.hpp"

// Deterministic SVG renderers, one drawing per torus. Each torus is a unit
// square; lifted polylines are cut at cell boundaries and every piece is
// translated back into the square. Coordinates land on a 1/1000 pixel grid
// via exact rational rounding, so identical input yields identical bytes.
// At a front crossing the strand farther from the binding is drawn with a
// gap around the double point.

namespace openbook {

namespace detail {

constexpr long long SVG_SCALE = 1000;
constexpr long long SVG_MARGIN = 40;

inline long long svg_round(const Rat& r) {
    return static_cast<long long>(rfloor(Rat(r * SVG_SCALE + Rat(1, 2))));
}

inline long long svg_x(const Rat& t) { return SVG_MARGIN + svg_round(t); }
inline long long svg_y(const Rat& z) { return SVG_MARGIN + SVG_SCALE - svg_round(z); }

// pieces of the lifted segment [a,b], each translated into the unit square
inline std::vector<std::pair<Pt, Pt>> wrapped_pieces(const Pt& a, const Pt& b) {
    std::vector<std::pair<Pt, Pt>> out;
    if (a.t == b.t && a.z == b.z) return out;
    std::vector<Rat> us = {Rat(0), Rat(1)};
    auto cuts = [&](const Rat& ca, const Rat& cb) {
        if (ca == cb) return;
        Rat lo = ca < cb ? ca : cb;
        Rat hi = ca < cb ? cb : ca;
        for (Int k = rfloor(lo) + 1; Rat(k) < hi; ++k)
            if (Rat(k) > lo) us.push_back(Rat(Rat(Rat(k) - ca) / Rat(cb - ca)));
    };
    cuts(a.t, b.t);
    cuts(a.z, b.z);
    std::sort(us.begin(), us.end());
    us.erase(std::unique(us.begin(), us.end()), us.end());
    Pt dir{b.t - a.t, b.z - a.z};
    for (std::size_t i = 0; i + 1 < us.size(); ++i) {
        Rat mid = Rat((us[i] + us[i + 1]) / 2);
        Rat sh_t = Rat(rfloor(Rat(a.t + mid * dir.t)));
        Rat sh_z = Rat(rfloor(Rat(a.z + mid * dir.z)));
        Pt p{Rat(a.t + us[i] * dir.t - sh_t), Rat(a.z + us[i] * dir.z - sh_z)};
        Pt q{Rat(a.t + us[i + 1] * dir.t - sh_t), Rat(a.z + us[i + 1] * dir.z - sh_z)};
        out.push_back({p, q});
    }
    return out;
}

inline void svg_line(std::ostringstream& o, const Pt& a, const Pt& b, const char* color,
                     int width, const char* dash = nullptr) {
    for (const auto& [p, q] : wrapped_pieces(a, b)) {
        o << "<line x1=\"" << svg_x(p.t) << "\" y1=\"" << svg_y(p.z) << "\" x2=\""
          << svg_x(q.t) << "\" y2=\"" << svg_y(q.z) << "\" stroke=\"" << color
          << "\" stroke-width=\"" << width << "\" stroke-linecap=\"round\"";
        if (dash) o << " stroke-dasharray=\"" << dash << "\"";
        o << "/>\n";
    }
}

inline void svg_dot(std::ostringstream& o, const Pt& at, int r, const char* color) {
    Pt c = canon(at);
    o << "<circle cx=\"" << svg_x(c.t) << "\" cy=\"" << svg_y(c.z) << "\" r=\"" << r
      << "\" fill=\"" << color << "\"/>\n";
}

inline void svg_text(std::ostringstream& o, const Pt& at, const std::string& s,
                     const char* color) {
    Pt c = canon(at);
    o << "<text x=\"" << svg_x(c.t) + 10 << "\" y=\"" << svg_y(c.z) - 10
      << "\" font-family=\"monospace\" font-size=\"30\" fill=\"" << color << "\">" << s
      << "</text>\n";
}

inline std::string svg_open(int torus, int total) {
    long long side = SVG_SCALE + 2 * SVG_MARGIN;
    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << side << "\" height=\""
      << side << "\" viewBox=\"0 0 " << side << " " << side << "\">\n"
      << "<title>torus " << torus << " of " << total << "</title>\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << side << "\" height=\"" << side
      << "\" fill=\"#fdf6e3\"/>\n"
      << "<rect x=\"" << SVG_MARGIN << "\" y=\"" << SVG_MARGIN << "\" width=\""
      << SVG_SCALE << "\" height=\"" << SVG_SCALE
      << "\" fill=\"none\" stroke=\"#586e75\" stroke-width=\"2\"/>\n";
    return o.str();
}

// the graph layer shared by diagram and front renders
inline void svg_graph_layer(std::ostringstream& o, const MorseDiagram& d, int torus) {
    for (const auto& e : d.edges) {
        if (e.torus != torus) continue;
        for (std::size_t i = 0; i + 1 < e.poly.size(); ++i)
            svg_line(o, e.poly[i], e.poly[i + 1], "#b58900", 4);
        Pt mid{Rat((e.poly[0].t + e.poly[1].t) / 2), Rat((e.poly[0].z + e.poly[1].z) / 2)};
        svg_text(o, mid, e.label, "#b58900");
    }
    for (const auto& v : d.vertices) {
        if (v.torus != torus) continue;
        svg_dot(o, {v.theta, v.z}, 8, "#cb4b16");
        svg_text(o, {v.theta, v.z}, std::to_string(v.id), "#cb4b16");
    }
}

} // namespace detail

inline std::vector<std::string> render_morse_svg(const MorseDiagram& d) {
    std::vector<std::string> out;
    for (int torus = 0; torus < d.n; ++torus) {
        std::ostringstream o;
        o << detail::svg_open(torus, d.n);
        detail::svg_graph_layer(o, d, torus);
        o << "</svg>\n";
        out.push_back(o.str());
    }
    return out;
}

inline std::vector<std::string> render_front_svg(const GraphFront& f_in,
                                                 const MorseDiagram& d) {
    GraphFront f = resolve_crossings(f_in);

    // parameter-space cut list per (strand, segment): the crossing strand
    // farther from the binding yields to the nearer one
    std::map<std::pair<int, std::size_t>, std::vector<std::pair<Rat, Rat>>> cuts;
    for (const auto& c : f.crossings) {
        int strand = c.nearer == 0 ? c.strand_b : c.strand_a;
        std::size_t seg = c.nearer == 0 ? c.seg_b : c.seg_a;
        const auto& poly = f.strands[static_cast<std::size_t>(strand)].poly;
        Pt a = poly[seg], b = poly[seg + 1];
        Rat tlo = a.t < b.t ? a.t : b.t;
        Rat thi = a.t < b.t ? b.t : a.t;
        Int k = iceil(Rat(tlo - c.theta));
        Rat tc = Rat(c.theta + Rat(k));
        if (tc < tlo || tc > thi || a.t == b.t) continue;
        Rat u = Rat(Rat(tc - a.t) / Rat(b.t - a.t));
        Rat adt = a.t < b.t ? Rat(b.t - a.t) : Rat(a.t - b.t);
        Rat adz = a.z < b.z ? Rat(b.z - a.z) : Rat(a.z - b.z);
        Rat len = adt < adz ? adz : adt;
        Rat rho = Rat(Rat(12, detail::SVG_SCALE) / len);
        cuts[{strand, seg}].push_back({Rat(u - rho), Rat(u + rho)});
    }

    std::vector<std::string> out;
    for (int torus = 0; torus < d.n; ++torus) {
        std::ostringstream o;
        o << detail::svg_open(torus, d.n);
        detail::svg_graph_layer(o, d, torus);
        for (std::size_t si = 0; si < f.strands.size(); ++si) {
            const auto& s = f.strands[si];
            if (s.torus != torus) continue;
            for (std::size_t i = 0; i + 1 < s.poly.size(); ++i) {
                Pt a = s.poly[i], b = s.poly[i + 1];
                std::vector<std::pair<Rat, Rat>> keep = {{Rat(0), Rat(1)}};
                auto it = cuts.find({static_cast<int>(si), i});
                if (it != cuts.end()) {
                    auto holes = it->second;
                    std::sort(holes.begin(), holes.end());
                    keep.clear();
                    Rat at(0);
                    for (const auto& h : holes) {
                        if (h.first > at) keep.push_back({at, h.first});
                        if (h.second > at) at = h.second;
                    }
                    if (at < 1) keep.push_back({at, Rat(1)});
                }
                Pt dir{b.t - a.t, b.z - a.z};
                for (const auto& [u0, u1] : keep) {
                    Pt p{Rat(a.t + u0 * dir.t), Rat(a.z + u0 * dir.z)};
                    Pt q{Rat(a.t + u1 * dir.t), Rat(a.z + u1 * dir.z)};
                    detail::svg_line(o, p, q, "#268bd2", 4);
                }
            }
            for (std::size_t i = 0; i < s.poly.size(); ++i)
                if (s.cusp[i] && !(s.closed() && i == 0))
                    detail::svg_dot(o, s.poly[i], 6, "#268bd2");
        }
        for (const auto& v : f.vertices) {
            if (v.torus != torus) continue;
            detail::svg_dot(o, {v.theta, v.z}, 8, "#859900");
            detail::svg_text(o, {v.theta, v.z}, std::to_string(v.id), "#859900");
        }
        o << "</svg>\n";
        out.push_back(o.str());
    }
    return out;
}

inline std::vector<std::string> render_arc_svg(const ArcDiagram& a,
                                               const MorseDiagram& d) {
    std::vector<std::string> out;
    for (int torus = 0; torus < d.n; ++torus) {
        std::ostringstream o;
        o << detail::svg_open(torus, d.n);
        detail::svg_graph_layer(o, d, torus);
        for (const auto& w : a.wires) {
            for (std::size_t i = 0; i < w.arcs.size(); ++i) {
                const auto& arc = w.arcs[i];
                if (arc.torus == torus)
                    detail::svg_line(o, {w.theta, arc.z_from}, {w.theta, arc.z_to},
                                     "#6c71c4", 4);
                if (i + 1 < w.arcs.size() && arc.torus == torus &&
                    w.arcs[i + 1].torus == torus)
                    detail::svg_line(o, {w.theta, arc.z_to},
                                     {w.theta, w.arcs[i + 1].z_from}, "#93a1a1", 2,
                                     "6 6");
            }
        }
        for (const auto& v : a.vertices) {
            if (v.torus != torus) continue;
            for (const auto& w : a.wires) {
                if (w.v_front == v.id && !w.arcs.empty() && w.arcs.front().torus == torus)
                    detail::svg_dot(o, {w.theta, v.z}, 7, "#002b36");
                if (w.v_back == v.id && !w.arcs.empty() && w.arcs.back().torus == torus)
                    detail::svg_dot(o, {w.theta, v.z}, 7, "#002b36");
            }
        }
        o << "</svg>\n";
        out.push_back(o.str());
    }
    return out;
}

inline std::vector<std::string> render_cusped_svg(const CuspedArcDiagram& c,
                                                  const MorseDiagram& d) {
    std::vector<std::string> out;
    for (int torus = 0; torus < d.n; ++torus) {
        std::ostringstream o;
        o << detail::svg_open(torus, d.n);
        detail::svg_graph_layer(o, d, torus);
        for (const auto& w : c.wires) {
            for (const auto& piece : w.pieces) {
                if (piece.torus != torus) continue;
                for (std::size_t i = 0; i + 1 < piece.poly.size(); ++i)
                    detail::svg_line(o, piece.poly[i], piece.poly[i + 1], "#d33682", 3);
                for (std::size_t m : piece.skel_marks)
                    detail::svg_dot(o, piece.poly[m], 5, "#002b36");
            }
        }
        o << "</svg>\n";
        out.push_back(o.str());
    }
    return out;
}

} // namespace openbook
