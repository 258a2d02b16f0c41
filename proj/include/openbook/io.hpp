#pragma once

#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "openbook/arc_position.hpp"
#include "openbook/front.hpp"
#include "openbook/morse_diagram.hpp"
#include "openbook/surface.hpp"

// Line-oriented ASCII formats, one record per line, rationals as "p/q".
// Writers are byte-deterministic (single spaces, trailing newline, records
// in container order); readers accept blank lines and '#' comments, so
// writer output re-parses to an identical value and re-serializes to
// identical bytes.
//
//   .morse  tori <n>
//           edge <torus> <label> <orient> <t z>...
//           vertex <id> <torus> <theta> <z> <partner> <x-label> <y-label> <L|R>
//   .front  front <morse-ref>
//           strand <torus> <start> <end> <k> <t z cusp>...
//           fvertex <id> <torus> <theta> <z> <m> <strand which>...
//   .arc    arc <morse-ref>
//           bvertex <id> <torus> <z>
//           wire <theta> <v_front> <v_back> <m> <torus z_from z_to>...
//   .bsurf  disks <d>
//           disk <torus> <z>
//           band <theta> <i> <j> <sign>
//
// Strand ends are "closed", "tedge:<edge>:<L|R>", or "vertex:<id>".

namespace openbook {

namespace detail {

inline long long parse_int(const std::string& s, std::size_t line) {
    std::size_t i = s.size() && (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) throw ParseError("bad integer '" + s + "'", line);
    for (std::size_t k = i; k < s.size(); ++k)
        if (s[k] < '0' || s[k] > '9')
            throw ParseError("bad integer '" + s + "'", line);
    try {
        return std::stoll(s);
    } catch (const std::exception&) {
        throw ParseError("bad integer '" + s + "'", line);
    }
}

struct LineTok {
    std::vector<std::string> toks;
    std::size_t line = 0;

    const std::string& key() const { return toks.front(); }

    const std::string& next(const char* what) {
        if (at_ >= toks.size())
            throw ParseError(std::string("missing ") + what, line);
        return toks[at_++];
    }
    long long next_int(const char* what) { return parse_int(next(what), line); }
    Rat next_rat(const char* what) { return parse_rat(next(what), line); }
    void done() const {
        if (at_ != toks.size()) throw ParseError("unexpected trailing tokens", line);
    }

private:
    std::size_t at_ = 1; // toks[0] is the keyword
};

// non-blank, non-comment lines, tokenized on whitespace
inline std::vector<LineTok> tokenize(const std::string& text) {
    std::vector<LineTok> out;
    std::size_t lineno = 0;
    std::istringstream all(text);
    std::string line;
    while (std::getline(all, line)) {
        ++lineno;
        LineTok lt;
        lt.line = lineno;
        std::istringstream ls(line);
        std::string tok;
        while (ls >> tok) lt.toks.push_back(tok);
        if (lt.toks.empty() || lt.toks[0][0] == '#') continue;
        out.push_back(std::move(lt));
    }
    return out;
}

inline void check_token(const std::string& s, const char* what) {
    if (s.empty())
        throw PreconditionError("MalformedGeometry", std::string(what) + " is empty");
    for (char c : s)
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '#')
            throw PreconditionError("MalformedGeometry",
                                    std::string(what) + " '" + s +
                                        "' cannot be written to a text format");
}

inline std::string end_str(const FrontEnd& e) {
    switch (e.kind) {
    case FrontEnd::Kind::closed:
        return "closed";
    case FrontEnd::Kind::tedge:
        return "tedge:" + std::to_string(e.ref) + (e.side_left ? ":L" : ":R");
    default:
        return "vertex:" + std::to_string(e.ref);
    }
}

inline FrontEnd parse_end(const std::string& s, std::size_t line) {
    if (s == "closed") return {};
    auto c1 = s.find(':');
    std::string head = s.substr(0, c1);
    if (head == "tedge" && c1 != std::string::npos) {
        auto c2 = s.find(':', c1 + 1);
        if (c2 != std::string::npos) {
            std::string side = s.substr(c2 + 1);
            if (side == "L" || side == "R") {
                FrontEnd e;
                e.kind = FrontEnd::Kind::tedge;
                e.ref = static_cast<int>(parse_int(s.substr(c1 + 1, c2 - c1 - 1), line));
                e.side_left = side == "L";
                return e;
            }
        }
    } else if (head == "vertex" && c1 != std::string::npos) {
        FrontEnd e;
        e.kind = FrontEnd::Kind::vertex;
        e.ref = static_cast<int>(parse_int(s.substr(c1 + 1), line));
        return e;
    }
    throw ParseError("bad strand end '" + s + "'", line);
}

} // namespace detail

// --------------------------------------------------------------------------
// .morse

inline std::string write_morse(const MorseDiagram& d) {
    std::ostringstream out;
    out << "tori " << d.n << "\n";
    for (const auto& e : d.edges) {
        detail::check_token(e.label, "edge label");
        out << "edge " << e.torus << " " << e.label << " " << e.orient;
        for (const auto& p : e.poly) out << " " << rat_str(p.t) << " " << rat_str(p.z);
        out << "\n";
    }
    for (const auto& v : d.vertices) {
        detail::check_token(v.x_label, "vertex label");
        detail::check_token(v.y_label, "vertex label");
        out << "vertex " << v.id << " " << v.torus << " " << rat_str(v.theta) << " "
            << rat_str(v.z) << " " << v.partner << " " << v.x_label << " " << v.y_label
            << " " << (v.side_left ? "L" : "R") << "\n";
    }
    return out.str();
}

inline MorseDiagram read_morse(const std::string& text) {
    auto lines = detail::tokenize(text);
    if (lines.empty() || lines[0].key() != "tori")
        throw ParseError("expected 'tori <n>' header", lines.empty() ? 1 : lines[0].line);
    MorseDiagram d;
    d.n = static_cast<int>(lines[0].next_int("torus count"));
    lines[0].done();
    for (std::size_t k = 1; k < lines.size(); ++k) {
        auto& lt = lines[k];
        if (lt.key() == "edge") {
            TrivalentGraphEdge e;
            e.torus = static_cast<int>(lt.next_int("torus"));
            e.label = lt.next("label");
            e.orient = static_cast<int>(lt.next_int("orient"));
            std::size_t rest = lt.toks.size() - 4;
            if (rest % 2) throw ParseError("edge points must be theta z pairs", lt.line);
            for (std::size_t i = 0; i < rest / 2; ++i) {
                Rat t = lt.next_rat("theta");
                Rat z = lt.next_rat("z");
                e.poly.push_back({t, z});
            }
            lt.done();
            if (e.poly.size() < 2) throw ParseError("edge needs at least 2 points", lt.line);
            d.edges.push_back(std::move(e));
        } else if (lt.key() == "vertex") {
            TrivalentVertex v;
            v.id = static_cast<int>(lt.next_int("id"));
            v.torus = static_cast<int>(lt.next_int("torus"));
            v.theta = lt.next_rat("theta");
            v.z = lt.next_rat("z");
            v.partner = static_cast<int>(lt.next_int("partner"));
            v.x_label = lt.next("x label");
            v.y_label = lt.next("y label");
            std::string side = lt.next("side");
            if (side != "L" && side != "R") throw ParseError("side must be L or R", lt.line);
            v.side_left = side == "L";
            lt.done();
            d.vertices.push_back(std::move(v));
        } else {
            throw ParseError("unknown record '" + lt.key() + "'", lt.line);
        }
    }
    return d;
}

// --------------------------------------------------------------------------
// .front

struct FrontFile {
    GraphFront front;
    std::string morse_ref; // name of the diagram file this front is drawn on
};

inline std::string write_front(const GraphFront& f, const std::string& morse_ref) {
    detail::check_token(morse_ref, "morse reference");
    std::ostringstream out;
    out << "front " << morse_ref << "\n";
    for (const auto& s : f.strands) {
        if (s.poly.size() != s.cusp.size())
            throw PreconditionError("MalformedGeometry",
                                    "strand cusp flags out of step with its points");
        out << "strand " << s.torus << " " << detail::end_str(s.start) << " "
            << detail::end_str(s.end) << " " << s.poly.size();
        for (std::size_t i = 0; i < s.poly.size(); ++i)
            out << " " << rat_str(s.poly[i].t) << " " << rat_str(s.poly[i].z) << " "
                << (s.cusp[i] ? 1 : 0);
        out << "\n";
    }
    for (const auto& v : f.vertices) {
        out << "fvertex " << v.id << " " << v.torus << " " << rat_str(v.theta) << " "
            << rat_str(v.z) << " " << v.cyc.size();
        for (const auto& r : v.cyc) out << " " << r.strand << " " << r.which;
        out << "\n";
    }
    return out.str();
}

inline FrontFile read_front(const std::string& text) {
    auto lines = detail::tokenize(text);
    if (lines.empty() || lines[0].key() != "front")
        throw ParseError("expected 'front <morse-ref>' header",
                         lines.empty() ? 1 : lines[0].line);
    FrontFile out;
    out.morse_ref = lines[0].next("morse reference");
    lines[0].done();
    for (std::size_t k = 1; k < lines.size(); ++k) {
        auto& lt = lines[k];
        if (lt.key() == "strand") {
            FrontStrand s;
            s.torus = static_cast<int>(lt.next_int("torus"));
            s.start = detail::parse_end(lt.next("start"), lt.line);
            s.end = detail::parse_end(lt.next("end"), lt.line);
            long long npts = lt.next_int("point count");
            if (npts < 0) throw ParseError("negative point count", lt.line);
            for (long long i = 0; i < npts; ++i) {
                Rat t = lt.next_rat("theta");
                Rat z = lt.next_rat("z");
                long long c = lt.next_int("cusp flag");
                if (c != 0 && c != 1) throw ParseError("cusp flag must be 0 or 1", lt.line);
                s.poly.push_back({t, z});
                s.cusp.push_back(static_cast<char>(c));
            }
            lt.done();
            out.front.strands.push_back(std::move(s));
        } else if (lt.key() == "fvertex") {
            FrontVertex v;
            v.id = static_cast<int>(lt.next_int("id"));
            v.torus = static_cast<int>(lt.next_int("torus"));
            v.theta = lt.next_rat("theta");
            v.z = lt.next_rat("z");
            long long m = lt.next_int("end count");
            if (m < 0) throw ParseError("negative end count", lt.line);
            for (long long i = 0; i < m; ++i) {
                StrandEndRef r;
                r.strand = static_cast<int>(lt.next_int("strand index"));
                r.which = static_cast<int>(lt.next_int("which end"));
                if (r.which != 0 && r.which != 1)
                    throw ParseError("which end must be 0 or 1", lt.line);
                v.cyc.push_back(r);
            }
            lt.done();
            out.front.vertices.push_back(std::move(v));
        } else {
            throw ParseError("unknown record '" + lt.key() + "'", lt.line);
        }
    }
    return out;
}

// --------------------------------------------------------------------------
// .arc

struct ArcFile {
    ArcDiagram arcs;
    std::string morse_ref;
};

inline std::string write_arc(const ArcDiagram& a, const std::string& morse_ref) {
    detail::check_token(morse_ref, "morse reference");
    std::ostringstream out;
    out << "arc " << morse_ref << "\n";
    for (const auto& v : a.vertices)
        out << "bvertex " << v.id << " " << v.torus << " " << rat_str(v.z) << "\n";
    for (const auto& w : a.wires) {
        out << "wire " << rat_str(w.theta) << " " << w.v_front << " " << w.v_back << " "
            << w.arcs.size();
        for (const auto& arc : w.arcs)
            out << " " << arc.torus << " " << rat_str(arc.z_from) << " "
                << rat_str(arc.z_to);
        out << "\n";
    }
    return out.str();
}

inline ArcFile read_arc(const std::string& text) {
    auto lines = detail::tokenize(text);
    if (lines.empty() || lines[0].key() != "arc")
        throw ParseError("expected 'arc <morse-ref>' header",
                         lines.empty() ? 1 : lines[0].line);
    ArcFile out;
    out.morse_ref = lines[0].next("morse reference");
    lines[0].done();
    for (std::size_t k = 1; k < lines.size(); ++k) {
        auto& lt = lines[k];
        if (lt.key() == "bvertex") {
            BindingVertex v;
            v.id = static_cast<int>(lt.next_int("id"));
            v.torus = static_cast<int>(lt.next_int("torus"));
            v.z = lt.next_rat("z");
            lt.done();
            out.arcs.vertices.push_back(v);
        } else if (lt.key() == "wire") {
            Wire w;
            w.theta = lt.next_rat("theta");
            w.v_front = static_cast<int>(lt.next_int("front vertex"));
            w.v_back = static_cast<int>(lt.next_int("back vertex"));
            long long m = lt.next_int("arc count");
            if (m < 0) throw ParseError("negative arc count", lt.line);
            for (long long i = 0; i < m; ++i) {
                WireArc arc;
                arc.torus = static_cast<int>(lt.next_int("torus"));
                arc.z_from = lt.next_rat("z from");
                arc.z_to = lt.next_rat("z to");
                w.arcs.push_back(arc);
            }
            lt.done();
            out.arcs.wires.push_back(std::move(w));
        } else {
            throw ParseError("unknown record '" + lt.key() + "'", lt.line);
        }
    }
    return out;
}

// --------------------------------------------------------------------------
// .bsurf

inline std::string write_bsurf(const BennequinSurface& s) {
    std::ostringstream out;
    out << "disks " << s.disks.size() << "\n";
    for (const auto& d : s.disks)
        out << "disk " << d.torus << " " << rat_str(d.z) << "\n";
    for (const auto& b : s.bands)
        out << "band " << rat_str(b.theta) << " " << b.i << " " << b.j << " " << b.sign
            << "\n";
    return out.str();
}

inline BennequinSurface read_bsurf(const std::string& text) {
    auto lines = detail::tokenize(text);
    if (lines.empty() || lines[0].key() != "disks")
        throw ParseError("expected 'disks <d>' header", lines.empty() ? 1 : lines[0].line);
    long long want = lines[0].next_int("disk count");
    lines[0].done();
    if (want < 0) throw ParseError("negative disk count", lines[0].line);
    BennequinSurface s;
    for (std::size_t k = 1; k < lines.size(); ++k) {
        auto& lt = lines[k];
        if (lt.key() == "disk") {
            DiskRec d;
            d.torus = static_cast<int>(lt.next_int("torus"));
            d.z = lt.next_rat("z");
            lt.done();
            if (static_cast<long long>(s.disks.size()) == want)
                throw ParseError("more disk lines than the header count", lt.line);
            s.disks.push_back(d);
        } else if (lt.key() == "band") {
            BandRec b;
            b.theta = lt.next_rat("theta");
            b.i = static_cast<int>(lt.next_int("disk i"));
            b.j = static_cast<int>(lt.next_int("disk j"));
            long long sg = lt.next_int("sign");
            if (sg != 1 && sg != -1) throw ParseError("sign must be 1 or -1", lt.line);
            b.sign = static_cast<int>(sg);
            lt.done();
            s.bands.push_back(b);
        } else {
            throw ParseError("unknown record '" + lt.key() + "'", lt.line);
        }
    }
    if (static_cast<long long>(s.disks.size()) != want)
        throw ParseError("disk lines do not match the header count",
                         lines.empty() ? 1 : lines.back().line);
    return s;
}

// --------------------------------------------------------------------------
// JSON mirrors and reports

inline nlohmann::json morse_json(const MorseDiagram& d) {
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& e : d.edges) {
        nlohmann::json pts = nlohmann::json::array();
        for (const auto& p : e.poly) pts.push_back({rat_str(p.t), rat_str(p.z)});
        edges.push_back({{"torus", e.torus},
                         {"label", e.label},
                         {"orient", e.orient},
                         {"points", pts}});
    }
    nlohmann::json verts = nlohmann::json::array();
    for (const auto& v : d.vertices)
        verts.push_back({{"id", v.id},
                         {"torus", v.torus},
                         {"theta", rat_str(v.theta)},
                         {"z", rat_str(v.z)},
                         {"partner", v.partner},
                         {"x_label", v.x_label},
                         {"y_label", v.y_label},
                         {"side", v.side_left ? "L" : "R"}});
    return {{"tori", d.n}, {"edges", edges}, {"vertices", verts}};
}

inline MorseDiagram morse_from_json(const nlohmann::json& j) {
    try {
        MorseDiagram d;
        d.n = j.at("tori").get<int>();
        for (const auto& je : j.at("edges")) {
            TrivalentGraphEdge e;
            e.torus = je.at("torus").get<int>();
            e.label = je.at("label").get<std::string>();
            e.orient = je.at("orient").get<int>();
            for (const auto& jp : je.at("points"))
                e.poly.push_back({parse_rat(jp.at(0).get<std::string>()),
                                  parse_rat(jp.at(1).get<std::string>())});
            d.edges.push_back(std::move(e));
        }
        for (const auto& jv : j.at("vertices")) {
            TrivalentVertex v;
            v.id = jv.at("id").get<int>();
            v.torus = jv.at("torus").get<int>();
            v.theta = parse_rat(jv.at("theta").get<std::string>());
            v.z = parse_rat(jv.at("z").get<std::string>());
            v.partner = jv.at("partner").get<int>();
            v.x_label = jv.at("x_label").get<std::string>();
            v.y_label = jv.at("y_label").get<std::string>();
            v.side_left = jv.at("side").get<std::string>() == "L";
            d.vertices.push_back(std::move(v));
        }
        return d;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("json: ") + e.what());
    }
}

inline nlohmann::json invariant_report_json(const SurfaceSummary& r) {
    return {{"euler_char", r.euler},
            {"boundary_components", r.boundary},
            {"self_linking", r.self_linking},
            {"bennequin_slack", r.slack},
            {"is_sqp", r.is_sqp},
            {"d", r.disks},
            {"b_plus", r.bands_pos},
            {"b_minus", r.bands_neg}};
}

inline nlohmann::json subdivision_json(const std::vector<SubdivisionEntry>& rec) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& e : rec)
        out.push_back({{"vertex", e.vertex},
                       {"kind", e.kind},
                       {"torus", e.torus},
                       {"theta", rat_str(e.at.t)},
                       {"z", rat_str(e.at.z)}});
    return out;
}

inline nlohmann::json validation_json(const ValidationReport& rep) {
    nlohmann::json issues = nlohmann::json::array();
    for (const auto& i : rep.issues)
        issues.push_back({{"code", i.code}, {"where", i.where}, {"detail", i.detail}});
    return {{"ok", rep.ok()}, {"issues", issues}};
}

} // namespace openbook
