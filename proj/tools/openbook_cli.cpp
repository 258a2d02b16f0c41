// openbook-ribbons: command line front end for the openbook headers.
//
// Exit codes: 0 success, 1 validation failure, 2 unreadable input or bad
// command line, 3 precondition violation inside an operation.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "openbook/arc_position.hpp"
#include "openbook/io.hpp"
#include "openbook/random_front.hpp"
#include "openbook/satellite.hpp"
#include "openbook/svg.hpp"

namespace fs = std::filesystem;
using namespace openbook;
using nlohmann::json;

namespace {

bool color_on() {
    const char* c = std::getenv("OPENBOOK_RIBBONS_COLOR");
    return c != nullptr && *c != '\0' && std::string(c) != "0";
}

std::string paint(const char* code, const std::string& s) {
    if (!color_on()) return s;
    return std::string("\033[") + code + "m" + s + "\033[0m";
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + p.string() + "'");
    std::ostringstream o;
    o << in.rdbuf();
    return o.str();
}

void write_file(const fs::path& p, const std::string& text) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw ParseError("cannot write '" + p.string() + "'");
    out << text;
}

// secondary notifications stay off stdout so JSON output remains parseable
void note_wrote(const fs::path& p) {
    std::cerr << paint("32", p.string()) << "\n";
}

// A diagram reference is either "builtin:<name>" or a file path. Paths from
// inside a front/arc file resolve relative to that file's directory.
MorseDiagram load_morse_ref(const std::string& ref, const fs::path& base_dir) {
    const std::string tag = "builtin:";
    if (ref.rfind(tag, 0) == 0) return builtin_diagram(ref.substr(tag.size()));
    fs::path p(ref);
    if (p.is_relative()) p = base_dir / p;
    return read_morse(read_file(p));
}

MorseDiagram morse_for(const std::string& ref, const fs::path& input,
                       const std::string& override_ref) {
    if (!override_ref.empty()) return load_morse_ref(override_ref, fs::current_path());
    if (ref.empty())
        throw PreconditionError("MissingDiagram",
                                "file names no diagram; pass --morse");
    return load_morse_ref(ref, input.parent_path());
}

// Structural checks on a surface file that already parsed: band ends must
// name existing, distinct disks and angles must be canonical.
ValidationReport check_surface(const BennequinSurface& s) {
    ValidationReport rep;
    int n = static_cast<int>(s.disks.size());
    for (std::size_t k = 0; k < s.disks.size(); ++k) {
        if (s.disks[k].torus < 0)
            rep.add("DiskTorus", "disk " + std::to_string(k), "negative torus index");
    }
    for (std::size_t k = 0; k < s.bands.size(); ++k) {
        const BandRec& b = s.bands[k];
        std::string where = "band " + std::to_string(k);
        if (b.i < 0 || b.i >= n || b.j < 0 || b.j >= n)
            rep.add("BandIndex", where, "disk index out of range");
        else if (b.i == b.j)
            rep.add("BandIndex", where, "both ends on one disk");
        if (b.theta < 0 || b.theta >= 1)
            rep.add("BandAngle", where, "theta must lie in [0,1)");
    }
    return rep;
}

int print_report(const ValidationReport& rep) {
    std::cout << validation_json(rep).dump(2) << "\n";
    return rep.ok() ? 0 : 1;
}

int cmd_validate(const std::string& file, const std::string& morse_override) {
    fs::path p(file);
    std::string ext = p.extension().string();
    std::string text = read_file(p);
    if (ext == ".morse") return print_report(validate_morse_diagram(read_morse(text)));
    if (ext == ".json") {
        MorseDiagram d;
        try {
            d = morse_from_json(json::parse(text));
        } catch (const json::exception& e) {
            throw ParseError(std::string("json: ") + e.what());
        }
        return print_report(validate_morse_diagram(d));
    }
    if (ext == ".front") {
        FrontFile ff = read_front(text);
        MorseDiagram d = morse_for(ff.morse_ref, p, morse_override);
        return print_report(validate_front(ff.front, d));
    }
    if (ext == ".arc") {
        ArcFile af = read_arc(text);
        MorseDiagram d = morse_for(af.morse_ref, p, morse_override);
        return print_report(validate_arc_diagram(af.arcs, d));
    }
    if (ext == ".bsurf") return print_report(check_surface(read_bsurf(text)));
    throw PreconditionError("UnknownFormat", "no validator for '" + ext + "' files");
}

// Re-throw with the failing stage prepended so pipeline users see where the
// chain broke without losing the machine code.
[[noreturn]] void stage_fail(const char* stage, const PreconditionError& e) {
    std::string msg = e.what();
    std::string prefix = e.code() + ": ";
    if (msg.rfind(prefix, 0) == 0) msg = msg.substr(prefix.size());
    throw PreconditionError(e.code(), std::string(stage) + ": " + msg);
}

int cmd_pipeline(const std::string& file, const std::string& morse_override,
                 const std::string& out_dir, bool svg, const std::string& eps_flag) {
    fs::path p(file);
    FrontFile ff = read_front(read_file(p));
    MorseDiagram d = morse_for(ff.morse_ref, p, morse_override);

    ValidationReport rep = validate_front(ff.front, d);
    if (!rep.ok()) return print_report(rep);

    ArcPositionResult pos;
    try {
        pos = to_arc_position(ff.front, d);
    } catch (const PreconditionError& e) {
        stage_fail("arc position", e);
    }

    Rat eps;
    CuspedArcDiagram cusped;
    try {
        Rat bound = cusped_epsilon_bound(pos.arcs, d);
        eps = eps_flag == "auto" ? bound : parse_rat(eps_flag);
        cusped = to_cusped(pos.arcs, d, eps);
    } catch (const PreconditionError& e) {
        stage_fail("cusped redraw", e);
    }

    BennequinSurface s;
    try {
        if (!pos.arcs.wires.empty()) s = ribbon_to_bennequin(pos.arcs);
    } catch (const PreconditionError& e) {
        stage_fail("surface", e);
    }
    SurfaceSummary sum = surface_summary(s);

    fs::path dir(out_dir);
    std::string stem = p.stem().string();
    std::vector<fs::path> files;
    auto emit = [&](const std::string& name, const std::string& text) {
        fs::path q = dir / name;
        write_file(q, text);
        files.push_back(q);
    };
    emit(stem + ".arc", write_arc(pos.arcs, ff.morse_ref));
    emit(stem + ".bsurf", write_bsurf(s));
    emit(stem + ".report.json", invariant_report_json(sum).dump(2) + "\n");
    if (svg) {
        std::vector<std::string> fr = render_front_svg(ff.front, d);
        std::vector<std::string> ar = render_arc_svg(pos.arcs, d);
        std::vector<std::string> cu = render_cusped_svg(cusped, d);
        for (std::size_t k = 0; k < fr.size(); ++k)
            emit(stem + ".front." + std::to_string(k) + ".svg", fr[k]);
        for (std::size_t k = 0; k < ar.size(); ++k)
            emit(stem + ".arc." + std::to_string(k) + ".svg", ar[k]);
        for (std::size_t k = 0; k < cu.size(); ++k)
            emit(stem + ".cusped." + std::to_string(k) + ".svg", cu[k]);
    }

    json manifest;
    manifest["epsilon"] = rat_str(eps);
    manifest["subdivisions"] = subdivision_json(pos.record);
    manifest["report"] = invariant_report_json(sum);
    json names = json::array();
    for (const fs::path& q : files) names.push_back(q.string());
    manifest["files"] = names;
    std::cout << manifest.dump(2) << "\n";
    return 0;
}

int cmd_render(const std::string& file, const std::string& morse_override,
               const std::string& out_dir) {
    fs::path p(file);
    std::string ext = p.extension().string();
    std::string text = read_file(p);
    std::vector<std::string> pages;
    if (ext == ".morse") {
        pages = render_morse_svg(read_morse(text));
    } else if (ext == ".front") {
        FrontFile ff = read_front(text);
        pages = render_front_svg(ff.front, morse_for(ff.morse_ref, p, morse_override));
    } else if (ext == ".arc") {
        ArcFile af = read_arc(text);
        pages = render_arc_svg(af.arcs, morse_for(af.morse_ref, p, morse_override));
    } else {
        throw PreconditionError("Unrenderable",
                                "no page drawing for '" + ext +
                                    "' files; render the front or arcs instead");
    }
    fs::path dir(out_dir);
    std::string stem = p.stem().string();
    for (std::size_t k = 0; k < pages.size(); ++k) {
        fs::path q = dir / (stem + "." + std::to_string(k) + ".svg");
        write_file(q, pages[k]);
        std::cout << q.string() << "\n";
    }
    return 0;
}

PatternBand parse_band_flag(const std::string& spec) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : spec) {
        if (c == ',') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    if (parts.size() < 3 || parts.size() > 4)
        throw ParseError("band flag wants theta,a,b[,sign], got '" + spec + "'");
    PatternBand b;
    b.theta = parse_rat(parts[0]);
    b.a = static_cast<int>(detail::parse_int(parts[1], 0));
    b.b = static_cast<int>(detail::parse_int(parts[2], 0));
    b.sign = parts.size() == 4 ? static_cast<int>(detail::parse_int(parts[3], 0)) : 1;
    return b;
}

void maybe_write_surface(const std::optional<BennequinSurface>& s,
                         const std::string& out) {
    if (out.empty()) return;
    if (!s)
        throw PreconditionError("NoSurface",
                                "summary-level result carries no surface to write");
    write_file(out, write_bsurf(*s));
    note_wrote(out);
}

int cmd_satellite(const std::string& file, int strands,
                  const std::vector<std::string>& band_flags,
                  const std::string& out) {
    PatternBraid pat;
    pat.strands = strands;
    for (const std::string& f : band_flags) pat.bands.push_back(parse_band_flag(f));
    CompanionSummary comp = companion_of(read_bsurf(read_file(file)));
    SatelliteSummary res = satellite(pat, comp);
    json j;
    j["euler_char"] = res.euler_char;
    j["is_sqp"] = res.sqp;
    std::cout << j.dump(2) << "\n";
    maybe_write_surface(res.surface, out);
    return 0;
}

int cmd_cable(const std::string& file, long long p, long long q,
              const std::string& out) {
    CompanionSummary comp = companion_of(read_bsurf(read_file(file)));
    CableResult res = cable(p, q, comp);
    json j;
    j["euler_char"] = res.euler_char;
    j["is_sqp"] = res.sqp;
    j["bennequin_slack"] = res.slack;
    std::cout << j.dump(2) << "\n";
    maybe_write_surface(res.surface, out);
    return 0;
}

int cmd_stabilize(const std::string& file, int times, bool undo,
                  const std::string& out) {
    BennequinSurface s = read_bsurf(read_file(file));
    for (int k = 0; k < times; ++k)
        s = undo ? positive_markov_destabilization(s) : positive_markov_stabilization(s);
    std::string text = write_bsurf(s);
    if (out.empty()) {
        std::cout << text;
    } else {
        write_file(out, text);
        note_wrote(out);
    }
    return 0;
}

int cmd_invariants(const std::string& file) {
    BennequinSurface s = read_bsurf(read_file(file));
    std::cout << invariant_report_json(surface_summary(s)).dump(2) << "\n";
    return 0;
}

int cmd_gen(const std::string& morse, std::uint64_t seed, int size,
            const std::string& out) {
    std::string ref = morse;
    MorseDiagram d;
    if (fs::path(morse).extension() == ".morse") {
        d = read_morse(read_file(morse));
    } else {
        d = builtin_diagram(morse);
        ref = "builtin:" + morse;
    }
    GraphFront f = random_graph_front(d, seed, size);
    std::string text = write_front(f, ref);
    if (out.empty()) {
        std::cout << text;
    } else {
        write_file(out, text);
        note_wrote(out);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"open book diagrams, fronts, arc positions and Bennequin surfaces"};
    app.require_subcommand(1);

    std::string file, morse_override, out_dir = ".", out_file, eps_flag = "auto";
    std::vector<std::string> band_flags;
    int strands = 1, times = 1, size = 2;
    long long p = 1, q = 0;
    std::uint64_t seed = 0;
    bool svg = false, undo = false;

    CLI::App* c_val = app.add_subcommand(
        "validate", "check a .morse/.json/.front/.arc/.bsurf file, print a report");
    c_val->add_option("file", file)->required();
    c_val->add_option("--morse", morse_override, "diagram overriding the file's reference");

    CLI::App* c_pipe = app.add_subcommand(
        "pipeline", "front to arc position to surface to invariant report");
    c_pipe->add_option("file", file)->required();
    c_pipe->add_option("--morse", morse_override);
    c_pipe->add_option("--out", out_dir, "output directory (default .)");
    c_pipe->add_option("--epsilon", eps_flag,
                       "cusped redraw width, a rational or 'auto' for the widest safe value");
    c_pipe->add_flag("--svg", svg, "also write per-torus drawings");

    CLI::App* c_rend = app.add_subcommand("render", "write one svg per torus");
    c_rend->add_option("file", file)->required();
    c_rend->add_option("--morse", morse_override);
    c_rend->add_option("--out", out_dir);

    CLI::App* c_sat = app.add_subcommand(
        "satellite", "run a braid pattern around the companion surface in a .bsurf");
    c_sat->add_option("file", file)->required();
    c_sat->add_option("--strands", strands, "pattern strand count (default 1)");
    c_sat->add_option("--band", band_flags, "pattern band as theta,a,b[,sign]; repeatable");
    c_sat->add_option("--out", out_file, "write the realized surface here");

    CLI::App* c_cab = app.add_subcommand("cable", "(p,q)-cable of the surface in a .bsurf");
    c_cab->add_option("file", file)->required();
    c_cab->add_option("-p", p)->required();
    c_cab->add_option("-q", q)->required();
    c_cab->add_option("--out", out_file);

    CLI::App* c_stab = app.add_subcommand(
        "stabilize", "add a disk and a positive band next to the last disk");
    c_stab->add_option("file", file)->required();
    c_stab->add_option("--times", times)->check(CLI::NonNegativeNumber);
    c_stab->add_flag("--undo", undo, "remove the stabilization instead");
    c_stab->add_option("--out", out_file);

    CLI::App* c_inv = app.add_subcommand("invariants", "invariant report of a .bsurf");
    c_inv->add_option("file", file)->required();

    CLI::App* c_gen = app.add_subcommand("gen", "random front on a diagram");
    c_gen->add_option("morse", file, "builtin name or .morse path")->required();
    c_gen->add_option("--seed", seed);
    c_gen->add_option("--size", size, "component count (default 2)");
    c_gen->add_option("--out", out_file);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << paint("31", std::string("error: ") + e.what()) << "\n";
        return 2;
    }

    try {
        if (*c_val) return cmd_validate(file, morse_override);
        if (*c_pipe) return cmd_pipeline(file, morse_override, out_dir, svg, eps_flag);
        if (*c_rend) return cmd_render(file, morse_override, out_dir);
        if (*c_sat) return cmd_satellite(file, strands, band_flags, out_file);
        if (*c_cab) return cmd_cable(file, p, q, out_file);
        if (*c_stab) return cmd_stabilize(file, times, undo, out_file);
        if (*c_inv) return cmd_invariants(file);
        if (*c_gen) return cmd_gen(file, seed, size, out_file);
    } catch (const ParseError& e) {
        std::cerr << paint("31", std::string("parse error: ") + e.what()) << "\n";
        return 2;
    } catch (const PreconditionError& e) {
        std::cerr << paint("31", std::string("error: ") + e.what()) << "\n";
        return 3;
    }
    return 0;
}
