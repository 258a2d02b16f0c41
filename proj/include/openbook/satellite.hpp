#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "openbook/arc_position.hpp"
#include "openbook/surface.hpp"

// Satellite-style constructions on Bennequin surfaces: parallel copies of a
// companion surface joined by the bands of a braid pattern, cables as the
// torus-pattern special case, knot ribbons (annuli), and summary plumbing.

namespace openbook {

// What a satellite needs to know about its companion ribbon. Attaching the
// full surface upgrades every construction from arithmetic to geometry.
struct CompanionSummary {
    long long euler_char = 0;
    int boundary_components = 0;
    bool sqp = false;
    std::optional<BennequinSurface> surface;
};

inline CompanionSummary companion_of(const BennequinSurface& s) {
    CompanionSummary out;
    out.euler_char = euler_characteristic(s);
    out.boundary_components = boundary_components(s);
    out.sqp = is_strongly_quasipositive(s);
    out.surface = s;
    return out;
}

// One band generator of a braid in the solid torus: joins strand a to
// strand b at page angle theta.
struct PatternBand {
    Rat theta;
    int a = 0, b = 0;
    int sign = 1;
};

struct PatternBraid {
    int strands = 1;
    std::vector<PatternBand> bands; // theta strictly increasing
    bool closed_in_solid_torus = true;
};

// The braid (sigma_1 ... sigma_{p-1})^q in band form: |q| sweeps of p-1
// adjacent-strand bands, evenly spread over the circle, all of sign(q).
inline PatternBraid torus_pattern(long long p, long long q) {
    if (p < 1) throw PreconditionError("InvalidP", "cable index p must be at least 1");
    PatternBraid out;
    out.strands = static_cast<int>(p);
    long long reps = q < 0 ? -q : q;
    long long total = reps * (p - 1);
    long long m = 0;
    for (long long r = 0; r < reps; ++r)
        for (long long i = 0; i + 1 < p; ++i, ++m)
            out.bands.push_back({Rat(m + 1) / Rat(total + 1), static_cast<int>(i),
                                 static_cast<int>(i + 1), q < 0 ? -1 : 1});
    return out;
}

namespace detail {

inline Rat min_cyclic_gap(std::vector<Rat> vals) {
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    if (vals.size() < 2) return Rat(1);
    Rat best = Rat(vals[0] + 1 - vals.back());
    for (std::size_t k = 0; k + 1 < vals.size(); ++k)
        if (vals[k + 1] - vals[k] < best) best = Rat(vals[k + 1] - vals[k]);
    return best;
}

// n parallel copies of base, each offset by under half the smallest feature
// gap so copies interleave without collisions, plus cross bands joining the
// numbered copies of disk 0, placed inside the widest band-free page
// interval. Copy t of disk i lands at index i*n + t.
inline BennequinSurface parallel_copies(const BennequinSurface& base, int n,
                                        const std::vector<PatternBand>& cross) {
    if (base.disks.empty() && !cross.empty())
        throw PreconditionError("MalformedGeometry", "pattern bands need a companion disk");
    BennequinSurface out;
    std::map<int, std::vector<Rat>> heights;
    for (const auto& dd : base.disks) heights[dd.torus].push_back(dd.z);
    std::map<int, Rat> zstep;
    for (const auto& [torus, zs] : heights)
        zstep[torus] = Rat(min_cyclic_gap(zs) / (2 * n));
    for (const auto& dd : base.disks)
        for (int t = 0; t < n; ++t)
            out.disks.push_back({dd.torus, mod1(Rat(dd.z + t * zstep[dd.torus]))});

    std::vector<Rat> angles;
    for (const auto& b : base.bands) angles.push_back(b.theta);
    Rat tstep = Rat(min_cyclic_gap(angles) / (2 * n));
    for (const auto& b : base.bands)
        for (int t = 0; t < n; ++t)
            out.bands.push_back({mod1(Rat(b.theta + t * tstep)), b.i * n + t, b.j * n + t, b.sign});

    angles.clear();
    for (const auto& b : out.bands) angles.push_back(b.theta);
    auto gap = widest_gap(angles);
    Rat span = Rat(gap.second - gap.first);
    Rat denom = Rat(cross.size() + 1);
    for (std::size_t m = 0; m < cross.size(); ++m)
        out.bands.push_back({mod1(Rat(gap.first + span * Rat(m + 1) / denom)), cross[m].a,
                             cross[m].b, cross[m].sign});
    std::sort(out.bands.begin(), out.bands.end(),
              [](const BandRec& x, const BandRec& y) { return x.theta < y.theta; });
    return out;
}

inline void check_pattern(const PatternBraid& p) {
    if (p.strands < 1)
        throw PreconditionError("InvalidPattern", "pattern braid needs at least one strand");
    const Rat* prev = nullptr;
    for (const auto& b : p.bands) {
        if (b.a < 0 || b.a >= b.b || b.b >= p.strands)
            throw PreconditionError("InvalidPattern",
                                    "band must join two strands a < b inside the braid");
        if (b.sign != 1 && b.sign != -1)
            throw PreconditionError("InvalidPattern", "band sign must be +1 or -1");
        if (b.theta < 0 || b.theta >= 1 || (prev && !(*prev < b.theta)))
            throw PreconditionError("InvalidPattern",
                                    "band angles must increase strictly within [0,1)");
        prev = &b.theta;
    }
}

inline void check_companion(const CompanionSummary& c) {
    if (!c.sqp)
        throw PreconditionError("NonSqpInput", "companion is not strongly quasipositive");
    if (c.surface) {
        if (!is_strongly_quasipositive(*c.surface))
            throw PreconditionError("NonSqpInput", "companion surface has negative bands");
        if (euler_characteristic(*c.surface) != c.euler_char)
            throw PreconditionError("MalformedGeometry",
                                    "companion summary disagrees with its surface");
    }
}

} // namespace detail

struct SatelliteSummary {
    long long euler_char = 0;
    bool sqp = false;
    std::optional<BennequinSurface> surface;
};

// The pattern's disks are replaced by parallel copies of the companion
// ribbon, so each of the k pattern bands lowers n copies' worth of Euler
// characteristic by one.
inline SatelliteSummary satellite(const PatternBraid& pattern,
                                  const CompanionSummary& companion) {
    detail::check_pattern(pattern);
    for (const auto& b : pattern.bands)
        if (b.sign < 0)
            throw PreconditionError("NegativePatternBand",
                                    "pattern must be strongly quasipositive");
    detail::check_companion(companion);
    SatelliteSummary out;
    out.euler_char = pattern.strands * companion.euler_char -
                     static_cast<long long>(pattern.bands.size());
    out.sqp = true;
    if (companion.surface)
        out.surface =
            detail::parallel_copies(*companion.surface, pattern.strands, pattern.bands);
    return out;
}

struct CableResult {
    long long euler_char = 0;
    bool sqp = false;
    long long slack = 0; // twice the negative band count
    std::optional<BennequinSurface> surface;
};

// (p,q)-cable: the satellite with the torus pattern. Negative q keeps the
// same Euler characteristic but makes every cross band negative, so the
// verdict flips whenever there is at least one band.
inline CableResult cable(long long p, long long q, const CompanionSummary& companion) {
    PatternBraid pat = torus_pattern(p, q);
    detail::check_companion(companion);
    long long k = static_cast<long long>(pat.bands.size());
    CableResult out;
    out.euler_char = p * companion.euler_char - k;
    out.sqp = q >= 0 || k == 0;
    out.slack = out.sqp ? 0 : 2 * k;
    if (companion.surface)
        out.surface = detail::parallel_copies(*companion.surface, pat.strands, pat.bands);
    return out;
}

// The ribbon of a vertex-free knot front is an annulus. Runs the standard
// pipeline and insists the boundary is one knot and its push-off.
inline BennequinSurface quasipositive_annulus(const GraphFront& f, const MorseDiagram& d) {
    if (!f.vertices.empty())
        throw PreconditionError("NotAKnotFront", "front has graph vertices");
    ArcPositionResult res = to_arc_position(f, d);
    BennequinSurface s = ribbon_to_bennequin(res.arcs);
    int bc = boundary_components(s);
    if (bc != 2)
        throw PreconditionError("NotAKnotFront", "front closes up into " +
                                                     std::to_string(bc / 2) +
                                                     " components, not 1");
    return s;
}

struct RibbonSummary {
    long long euler_char = 0;
    bool sqp = false;
};

inline RibbonSummary ribbon_summary(const BennequinSurface& s) {
    return {euler_characteristic(s), is_strongly_quasipositive(s)};
}

// Gluing two ribbons along one square costs one Euler unit.
inline RibbonSummary plumb(const RibbonSummary& r1, const RibbonSummary& r2) {
    if (!r1.sqp || !r2.sqp)
        throw PreconditionError("NonSqpInput",
                                "plumbing needs two strongly quasipositive ribbons");
    return {r1.euler_char + r2.euler_char - 1, true};
}

} // namespace openbook
