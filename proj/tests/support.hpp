#pragma once

// Shared fixtures for the test binaries: the axiom-mutation catalog and the
// independent oracles. Expected values here were derived by hand (slice
// walks, surgery traversals, cell counts) before the operations under test
// were implemented; tests compare against these frozen values.

#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "openbook/front.hpp"
#include "openbook/morse_diagram.hpp"
#include "openbook/surface.hpp"

namespace obtest {

using namespace openbook;

// Independent cell-complex oracle. Builds the corner-level complex of a
// ribbon: each slotted disk contributes 2m boundary corners alternating
// slot segments and free disk arcs, each band a rectangle glued along two
// slot segments, the half twist pairing in(X) with out(other end of X).
// Counts chi = V - E + F and boundary circles by union-find on free edges.
struct CellCounts {
    long long euler = 0;
    int boundary = 0;
};

struct Uf {
    std::vector<int> p;
    explicit Uf(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
    int find(int x) { return p[x] == x ? x : p[x] = find(p[x]); }
    void unite(int a, int b) { p[find(a)] = find(b); }
};

inline CellCounts cell_oracle(const AbstractRibbon& r) {
    int nd = static_cast<int>(r.disk_slots.size());
    std::vector<int> base(nd + 1, 0);
    for (int k = 0; k < nd; ++k)
        base[k + 1] = base[k] + 2 * static_cast<int>(r.disk_slots[k].size());
    auto corner_in = [&](int disk, int slot) { return base[disk] + 2 * slot; };
    auto corner_out = [&](int disk, int slot) { return base[disk] + 2 * slot + 1; };

    // locate each band end
    std::vector<std::pair<int, int>> at(2 * r.bands, {-1, -1});
    for (int k = 0; k < nd; ++k)
        for (std::size_t t = 0; t < r.disk_slots[k].size(); ++t)
            at[r.disk_slots[k][t]] = {k, static_cast<int>(t)};

    long long V = 0, E = 0, F = nd + r.bands;
    int empty_disks = 0;
    for (int k = 0; k < nd; ++k) {
        long long m = static_cast<long long>(r.disk_slots[k].size());
        V += m ? 2 * m : 1;
        E += m ? 2 * m : 1;
        if (!m) ++empty_disks;
    }
    E += 2 * r.bands;

    Uf uf(base[nd]);
    // free disk arcs: out(slot t) -- in(slot t+1)
    for (int k = 0; k < nd; ++k) {
        int m = static_cast<int>(r.disk_slots[k].size());
        for (int t = 0; t < m; ++t)
            uf.unite(corner_out(k, t), corner_in(k, (t + 1) % m));
    }
    // band sides: in(X) -- out(Y) and in(Y) -- out(X)
    for (int e = 0; e < r.bands; ++e) {
        auto [dx, tx] = at[2 * e];
        auto [dy, ty] = at[2 * e + 1];
        if (dx < 0 || dy < 0) throw std::runtime_error("cell oracle: unattached band end");
        uf.unite(corner_in(dx, tx), corner_out(dy, ty));
        uf.unite(corner_in(dy, ty), corner_out(dx, tx));
    }
    std::set<int> roots;
    for (int c = 0; c < base[nd]; ++c) roots.insert(uf.find(c));

    CellCounts out;
    out.euler = V - E + F;
    out.boundary = static_cast<int>(roots.size()) + empty_disks;
    return out;
}

// Braid-word oracle: disks ordered along the binding are braid strands; a
// band between strands p < q expands to the conjugated generator
// s_{q-1} ... s_{p+1} s_p^{sign} s_{p+1}^{-1} ... s_{q-1}^{-1}. Sums the
// exponents of the full expansion and subtracts the strand count.
inline long long sl_oracle(const BennequinSurface& s) {
    std::vector<int> order(s.disks.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return std::make_pair(s.disks[a].torus, s.disks[a].z) <
               std::make_pair(s.disks[b].torus, s.disks[b].z);
    });
    std::vector<int> pos(s.disks.size());
    for (std::size_t r = 0; r < order.size(); ++r) pos[order[r]] = static_cast<int>(r);

    long long writhe = 0;
    for (const auto& b : s.bands) {
        if (b.i == b.j) // oracle only covers embedded band generators
            throw std::runtime_error("sl oracle: self band");
        int p = std::min(pos[b.i], pos[b.j]);
        int q = std::max(pos[b.i], pos[b.j]);
        std::vector<int> exps;
        for (int k = q - 1; k > p; --k) exps.push_back(+1);
        exps.push_back(b.sign);
        for (int k = p + 1; k <= q - 1; ++k) exps.push_back(-1);
        for (int e : exps) writhe += e;
    }
    return writhe - static_cast<long long>(s.disks.size());
}

// Knot front drawn on the one-torus two-handle diagram: two strands tied
// together by matched ends at slices 5/32 (label a) and 9/32 (label b),
// three cusps, no double points. Coordinates were placed by hand on the
// curves of that diagram and each invariant below was walked out by hand.
inline GraphFront matched_stub_front() {
    auto R = [](long a, long b) { return Rat(a, b); };
    GraphFront f;
    {
        FrontStrand s; // lower strand: a1 (left) across to b2 (left), 2 cusps
        s.torus = 0;
        s.poly = {{R(5, 32), R(53, 256)},  {R(11, 64), R(53, 256)},
                  {R(7, 32), R(3, 16)},    {R(5, 64), R(95, 256)},
                  {R(17, 64), R(39, 128)}, {R(9, 32), R(39, 128)}};
        s.cusp = {0, 0, 1, 1, 0, 0};
        s.start = {FrontEnd::Kind::tedge, 0, true};
        s.end = {FrontEnd::Kind::tedge, 2, true};
        f.strands.push_back(s);
    }
    {
        FrontStrand s; // upper strand: a2 (right) across to b1 (right), 1 cusp
        s.torus = 0;
        s.poly = {{R(5, 32), R(149, 256)},
                  {R(9, 64), R(149, 256)},
                  {R(1, 16), R(29, 32)},
                  {R(17, 64), R(107, 128)},
                  {R(9, 32), R(107, 128)}};
        s.cusp = {0, 0, 1, 0, 0};
        s.start = {FrontEnd::Kind::tedge, 3, false};
        s.end = {FrontEnd::Kind::tedge, 1, false};
        f.strands.push_back(s);
    }
    return f;
}

struct Mutation {
    std::string name;
    std::string expect; // the single axiom code the validator must cite
    MorseDiagram diagram;
};

inline std::vector<Mutation> axiom_mutations() {
    auto R = [](long a, long b) { return Rat(a, b); };
    std::vector<Mutation> out;

    { // label pairing broken everywhere: zigzag renamed
        MorseDiagram d = builtin_diagram("ex_2_1_a");
        d.edges[0].label = "b";
        out.push_back({"relabel_zigzag", "axiom(ii)", d});
    }
    { // one core curve removed: its label appears once per slice
        MorseDiagram d = builtin_diagram("ex_2_1_a");
        d.edges.pop_back();
        out.push_back({"drop_core", "axiom(ii)", d});
    }
    { // polyline order reversed: theta decreases
        MorseDiagram d = builtin_diagram("ex_2_1_a");
        std::reverse(d.edges[0].poly.begin(), d.edges[0].poly.end());
        out.push_back({"reverse_zigzag", "axiom(i)", d});
    }
    { // a vertical stall inserted mid-curve
        MorseDiagram d = builtin_diagram("ex_2_1_a");
        d.edges[0].poly.insert(d.edges[0].poly.begin() + 2, Pt{R(1, 2), R(9, 32)});
        out.push_back({"stall_zigzag", "axiom(i)", d});
    }
    { // stored approach side contradicts the local slopes
        MorseDiagram d = builtin_diagram("ex_2_1_b");
        d.vertices[0].side_left = true;
        out.push_back({"flip_side", "axiom(iv)", d});
    }
    { // partner pointer aimed at a vertex on another slice
        MorseDiagram d = builtin_diagram("ex_2_1_b");
        d.vertices[0].partner = 2;
        out.push_back({"retarget_partner", "axiom(iv)", d});
    }
    { // merging pair recorded backwards
        MorseDiagram d = builtin_diagram("ex_2_1_b");
        std::swap(d.vertices[0].x_label, d.vertices[0].y_label);
        out.push_back({"swap_merge_labels", "axiom(iv)", d});
    }
    { // pass-through curve pulled off the emerge vertex
        MorseDiagram d = builtin_diagram("ex_2_1_b");
        d.edges[2].poly[1].z = R(31, 64);
        out.push_back({"shift_b2_junction", "axiom(iv)", d});
    }
    { // pass-through curve pulled off the merge vertex
        MorseDiagram d = builtin_diagram("ex_2_1_b");
        d.edges[1].poly[1].z = R(57, 64);
        out.push_back({"shift_b1_junction", "axiom(iv)", d});
    }
    { // both partners flipped: sides opposite but each contradicts geometry
        MorseDiagram d = builtin_diagram("ex_2_1_b");
        d.vertices[0].side_left = true;
        d.vertices[1].side_left = false;
        out.push_back({"flip_both_sides", "axiom(iv)", d});
    }
    { // extra same-torus handle pair: surgery splits off a circle
      // (hand traversal: cut points a,b,b around torus 0 give arcs x1..x3 plus
      //  the torus-1 circle; regluing isolates the arc between the b's -> 2)
        MorseDiagram d = builtin_diagram("ex_2_1_a");
        TrivalentGraphEdge e1, e2;
        e1.torus = e2.torus = 0;
        e1.label = e2.label = "b";
        e1.poly = {{R(0, 1), R(5, 8)}, {R(1, 1), R(5, 8)}};
        e2.poly = {{R(0, 1), R(7, 8)}, {R(1, 1), R(7, 8)}};
        d.edges.push_back(e1);
        d.edges.push_back(e2);
        out.push_back({"unlinked_handles", "axiom(iii)", d});
    }
    { // nested handle pair below the once-punctured-torus curves
      // (hand traversal: the arc between the two c-points closes on itself)
        MorseDiagram d = builtin_diagram("ex_2_1_b");
        TrivalentGraphEdge e1, e2;
        e1.torus = e2.torus = 0;
        e1.label = e2.label = "c";
        e1.poly = {{R(0, 1), R(1, 16)}, {R(1, 1), R(1, 16)}};
        e2.poly = {{R(0, 1), R(1, 8)}, {R(1, 1), R(1, 8)}};
        d.edges.push_back(e1);
        d.edges.push_back(e2);
        out.push_back({"nested_handles", "axiom(iii)", d});
    }
    return out;
}

} // namespace obtest
