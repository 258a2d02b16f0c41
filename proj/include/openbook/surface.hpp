#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <tuple>
#include <vector>

#include "openbook/arc.hpp"
#include "openbook/front.hpp"

// Bennequin surfaces: transverse disks bounded by the binding plus
// half-twisted bands attached along pages. The abstract ribbon view keeps
// only what the boundary walk needs: per-disk cyclic slot orders and the
// end pairing of bands.

namespace openbook {

// disk k carries the cyclically ordered band-end ids 2*band+which
struct AbstractRibbon {
    std::vector<std::vector<int>> disk_slots;
    int bands = 0;
};

inline long long euler_characteristic(const AbstractRibbon& r) {
    return static_cast<long long>(r.disk_slots.size()) - r.bands;
}

// Walks the boundary: past slot s, the free stretch of disk runs to the next
// slot t; the band side there crosses to the partner of t. Orbit count plus
// slotless disks gives the boundary circles.
inline int boundary_components(const AbstractRibbon& r) {
    int nd = static_cast<int>(r.disk_slots.size());
    std::vector<std::pair<int, int>> at(2 * r.bands, {-1, -1});
    for (int k = 0; k < nd; ++k)
        for (std::size_t t = 0; t < r.disk_slots[k].size(); ++t) {
            int e = r.disk_slots[k][t];
            if (e < 0 || e >= 2 * r.bands || at[e].first != -1)
                throw PreconditionError("MalformedGeometry",
                                        "ribbon slots do not pair band ends");
            at[e] = {k, static_cast<int>(t)};
        }
    for (const auto& p : at)
        if (p.first == -1)
            throw PreconditionError("MalformedGeometry", "unattached band end");

    std::vector<int> base(nd + 1, 0);
    for (int k = 0; k < nd; ++k)
        base[k + 1] = base[k] + static_cast<int>(r.disk_slots[k].size());
    std::vector<char> seen(base[nd], 0);
    int comps = 0;
    for (int k = 0; k < nd; ++k) {
        if (r.disk_slots[k].empty()) ++comps;
        for (std::size_t t0 = 0; t0 < r.disk_slots[k].size(); ++t0) {
            if (seen[base[k] + static_cast<int>(t0)]) continue;
            ++comps;
            int ck = k, ct = static_cast<int>(t0);
            do {
                seen[base[ck] + ct] = 1;
                int m = static_cast<int>(r.disk_slots[ck].size());
                int e = r.disk_slots[ck][(ct + 1) % m];
                std::tie(ck, ct) = at[e ^ 1];
            } while (!(ck == k && ct == static_cast<int>(t0)));
        }
    }
    return comps;
}

struct DiskRec {
    int torus = 0;
    Rat z; // canonical
};

struct BandRec {
    Rat theta; // canonical, distinct per band
    int i = 0, j = 0;
    int sign = +1;
};

struct BennequinSurface {
    std::vector<DiskRec> disks;
    std::vector<BandRec> bands;
};

// slots at a disk follow the page sweep; the two ends of a band from a disk
// to itself keep i before j
inline AbstractRibbon to_abstract_ribbon(const BennequinSurface& s) {
    AbstractRibbon r;
    r.disk_slots.resize(s.disks.size());
    r.bands = static_cast<int>(s.bands.size());
    std::vector<std::vector<std::tuple<Rat, int, int>>> keyed(s.disks.size());
    for (std::size_t e = 0; e < s.bands.size(); ++e) {
        const BandRec& b = s.bands[e];
        keyed.at(b.i).push_back({mod1(b.theta), 0, 2 * static_cast<int>(e)});
        keyed.at(b.j).push_back({mod1(b.theta), 1, 2 * static_cast<int>(e) + 1});
    }
    for (std::size_t k = 0; k < keyed.size(); ++k) {
        std::sort(keyed[k].begin(), keyed[k].end());
        for (const auto& [th, rank, e] : keyed[k]) r.disk_slots[k].push_back(e);
    }
    return r;
}

inline BennequinSurface bennequin_from_bands(int disk_count,
                                             const std::vector<BandRec>& bands) {
    if (disk_count < 1)
        throw PreconditionError("IndexOutOfRange", "need at least one disk");
    BennequinSurface s;
    for (int k = 0; k < disk_count; ++k)
        s.disks.push_back({0, Rat(2 * k + 1) / (2 * disk_count)});
    std::set<Rat> thetas;
    for (const auto& b : bands) {
        if (b.i < 0 || b.i >= disk_count || b.j < 0 || b.j >= disk_count)
            throw PreconditionError("IndexOutOfRange",
                                    "band endpoint outside the disk range");
        if (b.sign != +1 && b.sign != -1)
            throw PreconditionError("IndexOutOfRange", "band sign must be +1 or -1");
        if (b.i == b.j)
            throw PreconditionError("SelfBand",
                                    "band generators join distinct disks");
        Rat th = mod1(b.theta);
        if (!thetas.insert(th).second)
            throw PreconditionError("ThetaCollision",
                                    "two bands at theta=" + rat_str(th));
        s.bands.push_back({th, b.i, b.j, b.sign});
    }
    return s;
}

inline long long euler_characteristic(const BennequinSurface& s) {
    return static_cast<long long>(s.disks.size()) -
           static_cast<long long>(s.bands.size());
}

inline int boundary_components(const BennequinSurface& s) {
    return boundary_components(to_abstract_ribbon(s));
}

inline long long self_linking(const BennequinSurface& s) {
    long long pos = 0, neg = 0;
    for (const auto& b : s.bands) (b.sign > 0 ? pos : neg) += 1;
    return (pos - neg) - static_cast<long long>(s.disks.size());
}

inline long long bennequin_slack(const BennequinSurface& s) {
    return -euler_characteristic(s) - self_linking(s);
}

inline bool is_strongly_quasipositive(const BennequinSurface& s) {
    for (const auto& b : s.bands)
        if (b.sign < 0) return false;
    return true;
}

struct SurfaceSummary {
    int disks = 0, bands_pos = 0, bands_neg = 0;
    long long euler = 0;
    int boundary = 0;
    long long self_linking = 0;
    long long slack = 0;
    bool is_sqp = false;
};

inline SurfaceSummary surface_summary(const BennequinSurface& s) {
    SurfaceSummary out;
    out.disks = static_cast<int>(s.disks.size());
    for (const auto& b : s.bands) (b.sign > 0 ? out.bands_pos : out.bands_neg) += 1;
    out.euler = euler_characteristic(s);
    out.boundary = boundary_components(s);
    out.self_linking = self_linking(s);
    out.slack = bennequin_slack(s);
    out.is_sqp = is_strongly_quasipositive(s);
    return out;
}

namespace detail {

// widest cyclic gap between canonical values, ties to the earliest start;
// m==0 yields the full circle at 0
inline std::pair<Rat, Rat> widest_gap(std::vector<Rat> vals) {
    if (vals.empty()) return {Rat(0), Rat(1)};
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    std::size_t m = vals.size();
    Rat best_lo = vals[0], best_hi = vals[0] + 1;
    if (m > 1) {
        Rat best_w = -1;
        for (std::size_t k = 0; k < m; ++k) {
            Rat lo = vals[k];
            Rat hi = k + 1 < m ? vals[k + 1] : vals[0] + 1;
            if (hi - lo > best_w) {
                best_w = hi - lo;
                best_lo = lo;
                best_hi = hi;
            }
        }
    }
    return {best_lo, best_hi};
}

} // namespace detail

// new disk beside the last one, joined by a positive band; both placed at the
// simplest point of the widest free gap so the move is reproducible
inline BennequinSurface positive_markov_stabilization(const BennequinSurface& s) {
    if (s.disks.empty())
        throw PreconditionError("IndexOutOfRange", "no disk to stabilize");
    BennequinSurface t = s;
    int last = static_cast<int>(s.disks.size()) - 1;
    int torus = s.disks[last].torus;
    std::vector<Rat> zs;
    for (const auto& dk : s.disks)
        if (dk.torus == torus) zs.push_back(dk.z);
    auto [zlo, zhi] = detail::widest_gap(zs);
    Rat z_new = mod1(simplest_in(zlo, zhi));
    std::vector<Rat> ths;
    for (const auto& b : s.bands) ths.push_back(mod1(b.theta));
    Rat th_new = Rat(1, 2);
    if (!ths.empty()) {
        auto [tlo, thi] = detail::widest_gap(ths);
        th_new = mod1(simplest_in(tlo, thi));
    }
    t.disks.push_back({torus, z_new});
    t.bands.push_back({th_new, last, last + 1, +1});
    return t;
}

inline BennequinSurface positive_markov_destabilization(const BennequinSurface& s) {
    std::vector<int> inc(s.disks.size(), 0);
    for (const auto& b : s.bands) {
        inc.at(b.i) += 1;
        inc.at(b.j) += 1;
    }
    for (int k = static_cast<int>(s.disks.size()) - 1; k >= 0; --k) {
        if (inc[k] != 1) continue;
        std::size_t be = s.bands.size();
        for (std::size_t e = 0; e < s.bands.size(); ++e)
            if (s.bands[e].i == k || s.bands[e].j == k) be = e;
        if (s.bands[be].sign != +1) continue;
        BennequinSurface t;
        for (int m = 0; m < static_cast<int>(s.disks.size()); ++m)
            if (m != k) t.disks.push_back(s.disks[m]);
        for (std::size_t e = 0; e < s.bands.size(); ++e) {
            if (e == be) continue;
            BandRec b = s.bands[e];
            if (b.i > k) --b.i;
            if (b.j > k) --b.j;
            t.bands.push_back(b);
        }
        return t;
    }
    throw PreconditionError("NotDestabilizable",
                            "no disk carries exactly one positive band");
}

// --- ribbon of a front -----------------------------------------------------

struct RibbonCells {
    AbstractRibbon ribbon;
    int cusp_disks = 0, vertex_disks = 0, virtual_disks = 0;
};

// Fattens the front graph: cusps and front vertices become disks, the
// stretches of strand between consecutive features become bands. Jumps
// across the page boundary do not interrupt a stretch. A featureless closed
// chain gets one virtual valence-two disk so its band has somewhere to end.
inline RibbonCells ribbon_front(const GraphFront& f, const MorseDiagram& d) {
    ValidationReport rep = validate_front(f, d);
    if (!rep.ok())
        throw PreconditionError("InvalidFront", rep.issues.front().code + " at " +
                                                    rep.issues.front().where);
    RibbonCells rc;
    std::map<int, int> vertex_disk;
    for (const auto& v : f.vertices) {
        vertex_disk[v.id] = static_cast<int>(rc.ribbon.disk_slots.size());
        rc.ribbon.disk_slots.emplace_back();
    }
    rc.vertex_disks = static_cast<int>(f.vertices.size());

    auto new_disk = [&rc]() {
        rc.ribbon.disk_slots.emplace_back();
        return static_cast<int>(rc.ribbon.disk_slots.size()) - 1;
    };
    auto new_band = [&rc]() { return rc.ribbon.bands++; };
    std::map<StrandEndRef, int> germ_end; // chain-end germ -> band end id

    for (const Chain& ch : front_chains(f, d)) {
        std::vector<int> cusps; // cusp disks in traversal order
        for (const ChainStep& st : ch.steps) {
            const FrontStrand& s = f.strands[st.strand];
            std::size_t n = s.poly.size();
            if (s.closed()) {
                for (std::size_t i = 0; i + 1 < n; ++i)
                    if (s.cusp[i]) cusps.push_back(new_disk());
            } else if (st.forward) {
                for (std::size_t i = 1; i + 1 < n; ++i)
                    if (s.cusp[i]) cusps.push_back(new_disk());
            } else {
                for (std::size_t i = n - 2; i >= 1; --i)
                    if (s.cusp[i]) cusps.push_back(new_disk());
            }
        }
        rc.cusp_disks += static_cast<int>(cusps.size());

        if (!ch.cycle) {
            StrandEndRef front_ref{ch.steps.front().strand,
                                   ch.steps.front().forward ? 0 : 1};
            StrandEndRef back_ref{ch.steps.back().strand,
                                  ch.steps.back().forward ? 1 : 0};
            // features: front vertex, cusps..., back vertex
            int prev_out = -1;
            for (std::size_t t = 0; t <= cusps.size(); ++t) {
                int e = new_band();
                if (t == 0)
                    germ_end[front_ref] = 2 * e;
                else
                    rc.ribbon.disk_slots[cusps[t - 1]].push_back(2 * e);
                if (t == cusps.size())
                    germ_end[back_ref] = 2 * e + 1;
                else
                    prev_out = 2 * e + 1; // arriving end, placed below
                if (t < cusps.size())
                    rc.ribbon.disk_slots[cusps[t]].insert(
                        rc.ribbon.disk_slots[cusps[t]].begin(), prev_out);
            }
        } else if (cusps.empty()) {
            int vd = new_disk();
            rc.virtual_disks += 1;
            int e = new_band();
            rc.ribbon.disk_slots[vd] = {2 * e, 2 * e + 1};
        } else {
            std::vector<int> out_end(cusps.size());
            for (std::size_t t = 0; t < cusps.size(); ++t) {
                int e = new_band();
                rc.ribbon.disk_slots[cusps[t]].push_back(2 * e);
                out_end[t] = 2 * e + 1;
            }
            for (std::size_t t = 0; t < cusps.size(); ++t) {
                std::size_t to = (t + 1) % cusps.size();
                rc.ribbon.disk_slots[cusps[to]].insert(
                    rc.ribbon.disk_slots[cusps[to]].begin(), out_end[t]);
            }
        }
    }

    // vertex disks list their germs in the stored counterclockwise order
    for (const auto& v : f.vertices) {
        auto& slots = rc.ribbon.disk_slots[vertex_disk[v.id]];
        for (const StrandEndRef& r : v.cyc) slots.push_back(germ_end.at(r));
    }
    return rc;
}

// --- arc position to band presentation ---------------------------------------

// binding vertices become disks (binding order), wires become positive bands
// at their page angle
inline BennequinSurface ribbon_to_bennequin(const ArcDiagram& a) {
    BennequinSurface s;
    std::vector<int> order(a.vertices.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = static_cast<int>(k);
    std::sort(order.begin(), order.end(), [&](int x, int y) {
        return std::make_pair(a.vertices[x].torus, a.vertices[x].z) <
               std::make_pair(a.vertices[y].torus, a.vertices[y].z);
    });
    std::map<int, int> disk_of;
    for (std::size_t r = 0; r < order.size(); ++r) {
        const BindingVertex& v = a.vertices[order[r]];
        disk_of[v.id] = static_cast<int>(r);
        s.disks.push_back({v.torus, v.z});
    }
    std::vector<const Wire*> ws;
    for (const auto& w : a.wires) ws.push_back(&w);
    std::sort(ws.begin(), ws.end(), [](const Wire* x, const Wire* y) {
        return mod1(x->theta) < mod1(y->theta);
    });
    for (const Wire* w : ws) {
        auto fi = disk_of.find(w->v_front);
        auto bi = disk_of.find(w->v_back);
        if (fi == disk_of.end() || bi == disk_of.end())
            throw PreconditionError("IndexOutOfRange", "wire end vertex missing");
        int i = fi->second, j = bi->second;
        s.bands.push_back({mod1(w->theta), std::min(i, j), std::max(i, j), +1});
    }
    return s;
}

} // namespace openbook
