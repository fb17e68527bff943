#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "persim/lattice.hpp"

namespace persim {

// Quenched +-1 couplings.  One forward bond per (site, axis), stored toward
// the +1 neighbor; the bond on a pair is read identically from either
// endpoint because it is stored exactly once.
//
// Generation order is site-major, axis-minor: bond (site, axis) is drawn at
// stream position site*d + axis of the disorder stream, so (geometry, p,
// seed) fully determines the table.
class BondTable {
public:
    static BondTable generate(const LatticeGeometry& geom, double p,
                              std::uint64_t seed);

    const LatticeGeometry& geometry() const { return geom_; }
    double ferro_concentration() const { return p_; }
    std::uint64_t seed() const { return seed_; }

    std::int8_t forward_coupling(SiteIndex site, int axis) const {
        return couplings_[site * geom_.dimension() + axis];
    }

    // Coupling on the nearest-neighbor pair (i, j); rejects non-neighbors.
    int coupling(SiteIndex i, SiteIndex j) const;

    // Fraction of +1 bonds, for distribution checks.
    double plus_fraction() const;

    const std::vector<std::int8_t>& raw() const { return couplings_; }

    // Text dump/load for exact-reproduction debugging.  Layout: one header
    // line "persim-bonds <d> <L> <p> <seed>", then one +-1 per line in
    // site-major, axis-minor order.
    void dump(std::ostream& out) const;
    static BondTable load(std::istream& in);

private:
    BondTable(const LatticeGeometry& geom, double p, std::uint64_t seed)
        : geom_(geom), p_(p), seed_(seed) {}

    LatticeGeometry geom_;
    double p_;
    std::uint64_t seed_;
    std::vector<std::int8_t> couplings_;  // d per site
};

}  // namespace persim
