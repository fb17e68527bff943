#pragma once

#include <cstdint>
#include <vector>

namespace persim {

using SiteIndex = std::int64_t;

// Hypercubic lattice in d dimensions with periodic boundaries.
//
// Sites are flat-indexed in row-major order with the LAST axis fastest:
// index = ((c0*L + c1)*L + ... )*L + c_{d-1}.  This ordering is part of the
// on-disk bond/snapshot formats and must not change.
//
// L must be odd: the magnetization of an odd number of +-1 spins can never
// be zero, which keeps the log-return well defined.
class LatticeGeometry {
public:
    LatticeGeometry(int dimension, SiteIndex linear_size);

    int dimension() const { return d_; }
    SiteIndex linear_size() const { return length_; }
    SiteIndex num_sites() const { return num_sites_; }

    std::vector<SiteIndex> site_to_coords(SiteIndex site) const;
    SiteIndex coords_to_site(const std::vector<SiteIndex>& coords) const;

    // Neighbor displaced by direction (+1 or -1) along `axis`, with wrap.
    SiteIndex axis_neighbor(SiteIndex site, int axis, int direction) const;

    // All 2d nearest neighbors, ordered (axis 0 -, axis 0 +, axis 1 -, ...).
    std::vector<SiteIndex> neighbors(SiteIndex site) const;

    SiteIndex stride(int axis) const { return strides_[axis]; }

private:
    void check_site(SiteIndex site) const;

    int d_;
    SiteIndex length_;
    SiteIndex num_sites_;
    std::vector<SiteIndex> strides_;  // strides_[a] = L^(d-1-a)
};

}  // namespace persim
