#include "persim/lattice.hpp"

#include <limits>
#include <stdexcept>
#include <string>

namespace persim {

LatticeGeometry::LatticeGeometry(int dimension, SiteIndex linear_size)
    : d_(dimension), length_(linear_size) {
    if (d_ < 1)
        throw std::invalid_argument("lattice dimension must be >= 1, got " +
                                    std::to_string(d_));
    if (length_ < 3)
        throw std::invalid_argument("linear size must be >= 3, got " +
                                    std::to_string(length_));
    if (length_ % 2 == 0)
        throw std::invalid_argument(
            "linear size must be odd (odd N keeps the magnetization nonzero), "
            "got " + std::to_string(length_));

    num_sites_ = 1;
    for (int a = 0; a < d_; ++a) {
        if (num_sites_ > std::numeric_limits<SiteIndex>::max() / length_)
            throw std::invalid_argument("L^d overflows the site index range");
        num_sites_ *= length_;
    }

    strides_.resize(d_);
    SiteIndex s = 1;
    for (int a = d_ - 1; a >= 0; --a) {
        strides_[a] = s;
        s *= length_;
    }
}

void LatticeGeometry::check_site(SiteIndex site) const {
    if (site < 0 || site >= num_sites_)
        throw std::out_of_range("site index " + std::to_string(site) +
                                " outside [0, " + std::to_string(num_sites_) +
                                ")");
}

std::vector<SiteIndex> LatticeGeometry::site_to_coords(SiteIndex site) const {
    check_site(site);
    std::vector<SiteIndex> coords(d_);
    for (int a = 0; a < d_; ++a) {
        coords[a] = (site / strides_[a]) % length_;
    }
    return coords;
}

SiteIndex LatticeGeometry::coords_to_site(
    const std::vector<SiteIndex>& coords) const {
    if (static_cast<int>(coords.size()) != d_)
        throw std::invalid_argument("coordinate count does not match dimension");
    SiteIndex site = 0;
    for (int a = 0; a < d_; ++a) {
        if (coords[a] < 0 || coords[a] >= length_)
            throw std::out_of_range("coordinate out of range");
        site += coords[a] * strides_[a];
    }
    return site;
}

SiteIndex LatticeGeometry::axis_neighbor(SiteIndex site, int axis,
                                         int direction) const {
    check_site(site);
    if (axis < 0 || axis >= d_)
        throw std::invalid_argument("axis " + std::to_string(axis) +
                                    " outside [0, " + std::to_string(d_) + ")");
    if (direction != 1 && direction != -1)
        throw std::invalid_argument("direction must be +1 or -1");

    const SiteIndex stride = strides_[axis];
    const SiteIndex c = (site / stride) % length_;
    SiteIndex cn = c + direction;
    if (cn == length_) cn = 0;
    if (cn < 0) cn = length_ - 1;
    return site + (cn - c) * stride;
}

std::vector<SiteIndex> LatticeGeometry::neighbors(SiteIndex site) const {
    check_site(site);
    std::vector<SiteIndex> out;
    out.reserve(2 * d_);
    for (int a = 0; a < d_; ++a) {
        out.push_back(axis_neighbor(site, a, -1));
        out.push_back(axis_neighbor(site, a, +1));
    }
    return out;
}

}  // namespace persim
