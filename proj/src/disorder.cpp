#include "persim/disorder.hpp"

#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "persim/rng.hpp"

namespace persim {

BondTable BondTable::generate(const LatticeGeometry& geom, double p,
                              std::uint64_t seed) {
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("bond concentration p must be in [0, 1], got " +
                                    std::to_string(p));
    BondTable table(geom, p, seed);
    const int d = geom.dimension();
    const SiteIndex n = geom.num_sites();
    table.couplings_.resize(static_cast<std::size_t>(n) * d);

    for (SiteIndex site = 0; site < n; ++site) {
        for (int axis = 0; axis < d; ++axis) {
            const std::uint64_t counter =
                static_cast<std::uint64_t>(site) * d + axis;
            const double u = rng::uniform(seed, counter);
            table.couplings_[counter] = (u < p) ? +1 : -1;
        }
    }
    return table;
}

int BondTable::coupling(SiteIndex i, SiteIndex j) const {
    const int d = geom_.dimension();
    for (int axis = 0; axis < d; ++axis) {
        if (geom_.axis_neighbor(i, axis, +1) == j)
            return forward_coupling(i, axis);
        if (geom_.axis_neighbor(i, axis, -1) == j)
            return forward_coupling(j, axis);
    }
    throw std::invalid_argument("sites " + std::to_string(i) + " and " +
                                std::to_string(j) + " are not nearest neighbors");
}

double BondTable::plus_fraction() const {
    std::int64_t plus = 0;
    for (std::int8_t c : couplings_)
        if (c > 0) ++plus;
    return static_cast<double>(plus) / static_cast<double>(couplings_.size());
}

void BondTable::dump(std::ostream& out) const {
    out << "persim-bonds " << geom_.dimension() << ' ' << geom_.linear_size()
        << ' ' << p_ << ' ' << seed_ << '\n';
    for (std::int8_t c : couplings_)
        out << static_cast<int>(c) << '\n';
}

BondTable BondTable::load(std::istream& in) {
    std::string magic;
    int d = 0;
    SiteIndex length = 0;
    double p = 0.0;
    std::uint64_t seed = 0;
    in >> magic >> d >> length >> p >> seed;
    if (!in || magic != "persim-bonds")
        throw std::runtime_error("bad bond table header");

    LatticeGeometry geom(d, length);
    BondTable table(geom, p, seed);
    const std::size_t expected =
        static_cast<std::size_t>(geom.num_sites()) * d;
    table.couplings_.reserve(expected);
    int value = 0;
    while (table.couplings_.size() < expected && (in >> value)) {
        if (value != 1 && value != -1)
            throw std::runtime_error("bond value must be +1 or -1, got " +
                                     std::to_string(value));
        table.couplings_.push_back(static_cast<std::int8_t>(value));
    }
    if (table.couplings_.size() != expected)
        throw std::runtime_error("truncated bond table");
    return table;
}

}  // namespace persim
