#include "sievelab/vectors.hpp"

#include <cmath>
#include <stdexcept>

#include "sievelab/errors.hpp"

namespace sievelab {

double dot(std::span<const double> a, std::span<const double> b) noexcept {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm(std::span<const double> a) noexcept { return std::sqrt(dot(a, a)); }

double distance(std::span<const double> a, std::span<const double> b) noexcept {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double diff = a[i] - b[i];
        s += diff * diff;
    }
    return std::sqrt(s);
}

UnitVector::UnitVector(std::vector<double> coords) : coords_(std::move(coords)) {
    const double len = norm(coords_);
    if (!(len > 0.0) || !std::isfinite(len)) throw DomainError("UnitVector: cannot normalize a zero or non-finite vector");
    for (double& x : coords_) x /= len;
}

UnitVector sample_sphere(std::size_t d, Rng& rng) {
    if (d == 0) throw DomainError("sample_sphere: dimension must be positive");
    std::vector<double> g(d);
    double len2 = 0.0;
    do {
        len2 = 0.0;
        for (double& x : g) {
            x = rng.gaussian();
            len2 += x * x;
        }
    } while (len2 == 0.0);
    return UnitVector(std::move(g));
}

VectorList::VectorList(std::size_t dim, std::vector<double> data) : dim_(dim), data_(std::move(data)) {
    if (dim_ == 0 ? !data_.empty() : data_.size() % dim_ != 0)
        throw ConfigError("VectorList: payload length is not a multiple of the dimension");
}

void VectorList::push_back(std::span<const double> v) {
    if (v.size() != dim_) throw ConfigError("VectorList: dimension mismatch on push_back");
    data_.insert(data_.end(), v.begin(), v.end());
}

VectorList random_unit_list(std::size_t n, std::size_t d, Rng& rng) {
    VectorList list(d);
    for (std::size_t i = 0; i < n; ++i) list.push_back(sample_sphere(d, rng).coords());
    return list;
}

}  // namespace sievelab
