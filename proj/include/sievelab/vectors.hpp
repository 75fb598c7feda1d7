#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sievelab/rng.hpp"

namespace sievelab {

[[nodiscard]] double dot(std::span<const double> a, std::span<const double> b) noexcept;
[[nodiscard]] double norm(std::span<const double> a) noexcept;
[[nodiscard]] double distance(std::span<const double> a, std::span<const double> b) noexcept;

/// A point of the unit sphere S^{d-1}. Construction normalizes and rejects the zero vector.
class UnitVector {
public:
    explicit UnitVector(std::vector<double> coords);

    [[nodiscard]] std::size_t dim() const noexcept { return coords_.size(); }
    [[nodiscard]] std::span<const double> coords() const noexcept { return coords_; }
    [[nodiscard]] double operator[](std::size_t i) const noexcept { return coords_[i]; }

private:
    std::vector<double> coords_;
};

/// Uniform point of S^{d-1}: a normalized vector of independent standard Gaussians.
[[nodiscard]] UnitVector sample_sphere(std::size_t d, Rng& rng);

/// Dense row-major list of n vectors in R^d.
class VectorList {
public:
    VectorList() = default;
    explicit VectorList(std::size_t dim) : dim_(dim) {}
    VectorList(std::size_t dim, std::vector<double> data);

    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
    [[nodiscard]] std::size_t size() const noexcept { return dim_ == 0 ? 0 : data_.size() / dim_; }
    [[nodiscard]] bool empty() const noexcept { return data_.empty(); }

    [[nodiscard]] std::span<const double> operator[](std::size_t i) const noexcept {
        return {data_.data() + i * dim_, dim_};
    }
    [[nodiscard]] std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * dim_, dim_}; }

    void push_back(std::span<const double> v);
    [[nodiscard]] const std::vector<double>& data() const noexcept { return data_; }

    friend bool operator==(const VectorList&, const VectorList&) = default;

private:
    std::size_t dim_ = 0;
    std::vector<double> data_;
};

/// n uniform unit vectors.
[[nodiscard]] VectorList random_unit_list(std::size_t n, std::size_t d, Rng& rng);

}  // namespace sievelab
