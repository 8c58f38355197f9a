#pragma once

#include "handopt/kinematics.hpp"

#include <compare>
#include <cstdint>
#include <span>
#include <vector>

namespace handopt {

struct VoxelIndex {
    std::int32_t x = 0;
    std::int32_t y = 0;
    std::int32_t z = 0;

    friend auto operator<=>(const VoxelIndex&, const VoxelIndex&) = default;
};

/// floor(p / delta) per component; delta must be positive.
VoxelIndex voxel_of(const Point3& p, double delta);

/// Occupied cells of a lattice anchored at the palm origin with edge `delta`.
/// Indices are kept sorted and unique.
class VoxelSet {
public:
    explicit VoxelSet(double delta = 0.05);
    /// Sorts and deduplicates `cells`.
    VoxelSet(double delta, std::vector<VoxelIndex> cells);

    double delta() const { return delta_; }
    std::size_t size() const { return cells_.size(); }
    bool empty() const { return cells_.empty(); }
    const std::vector<VoxelIndex>& cells() const { return cells_; }
    bool contains(const VoxelIndex& v) const;

    /// |cells| * delta^3.
    double volume() const;

    void insert(const VoxelIndex& v);
    /// Set union; both sets must share delta.
    void merge(const VoxelSet& other);

    friend bool operator==(const VoxelSet&, const VoxelSet&) = default;

private:
    double delta_;
    std::vector<VoxelIndex> cells_;
};

/// Throws ParameterError for non-positive delta.
VoxelSet voxelize(std::span<const Point3> points, double delta);

double workspace_volume(const VoxelSet& voxels);

struct Overlap {
    VoxelSet cells;
    double volume = 0.0;
};

/// Intersection of two sets on the same lattice; ParameterError when the
/// edges differ.
Overlap overlap_volume(const VoxelSet& a, const VoxelSet& b);

/// |a n b| without materializing the intersection.
std::size_t overlap_count(const VoxelSet& a, const VoxelSet& b);

/// Dense membership table over the bounding box of one set, for counting
/// many intersections against the same set.
class VoxelMembership {
public:
    explicit VoxelMembership(const VoxelSet& set);
    bool contains(const VoxelIndex& v) const;
    /// |set n other|; ParameterError when the edges differ.
    std::size_t count_common(const VoxelSet& other) const;

private:
    double delta_;
    VoxelIndex lo_{};
    std::size_t nx_ = 0, ny_ = 0, nz_ = 0;
    std::vector<unsigned char> bits_;
};

}  // namespace handopt
