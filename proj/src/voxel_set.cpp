#include "handopt/voxel_set.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>

namespace handopt {

namespace {

void require_delta(double delta) {
    if (!(delta > 0.0) || !std::isfinite(delta)) throw ParameterError("voxel size must be positive");
}

}  // namespace

VoxelIndex voxel_of(const Point3& p, double delta) {
    return VoxelIndex{static_cast<std::int32_t>(std::floor(p.x() / delta)),
                      static_cast<std::int32_t>(std::floor(p.y() / delta)),
                      static_cast<std::int32_t>(std::floor(p.z() / delta))};
}

VoxelSet::VoxelSet(double delta) : delta_(delta) { require_delta(delta); }

VoxelSet::VoxelSet(double delta, std::vector<VoxelIndex> cells) : delta_(delta), cells_(std::move(cells)) {
    require_delta(delta);
    std::sort(cells_.begin(), cells_.end());
    cells_.erase(std::unique(cells_.begin(), cells_.end()), cells_.end());
}

bool VoxelSet::contains(const VoxelIndex& v) const {
    return std::binary_search(cells_.begin(), cells_.end(), v);
}

double VoxelSet::volume() const {
    return static_cast<double>(cells_.size()) * (delta_ * delta_ * delta_);
}

void VoxelSet::insert(const VoxelIndex& v) {
    const auto it = std::lower_bound(cells_.begin(), cells_.end(), v);
    if (it == cells_.end() || *it != v) cells_.insert(it, v);
}

void VoxelSet::merge(const VoxelSet& other) {
    if (other.delta_ != delta_) throw ParameterError("cannot merge voxel sets with different edge lengths");
    std::vector<VoxelIndex> out;
    out.reserve(cells_.size() + other.cells_.size());
    std::set_union(cells_.begin(), cells_.end(), other.cells_.begin(), other.cells_.end(), std::back_inserter(out));
    cells_ = std::move(out);
}

VoxelSet voxelize(std::span<const Point3> points, double delta) {
    require_delta(delta);
    std::vector<VoxelIndex> cells;
    cells.reserve(points.size());
    for (const auto& p : points) cells.push_back(voxel_of(p, delta));
    return VoxelSet(delta, std::move(cells));
}

double workspace_volume(const VoxelSet& voxels) { return voxels.volume(); }

Overlap overlap_volume(const VoxelSet& a, const VoxelSet& b) {
    if (a.delta() != b.delta()) throw ParameterError("overlap requires voxel sets on the same lattice");
    std::vector<VoxelIndex> common;
    std::set_intersection(a.cells().begin(), a.cells().end(), b.cells().begin(), b.cells().end(),
                          std::back_inserter(common));
    Overlap out{VoxelSet(a.delta(), std::move(common)), 0.0};
    out.volume = out.cells.volume();
    return out;
}

std::size_t overlap_count(const VoxelSet& a, const VoxelSet& b) {
    if (a.delta() != b.delta()) throw ParameterError("overlap requires voxel sets on the same lattice");
    std::size_t n = 0;
    auto i = a.cells().begin();
    auto j = b.cells().begin();
    while (i != a.cells().end() && j != b.cells().end()) {
        if (*i < *j) {
            ++i;
        } else if (*j < *i) {
            ++j;
        } else {
            ++n;
            ++i;
            ++j;
        }
    }
    return n;
}

VoxelMembership::VoxelMembership(const VoxelSet& set) : delta_(set.delta()) {
    if (set.empty()) return;
    VoxelIndex lo = set.cells().front();
    VoxelIndex hi = lo;
    for (const auto& v : set.cells()) {
        lo = {std::min(lo.x, v.x), std::min(lo.y, v.y), std::min(lo.z, v.z)};
        hi = {std::max(hi.x, v.x), std::max(hi.y, v.y), std::max(hi.z, v.z)};
    }
    lo_ = lo;
    nx_ = static_cast<std::size_t>(hi.x - lo.x + 1);
    ny_ = static_cast<std::size_t>(hi.y - lo.y + 1);
    nz_ = static_cast<std::size_t>(hi.z - lo.z + 1);
    bits_.assign(nx_ * ny_ * nz_, 0);
    for (const auto& v : set.cells()) {
        bits_[(static_cast<std::size_t>(v.x - lo.x) * ny_ + static_cast<std::size_t>(v.y - lo.y)) * nz_ +
              static_cast<std::size_t>(v.z - lo.z)] = 1;
    }
}

bool VoxelMembership::contains(const VoxelIndex& v) const {
    if (bits_.empty() || v.x < lo_.x || v.y < lo_.y || v.z < lo_.z) return false;
    const auto x = static_cast<std::size_t>(v.x - lo_.x);
    const auto y = static_cast<std::size_t>(v.y - lo_.y);
    const auto z = static_cast<std::size_t>(v.z - lo_.z);
    if (x >= nx_ || y >= ny_ || z >= nz_) return false;
    return bits_[(x * ny_ + y) * nz_ + z] != 0;
}

std::size_t VoxelMembership::count_common(const VoxelSet& other) const {
    if (other.delta() != delta_) throw ParameterError("overlap requires voxel sets on the same lattice");
    std::size_t n = 0;
    for (const auto& v : other.cells()) n += contains(v) ? 1 : 0;
    return n;
}

}  // namespace handopt
