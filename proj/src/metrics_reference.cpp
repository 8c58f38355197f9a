#include "handopt/metrics.hpp"

namespace handopt::reference {

std::vector<Point3> sample_workspace(const SerialChain& chain, const JointGrid& grid) {
    grid.check_within(chain.ranges());
    std::vector<Point3> points;
    points.reserve(grid.size());
    std::vector<double> q(grid.dof());
    for (std::size_t c = 0; c < grid.size(); ++c) {
        grid.configuration(c, q);
        points.push_back(fingertip_position(chain, q));
    }
    return points;
}

double global_manipulability(const SerialChain& chain, const JointGrid& grid) {
    grid.check_within(chain.ranges());
    CompensatedSum sum;
    std::vector<double> q(grid.dof());
    for (std::size_t c = 0; c < grid.size(); ++c) {
        grid.configuration(c, q);
        sum.add(manipulability(positional_jacobian(chain, q)));
    }
    return grid.size() == 0 ? 0.0 : sum.value() / static_cast<double>(grid.size());
}

VoxelSet workspace_voxels(const SerialChain& chain, const JointGrid& grid, double delta) {
    const auto points = reference::sample_workspace(chain, grid);
    return voxelize(points, delta);
}

}  // namespace handopt::reference
