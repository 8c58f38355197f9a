#include "handopt/metrics.hpp"

#include "chain_walker.hpp"

#include <cmath>
#include <cstdint>

#ifdef HANDOPT_HAVE_OPENMP
#include <omp.h>
#endif

namespace handopt {

namespace {

int resolve_jobs(int jobs) {
#ifdef HANDOPT_HAVE_OPENMP
    return jobs > 0 ? jobs : omp_get_max_threads();
#else
    (void)jobs;
    return 1;
#endif
}

// Dense occupancy bits over a box known to contain every reachable voxel.
class VoxelBitmap {
public:
    VoxelBitmap() = default;
    VoxelBitmap(VoxelIndex lo, VoxelIndex hi) : lo_(lo) {
        nx_ = static_cast<std::size_t>(hi.x - lo.x + 1);
        ny_ = static_cast<std::size_t>(hi.y - lo.y + 1);
        nz_ = static_cast<std::size_t>(hi.z - lo.z + 1);
        words_.assign((nx_ * ny_ * nz_ + 63) / 64, 0);
    }

    bool accepts(const VoxelIndex& v) const {
        return v.x >= lo_.x && v.y >= lo_.y && v.z >= lo_.z && static_cast<std::size_t>(v.x - lo_.x) < nx_ &&
               static_cast<std::size_t>(v.y - lo_.y) < ny_ && static_cast<std::size_t>(v.z - lo_.z) < nz_;
    }

    void set(const VoxelIndex& v) {
        const std::size_t bit = (static_cast<std::size_t>(v.x - lo_.x) * ny_ + static_cast<std::size_t>(v.y - lo_.y)) * nz_ +
                                static_cast<std::size_t>(v.z - lo_.z);
        words_[bit >> 6] |= std::uint64_t{1} << (bit & 63);
    }

    void merge(const VoxelBitmap& other) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
    }

    // Emits cells in (x, y, z) lexicographic order, i.e. already sorted.
    std::vector<VoxelIndex> cells() const {
        std::vector<VoxelIndex> out;
        for (std::size_t w = 0; w < words_.size(); ++w) {
            std::uint64_t word = words_[w];
            while (word != 0) {
                const int b = __builtin_ctzll(word);
                word &= word - 1;
                std::size_t bit = w * 64 + static_cast<std::size_t>(b);
                const auto z = static_cast<std::int32_t>(bit % nz_);
                bit /= nz_;
                const auto y = static_cast<std::int32_t>(bit % ny_);
                const auto x = static_cast<std::int32_t>(bit / ny_);
                out.push_back({lo_.x + x, lo_.y + y, lo_.z + z});
            }
        }
        return out;
    }

private:
    VoxelIndex lo_{};
    std::size_t nx_ = 0, ny_ = 0, nz_ = 0;
    std::vector<std::uint64_t> words_;
};

constexpr double kMaxBitmapCells = 1u << 30;

}  // namespace

SweepResult sweep_chain(const SerialChain& chain, const JointGrid& grid, const SweepOptions& options) {
    const detail::ChainWalker walker(chain, grid);
    const std::size_t chunks = walker.chunk_count();
    const int n = chain.dof();
    const std::vector<double>& deltas = options.voxel_deltas;
    const std::size_t n_sets = deltas.size();
    for (double d : deltas) {
        if (!(d > 0.0) || !std::isfinite(d)) throw ParameterError("voxel size must be positive");
    }

    SweepResult result;
    result.configurations = grid.size();

    // Bounding boxes from the reach bound, padded by one cell for floor ties.
    // Boxes too large for a bitmap fall back to a sparse list.
    std::vector<VoxelBitmap> templates(n_sets);
    std::vector<bool> dense(n_sets, false);
    for (std::size_t i = 0; i < n_sets; ++i) {
        const double reach = chain.reach_bound();
        const Vec3& c = chain.base().translation;
        VoxelIndex lo = voxel_of(c - Vec3::Constant(reach), deltas[i]);
        VoxelIndex hi = voxel_of(c + Vec3::Constant(reach), deltas[i]);
        lo = {lo.x - 1, lo.y - 1, lo.z - 1};
        hi = {hi.x + 1, hi.y + 1, hi.z + 1};
        const double cells = double(hi.x - lo.x + 1) * double(hi.y - lo.y + 1) * double(hi.z - lo.z + 1);
        dense[i] = cells <= kMaxBitmapCells;
        if (dense[i]) templates[i] = VoxelBitmap(lo, hi);
    }

    std::vector<CompensatedSum> partial(options.manipulability ? chunks : 0);
    std::vector<VoxelBitmap> occupied = templates;
    std::vector<std::vector<VoxelIndex>> sparse(n_sets);

    const int jobs = resolve_jobs(options.jobs);
#ifdef HANDOPT_HAVE_OPENMP
#pragma omp parallel num_threads(jobs)
#endif
    {
        std::vector<VoxelBitmap> local = templates;
        std::vector<std::vector<VoxelIndex>> local_sparse(n_sets);
#ifdef HANDOPT_HAVE_OPENMP
#pragma omp for schedule(dynamic, 1)
#endif
        for (std::size_t c = 0; c < chunks; ++c) {
            CompensatedSum sum;
            walker.walk(c, [&](const detail::ChainWalker::State& s) {
                const Vec3& tip = s.tip();
                if (options.manipulability) {
                    Jacobian jac(3, n);
                    for (int i = 0; i < n; ++i) {
                        const Vec3 axis = s.axis(i);
                        jac.col(i) = axis.cross(tip - s.origin(i));
                    }
                    sum.add(manipulability(jac));
                }
                for (std::size_t i = 0; i < n_sets; ++i) {
                    const VoxelIndex v = voxel_of(tip, deltas[i]);
                    if (dense[i] && local[i].accepts(v)) {
                        local[i].set(v);
                    } else if (local_sparse[i].empty() || local_sparse[i].back() != v) {
                        local_sparse[i].push_back(v);
                    }
                }
            });
            if (options.manipulability) partial[c] = sum;
        }
#ifdef HANDOPT_HAVE_OPENMP
#pragma omp critical
#endif
        {
            for (std::size_t i = 0; i < n_sets; ++i) {
                if (dense[i]) occupied[i].merge(local[i]);
                sparse[i].insert(sparse[i].end(), local_sparse[i].begin(), local_sparse[i].end());
            }
        }
    }
    (void)jobs;

    if (options.manipulability) {
        CompensatedSum total;
        for (const auto& p : partial) total.add(p);
        result.global_manipulability = grid.size() == 0 ? 0.0 : total.value() / static_cast<double>(grid.size());
    }
    for (std::size_t i = 0; i < n_sets; ++i) {
        std::vector<VoxelIndex> cells = dense[i] ? occupied[i].cells() : std::vector<VoxelIndex>{};
        cells.insert(cells.end(), sparse[i].begin(), sparse[i].end());
        result.voxels.emplace_back(deltas[i], std::move(cells));
    }
    return result;
}

std::vector<Point3> sample_workspace(const SerialChain& chain, const JointGrid& grid, int jobs) {
    const detail::ChainWalker walker(chain, grid);
    const std::size_t chunks = walker.chunk_count();
    const std::size_t per = walker.configurations_per_chunk();
    std::vector<Point3> points(grid.size());
    const int threads = resolve_jobs(jobs);
#ifdef HANDOPT_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
#endif
    for (std::size_t c = 0; c < chunks; ++c) {
        std::size_t i = c * per;
        walker.walk(c, [&](const detail::ChainWalker::State& s) { points[i++] = s.tip(); });
    }
    (void)threads;
    return points;
}

double global_manipulability(const SerialChain& chain, const JointGrid& grid, int jobs) {
    SweepOptions opt;
    opt.manipulability = true;
    opt.jobs = jobs;
    return sweep_chain(chain, grid, opt).global_manipulability;
}

}  // namespace handopt
