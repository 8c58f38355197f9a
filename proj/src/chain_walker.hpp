#pragma once

// Incremental forward kinematics over a joint grid. Prefix products are
// cached per row and only the rows at or after the changed joint are
// recomputed, using the same link_transform/compose calls (in the same order)
// as chain_transform, so every tip and joint frame is bit-identical to the
// from-scratch product.

#include "handopt/joint_grid.hpp"
#include "handopt/kinematics.hpp"

#include <cstddef>
#include <vector>

namespace handopt::detail {

class ChainWalker {
public:
    ChainWalker(const SerialChain& chain, const JointGrid& grid, std::size_t min_chunks = 256)
        : chain_(chain) {
        if (grid.dof() != chain.dof()) throw ContractError("grid dimension differs from chain joints");
        grid.check_within(chain.ranges());

        const auto& rows = chain.rows();
        fixed_.resize(rows.size());
        row_of_joint_.reserve(chain.dof());
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (rows[r].actuated) {
                const int j = static_cast<int>(row_of_joint_.size());
                row_of_joint_.push_back(r);
                std::vector<Transform> table;
                table.reserve(grid.samples_per_joint(j));
                for (double q : grid.samples_rad(j)) table.push_back(link_transform(rows[r], q));
                tables_.push_back(std::move(table));
            } else {
                fixed_[r] = link_transform(rows[r], 0.0);
            }
        }
        for (int j = 0; j < chain.dof(); ++j) counts_.push_back(grid.samples_per_joint(j));

        split_ = 0;
        chunks_ = 1;
        while (split_ < chain.dof() && chunks_ < min_chunks) chunks_ *= counts_[split_++];
        per_chunk_ = 1;
        for (int j = split_; j < chain.dof(); ++j) per_chunk_ *= counts_[j];
    }

    std::size_t chunk_count() const { return chunks_; }
    std::size_t configurations_per_chunk() const { return per_chunk_; }
    int dof() const { return static_cast<int>(counts_.size()); }

    struct State {
        const std::vector<Transform>* prefix;
        const std::vector<std::size_t>* row_of_joint;

        const Vec3& tip() const { return prefix->back().translation; }
        Vec3 axis(int j) const { return (*prefix)[(*row_of_joint)[j] + 1].rotation.col(2); }
        const Vec3& origin(int j) const { return (*prefix)[(*row_of_joint)[j] + 1].translation; }
    };

    /// Calls visit(state) for every configuration of `chunk`, in grid order.
    template <class Visit>
    void walk(std::size_t chunk, Visit&& visit) const {
        const int n = dof();
        const std::size_t nrows = chain_.rows().size();
        std::vector<std::size_t> k(n, 0);
        for (int j = split_ - 1; j >= 0; --j) {
            k[j] = chunk % counts_[j];
            chunk /= counts_[j];
        }
        std::vector<Transform> prefix(nrows + 1);
        prefix[0] = chain_.base().transform();
        const State state{&prefix, &row_of_joint_};

        auto rebuild_from = [&](std::size_t first_row) {
            int j = 0;
            while (j < n && row_of_joint_[j] < first_row) ++j;
            for (std::size_t r = first_row; r < nrows; ++r) {
                const Transform& link = chain_.rows()[r].actuated ? tables_[j][k[j]] : fixed_[r];
                if (chain_.rows()[r].actuated) ++j;
                prefix[r + 1] = prefix[r] * link;
            }
        };
        rebuild_from(0);

        if (split_ == n) {
            visit(state);
            return;
        }
        for (;;) {
            visit(state);
            int j = n - 1;
            while (j >= split_ && ++k[j] == counts_[j]) {
                k[j] = 0;
                --j;
            }
            if (j < split_) return;
            rebuild_from(row_of_joint_[j]);
        }
    }

private:
    const SerialChain& chain_;
    std::vector<std::size_t> row_of_joint_;
    std::vector<std::vector<Transform>> tables_;
    std::vector<Transform> fixed_;
    std::vector<std::size_t> counts_;
    int split_ = 0;
    std::size_t chunks_ = 1;
    std::size_t per_chunk_ = 1;
};

}  // namespace handopt::detail
