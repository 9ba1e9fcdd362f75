#pragma once

#include <Eigen/Dense>
#include <functional>
#include <utility>
#include <vector>

#include "ptwa/common.hpp"

namespace ptwa {

/// One Liouville-space pathway: forward/backward state pairs (n_j, n'_j) for
/// j = 0..N plus the per-interaction side signs S_j (+1 when the j-th
/// perturbation acted on the ket, -1 on the bra). Each step changes exactly
/// one side of the pair.
struct LiouvillePathway {
    std::vector<std::pair<int, int>> pairs;  // size N+1
    std::vector<int> signs;                  // size N, signs[j-1] = S_j

    int order() const { return static_cast<int>(pairs.size()) - 1; }
    std::pair<int, int> initial() const { return pairs.front(); }
    std::pair<int, int> final() const { return pairs.back(); }

    void validate() const;
};

using PathwayFilter = std::function<bool(int n0, int n0p)>;

/// All order-N pathways of an M-state system terminating at `final`.
/// Steps are purely off-diagonal and act on one side at a time, so the count
/// is (2(M-1))^N before filtering; `initial_filter`, when given, keeps only
/// pathways whose initial pair it accepts.
std::vector<LiouvillePathway> enumerate_pathways(int M, int N, std::pair<int, int> final,
                                                 const PathwayFilter& initial_filter = nullptr);

/// Environment-free pathway weight, the product over steps of
///   Delta_{n_j n_{j-1}} delta_{n'_{j-1} n'_j} - delta_{n_j n_{j-1}} Delta_{n'_{j-1} n'_j}.
cplx theta_envfree(const LiouvillePathway& p, const Eigen::MatrixXcd& coupling);

}  // namespace ptwa
