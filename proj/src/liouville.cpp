#include "ptwa/liouville.hpp"

namespace ptwa {

void LiouvillePathway::validate() const {
    if (pairs.empty()) throw ValidationError("pathway needs at least the initial pair");
    if (signs.size() + 1 != pairs.size()) throw ValidationError("pathway sign count must equal the order");
    for (std::size_t j = 1; j < pairs.size(); ++j) {
        const bool left = pairs[j].first != pairs[j - 1].first;
        const bool right = pairs[j].second != pairs[j - 1].second;
        if (left == right) throw ValidationError("each pathway step must change exactly one side");
        if (signs[j - 1] != (left ? +1 : -1)) throw ValidationError("pathway sign inconsistent with step side");
    }
}

std::vector<LiouvillePathway> enumerate_pathways(int M, int N, std::pair<int, int> final,
                                                 const PathwayFilter& initial_filter) {
    if (M < 1) throw ValidationError("enumerate_pathways: M must be positive");
    if (N < 0) throw ValidationError("enumerate_pathways: order must be non-negative");
    if (final.first < 0 || final.first >= M || final.second < 0 || final.second >= M)
        throw ValidationError("enumerate_pathways: final pair out of range");

    std::vector<LiouvillePathway> out;
    // Walk backwards from the final pair: at step j either the left or the
    // right index differed at j-1.
    std::vector<std::pair<int, int>> stack{final};
    std::vector<int> signs;
    auto recurse = [&](auto&& self, int remaining) -> void {
        if (remaining == 0) {
            const auto& init = stack.back();
            if (initial_filter && !initial_filter(init.first, init.second)) return;
            LiouvillePathway p;
            p.pairs.assign(stack.rbegin(), stack.rend());
            p.signs.assign(signs.rbegin(), signs.rend());
            out.push_back(std::move(p));
            return;
        }
        const auto [n, np] = stack.back();
        for (int m = 0; m < M; ++m) {
            if (m != n) {  // left index changed at this step
                stack.emplace_back(m, np);
                signs.push_back(+1);
                self(self, remaining - 1);
                stack.pop_back();
                signs.pop_back();
            }
        }
        for (int m = 0; m < M; ++m) {
            if (m != np) {  // right index changed
                stack.emplace_back(n, m);
                signs.push_back(-1);
                self(self, remaining - 1);
                stack.pop_back();
                signs.pop_back();
            }
        }
    };
    recurse(recurse, N);
    return out;
}

cplx theta_envfree(const LiouvillePathway& p, const Eigen::MatrixXcd& coupling) {
    cplx w = 1.0;
    for (std::size_t j = 1; j < p.pairs.size(); ++j) {
        const auto [n, np] = p.pairs[j];
        const auto [m, mp] = p.pairs[j - 1];
        if (n != m)
            w *= coupling(n, m);
        else
            w *= -coupling(mp, np);
    }
    return w;
}

}  // namespace ptwa
