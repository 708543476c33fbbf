#include "adaptps/dataset.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <vector>

namespace adaptps {

void detect_grid(GridDataset& data) {
    data.is_grid = false;
    data.axes.clear();
    const Index n = data.n();
    const int K = data.n_dims();
    if (n == 0 || K == 0) return;

    std::vector<std::vector<double>> uniq(K);
    std::vector<std::map<double, Index>> pos(K);
    for (int k = 0; k < K; ++k) {
        for (Index i = 0; i < n; ++i) uniq[k].push_back(data.x(i, k));
        std::sort(uniq[k].begin(), uniq[k].end());
        uniq[k].erase(std::unique(uniq[k].begin(), uniq[k].end()), uniq[k].end());
        for (size_t j = 0; j < uniq[k].size(); ++j) pos[k][uniq[k][j]] = static_cast<Index>(j);
    }
    Index total = 1;
    for (int k = 0; k < K; ++k) total *= static_cast<Index>(uniq[k].size());
    if (total != n) return;

    // Map every row to its grid cell; each cell must be hit exactly once.
    std::vector<Index> cell_of_row(n);
    std::vector<Index> hits(n, 0);
    for (Index i = 0; i < n; ++i) {
        Index cell = 0, stride = 1;
        for (int k = 0; k < K; ++k) {
            cell += pos[k][data.x(i, k)] * stride;
            stride *= static_cast<Index>(uniq[k].size());
        }
        cell_of_row[i] = cell;
        if (++hits[cell] > 1) return;
    }

    Matrix x_sorted(n, K);
    Vector y_sorted(n);
    Vector off_sorted = data.offset.size() ? Vector(n) : Vector();
    for (Index i = 0; i < n; ++i) {
        const Index cell = cell_of_row[i];
        x_sorted.row(cell) = data.x.row(i);
        y_sorted[cell] = data.y[i];
        if (off_sorted.size()) off_sorted[cell] = data.offset[i];
    }
    data.x = std::move(x_sorted);
    data.y = std::move(y_sorted);
    data.offset = std::move(off_sorted);
    data.is_grid = true;
    for (int k = 0; k < K; ++k) {
        Vector axis(static_cast<Index>(uniq[k].size()));
        for (size_t j = 0; j < uniq[k].size(); ++j) axis[static_cast<Index>(j)] = uniq[k][j];
        data.axes.push_back(std::move(axis));
    }
}

}  // namespace adaptps
