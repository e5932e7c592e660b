#include "aldag/infotheo.hpp"

#include <cmath>
#include <stdexcept>

namespace aldag {

double empirical_entropy(const CategoricalDataset& data, std::span<const int> vars) {
    if (data.n_rows() < 1) throw std::invalid_argument("entropy needs at least one row");
    const CountTable table = joint_counts(data, vars);
    const double n = static_cast<double>(data.n_rows());
    double h = 0.0;
    for (std::size_t i = 0; i < table.size(); ++i) {
        if (table[i] == 0) continue;
        const double p = static_cast<double>(table[i]) / n;
        h -= p * std::log(p);
    }
    return h;
}

CmiValue conditional_mutual_information(const CategoricalDataset& data, int a, int b,
                                        std::span<const int> c) {
    if (a == b) throw std::invalid_argument("cmi: a and b must differ");
    for (int v : c)
        if (v == a || v == b) throw std::invalid_argument("cmi: conditioning set overlaps a or b");

    // Count over (c..., a, b) so that the c-block, a-slice and b-slice
    // marginals fall out of one table.
    std::vector<int> vars(c.begin(), c.end());
    vars.push_back(a);
    vars.push_back(b);
    const CountTable table = joint_counts(data, vars);

    const std::size_t card_a = static_cast<std::size_t>(data.card(a));
    const std::size_t card_b = static_cast<std::size_t>(data.card(b));
    const std::size_t n_cells_ab = card_a * card_b;
    const std::size_t n_blocks = table.size() / n_cells_ab;

    const double n = static_cast<double>(data.n_rows());
    double cmi = 0.0;
    std::vector<std::int64_t> n_ac(card_a);
    std::vector<std::int64_t> n_bc(card_b);
    for (std::size_t blk = 0; blk < n_blocks; ++blk) {
        const std::size_t base = blk * n_cells_ab;
        std::int64_t n_c = 0;
        std::fill(n_ac.begin(), n_ac.end(), 0);
        std::fill(n_bc.begin(), n_bc.end(), 0);
        for (std::size_t xa = 0; xa < card_a; ++xa) {
            for (std::size_t xb = 0; xb < card_b; ++xb) {
                const std::int64_t cnt = table[base + xa * card_b + xb];
                n_c += cnt;
                n_ac[xa] += cnt;
                n_bc[xb] += cnt;
            }
        }
        if (n_c == 0) continue;
        for (std::size_t xa = 0; xa < card_a; ++xa) {
            for (std::size_t xb = 0; xb < card_b; ++xb) {
                const std::int64_t cnt = table[base + xa * card_b + xb];
                if (cnt == 0) continue;
                cmi += (static_cast<double>(cnt) / n) *
                       std::log(static_cast<double>(cnt) * static_cast<double>(n_c) /
                                (static_cast<double>(n_ac[xa]) * static_cast<double>(n_bc[xb])));
            }
        }
    }
    return CmiValue{cmi};
}

}  // namespace aldag
