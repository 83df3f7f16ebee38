#include "mvclust/metrics.hpp"
#include "mvclust/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace mvclust {

namespace {

std::int64_t choose2(std::int64_t m) { return m * (m - 1) / 2; }

std::vector<std::size_t> dense_ids(std::span<const int> labels, std::size_t& distinct) {
    std::map<int, std::size_t> ids;
    for (int y : labels) ids.emplace(y, 0);
    std::size_t next = 0;
    for (auto& [label, id] : ids) id = next++;
    distinct = next;
    std::vector<std::size_t> out;
    out.reserve(labels.size());
    for (int y : labels) out.push_back(ids[y]);
    return out;
}

} // namespace

ContingencyTable ContingencyTable::build(std::span<const int> truth, std::span<const int> pred) {
    if (truth.size() != pred.size())
        throw ConfigError("label length mismatch: " + std::to_string(truth.size()) + " vs " +
                          std::to_string(pred.size()));
    std::size_t r = 0, s = 0;
    const auto t = dense_ids(truth, r);
    const auto p = dense_ids(pred, s);
    ContingencyTable table;
    table.counts.assign(r, std::vector<std::int64_t>(s, 0));
    table.row_sums.assign(r, 0);
    table.col_sums.assign(s, 0);
    for (std::size_t i = 0; i < t.size(); ++i) {
        ++table.counts[t[i]][p[i]];
        ++table.row_sums[t[i]];
        ++table.col_sums[p[i]];
    }
    table.n = static_cast<std::int64_t>(truth.size());
    return table;
}

bool ContingencyTable::identical_partitions() const {
    if (row_sums.size() != col_sums.size()) return false;
    for (std::size_t i = 0; i < counts.size(); ++i)
        for (std::size_t j = 0; j < counts[i].size(); ++j)
            if (counts[i][j] != 0 && (counts[i][j] != row_sums[i] || counts[i][j] != col_sums[j])) return false;
    return true;
}

PairCounts pair_counts(const ContingencyTable& table) {
    if (table.n < 2) throw ConfigError("pair counts need at least two samples");
    std::int64_t both = 0, rows = 0, cols = 0;
    for (const auto& row : table.counts)
        for (auto m : row) both += choose2(m);
    for (auto m : table.row_sums) rows += choose2(m);
    for (auto m : table.col_sums) cols += choose2(m);
    PairCounts pc;
    pc.a = both;
    pc.b = rows - both;
    pc.c = cols - both;
    pc.d = choose2(table.n) - rows - cols + both;
    return pc;
}

PairCounts pair_counts(std::span<const int> truth, std::span<const int> pred) {
    return pair_counts(ContingencyTable::build(truth, pred));
}

double rand_index(const PairCounts& pc) {
    return static_cast<double>(pc.a + pc.d) / static_cast<double>(pc.total());
}

double jaccard_index(const PairCounts& pc) {
    const auto denom = pc.a + pc.b + pc.c;
    return denom == 0 ? 1.0 : static_cast<double>(pc.a) / static_cast<double>(denom);
}

double fowlkes_mallows(const PairCounts& pc) {
    if (pc.a + pc.b + pc.c == 0) return 1.0;
    const auto f1 = pc.a + pc.b;
    const auto f2 = pc.a + pc.c;
    if (f1 == 0 || f2 == 0) return 0.0;
    return static_cast<double>(pc.a) / std::sqrt(static_cast<double>(f1) * static_cast<double>(f2));
}

double adjusted_rand(const ContingencyTable& table) {
    if (table.n < 2) throw ConfigError("adjusted Rand needs at least two samples");
    double index = 0.0, rows = 0.0, cols = 0.0;
    for (const auto& row : table.counts)
        for (auto m : row) index += static_cast<double>(choose2(m));
    for (auto m : table.row_sums) rows += static_cast<double>(choose2(m));
    for (auto m : table.col_sums) cols += static_cast<double>(choose2(m));
    const double expected = rows * cols / static_cast<double>(choose2(table.n));
    const double maximum = 0.5 * (rows + cols);
    const double denom = maximum - expected;
    if (denom == 0.0) return table.identical_partitions() ? 1.0 : 0.0;
    return (index - expected) / denom;
}

double nmi(const ContingencyTable& table) {
    if (table.identical_partitions()) return 1.0;
    const double n = static_cast<double>(table.n);
    auto entropy = [n](const std::vector<std::int64_t>& sums) {
        double h = 0.0;
        for (auto m : sums)
            if (m > 0) {
                const double p = static_cast<double>(m) / n;
                h -= p * std::log(p);
            }
        return h;
    };
    const double ht = entropy(table.row_sums);
    const double hp = entropy(table.col_sums);
    if (ht <= 0.0 || hp <= 0.0) return 0.0;
    double mi = 0.0;
    for (std::size_t i = 0; i < table.counts.size(); ++i)
        for (std::size_t j = 0; j < table.counts[i].size(); ++j) {
            const auto m = table.counts[i][j];
            if (m == 0) continue;
            const double nij = static_cast<double>(m);
            mi += nij / n *
                  std::log(n * nij / (static_cast<double>(table.row_sums[i]) * static_cast<double>(table.col_sums[j])));
        }
    return std::clamp(mi / std::sqrt(ht * hp), 0.0, 1.0);
}

Scores score_all(std::span<const int> truth, std::span<const int> pred) {
    const auto table = ContingencyTable::build(truth, pred);
    const auto pc = pair_counts(table);
    return {rand_index(pc), adjusted_rand(table), jaccard_index(pc), nmi(table), fowlkes_mallows(pc)};
}

} // namespace mvclust
