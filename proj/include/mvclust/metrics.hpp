#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace mvclust {

/// Pair-confusion counts between a reference and a predicted partition.
///   a: together in both      b: together in truth only
///   c: together in pred only d: apart in both
struct PairCounts {
    std::int64_t a = 0;
    std::int64_t b = 0;
    std::int64_t c = 0;
    std::int64_t d = 0;

    std::int64_t total() const { return a + b + c + d; }
    bool operator==(const PairCounts&) const = default;
};

/// Co-occurrence counts; rows index truth classes, columns predicted clusters.
struct ContingencyTable {
    std::vector<std::vector<std::int64_t>> counts;
    std::vector<std::int64_t> row_sums;
    std::vector<std::int64_t> col_sums;
    std::int64_t n = 0;

    /// Labels may be arbitrary integers; they are densely remapped.
    static ContingencyTable build(std::span<const int> truth, std::span<const int> pred);

    /// True when the two partitions coincide up to relabeling.
    bool identical_partitions() const;
};

PairCounts pair_counts(const ContingencyTable& table);
PairCounts pair_counts(std::span<const int> truth, std::span<const int> pred);

double rand_index(const PairCounts& pc);
/// a / (a + b + c); 1 when a + b + c = 0.
double jaccard_index(const PairCounts& pc);
/// a / sqrt((a + b)(a + c)); 1 when a + b + c = 0, otherwise 0 on a zero factor.
double fowlkes_mallows(const PairCounts& pc);

/// Hubert-Arabie adjusted Rand index. A zero denominator gives 1 for
/// identical partitions and 0 otherwise.
double adjusted_rand(const ContingencyTable& table);

/// I(T;P) / sqrt(H(T) H(P)), natural logs. 1 for identical partitions,
/// 0 when either entropy vanishes otherwise.
double nmi(const ContingencyTable& table);

struct Scores {
    double ri = 0.0;
    double ari = 0.0;
    double ji = 0.0;
    double nmi = 0.0;
    double fmi = 0.0;

    bool operator==(const Scores&) const = default;
};

Scores score_all(std::span<const int> truth, std::span<const int> pred);

} // namespace mvclust
