#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "tvr/bigrat.hpp"

namespace tvr {

/// Weakly decreasing list of positive integers; empty is the partition of 0.
class Partition {
public:
    Partition() = default;
    /// Sorts the parts; throws std::invalid_argument on a nonpositive part.
    explicit Partition(std::vector<int> parts);

    const std::vector<int>& parts() const { return parts_; }
    int size() const;
    int length() const { return static_cast<int>(parts_.size()); }
    bool empty() const { return parts_.empty(); }
    /// Multiplicity of the part value j.
    int multiplicity(int j) const;
    Partition conjugate() const;

    /// "[3,1,1]"; the empty partition is "[]".
    std::string to_string() const;
    static Partition parse(const std::string& text);

    friend bool operator==(const Partition& x, const Partition& y) { return x.parts_ == y.parts_; }
    friend bool operator<(const Partition& x, const Partition& y) { return x.parts_ < y.parts_; }

private:
    std::vector<int> parts_;
};

struct PartitionStats {
    int size = 0;
    int length = 0;
    BigInt aut = 1;    // prod_j m_j!
    BigInt z = 1;      // |Aut| * prod parts
    long kappa = 0;    // sum mu_i (mu_i - 2i + 1)
};

/// Memoized statistics of a partition.
const PartitionStats& partition_stats(const Partition& mu);

/// All partitions of n, parts in reverse lexicographic order ((n) first).
std::vector<Partition> partitions_of(int n);

using PartitionTriple = std::array<Partition, 3>;

int total_size(const PartitionTriple& t);
int total_length(const PartitionTriple& t);
/// |Aut| of the triple: product over the three legs.
BigInt triple_aut(const PartitionTriple& t);

/// "[[2,1]|[]|[1]]".
std::string triple_to_string(const PartitionTriple& t);
PartitionTriple parse_triple(const std::string& text);

/// Every triple with 1 <= total size <= max_total_size, exactly once. Order:
/// by total size, then leg sizes (|mu1|,|mu2|,|mu3|) in decreasing
/// lexicographic order, then each leg's partitions in reverse lexicographic
/// order. The order is part of the output contract.
std::vector<PartitionTriple> enumerate_triples(int max_total_size);

}  // namespace tvr
