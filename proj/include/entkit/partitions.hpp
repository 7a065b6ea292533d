#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace entkit {

// Partition of a subset of parties {0..n-1}: atoms ascending inside each
// block, blocks ordered by least atom. Canonical form is unique per partition.
struct Partition {
    std::vector<std::vector<int>> blocks;

    static Partition of(std::vector<std::vector<int>> blocks);

    std::vector<int> atoms() const;  // sorted union over blocks
    std::size_t size() const { return blocks.size(); }

    bool operator==(const Partition& other) const { return blocks == other.blocks; }
    bool operator!=(const Partition& other) const { return !(*this == other); }
    bool operator<(const Partition& other) const { return blocks < other.blocks; }
};

// "AB|C|DE" (letters, A = party 0) or "1,2|3|4,5" (1-based indices).
// n_parties > 0 bounds the atom range; 0 skips the bound check.
Partition parse_partition(const std::string& text, int n_parties = 0);
std::string partition_to_text(const Partition& p, bool force_numeric = false);

// All partitions of {0..n-1} into exactly k blocks; count is the Stirling
// number of the second kind. Enumeration is capped at n = 12.
std::vector<Partition> enumerate_k_partitions(int n, int k);
// Partitions whose blocks all have at most max_block_size atoms.
std::vector<Partition> enumerate_fineness_partitions(int n, int max_block_size);
unsigned long long stirling_second(int n, int k);

// q is coarser than p when q can be reached from p by discarding blocks,
// merging blocks, and dropping atoms from multi-atom blocks. Equivalent test:
// q != p, atoms(q) within atoms(p), and no p-block meets two q-blocks.
bool is_coarser(const Partition& p, const Partition& q);

struct CoarseningWitness {
    std::string kind;  // "discard", "merge", "shrink", or "mixed"
    std::vector<std::string> steps;
};

struct CoarseningRelation {
    bool coarser = false;
    bool pure_discard = false;  // q keeps a subset of p's blocks unchanged
    bool pure_merge = false;    // same atoms, each q-block a union of p-blocks
    bool pure_shrink = false;   // blocks in bijection, each q-block inside its p-block
    std::vector<CoarseningWitness> witnesses;
};

CoarseningRelation coarsening_relation(const Partition& p, const Partition& q);

// Complementarity of q up to p (requires p coarser-to q). Members are the
// proper coarsenings r of p with at least two blocks such that (i) r is
// neither q, nor coarser than q, nor able to reach q by coarsening, and
// (ii) when two or more q-blocks have atoms inside r, all those atoms sit in
// a single r-block. Capped at 10 atoms in p.
std::vector<Partition> complementarity_set(const Partition& p, const Partition& q);

}  // namespace entkit
