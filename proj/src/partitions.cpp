#include "entkit/partitions.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>
#include <stdexcept>

#include "entkit/common.hpp"

namespace entkit {
namespace {

constexpr int kEnumerationCap = 12;
constexpr std::size_t kComplementarityCap = 10;

std::string block_text(const std::vector<int>& block, bool force_numeric) {
    bool letters = !force_numeric;
    for (int a : block) {
        if (a > 25) letters = false;
    }
    std::string out;
    for (std::size_t i = 0; i < block.size(); ++i) {
        if (letters) {
            out += static_cast<char>('A' + block[i]);
        } else {
            if (i > 0) out += ',';
            out += std::to_string(block[i] + 1);
        }
    }
    return out;
}

// Partitions of the atom list via restricted growth strings.
void enumerate_set_partitions(const std::vector<int>& atoms,
                              const std::function<void(const Partition&)>& visit) {
    const std::size_t m = atoms.size();
    std::vector<int> rgs(m, 0);
    std::function<void(std::size_t, int)> rec = [&](std::size_t pos, int max_used) {
        if (pos == m) {
            std::vector<std::vector<int>> blocks(static_cast<std::size_t>(max_used) + 1);
            for (std::size_t i = 0; i < m; ++i) blocks[rgs[i]].push_back(atoms[i]);
            visit(Partition::of(std::move(blocks)));
            return;
        }
        for (int b = 0; b <= max_used + 1; ++b) {
            rgs[pos] = b;
            rec(pos + 1, std::max(max_used, b));
        }
    };
    if (m == 0) return;
    rgs[0] = 0;
    rec(1, 0);
}

// Index of the unique r-block a p-block's atoms land in; -1 when none,
// -2 when the atoms split across two r-blocks (then q is not coarser).
int target_block(const std::vector<int>& p_block, const Partition& r) {
    int target = -1;
    for (int a : p_block) {
        for (std::size_t j = 0; j < r.blocks.size(); ++j) {
            if (std::binary_search(r.blocks[j].begin(), r.blocks[j].end(), a)) {
                if (target == -1) {
                    target = static_cast<int>(j);
                } else if (target != static_cast<int>(j)) {
                    return -2;
                }
            }
        }
    }
    return target;
}

bool subset_of(const std::vector<int>& small, const std::vector<int>& big) {
    return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

}  // namespace

Partition Partition::of(std::vector<std::vector<int>> blocks) {
    Partition p;
    std::set<int> seen;
    for (auto& block : blocks) {
        if (block.empty()) throw validation_error("partition block is empty");
        std::sort(block.begin(), block.end());
        for (int a : block) {
            if (a < 0) throw validation_error("partition atom index is negative");
            if (!seen.insert(a).second) {
                throw validation_error("atom " + std::to_string(a + 1) + " appears twice");
            }
        }
    }
    std::sort(blocks.begin(), blocks.end(),
              [](const std::vector<int>& a, const std::vector<int>& b) { return a[0] < b[0]; });
    p.blocks = std::move(blocks);
    if (p.blocks.empty()) throw validation_error("partition has no blocks");
    return p;
}

std::vector<int> Partition::atoms() const {
    std::vector<int> all;
    for (const auto& block : blocks) all.insert(all.end(), block.begin(), block.end());
    std::sort(all.begin(), all.end());
    return all;
}

Partition parse_partition(const std::string& text, int n_parties) {
    bool numeric = false;
    for (char c : text) {
        if (std::isdigit(static_cast<unsigned char>(c)) || c == ',') numeric = true;
    }
    std::vector<std::vector<int>> blocks;
    std::vector<int> current;
    std::string token;
    auto flush_token = [&]() {
        if (token.empty()) throw validation_error("empty atom token in partition text");
        int v = 0;
        for (char c : token) {
            if (!std::isdigit(static_cast<unsigned char>(c))) {
                throw validation_error("bad atom token '" + token + "' in partition text");
            }
            v = v * 10 + (c - '0');
        }
        if (v < 1) throw validation_error("atom indices are 1-based in partition text");
        current.push_back(v - 1);
        token.clear();
    };
    auto flush_block = [&]() {
        if (numeric) flush_token();
        if (current.empty()) throw validation_error("empty block in partition text");
        blocks.push_back(current);
        current.clear();
    };
    for (char c : text) {
        if (c == ' ') continue;
        if (c == '|') {
            flush_block();
            continue;
        }
        if (numeric) {
            if (c == ',') {
                flush_token();
            } else {
                token += c;
            }
        } else {
            if (c < 'A' || c > 'Z') {
                throw validation_error(std::string("bad character '") + c + "' in partition text");
            }
            current.push_back(c - 'A');
        }
    }
    flush_block();
    Partition p = Partition::of(std::move(blocks));
    if (n_parties > 0) {
        for (int a : p.atoms()) {
            if (a >= n_parties) {
                throw validation_error("atom " + std::to_string(a + 1) + " exceeds " +
                                       std::to_string(n_parties) + " parties");
            }
        }
    }
    return p;
}

std::string partition_to_text(const Partition& p, bool force_numeric) {
    bool numeric = force_numeric;
    for (const auto& block : p.blocks) {
        for (int a : block) {
            if (a > 25) numeric = true;
        }
    }
    std::string out;
    for (std::size_t i = 0; i < p.blocks.size(); ++i) {
        if (i > 0) out += '|';
        out += block_text(p.blocks[i], numeric);
    }
    return out;
}

std::vector<Partition> enumerate_k_partitions(int n, int k) {
    if (n < 1 || n > kEnumerationCap) {
        throw validation_error("partition enumeration supports 1 to 12 parties");
    }
    if (k < 1 || k > n) throw validation_error("block count must be between 1 and the party count");
    std::vector<int> atoms(n);
    for (int i = 0; i < n; ++i) atoms[i] = i;
    std::vector<Partition> out;
    enumerate_set_partitions(atoms, [&](const Partition& p) {
        if (static_cast<int>(p.size()) == k) out.push_back(p);
    });
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Partition> enumerate_fineness_partitions(int n, int max_block_size) {
    if (n < 1 || n > kEnumerationCap) {
        throw validation_error("partition enumeration supports 1 to 12 parties");
    }
    if (max_block_size < 1) throw validation_error("block size bound must be positive");
    std::vector<int> atoms(n);
    for (int i = 0; i < n; ++i) atoms[i] = i;
    std::vector<Partition> out;
    enumerate_set_partitions(atoms, [&](const Partition& p) {
        for (const auto& block : p.blocks) {
            if (static_cast<int>(block.size()) > max_block_size) return;
        }
        out.push_back(p);
    });
    std::sort(out.begin(), out.end());
    return out;
}

unsigned long long stirling_second(int n, int k) {
    if (n < 0 || n > 20 || k < 0) throw validation_error("stirling numbers supported up to n = 20");
    if (k > n) return 0;
    if (n == 0) return k == 0 ? 1 : 0;
    if (k == 0) return 0;
    std::vector<std::vector<unsigned long long>> s(n + 1, std::vector<unsigned long long>(k + 1, 0));
    s[0][0] = 1;
    for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= std::min(i, k); ++j) {
            s[i][j] = s[i - 1][j - 1] + static_cast<unsigned long long>(j) * s[i - 1][j];
        }
    }
    return s[n][k];
}

bool is_coarser(const Partition& p, const Partition& q) {
    if (p == q) return false;
    if (!subset_of(q.atoms(), p.atoms())) return false;
    for (const auto& p_block : p.blocks) {
        if (target_block(p_block, q) == -2) return false;
    }
    return true;
}

CoarseningRelation coarsening_relation(const Partition& p, const Partition& q) {
    CoarseningRelation rel;
    rel.coarser = is_coarser(p, q);
    if (!rel.coarser) return rel;

    const std::set<std::vector<int>> p_set(p.blocks.begin(), p.blocks.end());
    const std::set<std::vector<int>> q_set(q.blocks.begin(), q.blocks.end());

    // Pure discard: q's blocks all appear unchanged in p.
    rel.pure_discard = std::all_of(q.blocks.begin(), q.blocks.end(),
                                   [&](const std::vector<int>& b) { return p_set.count(b) > 0; });
    if (rel.pure_discard) {
        CoarseningWitness w{"discard", {}};
        for (const auto& block : p.blocks) {
            if (q_set.count(block) == 0) w.steps.push_back("discard " + block_text(block, false));
        }
        rel.witnesses.push_back(std::move(w));
    }

    // Pure merge: same atom set and every q-block is a union of p-blocks.
    if (q.atoms() == p.atoms()) {
        bool all_unions = true;
        std::vector<std::vector<std::string>> parts(q.blocks.size());
        for (const auto& p_block : p.blocks) {
            const int t = target_block(p_block, q);
            if (t < 0 || !subset_of(p_block, q.blocks[t])) {
                all_unions = false;
                break;
            }
            parts[t].push_back(block_text(p_block, false));
        }
        if (all_unions) {
            rel.pure_merge = true;
            CoarseningWitness w{"merge", {}};
            for (std::size_t j = 0; j < q.blocks.size(); ++j) {
                if (parts[j].size() < 2) continue;
                std::string step = "merge ";
                for (std::size_t i = 0; i < parts[j].size(); ++i) {
                    if (i > 0) step += ", ";
                    step += parts[j][i];
                }
                step += " -> " + block_text(q.blocks[j], false);
                w.steps.push_back(std::move(step));
            }
            rel.witnesses.push_back(std::move(w));
        }
    }

    // Pure shrink: blocks in bijection, each q-block inside a distinct p-block.
    if (q.size() == p.size()) {
        std::set<std::size_t> used;
        bool ok = true;
        std::vector<std::string> steps;
        for (const auto& q_block : q.blocks) {
            bool placed = false;
            for (std::size_t i = 0; i < p.blocks.size(); ++i) {
                if (used.count(i) > 0 || !subset_of(q_block, p.blocks[i])) continue;
                used.insert(i);
                placed = true;
                if (q_block != p.blocks[i]) {
                    steps.push_back("shrink " + block_text(p.blocks[i], false) + " -> " +
                                    block_text(q_block, false));
                }
                break;
            }
            if (!placed) {
                ok = false;
                break;
            }
        }
        if (ok) {
            rel.pure_shrink = true;
            rel.witnesses.push_back(CoarseningWitness{"shrink", std::move(steps)});
        }
    }

    // General sequence: discard unused blocks, merge each group, then shrink.
    CoarseningWitness mixed{"mixed", {}};
    std::vector<std::vector<const std::vector<int>*>> groups(q.blocks.size());
    for (const auto& p_block : p.blocks) {
        const int t = target_block(p_block, q);
        if (t == -1) {
            mixed.steps.push_back("discard " + block_text(p_block, false));
        } else {
            groups[t].push_back(&p_block);
        }
    }
    for (std::size_t j = 0; j < q.blocks.size(); ++j) {
        std::vector<int> merged;
        for (const auto* b : groups[j]) merged.insert(merged.end(), b->begin(), b->end());
        std::sort(merged.begin(), merged.end());
        if (groups[j].size() > 1) {
            std::string step = "merge ";
            for (std::size_t i = 0; i < groups[j].size(); ++i) {
                if (i > 0) step += ", ";
                step += block_text(*groups[j][i], false);
            }
            step += " -> " + block_text(merged, false);
            mixed.steps.push_back(std::move(step));
        }
        if (merged != q.blocks[j]) {
            mixed.steps.push_back("shrink " + block_text(merged, false) + " -> " +
                                  block_text(q.blocks[j], false));
        }
    }
    rel.witnesses.push_back(std::move(mixed));
    return rel;
}

std::vector<Partition> complementarity_set(const Partition& p, const Partition& q) {
    if (!is_coarser(p, q)) {
        throw validation_error("complementarity needs the second partition coarser than the first");
    }
    const std::vector<int> atoms = p.atoms();
    const std::size_t m = atoms.size();
    if (m > kComplementarityCap) {
        throw validation_error("complementarity enumeration capped at 10 atoms");
    }
    std::set<Partition> members;
    for (std::size_t mask = 1; mask < (std::size_t{1} << m); ++mask) {
        std::vector<int> subset;
        for (std::size_t i = 0; i < m; ++i) {
            if ((mask >> i) & 1U) subset.push_back(atoms[i]);
        }
        if (subset.size() < 2) continue;
        enumerate_set_partitions(subset, [&](const Partition& r) {
            if (r.size() < 2) return;
            if (!is_coarser(p, r)) return;
            if (r == q || is_coarser(q, r) || is_coarser(r, q)) return;
            // Atoms drawn from two or more q-blocks must share one r-block.
            std::vector<int> represented;
            std::size_t q_blocks_hit = 0;
            for (const auto& q_block : q.blocks) {
                bool hit = false;
                for (int a : q_block) {
                    for (const auto& r_block : r.blocks) {
                        if (std::binary_search(r_block.begin(), r_block.end(), a)) {
                            represented.push_back(a);
                            hit = true;
                        }
                    }
                }
                if (hit) ++q_blocks_hit;
            }
            if (q_blocks_hit >= 2) {
                std::sort(represented.begin(), represented.end());
                bool contained = false;
                for (const auto& r_block : r.blocks) {
                    if (subset_of(represented, r_block)) {
                        contained = true;
                        break;
                    }
                }
                if (!contained) return;
            }
            members.insert(r);
        });
    }
    return std::vector<Partition>(members.begin(), members.end());
}

}  // namespace entkit
