#include "ncsim/ks_colouring.hpp"

#include <algorithm>
#include <bit>

#include "ncsim/errors.hpp"

namespace ncsim {

KsVerdict validate_ks_colouring(const OrthogonalityStructure& structure,
                                const Colouring& colouring) {
    if (colouring.assignment.size() != structure.base.vectors.size()) {
        throw ValidationError("validate_ks_colouring: colouring is not total");
    }
    KsVerdict verdict;
    for (std::size_t b = 0; b < structure.bases.size(); ++b) {
        int ones = 0;
        for (int v : structure.bases[b]) {
            ones += colouring.assignment[v] ? 1 : 0;
        }
        if (ones != 1) {
            verdict.violated_bases.push_back(static_cast<int>(b));
        }
    }
    verdict.valid = verdict.violated_bases.empty();
    return verdict;
}

namespace {

class BacktrackingSearch {
  public:
    BacktrackingSearch(std::size_t vector_count,
                       std::span<const std::vector<int>> bases)
        : n_(vector_count), bases_(bases.begin(), bases.end()) {
        member_of_.resize(n_);
        for (std::size_t b = 0; b < bases_.size(); ++b) {
            for (int v : bases_[b]) {
                member_of_[v].push_back(static_cast<int>(b));
            }
        }
        // Most-constrained-first static order: descending basis-membership
        // count, ties by index.
        order_.resize(n_);
        for (std::size_t v = 0; v < n_; ++v) {
            order_[v] = static_cast<int>(v);
        }
        std::stable_sort(order_.begin(), order_.end(), [&](int a, int b) {
            return member_of_[a].size() > member_of_[b].size();
        });
        val_.assign(n_, -1);
        ones_.assign(bases_.size(), 0);
        unassigned_.assign(bases_.size(), 0);
        for (std::size_t b = 0; b < bases_.size(); ++b) {
            unassigned_[b] = static_cast<int>(bases_[b].size());
        }
    }

    SearchOutcome run() {
        SearchOutcome outcome;
        if (dfs(0)) {
            Colouring c;
            c.assignment.resize(n_);
            for (std::size_t v = 0; v < n_; ++v) {
                c.assignment[v] = static_cast<std::uint8_t>(val_[v] == 1);
            }
            outcome.colouring = std::move(c);
        }
        outcome.explored_nodes = nodes_;
        return outcome;
    }

  private:
    // Counter updates always run to completion so undo_to can reverse them
    // exactly; conflicts are reported at the end.
    bool assign(int v, int value) {
        val_[v] = static_cast<signed char>(value);
        trail_.push_back(v);
        bool ok = true;
        for (int b : member_of_[v]) {
            --unassigned_[b];
            if (value == 1) {
                ++ones_[b];
            }
            if (ones_[b] > 1 || (ones_[b] == 0 && unassigned_[b] == 0)) {
                ok = false;
            }
        }
        return ok;
    }

    // Assign plus unit propagation: a basis with its 1 placed forces its
    // remaining vectors to 0; a basis with one slot left and no 1 forces
    // that slot to 1.
    bool assign_and_propagate(int v, int value) {
        std::vector<std::pair<int, int>> queue{{v, value}};
        while (!queue.empty()) {
            auto [u, uval] = queue.back();
            queue.pop_back();
            if (val_[u] != -1) {
                if (val_[u] != uval) {
                    return false;
                }
                continue;
            }
            if (!assign(u, uval)) {
                return false;
            }
            for (int b : member_of_[u]) {
                if (ones_[b] == 1) {
                    for (int w : bases_[b]) {
                        if (val_[w] == -1) {
                            queue.emplace_back(w, 0);
                        }
                    }
                } else if (ones_[b] == 0 && unassigned_[b] == 1) {
                    for (int w : bases_[b]) {
                        if (val_[w] == -1) {
                            queue.emplace_back(w, 1);
                        }
                    }
                }
            }
        }
        return true;
    }

    void undo_to(std::size_t mark) {
        while (trail_.size() > mark) {
            const int v = trail_.back();
            trail_.pop_back();
            for (int b : member_of_[v]) {
                ++unassigned_[b];
                if (val_[v] == 1) {
                    --ones_[b];
                }
            }
            val_[v] = -1;
        }
    }

    bool dfs(std::size_t order_pos) {
        ++nodes_;
        while (order_pos < n_ && val_[order_[order_pos]] != -1) {
            ++order_pos;
        }
        if (order_pos == n_) {
            return true;
        }
        const int v = order_[order_pos];
        for (int value : {1, 0}) {
            const std::size_t mark = trail_.size();
            if (assign_and_propagate(v, value) && dfs(order_pos + 1)) {
                return true;
            }
            undo_to(mark);
        }
        return false;
    }

    std::size_t n_;
    std::vector<std::vector<int>> bases_;
    std::vector<std::vector<int>> member_of_;
    std::vector<int> order_;
    std::vector<signed char> val_;
    std::vector<int> ones_;
    std::vector<int> unassigned_;
    std::vector<int> trail_;
    std::uint64_t nodes_{0};
};

} // namespace

SearchOutcome search_colouring_over(std::size_t vector_count,
                                    std::span<const std::vector<int>> bases) {
    for (const auto& basis : bases) {
        for (int v : basis) {
            if (v < 0 || static_cast<std::size_t>(v) >= vector_count) {
                throw ValidationError("search: basis index outside the vector set");
            }
        }
    }
    BacktrackingSearch search(vector_count, bases);
    return search.run();
}

SearchOutcome search_colouring(const OrthogonalityStructure& structure) {
    SearchOutcome outcome =
        search_colouring_over(structure.base.vectors.size(), structure.bases);
    if (outcome.colouring) {
        // Round-trip check: the search must never hand back a colouring its
        // own validator rejects.
        const KsVerdict verdict = validate_ks_colouring(structure, *outcome.colouring);
        if (!verdict.valid) {
            throw Error("search_colouring: produced an invalid colouring");
        }
    }
    return outcome;
}

namespace {

std::vector<std::uint32_t> basis_masks(const OrthogonalityStructure& structure) {
    const std::size_t n = structure.base.vectors.size();
    if (n > 25) {
        throw Error("count_valid_colourings: exhaustive oracle capped at 25 vectors");
    }
    std::vector<std::uint32_t> masks;
    masks.reserve(structure.bases.size());
    for (const auto& basis : structure.bases) {
        std::uint32_t m = 0;
        for (int v : basis) {
            m |= 1u << v;
        }
        masks.push_back(m);
    }
    return masks;
}

inline bool colouring_valid(std::uint32_t candidate,
                            const std::vector<std::uint32_t>& masks) {
    for (std::uint32_t m : masks) {
        if (std::popcount(candidate & m) != 1) {
            return false;
        }
    }
    return true;
}

} // namespace

std::uint64_t count_valid_colourings_serial(const OrthogonalityStructure& structure) {
    const auto masks = basis_masks(structure);
    const std::uint64_t total = 1ull << structure.base.vectors.size();
    std::uint64_t count = 0;
    for (std::uint64_t c = 0; c < total; ++c) {
        if (colouring_valid(static_cast<std::uint32_t>(c), masks)) {
            ++count;
        }
    }
    return count;
}

std::uint64_t count_valid_colourings(const OrthogonalityStructure& structure) {
    const auto masks = basis_masks(structure);
    const std::int64_t total = 1ll << structure.base.vectors.size();
    std::uint64_t count = 0;
#pragma omp parallel for reduction(+ : count) schedule(static)
    for (std::int64_t c = 0; c < total; ++c) {
        if (colouring_valid(static_cast<std::uint32_t>(c), masks)) {
            ++count;
        }
    }
    return count;
}

} // namespace ncsim
