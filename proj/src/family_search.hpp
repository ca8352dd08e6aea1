#pragma once

// Backtracking enumeration of compatible families (x_j)_j with x_j drawn from
// a finite list per object, subject to functional constraints
// map(x_from) = x_to and, optionally, equal labels across the family. Shared
// by the limit key kernel and the colimit column kernel.

#include <cstddef>
#include <iterator>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace catdb::detail {

struct FamilyConstraint {
    std::size_t from;
    std::size_t to;
    std::vector<std::size_t> map;  // index at `from` -> index at `to`
};

class FamilySearch {
public:
    using Family = std::vector<std::size_t>;

    /// `labels[j][v]` groups candidates; an empty `labels` disables the check.
    FamilySearch(std::vector<std::size_t> counts, std::vector<FamilyConstraint> constraints,
                 std::vector<std::vector<std::size_t>> labels = {})
        : counts_(std::move(counts)),
          constraints_(std::move(constraints)),
          labels_(std::move(labels)),
          forcing_(counts_.size()),
          checks_(counts_.size()) {
        for (const auto& c : constraints_) {
            if (c.from < c.to) {
                forcing_[c.to].push_back(&c);
            } else {
                checks_[c.from].push_back(&c);
            }
        }
    }

    FamilySearch(const FamilySearch&) = delete;
    FamilySearch& operator=(const FamilySearch&) = delete;

    std::size_t size() const { return counts_.size(); }

    std::vector<Family> serial() const {
        std::vector<Family> out;
        Family family(size());
        extend(0, family, out);
        return out;
    }

    std::vector<Family> parallel() const {
        if (size() == 0) {
            return {Family{}};
        }
        const auto roots = static_cast<long>(counts_[0]);
        std::vector<std::vector<Family>> per_root(static_cast<std::size_t>(roots));
#pragma omp parallel for schedule(dynamic)
        for (long r = 0; r < roots; ++r) {
            Family family(size());
            if (admissible(0, static_cast<std::size_t>(r), family)) {
                extend(1, family, per_root[static_cast<std::size_t>(r)]);
            }
        }
        std::vector<Family> out;
        for (auto& chunk : per_root) {
            out.insert(out.end(), std::make_move_iterator(chunk.begin()),
                       std::make_move_iterator(chunk.end()));
        }
        return out;
    }

private:
    bool admissible(std::size_t j, std::size_t v, Family& family) const {
        family[j] = v;
        if (!labels_.empty() && j > 0 && labels_[j][v] != labels_[0][family[0]]) return false;
        for (const FamilyConstraint* c : forcing_[j]) {
            if (c->map[family[c->from]] != v) return false;
        }
        for (const FamilyConstraint* c : checks_[j]) {
            if (c->map[v] != family[c->to]) return false;
        }
        return true;
    }

    void extend(std::size_t j, Family& family, std::vector<Family>& out) const {
        if (j == size()) {
            out.push_back(family);
            return;
        }
        if (!forcing_[j].empty()) {
            const FamilyConstraint* c = forcing_[j].front();
            if (admissible(j, c->map[family[c->from]], family)) extend(j + 1, family, out);
            return;
        }
        for (std::size_t v = 0; v < counts_[j]; ++v) {
            if (admissible(j, v, family)) extend(j + 1, family, out);
        }
    }

    std::vector<std::size_t> counts_;
    std::vector<FamilyConstraint> constraints_;
    std::vector<std::vector<std::size_t>> labels_;
    std::vector<std::vector<const FamilyConstraint*>> forcing_;
    std::vector<std::vector<const FamilyConstraint*>> checks_;
};

}  // namespace catdb::detail
