#pragma once

// Cost functions over subsets of a name set, stored densely: entry i holds
// the cost of the subset whose members are the support names at the set
// bits of i.  Queries with extra names ignore them, so every table behaves
// as its own extension to all names.

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "extcost.hpp"
#include "names.hpp"
#include "perm.hpp"

namespace optiterm {

class SubsetTable {
public:
    SubsetTable() : entries_(1, ExtCost(0)) {}

    explicit SubsetTable(std::vector<Name> support) : support_(std::move(support)) {
        if (!std::is_sorted(support_.begin(), support_.end()))
            std::sort(support_.begin(), support_.end());
        if (support_.size() > 24)
            throw std::invalid_argument("subset table support too large: " +
                                        std::to_string(support_.size()) + " names");
        entries_.assign(std::size_t(1) << support_.size(), ExtCost(0));
    }

    SubsetTable(std::vector<Name> support, std::vector<ExtCost> entries)
        : SubsetTable(std::move(support)) {
        if (entries.size() != entries_.size())
            throw std::invalid_argument("subset table entry count mismatch");
        entries_ = std::move(entries);
    }

    static SubsetTable constant(const ExtCost& v) {
        SubsetTable t;
        t.entries_[0] = v;
        return t;
    }

    const std::vector<Name>& support() const { return support_; }
    const std::vector<ExtCost>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }

    const ExtCost& entry(std::size_t mask) const { return entries_.at(mask); }
    ExtCost& entry(std::size_t mask) { return entries_.at(mask); }

    std::size_t position(const Name& n) const {
        auto it = std::lower_bound(support_.begin(), support_.end(), n);
        if (it == support_.end() || *it != n)
            throw std::invalid_argument("'" + n.str() + "' not in table support");
        return it - support_.begin();
    }

    bool supports(const Name& n) const {
        return std::binary_search(support_.begin(), support_.end(), n);
    }

    NameSet subset_at(std::size_t mask) const {
        NameSet s;
        for (std::size_t i = 0; i < support_.size(); ++i)
            if (mask & (std::size_t(1) << i)) s.insert(support_[i]);
        return s;
    }

    std::size_t mask_of(const NameSet& xs) const {
        std::size_t mask = 0;
        for (std::size_t i = 0; i < support_.size(); ++i)
            if (xs.count(support_[i])) mask |= std::size_t(1) << i;
        return mask;
    }

    // Value at X; names outside the support are ignored, so this is the
    // extension of the table to arbitrary sets.
    const ExtCost& at(const NameSet& xs) const { return entries_[mask_of(xs)]; }

    ExtCost min_entry() const {
        ExtCost m = ExtCost::infinity();
        for (const ExtCost& e : entries_) m = min(m, e);
        return m;
    }

    friend bool operator==(const SubsetTable& a, const SubsetTable& b) {
        return a.support_ == b.support_ && a.entries_ == b.entries_;
    }
    friend bool operator!=(const SubsetTable& a, const SubsetTable& b) { return !(a == b); }

private:
    std::vector<Name> support_;  // sorted
    std::vector<ExtCost> entries_;
};

// Zone table: parking the cars X in the zone costs the sum of their
// per-car costs, or infinity past the zone's capacity.
inline SubsetTable park_atom(const std::vector<Name>& cars, std::size_t capacity,
                             const std::vector<ExtCost>& car_cost) {
    if (car_cost.size() != cars.size())
        throw std::invalid_argument("park_atom: one cost per car required");
    for (std::size_t i = 0; i < cars.size(); ++i)
        for (std::size_t j = i + 1; j < cars.size(); ++j)
            if (cars[i] == cars[j])
                throw std::invalid_argument("park_atom: repeated car '" + cars[i].str() + "'");
    SubsetTable t{std::vector<Name>(cars)};
    for (std::size_t mask = 0; mask < t.size(); ++mask) {
        std::size_t count = 0;
        ExtCost sum(0);
        for (std::size_t i = 0; i < cars.size(); ++i)
            if (mask & (std::size_t(1) << t.position(cars[i]))) {
                ++count;
                sum = sum + car_cost[i];
            }
        t.entry(mask) = count <= capacity ? sum : ExtCost::infinity();
    }
    return t;
}

namespace detail {

// Bit plumbing for splitting a set between two operand tables whose joint
// support indexes the bits of `mask`.
struct ParSplit {
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    std::vector<std::size_t> p1, p2;  // joint bit -> operand bit
    std::size_t in1 = 0, in2 = 0;     // joint bits covered by each operand

    ParSplit(const std::vector<Name>& support, const SubsetTable& t1, const SubsetTable& t2) {
        auto positions = [&](const SubsetTable& o) {
            std::vector<std::size_t> pos(support.size(), npos);
            for (std::size_t i = 0; i < support.size(); ++i)
                if (o.supports(support[i])) pos[i] = o.position(support[i]);
            return pos;
        };
        p1 = positions(t1);
        p2 = positions(t2);
        for (std::size_t i = 0; i < support.size(); ++i) {
            if (p1[i] != npos) in1 |= std::size_t(1) << i;
            if (p2[i] != npos) in2 |= std::size_t(1) << i;
        }
    }

    static std::size_t project(std::size_t mask, const std::vector<std::size_t>& pos) {
        std::size_t m = 0;
        for (std::size_t i = 0; i < pos.size(); ++i)
            if ((mask & (std::size_t(1) << i)) && pos[i] != npos)
                m |= std::size_t(1) << pos[i];
        return m;
    }

    // Calls f(cost) for every ordered split (X1, X2) of `mask` with X1 in
    // t1's support and X2 in t2's, first parts descending, so the split
    // putting everything it can on the left comes first.
    template <class F>
    void each(std::size_t mask, const SubsetTable& t1, const SubsetTable& t2, F&& f) const {
        if ((mask & ~(in1 | in2)) != 0)
            throw std::logic_error("park_parallel: name outside both supports");
        std::size_t shared = mask & in1;
        std::size_t sub = shared;
        while (true) {
            std::size_t rest = mask & ~sub;
            if ((rest & ~in2) == 0)
                f(t1.entry(project(sub, p1)) + t2.entry(project(rest, p2)));
            if (sub == 0) break;
            sub = (sub - 1) & shared;
        }
    }
};

inline std::vector<Name> joint_support(const SubsetTable& t1, const SubsetTable& t2) {
    std::vector<Name> support;
    std::set_union(t1.support().begin(), t1.support().end(), t2.support().begin(),
                   t2.support().end(), std::back_inserter(support));
    return support;
}

}  // namespace detail

// Every car of X parks in the left or the right component, not both: the
// entry at X is the cheapest ordered split (X1, X2) with X1 inside t1's
// support and X2 inside t2's.  Either part may be empty.
inline SubsetTable park_parallel(const SubsetTable& t1, const SubsetTable& t2) {
    SubsetTable t(detail::joint_support(t1, t2));
    detail::ParSplit split(t.support(), t1, t2);
    for (std::size_t mask = 0; mask < t.size(); ++mask) {
        ExtCost best = ExtCost::infinity();
        split.each(mask, t1, t2, [&](const ExtCost& c) { best = min(best, c); });
        t.entry(mask) = best;
    }
    return t;
}

// The candidate sums park_parallel minimizes over at one set, in the order
// it examines them.  Meant for table dumps; `mask` indexes the joint
// support, the same indexing park_parallel(t1, t2) produces.
inline std::vector<ExtCost> park_split_candidates(const SubsetTable& t1, const SubsetTable& t2,
                                                  std::size_t mask) {
    detail::ParSplit split(detail::joint_support(t1, t2), t1, t2);
    std::vector<ExtCost> out;
    split.each(mask, t1, t2, [&](const ExtCost& c) { out.push_back(c); });
    return out;
}

// Parking the component forces car x inside it: the entry at X is the inner
// entry at X plus x.  Identity when x is not in the support.
inline SubsetTable park_restrict(const SubsetTable& t, const Name& x) {
    if (!t.supports(x)) return t;
    std::size_t xbit = std::size_t(1) << t.position(x);
    std::vector<Name> support = t.support();
    support.erase(std::find(support.begin(), support.end(), x));
    SubsetTable r(std::move(support));
    for (std::size_t mask = 0; mask < r.size(); ++mask) {
        // Re-spread the bits of `mask` around x's old position.
        std::size_t low = mask & (xbit - 1);
        std::size_t high = (mask & ~(xbit - 1)) << 1;
        r.entry(mask) = t.entry(low | high | xbit);
    }
    return r;
}

// Renames the support along pi; the entry at X is the original entry at
// the set of names pi sends into X.
inline SubsetTable park_permute(const SubsetTable& t, const Permutation& pi) {
    std::vector<Name> support;
    support.reserve(t.support().size());
    for (const Name& n : t.support()) support.push_back(pi(n));
    std::sort(support.begin(), support.end());
    if (std::adjacent_find(support.begin(), support.end()) != support.end())
        throw std::invalid_argument("park_permute: mapping is not injective on the support");
    SubsetTable r(std::move(support));
    std::vector<std::size_t> newpos(t.support().size());
    for (std::size_t i = 0; i < t.support().size(); ++i)
        newpos[i] = r.position(pi(t.support()[i]));
    for (std::size_t mask = 0; mask < r.size(); ++mask) {
        std::size_t pre = 0;
        for (std::size_t i = 0; i < t.support().size(); ++i)
            if (mask & (std::size_t(1) << newpos[i])) pre |= std::size_t(1) << i;
        r.entry(mask) = t.entry(pre);
    }
    return r;
}

}  // namespace optiterm
