#pragma once

// Dense cost tables over a finite value domain.  A table represents a
// function of assignments that depends only on its support; entries are
// stored in mixed radix with the sorted support's first name most
// significant, so equal functions have identical representations.

#include <algorithm>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "extcost.hpp"
#include "names.hpp"
#include "perm.hpp"

namespace optiterm {

// Ordered finite set of value labels.
class Domain {
public:
    Domain() = default;
    explicit Domain(std::vector<std::string> values) : values_(std::move(values)) {
        if (values_.empty()) throw std::invalid_argument("empty domain");
        for (std::size_t i = 0; i < values_.size(); ++i)
            for (std::size_t j = i + 1; j < values_.size(); ++j)
                if (values_[i] == values_[j])
                    throw std::invalid_argument("duplicate domain value '" + values_[i] + "'");
    }

    std::size_t size() const { return values_.size(); }
    const std::string& value(std::size_t i) const { return values_.at(i); }
    const std::vector<std::string>& values() const { return values_; }

    std::size_t index_of(const std::string& v) const {
        for (std::size_t i = 0; i < values_.size(); ++i)
            if (values_[i] == v) return i;
        throw std::invalid_argument("value '" + v + "' not in domain");
    }

    bool contains(const std::string& v) const {
        return std::find(values_.begin(), values_.end(), v) != values_.end();
    }

    friend bool operator==(const Domain& a, const Domain& b) { return a.values_ == b.values_; }
    friend bool operator!=(const Domain& a, const Domain& b) { return !(a == b); }

private:
    std::vector<std::string> values_;
};

// Finite assignment of domain values to names; tables read only the names
// in their support, so any extension of an assignment reads the same.
using Assignment = std::map<Name, std::string>;

class CostTable {
public:
    CostTable() = default;

    // All-zero table over the given support.
    CostTable(std::vector<Name> support, Domain domain)
        : support_(std::move(support)), domain_(std::move(domain)) {
        if (!std::is_sorted(support_.begin(), support_.end()))
            std::sort(support_.begin(), support_.end());
        entries_.assign(size(), ExtCost(0));
    }

    CostTable(std::vector<Name> support, Domain domain, std::vector<ExtCost> entries)
        : CostTable(std::move(support), std::move(domain)) {
        if (entries.size() != entries_.size())
            throw std::invalid_argument("cost table entry count does not match support");
        entries_ = std::move(entries);
    }

    static CostTable constant(const Domain& d, const ExtCost& v) {
        CostTable t({}, d);
        t.entries_[0] = v;
        return t;
    }

    const std::vector<Name>& support() const { return support_; }
    const Domain& domain() const { return domain_; }
    const std::vector<ExtCost>& entries() const { return entries_; }

    std::size_t size() const {
        std::size_t n = 1;
        for (std::size_t i = 0; i < support_.size(); ++i) n *= domain_.size();
        return n;
    }

    const ExtCost& entry(std::size_t index) const { return entries_.at(index); }
    ExtCost& entry(std::size_t index) { return entries_.at(index); }

    // Digits of `index`, one per support name, most significant first.
    std::vector<std::size_t> decode(std::size_t index) const {
        std::vector<std::size_t> digits(support_.size());
        for (std::size_t i = support_.size(); i-- > 0;) {
            digits[i] = index % domain_.size();
            index /= domain_.size();
        }
        return digits;
    }

    std::size_t encode(const std::vector<std::size_t>& digits) const {
        std::size_t index = 0;
        for (std::size_t d : digits) index = index * domain_.size() + d;
        return index;
    }

    Assignment assignment_at(std::size_t index) const {
        Assignment a;
        std::vector<std::size_t> digits = decode(index);
        for (std::size_t i = 0; i < support_.size(); ++i)
            a[support_[i]] = domain_.value(digits[i]);
        return a;
    }

    // Looks up the entry for an assignment covering the whole support;
    // names outside the support are ignored.
    const ExtCost& at(const Assignment& a) const {
        std::size_t index = 0;
        for (const Name& n : support_) {
            auto it = a.find(n);
            if (it == a.end())
                throw std::invalid_argument("assignment misses '" + n.str() + "'");
            index = index * domain_.size() + domain_.index_of(it->second);
        }
        return entries_[index];
    }

    ExtCost min_entry() const {
        ExtCost m = ExtCost::infinity();
        for (const ExtCost& e : entries_) m = min(m, e);
        return m;
    }

    friend bool operator==(const CostTable& a, const CostTable& b) {
        return a.support_ == b.support_ && a.domain_ == b.domain_ && a.entries_ == b.entries_;
    }
    friend bool operator!=(const CostTable& a, const CostTable& b) { return !(a == b); }

private:
    std::vector<Name> support_;  // sorted
    Domain domain_;
    std::vector<ExtCost> entries_;
};

// Cost rows for one constant, indexed positionally by argument tuple
// (first argument most significant).
struct BaseCost {
    std::size_t arity = 0;
    std::vector<ExtCost> entries;
};

class Binding {
public:
    void bind(const std::string& label, std::size_t arity, std::vector<ExtCost> entries) {
        auto [it, fresh] = map_.emplace(label, BaseCost{arity, std::move(entries)});
        if (!fresh) throw std::invalid_argument("constant '" + label + "' bound twice");
    }

    bool has(const std::string& label) const { return map_.count(label) != 0; }

    const BaseCost& at(const std::string& label) const {
        auto it = map_.find(label);
        if (it == map_.end())
            throw std::invalid_argument("no cost bound for constant '" + label + "'");
        return it->second;
    }

    const std::map<std::string, BaseCost>& all() const { return map_; }

private:
    std::map<std::string, BaseCost> map_;
};

// Table for one atom occurrence: the positional base rows re-indexed by the
// atom's argument names, support sorted.
inline CostTable table_atom(const std::string& label, const std::vector<Name>& args,
                            const Binding& b, const Domain& d) {
    const BaseCost& base = b.at(label);
    if (base.arity != args.size())
        throw std::invalid_argument("constant '" + label + "' expects " +
                                    std::to_string(base.arity) + " argument(s), got " +
                                    std::to_string(args.size()));
    std::size_t want = 1;
    for (std::size_t i = 0; i < base.arity; ++i) want *= d.size();
    if (base.entries.size() != want)
        throw std::invalid_argument("cost rows for '" + label + "' do not cover the domain");

    CostTable t(args, d);
    // Position of each argument within the sorted support.
    std::vector<std::size_t> pos(args.size());
    for (std::size_t i = 0; i < args.size(); ++i) {
        pos[i] = std::lower_bound(t.support().begin(), t.support().end(), args[i]) -
                 t.support().begin();
    }
    for (std::size_t index = 0; index < t.size(); ++index) {
        std::vector<std::size_t> digits = t.decode(index);
        std::size_t base_index = 0;
        for (std::size_t i = 0; i < args.size(); ++i)
            base_index = base_index * d.size() + digits[pos[i]];
        t.entry(index) = base.entries[base_index];
    }
    return t;
}

// Point-wise saturating sum; support is the union of the operands'.
inline CostTable table_sum(const CostTable& t1, const CostTable& t2) {
    if (t1.domain() != t2.domain())
        throw std::invalid_argument("table_sum: domain mismatch");
    std::vector<Name> support;
    std::set_union(t1.support().begin(), t1.support().end(), t2.support().begin(),
                   t2.support().end(), std::back_inserter(support));
    CostTable t(std::move(support), t1.domain());
    for (std::size_t index = 0; index < t.size(); ++index) {
        Assignment a = t.assignment_at(index);
        t.entry(index) = t1.at(a) + t2.at(a);
    }
    return t;
}

// Minimizes x out of the table; identity when x is not in the support.
inline CostTable table_min_out(const CostTable& t, const Name& x) {
    auto it = std::find(t.support().begin(), t.support().end(), x);
    if (it == t.support().end()) return t;
    std::vector<Name> support(t.support());
    support.erase(support.begin() + (it - t.support().begin()));
    CostTable r(std::move(support), t.domain());
    for (std::size_t index = 0; index < r.size(); ++index) {
        Assignment a = r.assignment_at(index);
        ExtCost m = ExtCost::infinity();
        for (std::size_t v = 0; v < t.domain().size(); ++v) {
            a[x] = t.domain().value(v);
            m = min(m, t.at(a));
        }
        r.entry(index) = m;
    }
    return r;
}

// Renames the support along pi; the entry at an assignment rho equals the
// original entry at rho composed with pi (each old name n reads rho at
// pi(n)), so permuting a table tracks permuting the term it came from.
inline CostTable table_permute(const CostTable& t, const Permutation& pi) {
    std::vector<Name> support;
    support.reserve(t.support().size());
    for (const Name& n : t.support()) support.push_back(pi(n));
    std::sort(support.begin(), support.end());
    if (std::adjacent_find(support.begin(), support.end()) != support.end())
        throw std::invalid_argument("table_permute: mapping is not injective on the support");
    CostTable r(std::move(support), t.domain());
    for (std::size_t index = 0; index < r.size(); ++index) {
        Assignment a = r.assignment_at(index);
        Assignment pre;
        for (const Name& n : t.support()) pre[n] = a.at(pi(n));
        r.entry(index) = t.at(pre);
    }
    return r;
}

}  // namespace optiterm
