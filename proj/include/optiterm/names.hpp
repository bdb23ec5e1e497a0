#pragma once

// Names (problem variables) and fresh-name generation.
//
// A Name is an identifier drawn from a countable set; equality is literal
// identity of the identifier.  FreshNames hands out `_g0, _g1, ...`,
// skipping anything in the avoid set, so fresh-name choice is reproducible.

#include <cctype>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>

namespace optiterm {

class Name {
public:
    Name() = default;

    explicit Name(std::string id) : id_(std::move(id)) {
        if (!valid(id_))
            throw std::invalid_argument("invalid name: '" + id_ + "'");
    }

    const std::string& str() const { return id_; }

    static bool valid(const std::string& s) {
        if (s.empty() || s == "nil") return false;
        if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
        for (char c : s)
            if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
        return true;
    }

    friend bool operator==(const Name& a, const Name& b) { return a.id_ == b.id_; }
    friend bool operator!=(const Name& a, const Name& b) { return a.id_ != b.id_; }
    friend bool operator<(const Name& a, const Name& b) { return a.id_ < b.id_; }
    friend bool operator<=(const Name& a, const Name& b) { return a.id_ <= b.id_; }
    friend bool operator>(const Name& a, const Name& b) { return a.id_ > b.id_; }
    friend bool operator>=(const Name& a, const Name& b) { return a.id_ >= b.id_; }

private:
    std::string id_;
};

using NameSet = std::set<Name>;

inline NameSet set_union(const NameSet& a, const NameSet& b) {
    NameSet r = a;
    r.insert(b.begin(), b.end());
    return r;
}

inline NameSet set_minus(const NameSet& a, const Name& x) {
    NameSet r = a;
    r.erase(x);
    return r;
}

inline NameSet set_intersect(const NameSet& a, const NameSet& b) {
    NameSet r;
    for (const Name& n : a)
        if (b.count(n)) r.insert(n);
    return r;
}

// Deterministic generator of names not present in the avoid set.
// Generated names are added to the avoid set so successive calls are
// pairwise distinct.
class FreshNames {
public:
    FreshNames() = default;
    explicit FreshNames(NameSet avoid) : avoid_(std::move(avoid)) {}

    void avoid(const Name& n) { avoid_.insert(n); }
    void avoid_all(const NameSet& ns) { avoid_.insert(ns.begin(), ns.end()); }

    Name next() {
        for (;;) {
            Name cand("_g" + std::to_string(counter_++));
            if (!avoid_.count(cand)) {
                avoid_.insert(cand);
                return cand;
            }
        }
    }

private:
    NameSet avoid_;
    unsigned long counter_ = 0;
};

}  // namespace optiterm
