#pragma once

// Finite-support permutations of names.
//
// A permutation over the (infinite) name set is stored by its non-fixed
// points only: a finite map whose key set and value set coincide.  Every
// name outside the map is fixed.  Composition and inverse stay within this
// representation.

#include <map>
#include <stdexcept>
#include <utility>

#include "names.hpp"

namespace optiterm {

class Permutation {
public:
    Permutation() = default;

    static Permutation identity() { return Permutation(); }

    // Transposition (a b); the identity when a == b.
    static Permutation transpose(const Name& a, const Name& b) {
        Permutation p;
        if (a != b) {
            p.moved_[a] = b;
            p.moved_[b] = a;
        }
        return p;
    }

    // Builds a permutation from an explicit map of moved points.
    // The map must be a bijection on its key set; fixed points are dropped.
    static Permutation from_map(const std::map<Name, Name>& m) {
        Permutation p;
        NameSet values;
        for (const auto& [k, v] : m) {
            if (!values.insert(v).second)
                throw std::invalid_argument("permutation map is not injective");
            if (k != v) p.moved_[k] = v;
        }
        for (const auto& [k, v] : p.moved_)
            if (!m.count(v))
                throw std::invalid_argument("permutation map is not closed: value '" +
                                            v.str() + "' is not a key");
        return p;
    }

    Name operator()(const Name& n) const {
        auto it = moved_.find(n);
        return it == moved_.end() ? n : it->second;
    }

    NameSet apply(const NameSet& ns) const {
        NameSet r;
        for (const Name& n : ns) r.insert((*this)(n));
        return r;
    }

    bool is_identity() const { return moved_.empty(); }

    // Names moved by the permutation (its support in the permutation group).
    NameSet moved_names() const {
        NameSet r;
        for (const auto& [k, v] : moved_) r.insert(k);
        return r;
    }

    const std::map<Name, Name>& moved() const { return moved_; }

    Permutation inverse() const {
        Permutation p;
        for (const auto& [k, v] : moved_) p.moved_[v] = k;
        return p;
    }

    // Functional composition: (this.after(other))(x) = this(other(x)).
    Permutation after(const Permutation& other) const {
        Permutation r;
        NameSet keys = other.moved_names();
        for (const auto& [k, v] : moved_) keys.insert(k);
        for (const Name& k : keys) {
            Name v = (*this)(other(k));
            if (v != k) r.moved_[k] = v;
        }
        return r;
    }

    friend bool operator==(const Permutation& a, const Permutation& b) {
        return a.moved_ == b.moved_;
    }
    friend bool operator!=(const Permutation& a, const Permutation& b) {
        return !(a == b);
    }

private:
    std::map<Name, Name> moved_;
};

}  // namespace optiterm
