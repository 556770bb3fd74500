#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "polyagg/errors.hpp"

namespace polyagg {

// Finite set with distinct string labels in a fixed stored order.
// The stored order is the canonical enumeration order everywhere.
class FinLabelSet {
public:
    FinLabelSet() = default;
    explicit FinLabelSet(std::vector<std::string> labels) {
        for (auto& l : labels) add(std::move(l));
    }

    int add(std::string label) {
        auto [it, fresh] = index_.emplace(std::move(label), (int)labels_.size());
        if (!fresh) throw ParseError("duplicate label in finite set", it->first);
        labels_.push_back(it->first);
        return it->second;
    }

    int size() const { return (int)labels_.size(); }
    bool empty() const { return labels_.empty(); }
    const std::string& label(int i) const { return labels_.at(i); }
    const std::vector<std::string>& labels() const { return labels_; }

    bool contains(const std::string& l) const { return index_.count(l) > 0; }
    int index(const std::string& l) const {
        auto it = index_.find(l);
        if (it == index_.end()) throw ParseError("unknown label", l);
        return it->second;
    }
    int find(const std::string& l) const { // -1 if absent
        auto it = index_.find(l);
        return it == index_.end() ? -1 : it->second;
    }

    bool operator==(const FinLabelSet& o) const { return labels_ == o.labels_; }
    bool operator!=(const FinLabelSet& o) const { return !(*this == o); }

private:
    std::vector<std::string> labels_;
    std::unordered_map<std::string, int> index_;
};

// Numbered set {x1, ..., xn} with a given prefix.
inline FinLabelSet numbered_set(const std::string& prefix, int n) {
    std::vector<std::string> ls;
    ls.reserve(n);
    for (int i = 1; i <= n; ++i) ls.push_back(prefix + std::to_string(i));
    return FinLabelSet(std::move(ls));
}

// A function A -> B between label sets, stored as indices into B per element of A.
using FinFunction = std::vector<int>;

inline void check_fin_function(const FinFunction& f, int dom, int cod, const std::string& where) {
    if ((int)f.size() != dom) throw WrongShape("function has wrong domain size", where);
    for (int v : f)
        if (v < 0 || v >= cod) throw WrongShape("function value out of range", where);
}

} // namespace polyagg
