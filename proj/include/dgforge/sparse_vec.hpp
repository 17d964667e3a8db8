#pragma once

#include <utility>
#include <vector>

#include "dgforge/scalar.hpp"

namespace dgforge {

struct Term {
    int index;
    Scalar coeff;
};

// Sparse vector over a field: terms sorted by index, no stored zeros.
class SparseVec {
public:
    SparseVec() = default;
    explicit SparseVec(Field f) : field_(f) {}
    static SparseVec unit(Field f, int index);

    Field field() const { return field_; }
    const std::vector<Term>& terms() const& { return terms_; }
    // Temporaries hand over their storage so range-for over them is safe.
    std::vector<Term> terms() && { return std::move(terms_); }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }
    Scalar coeff(int index) const;
    int max_index() const { return terms_.empty() ? -1 : terms_.back().index; }

    // this += c * e_index
    void add(int index, const Scalar& c);
    // this += c * other
    void axpy(const Scalar& c, const SparseVec& other);
    SparseVec scaled(const Scalar& c) const;
    SparseVec& operator+=(const SparseVec& o);
    SparseVec& operator-=(const SparseVec& o);
    friend SparseVec operator+(SparseVec a, const SparseVec& b) { return a += b; }
    friend SparseVec operator-(SparseVec a, const SparseVec& b) { return a -= b; }
    SparseVec operator-() const;

    // Reindex every term through `map`; entries mapped to -1 are dropped.
    template <class F>
    SparseVec remapped(F&& map) const
    {
        SparseVec out(field_);
        for (const auto& t : terms_) {
            int j = map(t.index);
            if (j >= 0)
                out.add(j, t.coeff);
        }
        return out;
    }

    friend bool operator==(const SparseVec& a, const SparseVec& b);
    friend bool operator!=(const SparseVec& a, const SparseVec& b) { return !(a == b); }

    // Builds from arbitrary (possibly unsorted, duplicated) terms.
    static SparseVec from_terms(Field f, std::vector<Term> terms);

private:
    Field field_;
    std::vector<Term> terms_;
};

} // namespace dgforge
