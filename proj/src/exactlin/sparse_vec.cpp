#include "dgforge/sparse_vec.hpp"

#include <algorithm>

#include "dgforge/error.hpp"

namespace dgforge {

SparseVec SparseVec::unit(Field f, int index)
{
    SparseVec v(f);
    v.terms_.push_back({index, Scalar::one(f)});
    return v;
}

Scalar SparseVec::coeff(int index) const
{
    auto it = std::lower_bound(terms_.begin(), terms_.end(), index,
                               [](const Term& t, int i) { return t.index < i; });
    if (it != terms_.end() && it->index == index)
        return it->coeff;
    return Scalar::zero(field_);
}

void SparseVec::add(int index, const Scalar& c)
{
    if (c.field() != field_)
        throw FieldMismatch();
    if (c.is_zero())
        return;
    if (terms_.empty() || terms_.back().index < index) {
        terms_.push_back({index, c});
        return;
    }
    auto it = std::lower_bound(terms_.begin(), terms_.end(), index,
                               [](const Term& t, int i) { return t.index < i; });
    if (it != terms_.end() && it->index == index) {
        it->coeff += c;
        if (it->coeff.is_zero())
            terms_.erase(it);
    } else {
        terms_.insert(it, {index, c});
    }
}

void SparseVec::axpy(const Scalar& c, const SparseVec& other)
{
    if (other.field_ != field_ || c.field() != field_)
        throw FieldMismatch();
    if (c.is_zero() || other.terms_.empty())
        return;
    std::vector<Term> out;
    out.reserve(terms_.size() + other.terms_.size());
    auto a = terms_.begin();
    auto b = other.terms_.begin();
    while (a != terms_.end() || b != other.terms_.end()) {
        if (b == other.terms_.end() || (a != terms_.end() && a->index < b->index)) {
            out.push_back(std::move(*a));
            ++a;
        } else if (a == terms_.end() || b->index < a->index) {
            out.push_back({b->index, c * b->coeff});
            ++b;
        } else {
            Scalar s = a->coeff + c * b->coeff;
            if (!s.is_zero())
                out.push_back({a->index, std::move(s)});
            ++a;
            ++b;
        }
    }
    terms_ = std::move(out);
}

SparseVec SparseVec::scaled(const Scalar& c) const
{
    SparseVec out(field_);
    if (c.is_zero())
        return out;
    out.terms_.reserve(terms_.size());
    for (const auto& t : terms_)
        out.terms_.push_back({t.index, t.coeff * c});
    return out;
}

SparseVec& SparseVec::operator+=(const SparseVec& o)
{
    axpy(Scalar::one(field_), o);
    return *this;
}

SparseVec& SparseVec::operator-=(const SparseVec& o)
{
    axpy(-Scalar::one(field_), o);
    return *this;
}

SparseVec SparseVec::operator-() const
{
    return scaled(-Scalar::one(field_));
}

bool operator==(const SparseVec& a, const SparseVec& b)
{
    if (a.terms_.size() != b.terms_.size())
        return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i)
        if (a.terms_[i].index != b.terms_[i].index || a.terms_[i].coeff != b.terms_[i].coeff)
            return false;
    return true;
}

SparseVec SparseVec::from_terms(Field f, std::vector<Term> terms)
{
    std::stable_sort(terms.begin(), terms.end(), [](const Term& x, const Term& y) { return x.index < y.index; });
    SparseVec v(f);
    for (auto& t : terms) {
        if (t.coeff.field() != f)
            throw FieldMismatch();
        if (!v.terms_.empty() && v.terms_.back().index == t.index) {
            v.terms_.back().coeff += t.coeff;
            if (v.terms_.back().coeff.is_zero())
                v.terms_.pop_back();
        } else if (!t.coeff.is_zero()) {
            v.terms_.push_back(std::move(t));
        }
    }
    return v;
}

} // namespace dgforge
