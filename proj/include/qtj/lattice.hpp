#pragma once

// Random-access view of a descriptor's points (boxes are never materialized)
// and the lattice vector m*mu + n in each arithmetic.

#include <algorithm>
#include <optional>
#include <vector>

#include "qtj/foliation.hpp"
#include "qtj/schemes.hpp"

namespace qtj
{

class PointSource
{
public:
    explicit PointSource(const SetDescriptor &d)
    {
        if (const Box *b = std::get_if<Box>(&d.rule))
            box_ = *b;
        else
            points_ = enumerate(d);
    }

    std::size_t size() const { return box_ ? static_cast<std::size_t>(box_size(*box_)) : points_.size(); }
    LatticePoint operator[](std::size_t i) const { return box_ ? box_point(*box_, i) : points_[i]; }

    bool contains(LatticePoint p) const
    {
        if (box_)
        {
            auto in = [&](std::int64_t v) { return v >= -box_->radius && v <= box_->radius; };
            return in(p.m) && in(p.n) && (box_->include_origin || !p.is_origin());
        }
        return std::binary_search(points_.begin(), points_.end(), p);
    }

private:
    std::optional<Box> box_;
    std::vector<LatticePoint> points_;
};

template <class Field>
ExactComplex<Field> lattice_vector(const ExactComplex<Field> &mu, LatticePoint p)
{
    return ExactComplex<Field>(mu.re() * Field(p.m) + Field(p.n), mu.im() * Field(p.m));
}

/// m*mu + n written into out at out's precision, each component rounded once.
inline void lattice_vector_into(BigComplex &out, const BigComplex &mu, LatticePoint p)
{
    struct Ints
    {
        mpfr_t m, n;
        Ints()
        {
            mpfr_init2(m, 64);
            mpfr_init2(n, 64);
        }
        ~Ints()
        {
            mpfr_clear(m);
            mpfr_clear(n);
        }
    };
    thread_local Ints t;
    mpfr_set_si(t.m, p.m, MPFR_RNDN);
    mpfr_set_si(t.n, p.n, MPFR_RNDN);
    mpfr_fma(out.re().raw(), mu.re().raw(), t.m, t.n, MPFR_RNDN);
    mpfr_mul_si(out.im().raw(), mu.im().raw(), p.m, MPFR_RNDN);
}

} // namespace qtj
