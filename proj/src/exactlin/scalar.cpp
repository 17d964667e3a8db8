#include "dgforge/scalar.hpp"

#include "dgforge/error.hpp"

namespace dgforge {

bool is_prime(std::uint64_t n)
{
    if (n < 2)
        return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0)
            return false;
    return true;
}

Field Field::prime(std::uint32_t p)
{
    if (p >= (1u << 31) || !is_prime(p))
        throw Error("field characteristic must be a prime below 2^31, got " + std::to_string(p));
    return Field(p);
}

std::string Field::name() const
{
    return is_rational() ? "Q" : "F_" + std::to_string(p_);
}

namespace {

std::uint32_t reduce(long v, std::uint32_t p)
{
    long r = v % static_cast<long>(p);
    if (r < 0)
        r += p;
    return static_cast<std::uint32_t>(r);
}

std::uint32_t reduce(const mpz_class& v, std::uint32_t p)
{
    mpz_class r = v % p;
    if (r < 0)
        r += p;
    return static_cast<std::uint32_t>(r.get_ui());
}

std::uint32_t inv_mod(std::uint32_t a, std::uint32_t p)
{
    // Fermat; p is prime.
    std::uint64_t result = 1, base = a, e = p - 2;
    while (e) {
        if (e & 1)
            result = result * base % p;
        base = base * base % p;
        e >>= 1;
    }
    return static_cast<std::uint32_t>(result);
}

} // namespace

Scalar::Scalar(Field f, long value) : field_(f)
{
    if (f.is_rational())
        value_ = mpq_class(value);
    else
        value_ = reduce(value, f.characteristic());
}

Scalar::Scalar(Field f, const mpq_class& value) : field_(f)
{
    if (f.is_rational()) {
        mpq_class v = value;
        v.canonicalize();
        value_ = v;
    } else {
        std::uint32_t p = f.characteristic();
        std::uint32_t den = reduce(value.get_den(), p);
        if (den == 0)
            throw Error("denominator vanishes in " + f.name());
        std::uint64_t num = reduce(value.get_num(), p);
        value_ = static_cast<std::uint32_t>(num * inv_mod(den, p) % p);
    }
}

Scalar Scalar::ratio(Field f, long num, long den)
{
    if (den == 0)
        throw Error("zero denominator");
    return Scalar(f, mpq_class(num, den));
}

Scalar Scalar::parse(Field f, const std::string& text)
{
    mpq_class q;
    if (q.set_str(text, 10) != 0)
        throw Error("not a number: " + text);
    if (q.get_den() == 0)
        throw Error("zero denominator: " + text);
    return Scalar(f, q);
}

bool Scalar::is_zero() const
{
    if (field_.is_rational())
        return std::get<mpq_class>(value_) == 0;
    return std::get<std::uint32_t>(value_) == 0;
}

bool Scalar::is_one() const
{
    if (field_.is_rational())
        return std::get<mpq_class>(value_) == 1;
    return std::get<std::uint32_t>(value_) == 1;
}

void Scalar::check(const Scalar& o) const
{
    if (field_ != o.field_)
        throw FieldMismatch(field_.name() + " vs " + o.field_.name());
}

Scalar Scalar::operator-() const
{
    Scalar r = *this;
    if (field_.is_rational()) {
        r.value_ = mpq_class(-std::get<mpq_class>(value_));
    } else {
        std::uint32_t v = std::get<std::uint32_t>(value_);
        r.value_ = v == 0 ? 0u : field_.characteristic() - v;
    }
    return r;
}

Scalar Scalar::inverse() const
{
    if (is_zero())
        throw Error("division by zero");
    Scalar r = *this;
    if (field_.is_rational())
        r.value_ = mpq_class(1 / std::get<mpq_class>(value_));
    else
        r.value_ = inv_mod(std::get<std::uint32_t>(value_), field_.characteristic());
    return r;
}

Scalar& Scalar::operator+=(const Scalar& o)
{
    check(o);
    if (field_.is_rational()) {
        std::get<mpq_class>(value_) += std::get<mpq_class>(o.value_);
    } else {
        std::uint64_t s = std::uint64_t(std::get<std::uint32_t>(value_)) + std::get<std::uint32_t>(o.value_);
        value_ = static_cast<std::uint32_t>(s % field_.characteristic());
    }
    return *this;
}

Scalar& Scalar::operator-=(const Scalar& o)
{
    return *this += -o;
}

Scalar& Scalar::operator*=(const Scalar& o)
{
    check(o);
    if (field_.is_rational()) {
        std::get<mpq_class>(value_) *= std::get<mpq_class>(o.value_);
    } else {
        std::uint64_t s = std::uint64_t(std::get<std::uint32_t>(value_)) * std::get<std::uint32_t>(o.value_);
        value_ = static_cast<std::uint32_t>(s % field_.characteristic());
    }
    return *this;
}

Scalar& Scalar::operator/=(const Scalar& o)
{
    check(o);
    return *this *= o.inverse();
}

bool operator==(const Scalar& a, const Scalar& b)
{
    if (a.field_ != b.field_)
        return false;
    if (a.field_.is_rational())
        return std::get<mpq_class>(a.value_) == std::get<mpq_class>(b.value_);
    return std::get<std::uint32_t>(a.value_) == std::get<std::uint32_t>(b.value_);
}

std::string Scalar::to_string() const
{
    if (field_.is_rational())
        return std::get<mpq_class>(value_).get_str();
    return std::to_string(std::get<std::uint32_t>(value_));
}

Scalar sign(Field f, long n)
{
    return Scalar(f, (n % 2 == 0) ? 1L : -1L);
}

} // namespace dgforge
