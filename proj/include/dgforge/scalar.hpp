#pragma once

#include <cstdint>
#include <string>
#include <variant>

#include <gmpxx.h>

namespace dgforge {

// The coefficient field: either Q or F_p with p < 2^31 prime.
class Field {
public:
    Field() = default;
    static Field rationals() { return Field(); }
    static Field prime(std::uint32_t p);

    bool is_rational() const { return p_ == 0; }
    std::uint32_t characteristic() const { return p_; }
    std::string name() const;

    friend bool operator==(Field a, Field b) { return a.p_ == b.p_; }
    friend bool operator!=(Field a, Field b) { return a.p_ != b.p_; }

private:
    explicit Field(std::uint32_t p) : p_(p) {}
    std::uint32_t p_ = 0;
};

bool is_prime(std::uint64_t n);

// Exact field element tagged with its field. Rationals are kept in lowest
// terms with positive denominator, residues in [0, p).
class Scalar {
public:
    Scalar() = default;
    Scalar(Field f, long value);
    Scalar(Field f, const mpq_class& value);

    static Scalar zero(Field f) { return Scalar(f, 0L); }
    static Scalar one(Field f) { return Scalar(f, 1L); }
    static Scalar ratio(Field f, long num, long den);
    // Parses "3", "-2", "1/2"; residues are reduced into the field.
    static Scalar parse(Field f, const std::string& text);

    Field field() const { return field_; }
    bool is_zero() const;
    bool is_one() const;

    // Only valid for prime fields / Q respectively.
    std::uint32_t residue() const { return std::get<std::uint32_t>(value_); }
    const mpq_class& rational() const { return std::get<mpq_class>(value_); }

    Scalar operator-() const;
    Scalar inverse() const;
    Scalar& operator+=(const Scalar& o);
    Scalar& operator-=(const Scalar& o);
    Scalar& operator*=(const Scalar& o);
    Scalar& operator/=(const Scalar& o);
    friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
    friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
    friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
    friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
    friend bool operator==(const Scalar& a, const Scalar& b);
    friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

    std::string to_string() const;

private:
    void check(const Scalar& o) const;
    Field field_;
    std::variant<std::uint32_t, mpq_class> value_{mpq_class(0)};
};

// (-1)^n as a field element.
Scalar sign(Field f, long n);

} // namespace dgforge
