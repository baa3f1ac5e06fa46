#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace ainf {

/// Coefficient field: a prime field F_p or the rationals.
class Field {
public:
    static Field rationals() { return Field(0); }
    /// Throws std::invalid_argument unless p is prime.
    static Field prime(std::uint32_t p);
    /// Accepts "rational", "Q", or a prime number.
    static Field parse(std::string_view text);

    bool is_rational() const { return p_ == 0; }
    std::uint32_t characteristic() const { return p_; }
    std::string name() const;

    friend bool operator==(Field a, Field b) { return a.p_ == b.p_; }

private:
    explicit Field(std::uint32_t p) : p_(p) {}
    std::uint32_t p_;
};

bool is_prime(std::uint64_t n);

/// Exact field element. Representations are canonical: residues in [0, p) and
/// reduced fractions with positive denominator, so equality is structural.
class Scalar {
public:
    explicit Scalar(Field f) : field_(f) {
        if (f.is_rational()) q_.emplace(0);
    }
    Scalar(Field f, long value);
    Scalar(Field f, long num, long den);
    Scalar(Field f, const mpq_class& q);

    static Scalar zero(Field f) { return Scalar(f); }
    static Scalar one(Field f) { return Scalar(f, 1); }
    static Scalar sign(Field f, bool negative) { return Scalar(f, negative ? -1 : 1); }
    /// Parses "3", "-2", "7/4". In F_p the fraction is interpreted as num * den^{-1}.
    static Scalar parse(Field f, std::string_view text);

    Field field() const { return field_; }
    bool is_zero() const;
    bool is_one() const;

    Scalar operator-() const;
    Scalar& operator+=(const Scalar& o);
    Scalar& operator-=(const Scalar& o);
    Scalar& operator*=(const Scalar& o);
    Scalar& operator/=(const Scalar& o);
    friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
    friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
    friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
    friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
    /// Throws std::domain_error on zero.
    Scalar inverse() const;

    friend bool operator==(const Scalar& a, const Scalar& b);

    /// Residue in [0, p) (modular fields only).
    std::int64_t residue() const { return r_; }
    /// Exact value as a rational (for F_p: the residue).
    mpq_class to_rational() const;
    double to_double() const;
    /// Modular values print as signed representatives in (-p/2, p/2].
    std::string to_string() const;

private:
    void check_same(const Scalar& o) const;

    Field field_;
    std::int64_t r_ = 0;
    std::optional<mpq_class> q_;
};

}  // namespace ainf
