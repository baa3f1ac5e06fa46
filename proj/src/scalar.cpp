#include "ainf/scalar.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace ainf {

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t k = 2; k * k <= n; ++k)
        if (n % k == 0) return false;
    return true;
}

Field Field::prime(std::uint32_t p) {
    // residues are multiplied in 64 bits
    if (!is_prime(p) || p > (1u << 31))
        throw std::invalid_argument("field characteristic " + std::to_string(p) + " is not a supported prime");
    return Field(p);
}

Field Field::parse(std::string_view text) {
    if (text == "rational" || text == "Q" || text == "rationals") return rationals();
    std::uint32_t p = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), p);
    if (ec != std::errc() || ptr != text.data() + text.size())
        throw std::invalid_argument("unrecognised field '" + std::string(text) + "'");
    return prime(p);
}

std::string Field::name() const { return is_rational() ? "Q" : "F_" + std::to_string(p_); }

namespace {

std::int64_t reduce(std::int64_t v, std::int64_t p) {
    v %= p;
    return v < 0 ? v + p : v;
}

std::int64_t pow_mod(std::int64_t base, std::int64_t exp, std::int64_t p) {
    std::int64_t result = 1;
    base = reduce(base, p);
    while (exp > 0) {
        if (exp & 1) result = result * base % p;
        base = base * base % p;
        exp >>= 1;
    }
    return result;
}

}  // namespace

Scalar::Scalar(Field f, long value) : field_(f) {
    if (f.is_rational())
        q_.emplace(value);
    else
        r_ = reduce(value, f.characteristic());
}

Scalar::Scalar(Field f, long num, long den) : field_(f) {
    if (den == 0) throw std::domain_error("zero denominator");
    if (f.is_rational()) {
        q_.emplace(num, den);
        q_->canonicalize();
    } else {
        const std::int64_t p = f.characteristic();
        const std::int64_t d = reduce(den, p);
        if (d == 0) throw std::domain_error("denominator vanishes in " + f.name());
        r_ = reduce(num, p) * pow_mod(d, p - 2, p) % p;
    }
}

Scalar::Scalar(Field f, const mpq_class& q) : field_(f) {
    if (f.is_rational()) {
        q_.emplace(q);
        q_->canonicalize();
        return;
    }
    const std::int64_t p = f.characteristic();
    mpz_class num = q.get_num() % p, den = q.get_den() % p;
    std::int64_t n = reduce(num.get_si(), p), d = reduce(den.get_si(), p);
    if (d == 0) throw std::domain_error("denominator vanishes in " + f.name());
    r_ = n * pow_mod(d, p - 2, p) % p;
}

Scalar Scalar::parse(Field f, std::string_view text) {
    auto parse_int = [&](std::string_view s) {
        if (!s.empty() && s.front() == '+') s.remove_prefix(1);
        const std::size_t digits = !s.empty() && s.front() == '-' ? 1 : 0;
        if (s.size() == digits || s.find_first_not_of("0123456789", digits) != std::string_view::npos)
            throw std::invalid_argument("bad coefficient '" + std::string(text) + "'");
        return mpz_class(std::string(s));
    };
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) return Scalar(f, mpq_class(parse_int(text)));
    const mpz_class num = parse_int(text.substr(0, slash)), den = parse_int(text.substr(slash + 1));
    if (den == 0) throw std::domain_error("zero denominator in '" + std::string(text) + "'");
    return Scalar(f, mpq_class(num, den));
}

bool Scalar::is_zero() const { return field_.is_rational() ? sgn(*q_) == 0 : r_ == 0; }

bool Scalar::is_one() const { return field_.is_rational() ? *q_ == 1 : r_ == 1; }

void Scalar::check_same(const Scalar& o) const {
    if (!(field_ == o.field_))
        throw std::invalid_argument("mixed fields " + field_.name() + " and " + o.field_.name());
}

Scalar Scalar::operator-() const {
    Scalar out(*this);
    if (field_.is_rational())
        *out.q_ = -*q_;
    else if (r_ != 0)
        out.r_ = field_.characteristic() - r_;
    return out;
}

Scalar& Scalar::operator+=(const Scalar& o) {
    check_same(o);
    if (field_.is_rational()) {
        *q_ += *o.q_;
    } else {
        r_ += o.r_;
        if (r_ >= field_.characteristic()) r_ -= field_.characteristic();
    }
    return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
    check_same(o);
    if (field_.is_rational()) {
        *q_ -= *o.q_;
    } else {
        r_ -= o.r_;
        if (r_ < 0) r_ += field_.characteristic();
    }
    return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
    check_same(o);
    if (field_.is_rational())
        *q_ *= *o.q_;
    else
        r_ = r_ * o.r_ % field_.characteristic();
    return *this;
}

Scalar& Scalar::operator/=(const Scalar& o) { return *this *= o.inverse(); }

Scalar Scalar::inverse() const {
    if (is_zero()) throw std::domain_error("inverse of zero");
    Scalar out(*this);
    if (field_.is_rational())
        *out.q_ = 1 / *q_;
    else
        out.r_ = pow_mod(r_, field_.characteristic() - 2, field_.characteristic());
    return out;
}

bool operator==(const Scalar& a, const Scalar& b) {
    if (!(a.field_ == b.field_)) return false;
    return a.field_.is_rational() ? *a.q_ == *b.q_ : a.r_ == b.r_;
}

mpq_class Scalar::to_rational() const { return field_.is_rational() ? *q_ : mpq_class(r_); }

double Scalar::to_double() const { return field_.is_rational() ? q_->get_d() : static_cast<double>(r_); }

std::string Scalar::to_string() const {
    if (field_.is_rational()) return q_->get_str();
    const std::int64_t p = field_.characteristic();
    const std::int64_t v = r_ > p / 2 ? r_ - p : r_;
    return std::to_string(v);
}

}  // namespace ainf
