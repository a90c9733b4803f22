#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace mechkit {

/// Exact rational scalar. All valuations, payments, welfare sums and budgets are
/// Values; no floating point is involved in any comparison. Stored in lowest terms
/// with a positive denominator.
class Value {
public:
    using Rational = boost::multiprecision::cpp_rational;
    using Integer = boost::multiprecision::cpp_int;

    Value() = default;
    Value(int n) : v_(n) {}
    Value(long long n) : v_(n) {}
    Value(long long num, long long den);
    explicit Value(Rational r) : v_(std::move(r)) {}

    /// Parses "p", "-p" or "p/q" (q > 0 after normalization). Throws InputError otherwise.
    static Value parse(std::string_view text);

    /// Canonical text form: "p" when integral, "p/q" otherwise. parse(str()) round-trips.
    std::string str() const;

    Integer numerator() const { return boost::multiprecision::numerator(v_); }
    Integer denominator() const { return boost::multiprecision::denominator(v_); }
    bool is_integer() const { return denominator() == 1; }
    bool is_zero() const { return v_.is_zero(); }
    int sign() const { return v_.sign(); }

    /// Presentation only; never used in mechanism comparisons.
    double to_double() const { return static_cast<double>(v_); }

    const Rational& raw() const { return v_; }

    Value& operator+=(const Value& o) { v_ += o.v_; return *this; }
    Value& operator-=(const Value& o) { v_ -= o.v_; return *this; }
    Value& operator*=(const Value& o) { v_ *= o.v_; return *this; }
    Value& operator/=(const Value& o);

    friend Value operator+(Value a, const Value& b) { a += b; return a; }
    friend Value operator-(Value a, const Value& b) { a -= b; return a; }
    friend Value operator*(Value a, const Value& b) { a *= b; return a; }
    friend Value operator/(Value a, const Value& b) { a /= b; return a; }
    friend Value operator-(const Value& a) { return Value(Value::Rational(-a.v_)); }

    friend bool operator==(const Value& a, const Value& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Value& a, const Value& b) { return a.v_ != b.v_; }
    friend bool operator<(const Value& a, const Value& b) { return a.v_ < b.v_; }
    friend bool operator<=(const Value& a, const Value& b) { return a.v_ <= b.v_; }
    friend bool operator>(const Value& a, const Value& b) { return a.v_ > b.v_; }
    friend bool operator>=(const Value& a, const Value& b) { return a.v_ >= b.v_; }

    friend std::ostream& operator<<(std::ostream& os, const Value& v);

private:
    Rational v_;
};

inline Value abs(const Value& v) { return v.sign() < 0 ? -v : v; }
inline const Value& min(const Value& a, const Value& b) { return b < a ? b : a; }
inline const Value& max(const Value& a, const Value& b) { return a < b ? b : a; }

}  // namespace mechkit
