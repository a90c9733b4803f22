#include "mechkit/value.hpp"

#include "mechkit/errors.hpp"

#include <cctype>
#include <ostream>

namespace mechkit {

namespace {

bool is_decimal_integer(std::string_view s) {
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
    if (s.empty()) return false;
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

}  // namespace

Value::Value(long long num, long long den) {
    if (den == 0) throw InputError("rational denominator must be nonzero");
    v_ = Rational(Integer(num), Integer(den));
}

Value Value::parse(std::string_view text) {
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) {
        if (!is_decimal_integer(text))
            throw InputError("cannot parse rational from '" + std::string(text) + "'");
        return Value(Rational(Integer(std::string(text))));
    }
    const auto num = text.substr(0, slash);
    const auto den = text.substr(slash + 1);
    if (!is_decimal_integer(num) || !is_decimal_integer(den))
        throw InputError("cannot parse rational from '" + std::string(text) + "'");
    Integer d{std::string(den)};
    if (d == 0) throw InputError("rational denominator must be nonzero: '" + std::string(text) + "'");
    return Value(Rational(Integer(std::string(num)), d));
}

std::string Value::str() const {
    if (is_integer()) return numerator().str();
    return numerator().str() + "/" + denominator().str();
}

Value& Value::operator/=(const Value& o) {
    if (o.is_zero()) throw InputError("division by zero");
    v_ /= o.v_;
    return *this;
}

std::ostream& operator<<(std::ostream& os, const Value& v) { return os << v.str(); }

}  // namespace mechkit
