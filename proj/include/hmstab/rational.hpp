#pragma once

#include <gmpxx.h>

#include <Eigen/Core>

#include <stdexcept>
#include <string>
#include <vector>

namespace Eigen {

// Exact rational scalar for dense types (see the Eigen custom-scalar docs).
template <>
struct NumTraits<mpq_class> : GenericNumTraits<mpq_class> {
    typedef mpq_class Real;
    typedef mpq_class NonInteger;
    typedef mpq_class Nested;
    static inline Real epsilon() { return 0; }
    static inline Real dummy_precision() { return 0; }
    static inline int digits10() { return 0; }
    enum {
        IsInteger = 0,
        IsSigned = 1,
        IsComplex = 0,
        RequireInitialization = 1,
        ReadCost = 6,
        AddCost = 150,
        MulCost = 100
    };
};

}  // namespace Eigen

namespace hmstab {

using Rational = mpq_class;
using Integer = mpz_class;
using Int = long;

using RatMat = Eigen::Matrix<Rational, Eigen::Dynamic, Eigen::Dynamic>;
using RatVec = Eigen::Matrix<Rational, Eigen::Dynamic, 1>;

class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

inline Rational rat(long num, long den = 1) {
    if (den == 0) throw Error("rational with zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

inline Rational rat(const Integer& num, const Integer& den) {
    if (den == 0) throw Error("rational with zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

/// Parses "p/q" or "p" (optional sign, arbitrary precision).
Rational parse_rational(const std::string& text);

/// Formats as "p/q", or just "p" when the denominator is one.
std::string format_rational(const Rational& value);

inline bool is_integer(const Rational& value) { return value.get_den() == 1; }

/// Least common multiple of the denominators (the least common denominator).
Integer common_denominator(const std::vector<Rational>& values);

inline int sign(const Rational& value) { return sgn(value); }

}  // namespace hmstab
