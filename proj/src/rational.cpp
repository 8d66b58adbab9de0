#include "hmstab/rational.hpp"

namespace hmstab {

Rational parse_rational(const std::string& text) {
    if (text.empty()) throw Error("empty rational literal");
    const auto slash = text.find('/');
    try {
        if (slash == std::string::npos) {
            Rational q(Integer(text), 1);
            q.canonicalize();
            return q;
        }
        Integer num(text.substr(0, slash));
        Integer den(text.substr(slash + 1));
        if (den == 0) throw Error("rational literal with zero denominator: " + text);
        Rational q(num, den);
        q.canonicalize();
        return q;
    } catch (const std::invalid_argument&) {
        throw Error("malformed rational literal: " + text);
    }
}

std::string format_rational(const Rational& value) {
    if (value.get_den() == 1) return value.get_num().get_str();
    return value.get_num().get_str() + "/" + value.get_den().get_str();
}

Integer common_denominator(const std::vector<Rational>& values) {
    Integer lcm = 1;
    for (const auto& v : values) {
        Integer den = v.get_den();
        mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), den.get_mpz_t());
    }
    return lcm;
}

}  // namespace hmstab
