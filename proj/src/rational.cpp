#include "chargebounds/rational.hpp"

namespace chargebounds {

bool rational_from_string(const std::string& text, Rational& out) {
    const std::size_t slash = text.find('/');
    try {
        if (slash == std::string::npos) {
            out = Rational(BigInt(text));
            return true;
        }
        const BigInt num(text.substr(0, slash));
        const BigInt den(text.substr(slash + 1));
        if (den == 0) return false;
        out = Rational(num, den);
        out.canonicalize();
        return true;
    } catch (const std::invalid_argument&) {
        return false;
    }
}

} // namespace chargebounds
