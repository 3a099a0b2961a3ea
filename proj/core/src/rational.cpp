#include "g2gauge/rational.hpp"

#include <cctype>

namespace g2gauge {

Rational Rational::parse(std::string_view text) {
    auto bad = [&] { throw Error("malformed rational: '" + std::string(text) + "'"); };
    if (text.empty()) bad();
    std::size_t slash = text.find('/');
    auto parse_int = [&](std::string_view part, bool allow_sign) -> BigInt {
        if (part.empty()) bad();
        std::size_t start = 0;
        if (allow_sign && (part[0] == '-' || part[0] == '+')) start = 1;
        if (start == part.size()) bad();
        for (std::size_t k = start; k < part.size(); ++k)
            if (!std::isdigit(static_cast<unsigned char>(part[k]))) bad();
        return BigInt(std::string(part));
    };
    if (slash == std::string_view::npos) return Rational(parse_int(text, true));
    BigInt num = parse_int(text.substr(0, slash), true);
    BigInt den = parse_int(text.substr(slash + 1), false);
    if (den == 0) bad();
    return Rational(std::move(num), std::move(den));
}

std::string Rational::str() const {
    std::string out = numerator().str();
    if (!is_integer()) out += "/" + denominator().str();
    return out;
}

std::string GaussianRational::str() const {
    if (im.is_zero()) return re.str();
    std::string imag = (abs(im) == Rational(1)) ? "i" : abs(im).str() + "*i";
    if (re.is_zero()) return (im.sign() < 0 ? "-" : "") + imag;
    return re.str() + (im.sign() < 0 ? " - " : " + ") + imag;
}

}  // namespace g2gauge
