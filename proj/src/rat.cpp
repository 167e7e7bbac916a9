#include "bdiv/rat.hpp"

#include <cctype>
#include <ostream>

#include "bdiv/errors.hpp"

namespace bdiv {

Rat::Rat(long num, long den) {
    if (den == 0) throw InputError("rational with zero denominator");
    v_ = mpq_class(num, den);
    v_.canonicalize();
}

Rat& Rat::operator/=(const Rat& o) {
    if (o.is_zero()) throw InputError("division by zero rational");
    v_ /= o.v_;
    return *this;
}

Rat Rat::parse(std::string_view text) {
    size_t b = 0, e = text.size();
    while (b < e && std::isspace(static_cast<unsigned char>(text[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1]))) --e;
    std::string_view s = text.substr(b, e - b);
    if (s.empty()) throw InputError("empty rational literal");

    auto is_digits = [](std::string_view p) {
        if (p.empty()) return false;
        for (char c : p)
            if (!std::isdigit(static_cast<unsigned char>(c))) return false;
        return true;
    };

    std::string_view body = s;
    bool neg = false;
    if (body.front() == '-') {
        neg = true;
        body.remove_prefix(1);
    }
    std::string_view num = body, den = "1";
    if (auto slash = body.find('/'); slash != std::string_view::npos) {
        num = body.substr(0, slash);
        den = body.substr(slash + 1);
    }
    if (!is_digits(num) || !is_digits(den))
        throw InputError("malformed rational literal '" + std::string(s) + "'");

    mpq_class v(std::string(num) + "/" + std::string(den));
    if (v.get_den() == 0) throw InputError("rational with zero denominator: '" + std::string(s) + "'");
    v.canonicalize();
    if (neg) v = -v;
    return Rat(v);
}

std::string Rat::str() const {
    if (v_.get_den() == 1) return v_.get_num().get_str();
    return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

std::ostream& operator<<(std::ostream& os, const Rat& r) { return os << r.str(); }

}  // namespace bdiv
