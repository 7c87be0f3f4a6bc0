#include "hptbv/scalar.hpp"
#include "hptbv/sign.hpp"

#include <cctype>

namespace hptbv {

namespace {

bool valid_integer(const std::string& s) {
    std::size_t i = 0;
    if (i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

std::string strip_plus(const std::string& s) {
    return (!s.empty() && s[0] == '+') ? s.substr(1) : s;
}

}  // namespace

Scalar parse_scalar(const std::string& text) {
    std::string t;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) t.push_back(c);
    auto slash = t.find('/');
    std::string num = slash == std::string::npos ? t : t.substr(0, slash);
    std::string den = slash == std::string::npos ? "1" : t.substr(slash + 1);
    if (!valid_integer(num) || !valid_integer(den))
        throw InputError("malformed scalar '" + text + "'");
    mpz_class n(strip_plus(num)), d(strip_plus(den));
    if (d == 0) throw InputError("zero denominator in '" + text + "'");
    Scalar r(n, d);
    r.canonicalize();
    return r;
}

std::string format_scalar(const Scalar& s) {
    if (s.get_den() == 1) return s.get_num().get_str();
    return s.get_num().get_str() + "/" + s.get_den().get_str();
}

int koszul_sign(const std::vector<int>& parities, const std::vector<int>& order) {
    int sign = 1;
    for (std::size_t i = 0; i < order.size(); ++i)
        for (std::size_t j = i + 1; j < order.size(); ++j)
            if (order[i] > order[j] && (parities[order[i]] & 1) && (parities[order[j]] & 1))
                sign = -sign;
    return sign;
}

int permutation_sign(const std::vector<int>& order) {
    int sign = 1;
    for (std::size_t i = 0; i < order.size(); ++i)
        for (std::size_t j = i + 1; j < order.size(); ++j)
            if (order[i] > order[j]) sign = -sign;
    return sign;
}

}  // namespace hptbv
