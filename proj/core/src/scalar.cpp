#include "polyimage/scalar.hpp"

#include "polyimage/errors.hpp"

#include <cctype>
#include <sstream>

namespace polyimage {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

mpz_class parse_integer(std::string_view s, std::string_view whole) {
    std::string_view body = s;
    bool neg = false;
    if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
        neg = body.front() == '-';
        body.remove_prefix(1);
    }
    if (!all_digits(body)) throw ValidationError("malformed rational literal '" + std::string(whole) + "'");
    mpz_class z(std::string(body), 10);
    return neg ? mpz_class(-z) : z;
}

}  // namespace

Scalar parse_scalar(std::string_view text) {
    std::string_view s = text;
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    if (s.empty()) throw ValidationError("empty rational literal");

    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        mpz_class num = parse_integer(s.substr(0, slash), text);
        std::string_view den_text = s.substr(slash + 1);
        if (!all_digits(den_text)) throw ValidationError("malformed rational literal '" + std::string(text) + "'");
        mpz_class den(std::string(den_text), 10);
        if (den == 0) throw ValidationError("zero denominator in '" + std::string(text) + "'");
        Scalar q(num, den);
        q.canonicalize();
        return q;
    }
    if (auto dot_pos = s.find('.'); dot_pos != std::string_view::npos) {
        // Decimal literal: exact conversion, 0.25 -> 1/4.
        std::string_view int_part = s.substr(0, dot_pos);
        std::string_view frac_part = s.substr(dot_pos + 1);
        bool neg = !int_part.empty() && int_part.front() == '-';
        if (!int_part.empty() && (int_part.front() == '-' || int_part.front() == '+')) int_part.remove_prefix(1);
        if ((int_part.empty() && frac_part.empty()) || (!int_part.empty() && !all_digits(int_part)) ||
            (!frac_part.empty() && !all_digits(frac_part)))
            throw ValidationError("malformed rational literal '" + std::string(text) + "'");
        mpz_class num(std::string(int_part.empty() ? "0" : int_part) + std::string(frac_part), 10);
        mpz_class den;
        mpz_ui_pow_ui(den.get_mpz_t(), 10, frac_part.size());
        Scalar q(neg ? mpz_class(-num) : num, den);
        q.canonicalize();
        return q;
    }
    return Scalar(parse_integer(s, text));
}

std::string format_scalar(const Scalar& value) {
    Scalar q = value;
    q.canonicalize();
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Vec parse_point(std::string_view csv) {
    Vec out;
    std::size_t start = 0;
    while (start <= csv.size()) {
        auto comma = csv.find(',', start);
        auto piece = csv.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
        out.push_back(parse_scalar(piece));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

std::string format_point(const Vec& v) {
    std::ostringstream os;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) os << ',';
        os << format_scalar(v[i]);
    }
    return os.str();
}

Scalar dot(const Vec& a, const Vec& b) {
    Scalar s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

Scalar norm_sq(const Vec& a) { return dot(a, a); }

bool is_zero(const Vec& a) {
    for (const auto& x : a)
        if (x != 0) return false;
    return true;
}

std::vector<double> to_double(const Vec& v) {
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i].get_d();
    return out;
}

}  // namespace polyimage
