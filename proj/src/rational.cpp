#include "tvob/rational.hpp"

#include <cctype>

namespace tvob {

Rat parse_rational(std::string_view text) {
  std::string s(text);
  auto bad = [&] { return Error("schema-error", "not an exact rational: '" + s + "'"); };
  if (s.empty()) throw bad();
  size_t i = 0;
  if (s[0] == '-' || s[0] == '+') i = 1;
  bool seen_digit = false, seen_slash = false;
  for (size_t k = i; k < s.size(); ++k) {
    char c = s[k];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      seen_digit = true;
    } else if (c == '/' && !seen_slash && seen_digit && k + 1 < s.size()) {
      seen_slash = true;
      seen_digit = false;
    } else {
      throw bad();
    }
  }
  if (!seen_digit) throw bad();
  Rat q;
  if (s[0] == '+') s.erase(0, 1);
  if (q.set_str(s, 10) != 0) throw bad();
  if (q.get_den() == 0) throw bad();
  q.canonicalize();
  return q;
}

std::string to_string(const Rat& q) { return q.get_str(); }

std::string to_string(const RatVec& v) {
  std::string out = "(";
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += v[i].get_str();
  }
  return out + ")";
}

Rat dot(const RatVec& a, const RatVec& b) {
  Rat s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

RatVec add(const RatVec& a, const RatVec& b) {
  RatVec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

RatVec sub(const RatVec& a, const RatVec& b) {
  RatVec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

RatVec scale(const RatVec& a, const Rat& s) {
  RatVec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] * s;
  return r;
}

bool is_zero(const RatVec& v) {
  for (const auto& x : v)
    if (x != 0) return false;
  return true;
}

bool is_integral(const RatVec& v) {
  for (const auto& x : v)
    if (x.get_den() != 1) return false;
  return true;
}

int sign(const Rat& q) { return sgn(q); }

Int denominator_lcm(const RatVec& v) {
  Int l = 1;
  for (const auto& x : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den().get_mpz_t());
  return l;
}

RatVec primitive(const RatVec& v) {
  if (is_zero(v)) return v;
  Int l = denominator_lcm(v);
  Int g = 0;
  std::vector<Int> ints(v.size());
  for (size_t i = 0; i < v.size(); ++i) {
    Rat t = v[i] * l;
    ints[i] = t.get_num();
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), ints[i].get_mpz_t());
  }
  RatVec r(v.size());
  for (size_t i = 0; i < v.size(); ++i) r[i] = Rat(ints[i] / g);
  return r;
}

Rat floor(const Rat& q) {
  Int f;
  mpz_fdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return Rat(f);
}

}  // namespace tvob
