#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tvob {

using Int = mpz_class;
using Rat = mpq_class;
using RatVec = std::vector<Rat>;
using RatMat = std::vector<RatVec>;

/// Error carrying one of the stable error names used across the library
/// (e.g. "not-smooth", "schema-error"). `what()` holds the detail message.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& detail)
      : std::runtime_error(code + ": " + detail), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

Rat parse_rational(std::string_view text);
std::string to_string(const Rat& q);
std::string to_string(const RatVec& v);

Rat dot(const RatVec& a, const RatVec& b);
RatVec add(const RatVec& a, const RatVec& b);
RatVec sub(const RatVec& a, const RatVec& b);
RatVec scale(const RatVec& a, const Rat& s);
bool is_zero(const RatVec& v);
bool is_integral(const RatVec& v);
int sign(const Rat& q);

/// Positive multiple of `v` with coprime integer entries; zero stays zero.
RatVec primitive(const RatVec& v);

/// Smallest k >= 1 with k*v integral.
Int denominator_lcm(const RatVec& v);

Rat floor(const Rat& q);

}  // namespace tvob
