// Copyright 2026 The mrisk Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <string>

namespace mrisk {

/// Real number extended by tagged +inf and -inf.
///
/// Infinite values never travel as IEEE infinities inside the library; the
/// tag is the source of truth and `value` is zero for infinite states.
class ExtReal {
 public:
  enum class Kind { Finite, PosInf, NegInf };

  constexpr ExtReal() = default;
  constexpr ExtReal(double v) : kind_(Kind::Finite), value_(v) {}  // NOLINT implicit by design

  static constexpr ExtReal pos_inf() { return ExtReal(Kind::PosInf); }
  static constexpr ExtReal neg_inf() { return ExtReal(Kind::NegInf); }
  /// Maps IEEE infinities onto tags.
  static ExtReal from_double(double v) {
    if (std::isinf(v)) return v > 0 ? pos_inf() : neg_inf();
    return ExtReal(v);
  }

  constexpr Kind kind() const { return kind_; }
  constexpr bool finite() const { return kind_ == Kind::Finite; }
  constexpr bool is_pos_inf() const { return kind_ == Kind::PosInf; }
  constexpr bool is_neg_inf() const { return kind_ == Kind::NegInf; }
  /// Finite value; throws NotFinite if infinite.
  double value() const;
  /// IEEE view, for printing only.
  double to_double() const;

  ExtReal operator-() const;
  /// Throws NotFinite on inf - inf.
  friend ExtReal operator+(const ExtReal& a, const ExtReal& b);
  friend ExtReal operator-(const ExtReal& a, const ExtReal& b) { return a + (-b); }
  /// Scaling by a finite real; 0 * inf = 0.
  friend ExtReal operator*(double c, const ExtReal& a);

  friend bool operator<(const ExtReal& a, const ExtReal& b);
  friend bool operator>(const ExtReal& a, const ExtReal& b) { return b < a; }
  friend bool operator<=(const ExtReal& a, const ExtReal& b) { return !(b < a); }
  friend bool operator>=(const ExtReal& a, const ExtReal& b) { return !(a < b); }
  friend bool operator==(const ExtReal& a, const ExtReal& b);

  std::string str() const;

 private:
  constexpr explicit ExtReal(Kind k) : kind_(k), value_(0.0) {}
  Kind kind_ = Kind::Finite;
  double value_ = 0.0;
};

ExtReal max(const ExtReal& a, const ExtReal& b);
ExtReal min(const ExtReal& a, const ExtReal& b);

/// |a - b| <= tol for finite values; equal tags for infinite ones.
bool near(const ExtReal& a, const ExtReal& b, double tol);

/// 17 significant digits, `inf` / `-inf` literals.
std::string format_number(double v);
std::string format_number(const ExtReal& v);

}  // namespace mrisk
