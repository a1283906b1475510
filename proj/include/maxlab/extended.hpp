#pragma once

#include <stdexcept>
#include <utility>

#include "maxlab/rational.hpp"

namespace maxlab {

// [0, ∞]-valued quantity (measures of intervals). Finite values are exact.
class ExtendedNonneg {
 public:
  ExtendedNonneg() : value_(0) {}
  // implicit on purpose: measure arithmetic mixes rationals in freely
  ExtendedNonneg(Rational v) : value_(std::move(v)) {
    if (value_ < 0) throw std::invalid_argument("ExtendedNonneg: negative value");
  }
  static ExtendedNonneg infinity() {
    ExtendedNonneg e;
    e.infinite_ = true;
    return e;
  }

  bool is_infinite() const { return infinite_; }
  bool is_zero() const { return !infinite_ && value_ == 0; }
  const Rational& value() const {
    if (infinite_) throw std::logic_error("ExtendedNonneg: value() on infinity");
    return value_;
  }

  ExtendedNonneg& operator+=(const ExtendedNonneg& o) {
    if (o.infinite_) infinite_ = true;
    if (!infinite_) value_ += o.value_;
    return *this;
  }
  friend ExtendedNonneg operator+(ExtendedNonneg a, const ExtendedNonneg& b) { return a += b; }

  friend bool operator==(const ExtendedNonneg& a, const ExtendedNonneg& b) {
    if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
    return a.value_ == b.value_;
  }
  friend bool operator<(const ExtendedNonneg& a, const ExtendedNonneg& b) {
    if (a.infinite_) return false;
    if (b.infinite_) return true;
    return a.value_ < b.value_;
  }
  friend bool operator<=(const ExtendedNonneg& a, const ExtendedNonneg& b) { return a < b || a == b; }
  friend bool operator!=(const ExtendedNonneg& a, const ExtendedNonneg& b) { return !(a == b); }
  friend bool operator>(const ExtendedNonneg& a, const ExtendedNonneg& b) { return b < a; }
  friend bool operator>=(const ExtendedNonneg& a, const ExtendedNonneg& b) { return b <= a; }

 private:
  bool infinite_ = false;
  Rational value_;
};

}  // namespace maxlab
