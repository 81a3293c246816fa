#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace betarec {

using Digit = std::uint8_t;

/// Finite digit sequence. Positions are 0-based in code; index i holds the
/// (i+1)-th digit.
class Word {
 public:
  Word() = default;
  Word(std::initializer_list<int> digits);
  explicit Word(std::vector<Digit> digits) : d_(std::move(digits)) {}
  Word(std::size_t count, Digit value) : d_(count, value) {}

  std::size_t size() const { return d_.size(); }
  bool empty() const { return d_.empty(); }
  Digit operator[](std::size_t i) const { return d_[i]; }
  Digit& operator[](std::size_t i) { return d_[i]; }
  const std::vector<Digit>& digits() const { return d_; }
  std::vector<Digit>& digits() { return d_; }
  auto begin() const { return d_.begin(); }
  auto end() const { return d_.end(); }

  void push_back(Digit d) { d_.push_back(d); }
  void append(const Word& w) { d_.insert(d_.end(), w.d_.begin(), w.d_.end()); }
  Word slice(std::size_t begin, std::size_t length) const;
  Word prefix(std::size_t length) const { return slice(0, length); }
  /// w repeated k times.
  Word power(std::size_t k) const;
  /// Cyclic right rotation by i: (w_{n-i+1}, ..., w_n, w_1, ..., w_{n-i}).
  Word rotate(std::size_t i) const;
  std::size_t digit_sum() const;

  /// Comma-separated digits, e.g. "1,0,1".
  std::string to_string() const;
  /// Accepts "1,0,1", "1 0 1" or "101" (single-digit alphabet only for the last form).
  static Word parse(const std::string& text);

  friend bool operator==(const Word&, const Word&) = default;
  friend auto operator<=>(const Word& a, const Word& b) { return a.d_ <=> b.d_; }

 private:
  std::vector<Digit> d_;
};

Word concat(const Word& a, const Word& b);

}  // namespace betarec
