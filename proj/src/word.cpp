#include "betarec/word.hpp"

#include <cctype>

#include "betarec/error.hpp"

namespace betarec {

Word::Word(std::initializer_list<int> digits) {
  d_.reserve(digits.size());
  for (int d : digits) {
    if (d < 0 || d > 255) throw Error(ErrorKind::InvalidArgument, "digit out of range");
    d_.push_back(static_cast<Digit>(d));
  }
}

Word Word::slice(std::size_t begin, std::size_t length) const {
  if (begin + length > d_.size()) {
    throw Error(ErrorKind::InvalidArgument, "slice out of range");
  }
  return Word(std::vector<Digit>(d_.begin() + begin, d_.begin() + begin + length));
}

Word Word::power(std::size_t k) const {
  Word out;
  out.d_.reserve(d_.size() * k);
  for (std::size_t i = 0; i < k; ++i) out.append(*this);
  return out;
}

Word Word::rotate(std::size_t i) const {
  const std::size_t n = d_.size();
  if (n == 0) return *this;
  i %= n;
  Word out;
  out.d_.reserve(n);
  out.d_.insert(out.d_.end(), d_.end() - i, d_.end());
  out.d_.insert(out.d_.end(), d_.begin(), d_.end() - i);
  return out;
}

std::size_t Word::digit_sum() const {
  std::size_t s = 0;
  for (Digit d : d_) s += d;
  return s;
}

std::string Word::to_string() const {
  std::string s;
  for (std::size_t i = 0; i < d_.size(); ++i) {
    if (i) s.push_back(',');
    s += std::to_string(d_[i]);
  }
  return s;
}

Word Word::parse(const std::string& text) {
  Word out;
  bool has_sep = text.find_first_of(", ") != std::string::npos;
  if (!has_sep) {
    for (char c : text) {
      if (!std::isdigit(static_cast<unsigned char>(c))) {
        throw Error(ErrorKind::Parse, "bad digit in word '" + text + "'");
      }
      out.d_.push_back(static_cast<Digit>(c - '0'));
    }
    return out;
  }
  std::string cur;
  auto flush = [&]() {
    if (cur.empty()) return;
    int v = 0;
    for (char c : cur) {
      if (!std::isdigit(static_cast<unsigned char>(c))) {
        throw Error(ErrorKind::Parse, "bad digit in word '" + text + "'");
      }
      v = v * 10 + (c - '0');
      if (v > 255) throw Error(ErrorKind::Parse, "digit too large in word '" + text + "'");
    }
    out.d_.push_back(static_cast<Digit>(v));
    cur.clear();
  };
  for (char c : text) {
    if (c == ',' || c == ' ') {
      flush();
    } else {
      cur.push_back(c);
    }
  }
  flush();
  return out;
}

Word concat(const Word& a, const Word& b) {
  Word out = a;
  out.append(b);
  return out;
}

}  // namespace betarec
