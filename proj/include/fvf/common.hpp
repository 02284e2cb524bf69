#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>

namespace fvf {

using Int = std::int64_t;

// Immutable, shared, value-compared pointer. Lets recursive variants use
// defaulted comparisons while keeping copies cheap.
template <class T>
class Box {
 public:
  Box(T value) : ptr_(std::make_shared<const T>(std::move(value))) {}  // NOLINT implicit

  const T& operator*() const { return *ptr_; }
  const T* operator->() const { return ptr_.get(); }
  const T& get() const { return *ptr_; }

  friend bool operator==(const Box& a, const Box& b) {
    return a.ptr_ == b.ptr_ || *a.ptr_ == *b.ptr_;
  }
  friend std::strong_ordering operator<=>(const Box& a, const Box& b) {
    if (a.ptr_ == b.ptr_) return std::strong_ordering::equal;
    return *a.ptr_ <=> *b.ptr_;
  }

 private:
  std::shared_ptr<const T> ptr_;
};

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

// Raised when 64-bit arithmetic would wrap.
class ArithmeticOverflow : public std::runtime_error {
 public:
  ArithmeticOverflow() : std::runtime_error("integer overflow") {}
};

inline Int checked_add(Int a, Int b) {
  Int r;
  if (__builtin_add_overflow(a, b, &r)) throw ArithmeticOverflow();
  return r;
}
inline Int checked_sub(Int a, Int b) {
  Int r;
  if (__builtin_sub_overflow(a, b, &r)) throw ArithmeticOverflow();
  return r;
}
inline Int checked_mul(Int a, Int b) {
  Int r;
  if (__builtin_mul_overflow(a, b, &r)) throw ArithmeticOverflow();
  return r;
}

}  // namespace fvf
