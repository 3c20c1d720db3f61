#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

namespace incr {

/// Simple type over the atoms e and t. Immutable; copies share structure.
class SemType {
 public:
  enum class Kind { E, T, Fn };

  static SemType e() { return SemType(Kind::E, nullptr, nullptr); }
  static SemType t() { return SemType(Kind::T, nullptr, nullptr); }
  static SemType fn(SemType arg, SemType result) {
    return SemType(Kind::Fn, std::make_shared<SemType>(std::move(arg)),
                   std::make_shared<SemType>(std::move(result)));
  }
  /// a1 -> a2 -> ... -> result
  static SemType chain(const std::vector<SemType>& args, SemType result) {
    for (auto it = args.rbegin(); it != args.rend(); ++it) result = fn(*it, result);
    return result;
  }

  Kind kind() const { return kind_; }
  bool is_fn() const { return kind_ == Kind::Fn; }
  const SemType& arg() const { return *arg_; }
  const SemType& result() const { return *result_; }

  /// Argument types up to the final atom.
  std::vector<SemType> args() const {
    std::vector<SemType> out;
    const SemType* cur = this;
    while (cur->is_fn()) {
      out.push_back(cur->arg());
      cur = &cur->result();
    }
    return out;
  }
  const SemType& final_result() const {
    const SemType* cur = this;
    while (cur->is_fn()) cur = &cur->result();
    return *cur;
  }

  std::size_t size() const { return is_fn() ? 1 + arg_->size() + result_->size() : 1; }

  std::string str() const {
    switch (kind_) {
      case Kind::E: return "e";
      case Kind::T: return "t";
      case Kind::Fn: {
        std::string a = arg_->str();
        if (arg_->is_fn()) a = "(" + a + ")";
        return a + "->" + result_->str();
      }
    }
    return "?";
  }

  friend bool operator==(const SemType& a, const SemType& b) {
    if (a.kind_ != b.kind_) return false;
    if (a.kind_ != Kind::Fn) return true;
    return *a.arg_ == *b.arg_ && *a.result_ == *b.result_;
  }
  friend bool operator!=(const SemType& a, const SemType& b) { return !(a == b); }

 private:
  SemType(Kind k, std::shared_ptr<const SemType> a, std::shared_ptr<const SemType> r)
      : kind_(k), arg_(std::move(a)), result_(std::move(r)) {}

  Kind kind_;
  std::shared_ptr<const SemType> arg_;
  std::shared_ptr<const SemType> result_;
};

}  // namespace incr
