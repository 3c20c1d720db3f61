#pragma once

// AB categories. Slashes use the argument-under-slash convention of the
// lexicon files: `B/A` seeks A to the right, `A\B` seeks A to the left; both
// yield B. Slashes associate to the left.

#include <cctype>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "incr/error.hpp"
#include "incr/sem_type.hpp"

namespace incr {

class Category {
 public:
  enum class Dir { Fwd, Bwd };

  static Category atom(std::string name) { return Category(std::move(name), Dir::Fwd, nullptr, nullptr); }
  static Category fwd(Category result, Category arg) { return slash(std::move(result), Dir::Fwd, std::move(arg)); }
  static Category bwd(Category result, Category arg) { return slash(std::move(result), Dir::Bwd, std::move(arg)); }
  static Category slash(Category result, Dir d, Category arg) {
    return Category("", d, std::make_shared<Category>(std::move(result)), std::make_shared<Category>(std::move(arg)));
  }

  bool is_atom() const { return result_ == nullptr; }
  bool is_atom(std::string_view n) const { return is_atom() && name_ == n; }
  const std::string& name() const { return name_; }
  Dir dir() const { return dir_; }
  const Category& result() const { return *result_; }
  const Category& arg() const { return *arg_; }

  /// Forward arguments in consumption order, and the category left after them.
  std::vector<Category> forward_args(Category* rest = nullptr) const {
    std::vector<Category> args;
    const Category* cur = this;
    while (!cur->is_atom() && cur->dir_ == Dir::Fwd) {
      args.push_back(cur->arg());
      cur = &cur->result();
    }
    if (rest) *rest = *cur;
    return args;
  }

  /// Homomorphic image: s -> t, np/pp -> e, n -> e->t, A/B and B\A -> typeof(B) -> typeof(A).
  SemType sem_type() const {
    if (is_atom()) {
      if (name_ == "s") return SemType::t();
      if (name_ == "n") return SemType::fn(SemType::e(), SemType::t());
      return SemType::e();
    }
    return SemType::fn(arg_->sem_type(), result_->sem_type());
  }

  std::string str() const {
    if (is_atom()) return name_;
    auto wrap = [](const Category& c) { return c.is_atom() ? c.str() : "(" + c.str() + ")"; };
    if (dir_ == Dir::Fwd) {
      // Left associativity lets a forward result print bare.
      std::string r = result_->is_atom() || result_->dir_ == Dir::Fwd ? result_->str() : wrap(*result_);
      return r + "/" + wrap(*arg_);
    }
    return wrap(*arg_) + "\\" + wrap(*result_);
  }

  friend bool operator==(const Category& a, const Category& b) {
    if (a.is_atom() != b.is_atom()) return false;
    if (a.is_atom()) return a.name_ == b.name_;
    return a.dir_ == b.dir_ && *a.result_ == *b.result_ && *a.arg_ == *b.arg_;
  }
  friend bool operator!=(const Category& a, const Category& b) { return !(a == b); }
  friend bool operator<(const Category& a, const Category& b) { return a.str() < b.str(); }

 private:
  Category(std::string n, Dir d, std::shared_ptr<const Category> r, std::shared_ptr<const Category> a)
      : name_(std::move(n)), dir_(d), result_(std::move(r)), arg_(std::move(a)) {}

  std::string name_;
  Dir dir_;
  std::shared_ptr<const Category> result_;
  std::shared_ptr<const Category> arg_;
};

namespace detail {

class CategoryReader {
 public:
  explicit CategoryReader(std::string_view s) : s_(s) {}

  Category read_all() {
    Category c = expr();
    skip();
    if (pos_ != s_.size()) throw SyntaxError("unexpected input in category", pos_);
    return c;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  // expr := primary { ("/" | "\") primary }, left associative.
  // For `a\b` the left operand is the argument.
  Category expr() {
    Category left = primary();
    for (;;) {
      skip();
      if (pos_ >= s_.size()) return left;
      char c = s_[pos_];
      if (c == '/') {
        ++pos_;
        left = Category::fwd(left, primary());
      } else if (c == '\\') {
        ++pos_;
        left = Category::bwd(primary(), left);
      } else {
        return left;
      }
    }
  }
  Category primary() {
    skip();
    if (pos_ < s_.size() && s_[pos_] == '(') {
      ++pos_;
      Category c = expr();
      skip();
      if (pos_ >= s_.size() || s_[pos_] != ')') throw SyntaxError("expected ')' in category", pos_);
      ++pos_;
      return c;
    }
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    std::string name(s_.substr(start, pos_ - start));
    if (name != "s" && name != "np" && name != "n" && name != "pp")
      throw SyntaxError("unknown category atom '" + name + "'", start);
    return Category::atom(name);
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Category parse_category(std::string_view text) { return detail::CategoryReader(text).read_all(); }

}  // namespace incr
