#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace incr {

/// Base class for every error raised by the interpretation pipeline.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& what, std::size_t pos)
      : Error(what + " at position " + std::to_string(pos)), pos_(pos) {}
  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

class TypeError : public Error {
 public:
  using Error::Error;
};

/// Raised by line-oriented loaders (lexicon, world files).
class LoadError : public Error {
 public:
  LoadError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class UnknownWord : public Error {
 public:
  UnknownWord(std::string word, std::vector<std::string> suggestions)
      : Error("unknown word '" + word + "'"),
        word_(std::move(word)),
        suggestions_(std::move(suggestions)) {}
  const std::string& word() const { return word_; }
  const std::vector<std::string>& suggestions() const { return suggestions_; }

 private:
  std::string word_;
  std::vector<std::string> suggestions_;
};

/// No hypothesis survived a word: syntactic failure, distinct from blocking.
class DeadEnd : public Error {
 public:
  using Error::Error;
};

/// A word was fed to a session whose readings are all implausible.
class SessionBlocked : public Error {
 public:
  using Error::Error;
};

class NothingToUndo : public Error {
 public:
  NothingToUndo() : Error("nothing to undo") {}
};

class UnsupportedArgument : public Error {
 public:
  using Error::Error;
};

class SignatureTooLarge : public Error {
 public:
  using Error::Error;
};

class UnknownSource : public Error {
 public:
  using Error::Error;
};

class UnboundVariable : public Error {
 public:
  using Error::Error;
};

class UnknownSymbol : public Error {
 public:
  using Error::Error;
};

class InconsistentPreference : public Error {
 public:
  using Error::Error;
};

}  // namespace incr
