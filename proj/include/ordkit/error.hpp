#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ordkit {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad text/JSON, unknown labels, cyclic cover lists.
class InputError : public Error {
 public:
  using Error::Error;
};

class ParseError : public InputError {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : InputError(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class UnknownLabel : public InputError {
 public:
  explicit UnknownLabel(const std::string& label)
      : InputError("unknown label '" + label + "'"), label_(label) {}
  const std::string& label() const noexcept { return label_; }

 private:
  std::string label_;
};

class CycleError : public InputError {
 public:
  CycleError(const std::string& a, const std::string& b)
      : InputError("order relation has a cycle through '" + a + "' and '" + b + "'") {}
};

/// A mathematical precondition or theorem hypothesis does not hold. Carries
/// a short identifier and the witnessing elements (as labels).
class MathError : public Error {
 public:
  MathError(std::string kind, const std::string& what, std::vector<std::string> witness = {})
      : Error(what), kind_(std::move(kind)), witness_(std::move(witness)) {}
  const std::string& kind() const noexcept { return kind_; }
  const std::vector<std::string>& witness() const noexcept { return witness_; }

 private:
  std::string kind_;
  std::vector<std::string> witness_;
};

#define ORDKIT_MATH_ERROR(Name)                                                        \
  class Name : public MathError {                                                      \
   public:                                                                             \
    explicit Name(const std::string& what, std::vector<std::string> witness = {})      \
        : MathError(#Name, what, std::move(witness)) {}                                \
  }

ORDKIT_MATH_ERROR(PreconditionError);
ORDKIT_MATH_ERROR(SizeCapExceeded);
ORDKIT_MATH_ERROR(NotConvex);
ORDKIT_MATH_ERROR(NotCongruence);
ORDKIT_MATH_ERROR(NotStronglySecPc);
ORDKIT_MATH_ERROR(ClassWithoutGreatest);
ORDKIT_MATH_ERROR(InvalidFamily);
ORDKIT_MATH_ERROR(HypothesisViolated);
ORDKIT_MATH_ERROR(UnknownPredicate);

#undef ORDKIT_MATH_ERROR

/// One of the groupoid axioms (i)..(v) fails for the given tuple.
class AxiomViolation : public MathError {
 public:
  AxiomViolation(std::string axiom, std::vector<std::string> witness)
      : MathError("AxiomViolation", "groupoid axiom (" + axiom + ") fails", std::move(witness)),
        axiom_(std::move(axiom)) {}
  const std::string& axiom() const noexcept { return axiom_; }

 private:
  std::string axiom_;
};

/// A DM-yoked condition (y1)..(y8) fails on a constructed family.
class YokedConditionFailed : public MathError {
 public:
  YokedConditionFailed(std::string condition, const std::string& detail,
                       std::vector<std::string> witness = {})
      : MathError("YokedConditionFailed", "(" + condition + ") " + detail, std::move(witness)),
        condition_(std::move(condition)) {}
  const std::string& condition() const noexcept { return condition_; }

 private:
  std::string condition_;
};

}  // namespace ordkit
