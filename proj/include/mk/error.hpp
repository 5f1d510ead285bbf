#pragma once

#include <stdexcept>
#include <string>

namespace mk {

/// Base class of every error thrown by the library. `code()` is a stable
/// identifier used by the CLI in its JSON error reports.
class Error : public std::runtime_error {
public:
  Error(std::string code, const std::string &what)
      : std::runtime_error(what), code_(std::move(code)) {}

  const std::string &code() const noexcept { return code_; }

private:
  std::string code_;
};

/// Budget exhaustion. Distinct from a negative answer: the computation was
/// inconclusive.
class BudgetError : public Error {
public:
  using Error::Error;
};

#define MK_DEFINE_ERROR(Name, Base)                                            \
  class Name : public Base {                                                   \
  public:                                                                      \
    explicit Name(const std::string &what) : Base(#Name, what) {}              \
  }

MK_DEFINE_ERROR(SignatureError, Error);
MK_DEFINE_ERROR(NotACongruence, Error);
MK_DEFINE_ERROR(InvalidAlgebra, Error);
MK_DEFINE_ERROR(DomainError, Error);
MK_DEFINE_ERROR(NotAHerd, Error);
MK_DEFINE_ERROR(EmptyTorsor, Error);
MK_DEFINE_ERROR(NotMaltsev, Error);
MK_DEFINE_ERROR(NotAbelian, Error);
MK_DEFINE_ERROR(ArityError, Error);
MK_DEFINE_ERROR(DiagramError, Error);
MK_DEFINE_ERROR(InvalidStructure, Error);
MK_DEFINE_ERROR(InternalError, Error);
MK_DEFINE_ERROR(CounterexampleBroken, Error);

MK_DEFINE_ERROR(CloneBudgetExceeded, BudgetError);
MK_DEFINE_ERROR(LatticeBudgetExceeded, BudgetError);
MK_DEFINE_ERROR(DerBudgetExceeded, BudgetError);
MK_DEFINE_ERROR(SearchBudgetExceeded, BudgetError);

#undef MK_DEFINE_ERROR

} // namespace mk
