#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace spinob {

enum class ErrorCode {
  ZeroInput,
  InvalidField,
  NotAnExtension,
  NotInField,
  DimensionMismatch,
  DimensionTooLarge,
  DimensionTooSmall,
  IsotropicVector,
  NotAnIsometry,
  NotASimilitude,
  ImproperIsometry,
  ProperSimilitude,
  OddDimension,
  NoAnisotropicVector,
  AlgebraMismatch,
  NotInCliffordGroup,
  WrongParity,
  NotInU,
  UnsupportedField,
  SplitDiscriminant,
  SplitDiscriminantOverL,
  MalformedTower,
  InvalidConfig,
  // The remaining codes signal a broken internal invariant, never bad input.
  LiftFailure,
  NotScalar,
  InconsistentLift,
  MultiplierNotInBase,
  Hilbert90Failure,
  NotInImageOfI,
  AssertionFailure,
};

std::string_view error_code_name(ErrorCode code);

class MathError : public std::runtime_error {
 public:
  MathError(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  bool is_invariant_violation() const noexcept { return code_ >= ErrorCode::LiftFailure; }

 private:
  ErrorCode code_;
};

// Runtime check that must never be compiled out.
inline void ensure(bool ok, ErrorCode code, const std::string& what) {
  if (!ok) throw MathError(code, what);
}

}  // namespace spinob
