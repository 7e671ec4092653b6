#ifndef TRANSLAB_ERROR_HPP
#define TRANSLAB_ERROR_HPP

#include <stdexcept>
#include <string>

namespace translab {

enum class ErrorCode {
  BadParameter,
  NonConvex,
  ResolutionTooCoarse,
  OutOfDomain,
  NotContracting,
  InverseDomain,
  StepTooLarge,
  BlowUp,
  MaskMismatch,
  GridMismatch,
  NewtonStalled,
  LinearSolveSingular,
  NotConvexData,
  NoConvergence,
  NotInStrip,
  SubSolveFailed,
  NoBarrierFound,
  UsageError,
  ParseError,
  IoError,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const { return code_; }

private:
  ErrorCode code_;
};

}  // namespace translab

#endif
