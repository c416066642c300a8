#ifndef BOHM_ERRORS_HPP
#define BOHM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace bohm {

// Error taxonomy shared by the whole library.  Each class maps 1:1 onto a
// bq_status code at the C boundary (see bohmpair.h).
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class DomainError : public Error {
public:
  explicit DomainError(const std::string& msg) : Error(msg) {}
};

// Configuration sits on a node of the guiding wave: phase and momenta undefined.
class NodeError : public Error {
public:
  explicit NodeError(const std::string& msg) : Error(msg) {}
};

// |sin alpha| below the pole threshold: Euler-angle chart degenerate.
class PoleError : public Error {
public:
  explicit PoleError(const std::string& msg) : Error(msg) {}
};

class EmptyEnsembleError : public Error {
public:
  explicit EmptyEnsembleError(const std::string& msg) : Error(msg) {}
};

class EnvelopeViolationError : public Error {
public:
  explicit EnvelopeViolationError(const std::string& msg) : Error(msg) {}
};

class StencilError : public Error {
public:
  explicit StencilError(const std::string& msg) : Error(msg) {}
};

class DegenerateProjectionError : public Error {
public:
  explicit DegenerateProjectionError(const std::string& msg) : Error(msg) {}
};

class IllConditionedExtractionError : public Error {
public:
  explicit IllConditionedExtractionError(const std::string& msg) : Error(msg) {}
};

class RegimeError : public Error {
public:
  explicit RegimeError(const std::string& msg) : Error(msg) {}
};

class ResolutionError : public Error {
public:
  explicit ResolutionError(const std::string& msg) : Error(msg) {}
};

class ClippedMassError : public Error {
public:
  explicit ClippedMassError(const std::string& msg) : Error(msg) {}
};

class StepUnderflowError : public Error {
public:
  explicit StepUnderflowError(const std::string& msg) : Error(msg) {}
};

class IoError : public Error {
public:
  explicit IoError(const std::string& msg) : Error(msg) {}
};

} // namespace bohm

#endif
