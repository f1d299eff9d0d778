#include "cshlab/errors.hpp"

namespace cshlab {

LabError::LabError(std::string module, std::string operation, const std::string& message)
    : std::runtime_error(module + "/" + operation + ": " + message),
      module_(std::move(module)),
      operation_(std::move(operation)) {}

}  // namespace cshlab
