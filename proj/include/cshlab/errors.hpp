#pragma once

#include <stdexcept>
#include <string>

namespace cshlab {

/// Base of every error raised by the library. Carries the module and the
/// operation that raised it so command-line reports can name both.
class LabError : public std::runtime_error {
public:
    LabError(std::string module, std::string operation, const std::string& message);

    const std::string& module() const noexcept { return module_; }
    const std::string& operation() const noexcept { return operation_; }

private:
    std::string module_;
    std::string operation_;
};

/// Malformed or inconsistent input (graph files, configs, parameters).
class InputError : public LabError {
public:
    using LabError::LabError;
};

/// A numerical routine could not produce its result (singular solve,
/// overflow guard, iteration budget, mean obstruction).
class SolveError : public LabError {
public:
    using LabError::LabError;
};

/// A checked mathematical invariant did not hold.
class InvariantError : public LabError {
public:
    using LabError::LabError;
};

}  // namespace cshlab
