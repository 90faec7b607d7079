#pragma once

#include <stdexcept>
#include <string>

namespace xyz {

/// Bad or inconsistent input data (dimension mismatch, out-of-domain values,
/// malformed files). Maps to CLI exit code 3.
class data_error : public std::runtime_error {
public:
    explicit data_error(const std::string& what) : std::runtime_error(what) {}
};

/// A size/cost guard was exceeded without an explicit override. Exit code 4.
class guard_error : public std::runtime_error {
public:
    explicit guard_error(const std::string& what) : std::runtime_error(what) {}
};

/// An iterative solver failed to converge. Exit code 5.
class solver_error : public std::runtime_error {
public:
    explicit solver_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace xyz
