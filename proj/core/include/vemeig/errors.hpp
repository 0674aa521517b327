#pragma once

#include <stdexcept>
#include <string>

namespace vemeig {

/// Invalid user-supplied parameter (degree out of range, bad level, ...).
class ParameterError : public std::invalid_argument {
public:
  explicit ParameterError(const std::string& what) : std::invalid_argument(what) {}
};

/// A mesh file or generated mesh violates a structural invariant.
class MeshError : public std::runtime_error {
public:
  explicit MeshError(const std::string& what) : std::runtime_error(what) {}
};

/// Degenerate polygon handed to the geometry kernel.
class GeometryError : public std::runtime_error {
public:
  explicit GeometryError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical breakdown: lost coercivity, indefinite mass matrix, capacity limits.
class NumericalError : public std::runtime_error {
public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace vemeig
