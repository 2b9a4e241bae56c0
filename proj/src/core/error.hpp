// Copyright 2026 The fdtdmor Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef FDTDMOR_CORE_ERROR_HPP
#define FDTDMOR_CORE_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fdtdmor
{

enum class ErrorCode
{
  Config,
  InvalidGrid,
  InvalidParameter,
  Stamp,
  Divergence,
  SingularOperator,
  SolverFailure,
  DegenerateSource,
  Aliasing,
  InvariantViolation,
  DegenerateReference,
  Comparison,
  Io,
};

class Error : public std::runtime_error
{
public:
  Error(ErrorCode code, const std::string &what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

// Schema or value problem in a scenario document. The path names the offending field,
// e.g. "reduction.order".
class ConfigError : public Error
{
public:
  ConfigError(std::string path, const std::string &what)
    : Error(ErrorCode::Config, path.empty() ? what : path + ": " + what), path_(std::move(path))
  {
  }
  const std::string &path() const noexcept { return path_; }

private:
  std::string path_;
};

class DivergenceError : public Error
{
public:
  DivergenceError(std::string engine, std::size_t step)
    : Error(ErrorCode::Divergence,
            engine + " time stepping diverged at step " + std::to_string(step)),
      engine_(std::move(engine)), step_(step)
  {
  }
  const std::string &engine() const noexcept { return engine_; }
  std::size_t step() const noexcept { return step_; }

private:
  std::string engine_;
  std::size_t step_;
};

class SolverFailure : public Error
{
public:
  SolverFailure(double residual, std::size_t iterations)
    : Error(ErrorCode::SolverFailure,
            "iterative solver did not converge after " + std::to_string(iterations) +
                " iterations (normalized residual " + std::to_string(residual) + ")"),
      residual_(residual)
  {
  }
  double residual() const noexcept { return residual_; }

private:
  double residual_;
};

}  // namespace fdtdmor

#endif  // FDTDMOR_CORE_ERROR_HPP
