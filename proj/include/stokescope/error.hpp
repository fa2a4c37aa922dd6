#pragma once

#include <stdexcept>
#include <string>

namespace stokescope
{

// All library failures derive from Error so callers can catch one type.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

class BranchPointCollision : public Error
{
public:
  using Error::Error;
};

class QuadratureError : public Error
{
public:
  QuadratureError(const std::string &what, double achieved)
    : Error(what), achieved_(achieved)
  {
  }
  double achieved() const { return achieved_; }

private:
  double achieved_;
};

class DegenerateConfiguration : public Error
{
public:
  using Error::Error;
};

class NoBracket : public Error
{
public:
  using Error::Error;
};

class ConvergenceError : public Error
{
public:
  using Error::Error;
};

class ConfigError : public Error
{
public:
  using Error::Error;
};

}  // namespace stokescope
