#ifndef OMRING_ERRORS_HPP
#define OMRING_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace omring
{

// Base class for every error raised by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// Parameters or configuration violate a documented invariant.
class InvalidParameters : public Error
{
public:
    using Error::Error;
};

// The pump steady state cannot be computed (singular 2x2 system or a
// self-consistent detuning that does not converge).
class PumpSolveError : public Error
{
public:
    using Error::Error;
};

// The linearized dynamics has an eigenvalue with non-positive real part.
class UnstableModel : public Error
{
public:
    UnstableModel(const std::string &what, double margin)
        : Error(what), margin_(margin)
    {
    }
    double margin() const { return margin_; }

private:
    double margin_;
};

// Numerical failure: ill-conditioned solve, quadrature that misses its
// tolerance, zero denominators in closed forms, undefined phases.
class NumericalError : public Error
{
public:
    using Error::Error;
};

class SingularSystem : public NumericalError
{
public:
    SingularSystem(const std::string &what, double condition)
        : NumericalError(what), condition_(condition)
    {
    }
    double condition() const { return condition_; }

private:
    double condition_;
};

class QuadratureError : public NumericalError
{
public:
    QuadratureError(const std::string &what, double achieved)
        : NumericalError(what), achieved_(achieved)
    {
    }
    double achieved_tolerance() const { return achieved_; }

private:
    double achieved_;
};

} // namespace omring

#endif
