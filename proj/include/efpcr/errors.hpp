#pragma once

#include <stdexcept>
#include <string>

namespace efpcr {

/// Base of every error thrown by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class InvalidGridError : public Error
{
public:
    using Error::Error;
};

class GridMismatchError : public Error
{
public:
    GridMismatchError() : Error("functions are sampled on different grids") {}
    using Error::Error;
};

class InvalidWarpError : public Error
{
public:
    using Error::Error;
};

/// exp_map called with a tangent vector of norm >= pi.
class InjectivityRadiusError : public Error
{
public:
    using Error::Error;
};

/// inv_exp_map between (numerically) antipodal points.
class UndefinedLogError : public Error
{
public:
    using Error::Error;
};

class ConvergenceError : public Error
{
public:
    ConvergenceError(const std::string& what, int iterations)
        : Error(what), iterations_(iterations)
    {}

    int iterations() const noexcept { return iterations_; }

private:
    int iterations_;
};

class ParameterError : public Error
{
public:
    using Error::Error;
};

class DimensionError : public Error
{
public:
    using Error::Error;
};

/// Design matrix is rank deficient.
class RankError : public Error
{
public:
    RankError(const std::string& what, long n_components)
        : Error(what), n_components_(n_components)
    {}

    long n_components() const noexcept { return n_components_; }

private:
    long n_components_;
};

class DegenerateLabelsError : public Error
{
public:
    using Error::Error;
};

class StratificationError : public Error
{
public:
    using Error::Error;
};

class ParseError : public Error
{
public:
    ParseError(const std::string& path, std::size_t line, std::size_t column, const std::string& msg)
        : Error(path + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
          line_(line), column_(column)
    {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

class IoError : public Error
{
public:
    using Error::Error;
};

} // namespace efpcr
