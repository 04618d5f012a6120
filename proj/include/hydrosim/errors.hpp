#ifndef HYDROSIM_ERRORS_HPP
#define HYDROSIM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hydrosim {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A documented precondition of an operation was violated by the caller.
class PreconditionError : public Error {
public:
    explicit PreconditionError(const std::string& msg) : Error(msg) {}
};

// --- hydro_physics ---

class NegativeHeadError : public Error {
public:
    explicit NegativeHeadError(const std::string& msg) : Error(msg) {}
};

class UnitMismatchError : public Error {
public:
    explicit UnitMismatchError(const std::string& msg) : Error(msg) {}
};

class InvalidHeadError : public Error {
public:
    explicit InvalidHeadError(const std::string& msg) : Error(msg) {}
};

// --- river_network ---

class TopologyError : public Error {
public:
    explicit TopologyError(const std::string& msg) : Error(msg) {}
};

class StorageUnderflowError : public Error {
public:
    StorageUnderflowError(const std::string& node, int step, const std::string& msg)
        : Error(msg), node_id(node), step(step) {}
    std::string node_id;
    int step;
};

class OutOfTableError : public Error {
public:
    explicit OutOfTableError(const std::string& msg) : Error(msg) {}
};

// --- dynamics ---

class InfeasibleInitError : public Error {
public:
    explicit InfeasibleInitError(const std::string& msg) : Error(msg) {}
};

class NumericalDivergenceError : public Error {
public:
    explicit NumericalDivergenceError(const std::string& msg) : Error(msg) {}
};

// --- protection ---

class MissingEnvelopeError : public Error {
public:
    explicit MissingEnvelopeError(const std::string& msg) : Error(msg) {}
};

// --- scenario_io ---

class ParseError : public Error {
public:
    explicit ParseError(const std::string& msg) : Error(msg) {}
};

class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& msg) : Error(msg) {}
};

class MalformedRowError : public Error {
public:
    MalformedRowError(int row, const std::string& msg) : Error(msg), row(row) {}
    int row;
};

class EmptySeriesError : public Error {
public:
    explicit EmptySeriesError(const std::string& msg) : Error(msg) {}
};

} // namespace hydrosim

#endif
