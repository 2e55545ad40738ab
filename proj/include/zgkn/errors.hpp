#pragma once

#include <stdexcept>
#include <string>

namespace zgkn {

// The ring locus is not part of the manifold; any evaluation there is a
// contract violation, reported as an explicit error rather than a NaN.
class RingPointError : public std::domain_error {
public:
    explicit RingPointError(const std::string& where)
        : std::domain_error("evaluation on the ring singularity: " + where) {}
};

class CoincidentPointsError : public std::domain_error {
public:
    CoincidentPointsError()
        : std::domain_error("field point coincides with the point source") {}
};

class ZeroSpinorError : public std::domain_error {
public:
    ZeroSpinorError() : std::domain_error("zero spinor has no polar decomposition") {}
};

class PoleEvaluationError : public std::domain_error {
public:
    explicit PoleEvaluationError(double theta)
        : std::domain_error("angular right-hand side evaluated at a pole, theta=" +
                            std::to_string(theta)) {}
};

// |E| >= m: no spectral gap, only continuous spectrum.
class NoGapError : public std::domain_error {
public:
    NoGapError(double E, double m)
        : std::domain_error("no gap for |E| >= m (E=" + std::to_string(E) +
                            ", m=" + std::to_string(m) + ")") {}
};

class InvalidQuantumNumbersError : public std::invalid_argument {
public:
    explicit InvalidQuantumNumbersError(const std::string& what)
        : std::invalid_argument(what) {}
};

class NoRootInBracketError : public std::runtime_error {
public:
    explicit NoRootInBracketError(const std::string& what) : std::runtime_error(what) {}
};

class StiffnessFailureError : public std::runtime_error {
public:
    StiffnessFailureError(const std::string& what, double location)
        : std::runtime_error(what + " at x=" + std::to_string(location)),
          where(location) {}
    double where;
};

class GridMismatchError : public std::invalid_argument {
public:
    explicit GridMismatchError(const std::string& what) : std::invalid_argument(what) {}
};

class AsymmetricGridError : public std::invalid_argument {
public:
    explicit AsymmetricGridError(const std::string& what) : std::invalid_argument(what) {}
};

class OutOfGridError : public std::domain_error {
public:
    explicit OutOfGridError(const std::string& what) : std::domain_error(what) {}
};

class ZeroDensityError : public std::runtime_error {
public:
    explicit ZeroDensityError(const std::string& what) : std::runtime_error(what) {}
};

class QuadratureDivergenceError : public std::runtime_error {
public:
    explicit QuadratureDivergenceError(const std::string& what)
        : std::runtime_error(what) {}
};

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace zgkn
