///
/// \file types.hpp
///
/// Common scalar/matrix aliases and error types shared across the library.
///
#ifndef WLIDOA_TYPES_HPP
#define WLIDOA_TYPES_HPP

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace wlidoa {

using Complex       = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector    = Eigen::VectorXd;
using RealMatrix    = Eigen::MatrixXd;

/// Sample index set. Entries are 1-based positions into the virtual ULA,
/// strictly increasing.
using IndexSet = std::vector<int>;

constexpr double pi = 3.14159265358979323846;

/// Raised when a solver produces non-finite iterates.
class DivergenceError : public std::runtime_error {
public:
    explicit DivergenceError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when weight matrices are singular on the required support.
class DegenerateWeightsError : public std::runtime_error {
public:
    explicit DegenerateWeightsError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when a least-squares system is rank deficient (duplicate frequencies).
class IllConditionedError : public std::runtime_error {
public:
    explicit IllConditionedError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when a metric is undefined for the given input (e.g. zero ground truth).
class UndefinedMetricError : public std::runtime_error {
public:
    explicit UndefinedMetricError(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

inline void check(bool cond, const std::string& msg)
{
    if (!cond) {
        throw std::invalid_argument(msg);
    }
}

} // namespace detail

/// Validates that omega is a sorted, unique, 1-based subset of [n].
inline void validate_omega(const IndexSet& omega, int n)
{
    int prev = 0;
    for (int idx : omega) {
        detail::check(idx >= 1 && idx <= n, "invalid omega: index " + std::to_string(idx) +
                                                " out of range [1," + std::to_string(n) + "]");
        detail::check(idx > prev, "invalid omega: indices must be strictly increasing");
        prev = idx;
    }
}

} // namespace wlidoa

#endif // WLIDOA_TYPES_HPP
