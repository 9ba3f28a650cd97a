#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace mlamatch {

/// Thrown when the adaptive spectral quadrature fails to reach its relative
/// tolerance within the node-doubling ceiling. Carries the last two
/// estimates so callers can judge how far off convergence was.
class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& msg,
                    std::complex<double> previous,
                    std::complex<double> last)
        : std::runtime_error(msg), previous_(previous), last_(last) {}

    std::complex<double> previous_estimate() const { return previous_; }
    std::complex<double> last_estimate() const { return last_; }

private:
    std::complex<double> previous_;
    std::complex<double> last_;
};

}  // namespace mlamatch
