#pragma once

#include <stdexcept>
#include <string>

namespace mginf {

// An iterative numeric routine could not meet its error contract. Carries the
// best estimate produced so far and the error believed to remain in it.
class numeric_error : public std::runtime_error {
public:
    numeric_error(const std::string& msg, double best_estimate, double error_estimate)
        : std::runtime_error(msg), best_(best_estimate), err_(error_estimate) {}

    double best_estimate() const noexcept { return best_; }
    double error_estimate() const noexcept { return err_; }

private:
    double best_;
    double err_;
};

// Parameters outside the admissible region (constraint-band violations,
// invalid ranges, preconditions).
class constraint_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Malformed command line or input file.
class usage_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace mginf
