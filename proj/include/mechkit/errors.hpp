#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace mechkit {

/// Malformed or out-of-range input (bad profile index, weight mismatch, unparsable value, ...).
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An enumeration guard tripped (profile product, SE-rule product, oracle domain size).
class CapacityError : public std::runtime_error {
public:
    CapacityError(std::string what, std::string quantity)
        : std::runtime_error(std::move(what)), quantity_(std::move(quantity)) {}

    /// The offending count, as a decimal string (may exceed 64 bits).
    const std::string& quantity() const { return quantity_; }

private:
    std::string quantity_;
};

/// A negative directed cycle lies on a source-to-target walk. For type graphs this
/// means the supplied option rule is neither welfare- nor affine-maximizing.
class NegativeCycleError : public std::runtime_error {
public:
    explicit NegativeCycleError(std::string what, std::optional<std::size_t> agent = std::nullopt)
        : std::runtime_error(std::move(what)), agent_(agent) {}

    std::optional<std::size_t> agent() const { return agent_; }

private:
    std::optional<std::size_t> agent_;
};

}  // namespace mechkit
