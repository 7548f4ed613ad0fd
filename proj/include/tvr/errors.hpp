#pragma once

#include <stdexcept>
#include <string>

namespace tvr {

/// A series did not carry enough terms to determine a requested coefficient.
class TruncationError : public std::runtime_error {
public:
    TruncationError(const std::string& what, int required_order)
        : std::runtime_error(what), required_order_(required_order) {}
    /// Smallest truncation order that would have been sufficient, when known.
    int required_order() const { return required_order_; }

private:
    int required_order_;
};

/// An intersection-number query fell outside every configured source.
class ProviderGap : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace tvr
