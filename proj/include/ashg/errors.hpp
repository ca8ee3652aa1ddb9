#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ashg {

/// Base class for all errors raised by this library.
class error : public std::runtime_error {
public:
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed or out-of-range input (bad agent id, invalid partition, ...).
class input_error : public error {
public:
    explicit input_error(const std::string& what) : error(what) {}
};

/// A caller violated a documented precondition.
class contract_error : public error {
public:
    explicit contract_error(const std::string& what) : error(what) {}
};

/// A valuation fell outside the set permitted by the game's class tag.
class class_violation_error : public contract_error {
public:
    explicit class_violation_error(const std::string& what) : contract_error(what) {}
};

/// A configurable resource guard (visited-set cap, size cap) tripped.
class resource_error : public error {
public:
    resource_error(const std::string& what, std::size_t partial_count)
        : error(what), partial_count_(partial_count) {}

    /// How much work completed before the guard tripped.
    std::size_t partial_count() const { return partial_count_; }

private:
    std::size_t partial_count_;
};

}  // namespace ashg
