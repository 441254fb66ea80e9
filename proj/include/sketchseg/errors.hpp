#pragma once

#include <stdexcept>
#include <string>

namespace sseg {

// Error taxonomy shared across the library. Each maps to one failure
// condition named in the operation contracts; the CLI translates them
// to exit codes.

struct FileNotFound : std::runtime_error {
    explicit FileNotFound(const std::string& path)
        : std::runtime_error("file not found: " + path) {}
};

struct UnsupportedFormat : std::runtime_error {
    explicit UnsupportedFormat(const std::string& what)
        : std::runtime_error("unsupported format: " + what) {}
};

struct IoError : std::runtime_error {
    explicit IoError(const std::string& what)
        : std::runtime_error("i/o error: " + what) {}
};

struct InvalidBlockSize : std::invalid_argument {
    explicit InvalidBlockSize(const std::string& what)
        : std::invalid_argument("invalid block size: " + what) {}
};

struct DomainError : std::domain_error {
    explicit DomainError(const std::string& what)
        : std::domain_error(what) {}
};

struct DegenerateComponent : std::invalid_argument {
    explicit DegenerateComponent(const std::string& what)
        : std::invalid_argument("degenerate component: " + what) {}
};

struct EmptySketch : std::runtime_error {
    explicit EmptySketch(const std::string& what)
        : std::runtime_error("empty sketch: " + what) {}
};

// Dimension disagreement between paired tensors/rasters.
struct DimMismatch : std::invalid_argument {
    explicit DimMismatch(const std::string& what)
        : std::invalid_argument("dimension mismatch: " + what) {}
};
using DimensionMismatch = DimMismatch;

struct ZeroNormRow : std::invalid_argument {
    explicit ZeroNormRow(const std::string& what)
        : std::invalid_argument("zero-norm row: " + what) {}
};

struct NonFiniteCost : std::invalid_argument {
    explicit NonFiniteCost(const std::string& what)
        : std::invalid_argument("non-finite cost: " + what) {}
};

struct UnsupportedInstance : std::invalid_argument {
    explicit UnsupportedInstance(const std::string& what)
        : std::invalid_argument("unsupported instance: " + what) {}
};

struct EmptyInput : std::invalid_argument {
    explicit EmptyInput(const std::string& what)
        : std::invalid_argument("empty input: " + what) {}
};

struct DegenerateInput : std::invalid_argument {
    explicit DegenerateInput(const std::string& what)
        : std::invalid_argument("degenerate input: " + what) {}
};

}  // namespace sseg
