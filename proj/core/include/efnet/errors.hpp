#pragma once

#include <stdexcept>
#include <string>

namespace efnet {

/// Base for every error raised by the library. `kind()` is a short stable
/// token ("format", "build", ...) the CLI prints so failures can be grepped.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

// Malformed container or file (bad magic, truncation, dims).
struct FormatError : Error {
    explicit FormatError(const std::string& what) : Error("format", what) {}
};

// Well-formed container holding out-of-range values.
struct DataError : Error {
    explicit DataError(const std::string& what) : Error("data", what) {}
};

struct LookupError : Error {
    explicit LookupError(const std::string& what) : Error("lookup", what) {}
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& what) : Error("config", what) {}
};

struct BuildError : Error {
    explicit BuildError(const std::string& what) : Error("build", what) {}
};

struct InputError : Error {
    explicit InputError(const std::string& what) : Error("input", what) {}
};

struct SelectionError : Error {
    explicit SelectionError(const std::string& what) : Error("selection", what) {}
};

struct IoError : Error {
    explicit IoError(const std::string& what) : Error("io", what) {}
};

}  // namespace efnet
