#pragma once

#include <stdexcept>
#include <string>

namespace oriq {

// Error taxonomy. The CLI maps each class onto a stable exit code:
// InvalidArgument -> 1, IoError/FormatError -> 2, DegenerateData -> 3.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

class FormatError : public Error {
public:
    using Error::Error;
};

class DegenerateData : public Error {
public:
    using Error::Error;
};

}  // namespace oriq
