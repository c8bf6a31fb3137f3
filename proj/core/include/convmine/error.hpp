#ifndef convmine_error_hpp
#define convmine_error_hpp

#include <stdexcept>
#include <string>

namespace convmine {

// Error categories map 1:1 onto CLI exit codes.
enum class ErrorKind {
    Usage = 1,  // bad flags, bad config, missing files
    Data  = 2,  // parse or mapping failures in inputs
    Model = 3,  // malformed or unusable reference models
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace convmine

#endif
