#pragma once

#include <stdexcept>
#include <string>

namespace quadsim {

// Exit-code contract shared by the CLI: configuration/validation problems
// map to 1, numerical failures during a run map to 2.
class Error : public std::runtime_error {
public:
    Error(const std::string& msg, int exit_code)
        : std::runtime_error(msg), exit_code_(exit_code) {}
    int exit_code() const noexcept { return exit_code_; }

private:
    int exit_code_;
};

class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& msg) : Error(msg, 1) {}
};

class ParseError : public Error {
public:
    explicit ParseError(const std::string& msg) : Error(msg, 1) {}
};

class UnknownPresetError : public Error {
public:
    explicit UnknownPresetError(const std::string& msg) : Error(msg, 1) {}
};

class MismatchedScenarioError : public Error {
public:
    explicit MismatchedScenarioError(const std::string& msg) : Error(msg, 1) {}
};

class WindowTooShortError : public Error {
public:
    explicit WindowTooShortError(const std::string& msg) : Error(msg, 1) {}
};

class MissingDataError : public Error {
public:
    explicit MissingDataError(const std::string& msg) : Error(msg, 1) {}
};

// Rotation-rate kinematics lose rank as |cos(theta)| -> 0.
class GimbalLockError : public Error {
public:
    explicit GimbalLockError(const std::string& msg) : Error(msg, 2) {}
};

class SingularInertiaError : public Error {
public:
    explicit SingularInertiaError(const std::string& msg) : Error(msg, 2) {}
};

class NumericalBlowupError : public Error {
public:
    explicit NumericalBlowupError(const std::string& msg) : Error(msg, 2) {}
};

// Orientation left the admissible envelope (|roll|,|pitch| < pi/2, |yaw| <= pi).
class AngleLimitError : public Error {
public:
    explicit AngleLimitError(const std::string& msg) : Error(msg, 2) {}
};

}  // namespace quadsim
