#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace catdb {

/// Base class for every error raised by the engine.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A name (type, instance, column, key, object, arrow) that is not declared.
class UnknownNameError : public Error {
public:
    using Error::Error;
};

/// A finite map that is partial on its declared domain or escapes its codomain.
class TotalityError : public Error {
public:
    using Error::Error;
};

/// Source and target of a composite or of a limit leg do not line up.
class BoundaryMismatchError : public Error {
public:
    using Error::Error;
};

/// Bounded exhaustive search was asked to go past its hard cap.
class SizeCapError : public Error {
public:
    using Error::Error;
};

class NotUnifiedError : public Error {
public:
    using Error::Error;
};

/// An invariant of the engine itself failed. Never caused by user input.
class InternalError : public Error {
public:
    using Error::Error;
};

/// Collects every violation found by a checker. An empty report means valid.
struct ValidationReport {
    std::vector<std::string> issues;

    bool ok() const { return issues.empty(); }
    explicit operator bool() const { return ok(); }

    void add(std::string issue) { issues.push_back(std::move(issue)); }
    void merge(const ValidationReport& other, const std::string& prefix = {});
    std::string str() const;
};

/// Raised when a constructor rejects its input; carries the itemized report.
class ValidationError : public Error {
public:
    explicit ValidationError(ValidationReport report);
    ValidationError(const std::string& what, ValidationReport report);

    const ValidationReport& report() const { return report_; }

private:
    ValidationReport report_;
};

}  // namespace catdb
