#pragma once

#include <stdexcept>
#include <string>

namespace gmsel {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Root finder: the target is not attained on [0, inf).
class NoSolutionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Root finder: no bracket found within the doubling limit.
class DivergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An exhaustive search would visit more models than allowed.
class BudgetExceeded : public std::runtime_error {
public:
    BudgetExceeded(unsigned long long count, unsigned long long budget)
        : std::runtime_error("collection has " + std::to_string(count) +
                             " models, search budget is " + std::to_string(budget)),
          count_(count), budget_(budget) {}
    unsigned long long count() const noexcept { return count_; }
    unsigned long long budget() const noexcept { return budget_; }

private:
    unsigned long long count_;
    unsigned long long budget_;
};

/// Malformed input file; carries the 1-based line number.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace gmsel
