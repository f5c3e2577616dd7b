#ifndef CARTIER_ERROR_HPP
#define CARTIER_ERROR_HPP

#include <stdexcept>
#include <string>

namespace cartier
{

// Base class for every error raised by the toolkit on invalid input or on a
// computation that cannot be completed (as opposed to programming errors).
class domain_error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class parse_error : public domain_error
{
public:
    using domain_error::domain_error;
};

// Raised when a truncated computation runs out of known coefficients.
class precision_error : public domain_error
{
public:
    using domain_error::domain_error;
};

// Raised when an intermediate result exceeds a configured size/degree bound.
class bound_error : public domain_error
{
public:
    using domain_error::domain_error;
};

} // namespace cartier

#endif
