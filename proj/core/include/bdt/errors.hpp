#pragma once

#include <stdexcept>
#include <string>

namespace bdt {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// core
struct IncompleteSequence : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };

// imaging
struct MalformedPpm : Error { using Error::Error; };
struct DegenerateGeometry : Error { using Error::Error; };
struct OutOfBounds : Error { using Error::Error; };
struct TooSmall : Error { using Error::Error; };

// abis
struct EmptyQuadrant : Error { using Error::Error; };
struct GridNotFound : Error { using Error::Error; };
struct NoInnerGreen : Error { using Error::Error; };
struct SpecMismatch : Error { using Error::Error; };

// simulator
struct GeometryOverflow : Error { using Error::Error; };
struct EventOutOfBounds : Error { using Error::Error; };

// strategy / features
struct LengthMismatch : Error { using Error::Error; };
struct AllTied : Error { using Error::Error; };
struct UnsupportedSpec : Error { using Error::Error; };
struct TooFewPlacements : Error { using Error::Error; };
struct DegenerateVariance : Error { using Error::Error; };

} // namespace bdt
