#pragma once

#include <stdexcept>
#include <string>

namespace essvi {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// black_scholes
struct PriceOutOfBounds : Error {
    using Error::Error;
};
struct NoConvergence : Error {
    using Error::Error;
};

// arbitrage
struct DegenerateQuadratic : Error {
    using Error::Error;
};
struct NotARoot : Error {
    using Error::Error;
};
struct InvalidPair : Error {
    using Error::Error;
};

// pipeline
struct NoPairs : Error {
    using Error::Error;
};
struct NonPositiveLogArgument : Error {
    using Error::Error;
};
struct EmptyChain : Error {
    using Error::Error;
};

// robust_calib
struct AllRhoInfeasible : Error {
    explicit AllRhoInfeasible(int maturity_index)
        : Error("no feasible rho at maturity index " + std::to_string(maturity_index)),
          index(maturity_index) {}
    int index;
};
struct AnchorInconsistent : Error {
    using Error::Error;
};

// global_calib
struct EmptyBox : Error {
    using Error::Error;
};
struct NotInBox : Error {
    using Error::Error;
};
struct InitInfeasible : Error {
    using Error::Error;
};

// metrics
struct EmptySurface : Error {
    using Error::Error;
};

// io
struct ParseError : Error {
    using Error::Error;
};

}  // namespace essvi
