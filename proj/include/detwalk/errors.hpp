#pragma once

#include <stdexcept>
#include <string>

namespace detwalk {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotStochastic : Error {
    int row;
    double deviation;
    NotStochastic(int r, double dev)
        : Error("row " + std::to_string(r) + " sum deviates from 1 by " +
                std::to_string(dev)),
          row(r), deviation(dev) {}
};

struct NegativeEntry : Error {
    NegativeEntry(int r, int c)
        : Error("negative entry at (" + std::to_string(r) + "," +
                std::to_string(c) + ")") {}
};

struct NotIrreducible : Error {
    NotIrreducible() : Error("support digraph is not strongly connected") {}
};

struct NotErgodic : Error {
    using Error::Error;
};

struct SolverFailure : Error {
    double residual;
    explicit SolverFailure(double res)
        : Error("stationary solve residual " + std::to_string(res)),
          residual(res) {}
};

struct DimensionMismatch : Error {
    using Error::Error;
};

struct BadParams : Error {
    using Error::Error;
};

struct BadGamma : Error {
    using Error::Error;
};

struct ParseError : Error {
    int line;
    ParseError(const std::string& msg, int ln)
        : Error(msg + " (line " + std::to_string(ln) + ")"), line(ln) {}
    explicit ParseError(const std::string& msg) : Error(msg), line(-1) {}
};

struct SelfLoopRejected : Error {
    explicit SelfLoopRejected(long v)
        : Error("self-loop on vertex " + std::to_string(v)) {}
};

struct Disconnected : Error {
    using Error::Error;
};

struct EmptyCandidateSet : Error {
    explicit EmptyCandidateSet(int v)
        : Error("empty SRT candidate set at vertex " + std::to_string(v) +
                " (floating-point pathology)") {}
};

struct NoTokens : Error {
    NoTokens() : Error("token placement sums to zero") {}
};

struct HorizonOverflow : Error {
    using Error::Error;
};

struct HistoryNotRetained : Error {
    HistoryNotRetained()
        : Error("flow history audit mode was not enabled at init") {}
};

struct PreconditionViolated : Error {
    using Error::Error;
};

}  // namespace detwalk
