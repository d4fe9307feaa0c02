#pragma once

#include <stdexcept>
#include <string>

namespace critlab {

// Failure modes surfaced by the numerical layers. Every throw names the
// violated invariant so the CLI can print structured diagnostics.
enum class Errc {
    NotSymmetric,
    NoSpectralGap,
    ContourHitsSpectrum,
    SingularResolvent,
    DimensionMismatch,
    AmbientMismatch,
    ProjectionDegenerate,
    NotOrthogonal,
    UnsupportedKind,
    DimensionTooSmall,
    DomainViolation,
    NotCritical,
    Degenerate,
    KernelDimensionUnrecoverable,
    KernelCollapse,
    GapLost,
    InconsistentScenario,
    TubularRadiusExceeded,
    LevelGapViolated,
    CriticalOnSublevel,
    ConeViolated,
    BoundExceedsSigma,
    LeftNeighborhood,
    StepTooLarge,
    QuadratureDivergence,
    AmplitudeExceedsBudget,
    EpsilonOutOfRange,
    UnknownScenario,
    BadInput,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, Errc code, const std::string& what) {
    if (!cond) fail(code, what);
}

} // namespace critlab
