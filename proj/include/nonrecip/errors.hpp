#pragma once

#include <stdexcept>
#include <string>

namespace nonrecip {

// Failure taxonomy shared by all modules. The CLI maps kinds onto exit codes.
enum class ErrorKind {
    InputError,        // malformed arguments or model data
    SchemaError,       // model file fails structural validation
    Degenerate,        // a hop amplitude vanishes, no gauge/GBZ exists
    Violated,          // path-independence broken on some hopping cycle
    PtBroken,          // no Hermitian counterpart (some t_L*t_R <= 0)
    NearEp,            // eigenvector basis too ill-conditioned (exceptional point)
    NotPseudoHermitian,// spectrum fails real-or-conjugate-pair matching
    GaugeSingular,     // sublattice projection vanishes on the GBZ loop
    SymmetryAbsent,    // mirror condition for the reflection generator fails
    NotSeparable,      // 2D model with diagonal hops, no separable GBZ
    InsufficientSize,  // too few interior cells for an envelope fit
    Unsupported,       // operation undefined for this input (e.g. complex eta_I)
    SolverFailure,     // eigensolver did not converge or residual too large
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

inline const char* to_string(ErrorKind k) {
    switch (k) {
        case ErrorKind::InputError: return "input_error";
        case ErrorKind::SchemaError: return "schema_error";
        case ErrorKind::Degenerate: return "degenerate";
        case ErrorKind::Violated: return "violated";
        case ErrorKind::PtBroken: return "pt_broken";
        case ErrorKind::NearEp: return "near_ep";
        case ErrorKind::NotPseudoHermitian: return "not_pseudo_hermitian";
        case ErrorKind::GaugeSingular: return "gauge_singular";
        case ErrorKind::SymmetryAbsent: return "symmetry_absent";
        case ErrorKind::NotSeparable: return "not_separable";
        case ErrorKind::InsufficientSize: return "insufficient_size";
        case ErrorKind::Unsupported: return "unsupported";
        case ErrorKind::SolverFailure: return "solver_failure";
    }
    return "unknown";
}

} // namespace nonrecip
