#include "carleman/error.hpp"

namespace carleman {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::domain: return "domain";
    case ErrorKind::ambiguity: return "ambiguity";
    case ErrorKind::edge: return "edge";
    case ErrorKind::singular: return "singular";
    case ErrorKind::grid_too_small: return "grid_too_small";
    case ErrorKind::truncation: return "truncation";
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::theory_inapplicable: return "theory_inapplicable";
    case ErrorKind::divergence: return "divergence";
    case ErrorKind::shape: return "shape";
    case ErrorKind::invariant: return "invariant";
    case ErrorKind::validation: return "validation";
    case ErrorKind::io: return "io";
    }
    return "unknown";
}

} // namespace carleman
