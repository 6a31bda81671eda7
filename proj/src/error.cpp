#include "natscale/error.hpp"

namespace natscale {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::parameter_domain: return "parameter-domain";
        case ErrorKind::saturation: return "saturation";
        case ErrorKind::not_invertible: return "not-invertible";
        case ErrorKind::range: return "range";
        case ErrorKind::range_exhausted: return "range-exhausted";
        case ErrorKind::insufficient_tail_data: return "insufficient-tail-data";
        case ErrorKind::not_a_scale_function: return "not-a-scale-function";
        case ErrorKind::degenerate_hazard: return "degenerate-hazard";
        case ErrorKind::hypothesis_failed: return "hypothesis-failed";
        case ErrorKind::input: return "input";
    }
    return "unknown";
}

}  // namespace natscale
