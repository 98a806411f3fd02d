#include "tabnb/error.hpp"

namespace tabnb {

const char* category_name(ErrorCategory category) {
    switch (category) {
        case ErrorCategory::usage: return "usage";
        case ErrorCategory::input: return "input";
        case ErrorCategory::undefined: return "undefined";
        case ErrorCategory::audit: return "audit";
        case ErrorCategory::fit: return "fit";
    }
    return "unknown";
}

}  // namespace tabnb
