#pragma once

#include <stdexcept>
#include <string>

namespace diophant {

// Thrown when a certified answer cannot be produced at the current working
// precision; callers may refine and retry.
class PrecisionExhausted : public std::runtime_error {
public:
    explicit PrecisionExhausted(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when a request exceeds a configured memory/size cap.
class ResourceCapExceeded : public std::runtime_error {
public:
    explicit ResourceCapExceeded(const std::string& what) : std::runtime_error(what) {}
};

// Certified three-valued answer. `undecided` means the enclosure straddles
// the threshold; refining precision can only turn it into a definite value,
// never flip a definite value.
enum class Tri { yes, no, undecided };

// negation of a certified predicate: definite answers flip, undecided stays
inline Tri tri_not(Tri t) {
    switch (t) {
        case Tri::yes: return Tri::no;
        case Tri::no: return Tri::yes;
        default: return Tri::undecided;
    }
}

inline const char* to_string(Tri t) {
    switch (t) {
        case Tri::yes: return "yes";
        case Tri::no: return "no";
        default: return "undecided";
    }
}

} // namespace diophant
