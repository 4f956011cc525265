#ifndef noyau_cause_hpp
#define noyau_cause_hpp

#include <stdexcept>
#include <string>
#include <vector>

#include "noyau/engine.hpp"

namespace noyau {

struct CauseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Witness of the true-anomaly rule: a duty held, the capacity held, and an
// incompatible effect obtained at the next instant.
struct AnomalyWitness {
    std::string agent;
    Term duty_effect;
    long duty_time = 0;
    Term violating_effect;
    long violation_time = 0;  // duty_time + 1

    friend bool operator<(const AnomalyWitness& a, const AnomalyWitness& b);
    friend bool operator==(const AnomalyWitness& a, const AnomalyWitness& b);
};

inline constexpr const char* kTrueAnomalyAtom = "Vraie_An";

// All witnesses in the model, sorted by (time, agent). Vraie_An must be in
// the model exactly when the list is non-empty.
std::vector<AnomalyWitness> detect_anomalies(const StableModel& model);

enum class Locale { Fr, En };

std::string render_explanation(const AnomalyWitness& witness, Locale locale);

}  // namespace noyau

#endif
