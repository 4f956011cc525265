#include <algorithm>
#include <map>

#include "noyau/cause.hpp"

namespace noyau {

bool operator<(const AnomalyWitness& a, const AnomalyWitness& b) {
    if (a.duty_time != b.duty_time) return a.duty_time < b.duty_time;
    if (a.agent != b.agent) return a.agent < b.agent;
    if (a.duty_effect != b.duty_effect) return a.duty_effect < b.duty_effect;
    return a.violating_effect < b.violating_effect;
}

bool operator==(const AnomalyWitness& a, const AnomalyWitness& b) {
    return a.agent == b.agent && a.duty_effect == b.duty_effect &&
           a.duty_time == b.duty_time && a.violating_effect == b.violating_effect &&
           a.violation_time == b.violation_time;
}

std::vector<AnomalyWitness> detect_anomalies(const StableModel& model) {
    std::vector<AnomalyWitness> out;

    auto has = [&](const char* pred, std::initializer_list<Term> args) {
        return model.contains(Literal(true, Term::app(pred, args)));
    };

    for (const Literal& l : model.literals) {
        if (!l.positive || l.atom.name != "doit" || l.atom.args.size() != 3) continue;
        const Term& effect = l.atom.args[0];
        const Term& agent = l.atom.args[1];
        const Term& time = l.atom.args[2];
        if (!agent.is_sym() || !time.is_int()) continue;
        if (!has("en_mesure", {effect, agent, time})) continue;

        Term next = Term::integer(time.value + 1);
        for (const Literal& v : model.literals) {
            if (!v.positive || v.atom.name != "vrai" || v.atom.args.size() != 3) continue;
            if (!(v.atom.args[1] == agent) || !(v.atom.args[2] == next)) continue;
            const Term& obtained = v.atom.args[0];
            if (!has("incompatible", {effect, obtained})) continue;
            AnomalyWitness w;
            w.agent = agent.name;
            w.duty_effect = effect;
            w.duty_time = time.value;
            w.violating_effect = obtained;
            w.violation_time = time.value + 1;
            out.push_back(std::move(w));
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());

    bool flagged = model.contains(Literal(true, Term::sym(kTrueAnomalyAtom)));
    if (flagged != !out.empty())
        throw CauseError(flagged ? "Vraie_An in model but no witness reconstructible"
                                 : "anomaly witnesses found without Vraie_An in model");
    return out;
}

namespace {

std::string duty_phrase(const Term& e, Locale loc) {
    static const std::map<std::string, std::pair<std::string, std::string>> kPhrases = {
        {"arrêter", {"s'arrêter", "stop"}},
        {"rouler_lentement", {"rouler lentement", "drive slowly"}},
        {"reculer", {"reculer", "back up"}},
        {"démarrer", {"démarrer", "move off"}},
    };
    auto it = e.is_sym() ? kPhrases.find(e.name) : kPhrases.end();
    if (it != kPhrases.end()) return loc == Locale::Fr ? it->second.first : it->second.second;
    return loc == Locale::Fr ? "atteindre l'effet " + e.str() : "achieve effect " + e.str();
}

std::string violation_phrase(const Term& e, Locale loc) {
    static const std::map<std::string, std::pair<std::string, std::string>> kStates = {
        {"arrêter", {"il n'était pas à l'arrêt", "it was not stopped"}},
        {"rouler_lentement", {"il ne roulait pas lentement", "it was not driving slowly"}},
    };
    if (e.is_app() && e.name == "non" && e.args.size() == 1 && e.args[0].is_sym()) {
        auto it = kStates.find(e.args[0].name);
        if (it != kStates.end())
            return loc == Locale::Fr ? it->second.first : it->second.second;
        return loc == Locale::Fr ? "l'effet " + e.args[0].name + " n'était pas vérifié"
                                 : "effect " + e.args[0].name + " did not hold";
    }
    return loc == Locale::Fr ? "l'effet " + e.str() + " était vérifié"
                             : "effect " + e.str() + " held";
}

}  // namespace

std::string render_explanation(const AnomalyWitness& w, Locale locale) {
    if (locale == Locale::Fr) {
        return "Le véhicule " + w.agent + " avait à l'instant " +
               std::to_string(w.duty_time) + " le devoir de " +
               duty_phrase(w.duty_effect, locale) +
               " afin d'éviter le choc, mais il n'a pas respecté son devoir car à l'instant " +
               std::to_string(w.violation_time) + ", " +
               violation_phrase(w.violating_effect, locale) + ".";
    }
    return "Vehicle " + w.agent + " had at instant " + std::to_string(w.duty_time) +
           " the duty to " + duty_phrase(w.duty_effect, locale) +
           " in order to avoid the collision, but it did not fulfil its duty: at instant " +
           std::to_string(w.violation_time) + ", " +
           violation_phrase(w.violating_effect, locale) + ".";
}

}  // namespace noyau
