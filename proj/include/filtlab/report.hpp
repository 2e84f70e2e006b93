#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace filtlab {

// Location of a counterexample, always with exact rational values so the
// instance can be replayed by hand.
struct Witness {
    std::string condition;
    int t = -1;
    int outcome = -1;
    std::vector<std::string> values;
    std::string detail;
};

// Structured verdict of one theorem check. `conditions` holds the
// independently evaluated sides of the equivalence; `agree` is true iff all
// condition booleans are equal. For identity-style checks (where every
// condition must hold) `passed()` is the interesting bit instead.
struct CheckReport {
    std::string name;
    std::string instance_digest;
    std::vector<std::pair<std::string, bool>> conditions;
    bool agree = true;
    std::optional<Witness> witness;
    std::vector<std::pair<std::string, std::string>> notes;

    void add(const std::string& label, bool value) { conditions.emplace_back(label, value); }
    void note(const std::string& key, const std::string& value) { notes.emplace_back(key, value); }

    // Recompute `agree` from the conditions.
    void settle() {
        agree = true;
        for (const auto& [label, v] : conditions)
            if (v != conditions.front().second) { agree = false; break; }
    }

    bool all_true() const {
        for (const auto& [label, v] : conditions)
            if (!v) return false;
        return true;
    }

    // Common verdict of an equivalence check once the sides agree.
    bool verdict() const { return !conditions.empty() && conditions.front().second; }
};

}  // namespace filtlab
