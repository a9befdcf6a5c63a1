#pragma once

#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "tlopt/errors.hpp"

namespace tlopt {

// Discrete-time table of real-valued signals, steps k = 0..K at unit period.
// All signals share the same length; names are unique and keep insertion
// order. MTL formulas read atomic propositions from 0/1-valued signals.
class Trace {
public:
    Trace() = default;

    void add_signal(const std::string& name, std::vector<double> samples);

    // Number of samples per signal (K+1); 0 for an empty trace.
    int length() const { return samples_.empty() ? 0 : static_cast<int>(samples_[0].size()); }
    int last_step() const { return length() - 1; }

    bool has_signal(const std::string& name) const { return index_.count(name) != 0; }
    double value(const std::string& name, int step) const;
    const std::vector<double>& samples(const std::string& name) const;
    const std::vector<std::string>& signal_names() const { return names_; }
    bool empty() const { return names_.empty(); }

private:
    std::vector<std::string> names_;
    std::vector<std::vector<double>> samples_;
    std::unordered_map<std::string, std::size_t> index_;
};

struct Bounds {
    double lower = 0.0;
    double upper = 0.0;
};

// Per-signal variable bounds, e.g. 0 <= s1 <= 10.
class VarBounds {
public:
    VarBounds() = default;

    void set(const std::string& signal, double lower, double upper);
    const Bounds* find(const std::string& signal) const;
    // Throws MissingBoundError when the signal has no entry.
    const Bounds& at(const std::string& signal) const;
    bool empty() const { return map_.empty(); }
    const std::map<std::string, Bounds>& entries() const { return map_; }

private:
    std::map<std::string, Bounds> map_;
};

} // namespace tlopt
