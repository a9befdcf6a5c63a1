#include "tlopt/trace.hpp"

namespace tlopt {

void Trace::add_signal(const std::string& name, std::vector<double> samples) {
    if (index_.count(name))
        throw SemanticError("duplicate signal '" + name + "' in trace");
    if (!samples_.empty() && samples.size() != samples_[0].size())
        throw SemanticError("signal '" + name + "' has " +
                            std::to_string(samples.size()) + " samples, expected " +
                            std::to_string(samples_[0].size()));
    index_[name] = names_.size();
    names_.push_back(name);
    samples_.push_back(std::move(samples));
}

double Trace::value(const std::string& name, int step) const {
    const auto& sig = samples(name);
    if (step < 0 || step >= static_cast<int>(sig.size()))
        throw TraceTooShortError(step, static_cast<int>(sig.size()) - 1);
    return sig[static_cast<std::size_t>(step)];
}

const std::vector<double>& Trace::samples(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw UnknownSignalError(name);
    return samples_[it->second];
}

void VarBounds::set(const std::string& signal, double lower, double upper) {
    if (lower > upper)
        throw BadBoundsError("bounds for '" + signal + "' have lower > upper");
    map_[signal] = Bounds{lower, upper};
}

const Bounds* VarBounds::find(const std::string& signal) const {
    auto it = map_.find(signal);
    return it == map_.end() ? nullptr : &it->second;
}

const Bounds& VarBounds::at(const std::string& signal) const {
    const Bounds* b = find(signal);
    if (!b) throw MissingBoundError(signal);
    return *b;
}

} // namespace tlopt
