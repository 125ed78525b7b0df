#include "holosim/hilbert.hpp"

#include <set>
#include <sstream>
#include <stdexcept>

namespace holosim {

HilbertSpace::HilbertSpace(std::vector<std::pair<std::string, int>> subsystems) {
    if (subsystems.empty())
        throw std::invalid_argument("HilbertSpace: at least one subsystem required");
    std::set<std::string> seen;
    for (const auto& [label, d] : subsystems) {
        if (d < 1)
            throw std::invalid_argument("HilbertSpace: subsystem '" + label +
                                        "' has non-positive dimension");
        if (!seen.insert(label).second)
            throw std::invalid_argument("HilbertSpace: duplicate label '" + label + "'");
        labels_.push_back(label);
        dims_.push_back(d);
        total_dim_ *= d;
    }
}

int HilbertSpace::dim(int index) const {
    if (index < 0 || index >= subsystem_count())
        throw std::invalid_argument("HilbertSpace: subsystem index out of range");
    return dims_[static_cast<size_t>(index)];
}

const std::string& HilbertSpace::label(int index) const {
    if (index < 0 || index >= subsystem_count())
        throw std::invalid_argument("HilbertSpace: subsystem index out of range");
    return labels_[static_cast<size_t>(index)];
}

int HilbertSpace::index_of(const std::string& label) const {
    for (size_t k = 0; k < labels_.size(); ++k)
        if (labels_[k] == label) return static_cast<int>(k);
    throw std::invalid_argument("HilbertSpace: unknown subsystem label '" + label + "'");
}

bool HilbertSpace::has_label(const std::string& label) const {
    for (const auto& l : labels_)
        if (l == label) return true;
    return false;
}

int HilbertSpace::dim_before(int index) const {
    int p = 1;
    for (int k = 0; k < index; ++k) p *= dim(k);
    return p;
}

int HilbertSpace::dim_after(int index) const {
    int p = 1;
    for (int k = index + 1; k < subsystem_count(); ++k) p *= dim(k);
    return p;
}

std::string HilbertSpace::describe() const {
    std::ostringstream os;
    os << "{";
    for (size_t k = 0; k < labels_.size(); ++k) {
        if (k) os << ", ";
        os << labels_[k] << ":" << dims_[k];
    }
    os << "}";
    return os.str();
}

} // namespace holosim
