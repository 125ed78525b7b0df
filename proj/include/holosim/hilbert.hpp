#pragma once

#include <string>
#include <utility>
#include <vector>

namespace holosim {

/// Ordered tensor product of finite subsystems (transmons, cavity modes).
/// The first-listed subsystem is the slowest-varying index, i.e. the leftmost
/// Kronecker factor, matching left-to-right ket notation |q1 q2 c>.
class HilbertSpace {
public:
    HilbertSpace() = default;

    /// Each entry is (label, dimension). Labels must be unique, dimensions >= 1.
    explicit HilbertSpace(std::vector<std::pair<std::string, int>> subsystems);

    int total_dim() const { return total_dim_; }
    int subsystem_count() const { return static_cast<int>(dims_.size()); }

    int dim(int index) const;
    int dim(const std::string& label) const { return dim(index_of(label)); }
    const std::string& label(int index) const;

    /// Index of a labelled subsystem; throws std::invalid_argument if unknown.
    int index_of(const std::string& label) const;
    bool has_label(const std::string& label) const;

    /// Product of dimensions strictly before / after subsystem `index`.
    int dim_before(int index) const;
    int dim_after(int index) const;

    bool operator==(const HilbertSpace& other) const {
        return dims_ == other.dims_ && labels_ == other.labels_;
    }
    bool operator!=(const HilbertSpace& other) const { return !(*this == other); }

    /// Short description like {q1:2, q2:2, c:3} for error messages.
    std::string describe() const;

private:
    std::vector<int> dims_;
    std::vector<std::string> labels_;
    int total_dim_ = 1;
};

} // namespace holosim
