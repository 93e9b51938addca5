#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace valconf {

inline constexpr int kValueCount = 10;

// The ten Schwartz basic values in their circumplex order; the enum value is
// the position index on the 10-cycle.
enum class ValueId : int {
    SelfDirection = 0,
    Stimulation = 1,
    Hedonism = 2,
    Achievement = 3,
    Power = 4,
    Security = 5,
    Conformity = 6,
    Tradition = 7,
    Benevolence = 8,
    Universalism = 9,
};

enum class ValueClass {
    OpennessToChange,
    SelfEnhancement,
    Conservation,
    SelfTranscendence,
};

constexpr int position(ValueId v) { return static_cast<int>(v); }
ValueId value_at(int pos);

std::string_view value_name(ValueId v);
std::optional<ValueId> value_from_name(std::string_view name);

// Hedonism sits on the openness/self-enhancement boundary in the theory; it
// is grouped with openness-to-change here (reporting only, no metric uses
// the classes).
ValueClass value_class(ValueId v);
std::string_view class_name(ValueClass c);

// Shortest arc between two values on the 10-cycle, in [0, 5].
int circular_distance(ValueId a, ValueId b);

// Symmetric 10x10 bilinear weight matrix: b[i][j] = exp(-d(i,j)^2 / (2 sigma^2)).
// Positive semi-definite for sigma up to ~1.15; larger widths go indefinite,
// so the minimum eigenvalue is recorded instead of rejecting them.
struct CircumplexKernel {
    double sigma = 1.0;
    std::array<double, kValueCount * kValueCount> b{};
    double min_eigenvalue = 0.0;
    bool positive_semidefinite = true;

    double at(int i, int j) const { return b[static_cast<std::size_t>(i) * kValueCount + j]; }
    const double* data() const { return b.data(); }
};

CircumplexKernel build_kernel(double sigma);

std::string kernel_to_csv(const CircumplexKernel& k);

}  // namespace valconf
