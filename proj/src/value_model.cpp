#include "valconf/value_model.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "valconf/numeric.hpp"

namespace valconf {
namespace {

constexpr std::array<std::string_view, kValueCount> kNames = {
    "self-direction", "stimulation", "hedonism",    "achievement", "power",
    "security",       "conformity",  "tradition",   "benevolence", "universalism",
};

}  // namespace

ValueId value_at(int pos) {
    if (pos < 0 || pos >= kValueCount) throw std::out_of_range("value_at: position out of range");
    return static_cast<ValueId>(pos);
}

std::string_view value_name(ValueId v) { return kNames[static_cast<std::size_t>(position(v))]; }

std::optional<ValueId> value_from_name(std::string_view name) {
    for (int i = 0; i < kValueCount; ++i) {
        if (kNames[static_cast<std::size_t>(i)] == name) return static_cast<ValueId>(i);
    }
    // Accept underscore spelling too; prediction files in the wild use both.
    std::string normalized(name);
    for (char& c : normalized) {
        if (c == '_') c = '-';
    }
    for (int i = 0; i < kValueCount; ++i) {
        if (kNames[static_cast<std::size_t>(i)] == normalized) return static_cast<ValueId>(i);
    }
    return std::nullopt;
}

ValueClass value_class(ValueId v) {
    switch (v) {
        case ValueId::SelfDirection:
        case ValueId::Stimulation:
        case ValueId::Hedonism:
            return ValueClass::OpennessToChange;
        case ValueId::Achievement:
        case ValueId::Power:
            return ValueClass::SelfEnhancement;
        case ValueId::Security:
        case ValueId::Conformity:
        case ValueId::Tradition:
            return ValueClass::Conservation;
        case ValueId::Benevolence:
        case ValueId::Universalism:
            return ValueClass::SelfTranscendence;
    }
    throw std::logic_error("value_class: invalid ValueId");
}

std::string_view class_name(ValueClass c) {
    switch (c) {
        case ValueClass::OpennessToChange: return "openness-to-change";
        case ValueClass::SelfEnhancement: return "self-enhancement";
        case ValueClass::Conservation: return "conservation";
        case ValueClass::SelfTranscendence: return "self-transcendence";
    }
    throw std::logic_error("class_name: invalid ValueClass");
}

int circular_distance(ValueId a, ValueId b) {
    const int d = std::abs(position(a) - position(b));
    return std::min(d, kValueCount - d);
}

CircumplexKernel build_kernel(double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("build_kernel: sigma must be positive");
    CircumplexKernel k;
    k.sigma = sigma;
    for (int i = 0; i < kValueCount; ++i) {
        for (int j = 0; j < kValueCount; ++j) {
            const int d = circular_distance(static_cast<ValueId>(i), static_cast<ValueId>(j));
            k.b[static_cast<std::size_t>(i) * kValueCount + j] =
                std::exp(-static_cast<double>(d * d) / (2.0 * sigma * sigma));
        }
    }
    numeric::Matrix m(kValueCount, kValueCount);
    for (int i = 0; i < kValueCount; ++i)
        for (int j = 0; j < kValueCount; ++j) m.at(i, j) = k.at(i, j);
    const auto eig = numeric::eigen_symmetric(m);
    k.min_eigenvalue = eig.values.back();
    k.positive_semidefinite = k.min_eigenvalue >= -1e-9;
    return k;
}

std::string kernel_to_csv(const CircumplexKernel& k) {
    std::string out = "value";
    for (int j = 0; j < kValueCount; ++j) {
        out += ',';
        out += value_name(static_cast<ValueId>(j));
    }
    out += '\n';
    char buf[64];
    for (int i = 0; i < kValueCount; ++i) {
        out += value_name(static_cast<ValueId>(i));
        for (int j = 0; j < kValueCount; ++j) {
            std::snprintf(buf, sizeof buf, ",%.12g", k.at(i, j));
            out += buf;
        }
        out += '\n';
    }
    return out;
}

}  // namespace valconf
