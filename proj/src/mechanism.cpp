#include "linkmirage/mechanism.hpp"

#include <memory>
#include <stdexcept>

namespace linkmirage {

Sampler LinkMirageMechanism::bind(const TemporalGraphSequence& seq) const {
    auto world = std::make_shared<const TemporalGraphSequence>(seq);
    auto plans = std::make_shared<const std::vector<StepPlan>>(plan_sequence(*world, params_));
    return [world, plans, params = params_](std::uint64_t seed) {
        return realize_sequence(*world, *plans, params, seed).perturbed;
    };
}

Sampler StaticMechanism::bind(const TemporalGraphSequence& seq) const {
    auto world = std::make_shared<const TemporalGraphSequence>(seq);
    return [world, k = k_](std::uint64_t seed) { return perturb_static_baseline_sequence(*world, k, seed); };
}

Sampler HayMechanism::bind(const TemporalGraphSequence& seq) const {
    auto world = std::make_shared<const TemporalGraphSequence>(seq);
    return [world, r = r_fraction_](std::uint64_t seed) { return hay_baseline_sequence(*world, r, seed); };
}

Sampler ConstantMechanism::bind(const TemporalGraphSequence&) const {
    return [out = output_](std::uint64_t) { return out; };
}

std::unique_ptr<Mechanism> make_mechanism(const std::string& name, const PerturbParams& params) {
    if (name == "linkmirage") {
        return std::make_unique<LinkMirageMechanism>(params);
    }
    if (name == "static-baseline") {
        return std::make_unique<StaticMechanism>(params.k);
    }
    if (name == "hay-baseline") {
        return std::make_unique<HayMechanism>(0.5);
    }
    throw std::invalid_argument("unknown mechanism '" + name +
                                "' (expected linkmirage, static-baseline or hay-baseline)");
}

}  // namespace linkmirage
