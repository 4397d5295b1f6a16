#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "linkmirage/graph.hpp"
#include "linkmirage/perturb.hpp"

namespace linkmirage {

/// Draws one perturbed sequence for a given seed.
using Sampler = std::function<std::vector<Graph>(std::uint64_t seed)>;

/**
 * A perturbation mechanism viewed as a distribution over outputs.
 *
 * bind() does whatever deterministic preparation the input allows (for
 * LinkMirage: clustering and community matching) so repeated draws only pay
 * for the random part.
 */
class Mechanism {
public:
    virtual ~Mechanism() = default;
    virtual std::string name() const = 0;
    virtual Sampler bind(const TemporalGraphSequence& seq) const = 0;
};

class LinkMirageMechanism final : public Mechanism {
public:
    explicit LinkMirageMechanism(PerturbParams params) : params_(std::move(params)) {}
    std::string name() const override { return "linkmirage"; }
    Sampler bind(const TemporalGraphSequence& seq) const override;

private:
    PerturbParams params_;
};

class StaticMechanism final : public Mechanism {
public:
    explicit StaticMechanism(unsigned k) : k_(k) {}
    std::string name() const override { return "static-baseline"; }
    Sampler bind(const TemporalGraphSequence& seq) const override;

private:
    unsigned k_;
};

class HayMechanism final : public Mechanism {
public:
    explicit HayMechanism(double r_fraction = 0.5) : r_fraction_(r_fraction) {}
    std::string name() const override { return "hay-baseline"; }
    Sampler bind(const TemporalGraphSequence& seq) const override;

private:
    double r_fraction_;
};

/// Ignores its input and always publishes the same sequence.
class ConstantMechanism final : public Mechanism {
public:
    explicit ConstantMechanism(std::vector<Graph> output) : output_(std::move(output)) {}
    std::string name() const override { return "constant"; }
    Sampler bind(const TemporalGraphSequence& seq) const override;

private:
    std::vector<Graph> output_;
};

/// "linkmirage", "static-baseline" or "hay-baseline".
std::unique_ptr<Mechanism> make_mechanism(const std::string& name, const PerturbParams& params);

}  // namespace linkmirage
