#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "osr/combinatorics.hpp"
#include "osr/rng.hpp"
#include "osr/types.hpp"

namespace osr {

// Binary incidence matrix of a set-cover instance: rows are ground-set
// elements, columns are sets. Duplicate columns are allowed.
struct SetCoverInstance {
    int m = 0;  // elements
    int d = 0;  // sets
    std::vector<std::uint8_t> cells;  // row-major m*d, entries 0/1

    std::uint8_t at(int row, int col) const { return cells[static_cast<std::size_t>(row) * d + col]; }
    void set(int row, int col, std::uint8_t v) { cells[static_cast<std::size_t>(row) * d + col] = v; }

    static SetCoverInstance zeros(int m, int d) {
        SetCoverInstance inst;
        inst.m = m;
        inst.d = d;
        inst.cells.assign(static_cast<std::size_t>(m) * d, 0);
        return inst;
    }
};

// Proof that an instance has one of the two combinatorial properties the
// hardness stream relies on.
struct CoverCertificate {
    enum class Kind { kExactCover, kNoCover };
    Kind kind = Kind::kExactCover;
    int budget = 0;                 // k for exact covers, k' for no-cover
    std::optional<SubsetLex> witness;  // exact-cover column set; no-cover is verified exhaustively
};

// True iff the witness columns sum to the all-ones vector, i.e. they cover
// every element exactly once.
bool verify_exact_cover(const SetCoverInstance& inst, const SubsetLex& witness);

// True iff every size-k' column subset leaves at least one row all-zero,
// checked exhaustively. Throws when C(d, k') exceeds the 10^6 budget.
bool verify_no_cover(const SetCoverInstance& inst, int k_prime);

// Plants a random partition of the m elements into k blocks (one column per
// block), then appends `extra_sets` decoy columns: unions of at least two
// blocks, which double-cover and so cannot join exact covers, or all-zero
// columns. Column order is shuffled. The returned certificate carries the
// planted witness and has been checked against verify_exact_cover.
std::pair<SetCoverInstance, CoverCertificate> gen_planted_exact_cover(int m, int k, int extra_sets,
                                                                      Rng& rng);

// Generates an instance no k' columns of which cover all m rows: one guarded
// element is left out of every set, and the rest of the matrix is random.
// The no-cover property is still certified by exhaustive check; failing to
// certify within max_tries attempts is an error.
std::pair<SetCoverInstance, CoverCertificate> gen_uncoverable(int m, int d, int k_prime, Rng& rng,
                                                              int max_tries);

// Appends all-zero columns. Both cover properties survive: an exact-cover
// witness is untouched and zero columns cover nothing.
SetCoverInstance pad_zero_columns(const SetCoverInstance& inst, int count);

// The k-sparse unit-norm predictor that fits the hardness stream of an
// exact-cover instance with zero loss: 1/sqrt(k) on each witness column.
std::vector<double> witness_weight_vector(const SetCoverInstance& inst, const SubsetLex& witness);

// Hardness stream: each round picks a uniform row of the incidence matrix
// and an independent uniform sign s, then emits x = (s/sqrt(d)) * row and
// label y = s/(sqrt(d)*sqrt(k)). Infinite.
class HardnessStream : public ExampleStream {
public:
    HardnessStream(SetCoverInstance inst, int k, Rng rng);
    bool next(LabeledExample& out) override;

    const SetCoverInstance& instance() const { return inst_; }
    int k() const { return k_; }

private:
    SetCoverInstance inst_;
    int k_;
    Rng rng_;
    double inv_sqrt_d_;
    double inv_sqrt_k_;
};

// Synthetic regression distribution for regret experiments.
struct StochasticModel {
    enum class FeatureLaw { kUnitBall, kFixedDesign };

    std::vector<double> true_weights;  // k-sparse, ||w|| <= 1
    double noise_level = 0.0;          // sigma of the additive gaussian noise
    FeatureLaw law = FeatureLaw::kUnitBall;
    std::vector<std::vector<double>> fixed_design;  // cycled when law == kFixedDesign

    void validate() const;
};

// Random k-sparse model with unit-norm weights.
StochasticModel make_sparse_model(int d, int k, double noise_level, Rng& rng);

// Emits x from the model's feature law (uniform in the unit ball by default)
// and y = clip(w* . x + sigma * gaussian, [-1, 1]). Infinite.
class StochasticStream : public ExampleStream {
public:
    StochasticStream(StochasticModel model, Rng rng);
    bool next(LabeledExample& out) override;

    const StochasticModel& model() const { return model_; }

private:
    StochasticModel model_;
    Rng rng_;
    std::size_t design_cursor_ = 0;
};

// All-zero examples; the degenerate baseline stream.
class ZeroStream : public ExampleStream {
public:
    explicit ZeroStream(int d) : d_(d) {}
    bool next(LabeledExample& out) override {
        out.x.assign(static_cast<std::size_t>(d_), 0.0);
        out.y = 0.0;
        return true;
    }

private:
    int d_;
};

// Replays a fixed list of examples, then reports exhaustion.
class FixedStream : public ExampleStream {
public:
    explicit FixedStream(std::vector<LabeledExample> examples) : examples_(std::move(examples)) {}
    bool next(LabeledExample& out) override {
        if (cursor_ >= examples_.size()) return false;
        out = examples_[cursor_++];
        return true;
    }

private:
    std::vector<LabeledExample> examples_;
    std::size_t cursor_ = 0;
};

// Text format: first line "m d", then m lines of d space-separated 0/1
// digits, then an optional line "witness: i1 i2 ... ik" (0-based columns).
void write_instance(const std::string& path, const SetCoverInstance& inst,
                    const std::optional<SubsetLex>& witness);

struct InstanceFile {
    SetCoverInstance inst;
    std::optional<SubsetLex> witness;
};

InstanceFile read_instance(const std::string& path);

}  // namespace osr
