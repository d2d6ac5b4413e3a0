#include "osr/streams.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace osr {

bool verify_exact_cover(const SetCoverInstance& inst, const SubsetLex& witness) {
    witness.validate();
    if (witness.d != inst.d)
        throw std::invalid_argument("verify_exact_cover: witness dimension " + std::to_string(witness.d) +
                                    " does not match instance d=" + std::to_string(inst.d));
    for (int row = 0; row < inst.m; ++row) {
        int covered = 0;
        for (int col : witness.members) covered += inst.at(row, col);
        if (covered != 1) return false;
    }
    return true;
}

namespace {

constexpr std::int64_t kEnumerationBudget = 1000000;

// column incidence bitmasks, (m+63)/64 words per column
std::vector<std::uint64_t> column_masks(const SetCoverInstance& inst, int words) {
    std::vector<std::uint64_t> masks(static_cast<std::size_t>(inst.d) * words, 0);
    for (int row = 0; row < inst.m; ++row)
        for (int col = 0; col < inst.d; ++col)
            if (inst.at(row, col))
                masks[static_cast<std::size_t>(col) * words + row / 64] |= 1ULL << (row % 64);
    return masks;
}

}  // namespace

bool verify_no_cover(const SetCoverInstance& inst, int k_prime) {
    if (k_prime < 0 || k_prime > inst.d)
        throw std::invalid_argument("verify_no_cover: k'=" + std::to_string(k_prime) +
                                    " outside [0, d=" + std::to_string(inst.d) + "]");
    if (binomial(inst.d, k_prime) > kEnumerationBudget)
        throw std::invalid_argument("verify_no_cover: C(" + std::to_string(inst.d) + ", " +
                                    std::to_string(k_prime) + ") exceeds the exhaustive budget of " +
                                    std::to_string(kEnumerationBudget));
    const int words = (inst.m + 63) / 64;
    const std::vector<std::uint64_t> masks = column_masks(inst, words);
    std::vector<std::uint64_t> full(static_cast<std::size_t>(words), 0);
    for (int row = 0; row < inst.m; ++row) full[static_cast<std::size_t>(row / 64)] |= 1ULL << (row % 64);

    bool some_subset_covers = false;
    std::vector<std::uint64_t> acc(static_cast<std::size_t>(words));
    for_each_subset(inst.d, k_prime, [&](const std::vector<int>& members) {
        if (some_subset_covers) return;
        std::fill(acc.begin(), acc.end(), 0ULL);
        for (int col : members)
            for (int w = 0; w < words; ++w) acc[static_cast<std::size_t>(w)] |= masks[static_cast<std::size_t>(col) * words + w];
        if (acc == full) some_subset_covers = true;
    });
    return !some_subset_covers;
}

std::pair<SetCoverInstance, CoverCertificate> gen_planted_exact_cover(int m, int k, int extra_sets,
                                                                      Rng& rng) {
    if (k < 1 || k > m)
        throw std::invalid_argument("gen_planted_exact_cover: require 1 <= k <= m, got k=" +
                                    std::to_string(k) + " m=" + std::to_string(m));
    if (extra_sets < 0) throw std::invalid_argument("gen_planted_exact_cover: extra_sets must be >= 0");

    // random partition of the rows into k nonempty blocks
    std::vector<int> rows(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) rows[static_cast<std::size_t>(i)] = i;
    for (int i = m - 1; i > 0; --i) std::swap(rows[static_cast<std::size_t>(i)], rows[static_cast<std::size_t>(rng.uniform_int(i + 1))]);
    const SubsetLex cut_points = sample_uniform_subset(m - 1, k - 1, rng);  // block boundaries

    const int d = k + extra_sets;
    std::vector<std::vector<std::uint8_t>> columns;
    columns.reserve(static_cast<std::size_t>(d));

    std::vector<std::vector<std::uint8_t>> blocks(static_cast<std::size_t>(k),
                                                  std::vector<std::uint8_t>(static_cast<std::size_t>(m), 0));
    int block = 0;
    for (int i = 0; i < m; ++i) {
        blocks[static_cast<std::size_t>(block)][static_cast<std::size_t>(rows[static_cast<std::size_t>(i)])] = 1;
        if (block < k - 1 && i == cut_points.members[static_cast<std::size_t>(block)]) ++block;
    }
    for (auto& b : blocks) columns.push_back(b);

    for (int e = 0; e < extra_sets; ++e) {
        std::vector<std::uint8_t> col(static_cast<std::size_t>(m), 0);
        const bool zero_column = (k < 2) || rng.uniform_int(4) == 0;
        if (!zero_column) {
            const int span = 2 + rng.uniform_int(k - 1);  // union of 2..k blocks
            const SubsetLex chosen = sample_uniform_subset(k, span, rng);
            for (int b : chosen.members)
                for (int r = 0; r < m; ++r) col[static_cast<std::size_t>(r)] |= blocks[static_cast<std::size_t>(b)][static_cast<std::size_t>(r)];
        }
        columns.push_back(std::move(col));
    }

    // shuffle column order and recover witness positions
    std::vector<int> order(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) order[static_cast<std::size_t>(i)] = i;
    for (int i = d - 1; i > 0; --i) std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(rng.uniform_int(i + 1))]);

    SetCoverInstance inst = SetCoverInstance::zeros(m, d);
    SubsetLex witness;
    witness.d = d;
    witness.k = k;
    for (int pos = 0; pos < d; ++pos) {
        const int original = order[static_cast<std::size_t>(pos)];
        for (int r = 0; r < m; ++r) inst.set(r, pos, columns[static_cast<std::size_t>(original)][static_cast<std::size_t>(r)]);
        if (original < k) witness.members.push_back(pos);
    }
    std::sort(witness.members.begin(), witness.members.end());

    if (!verify_exact_cover(inst, witness))
        throw std::logic_error("gen_planted_exact_cover: generated witness failed verification");

    CoverCertificate cert;
    cert.kind = CoverCertificate::Kind::kExactCover;
    cert.budget = k;
    cert.witness = witness;
    return {std::move(inst), std::move(cert)};
}

std::pair<SetCoverInstance, CoverCertificate> gen_uncoverable(int m, int d, int k_prime, Rng& rng,
                                                              int max_tries) {
    if (m < 1 || d < 1)
        throw std::invalid_argument("gen_uncoverable: require m >= 1 and d >= 1");
    if (k_prime < 1 || k_prime > d)
        throw std::invalid_argument("gen_uncoverable: require 1 <= k' <= d, got k'=" +
                                    std::to_string(k_prime));
    for (int attempt = 0; attempt < max_tries; ++attempt) {
        const int guarded = rng.uniform_int(m);  // element no set contains
        SetCoverInstance inst = SetCoverInstance::zeros(m, d);
        for (int col = 0; col < d; ++col)
            for (int row = 0; row < m; ++row)
                if (row != guarded && rng.coin()) inst.set(row, col, 1);
        if (!verify_no_cover(inst, k_prime)) continue;
        CoverCertificate cert;
        cert.kind = CoverCertificate::Kind::kNoCover;
        cert.budget = k_prime;
        return {std::move(inst), std::move(cert)};
    }
    throw std::runtime_error("gen_uncoverable: no certified instance after " + std::to_string(max_tries) +
                             " tries");
}

SetCoverInstance pad_zero_columns(const SetCoverInstance& inst, int count) {
    if (count < 0) throw std::invalid_argument("pad_zero_columns: count must be >= 0");
    SetCoverInstance out = SetCoverInstance::zeros(inst.m, inst.d + count);
    for (int r = 0; r < inst.m; ++r)
        for (int c = 0; c < inst.d; ++c) out.set(r, c, inst.at(r, c));
    return out;
}

std::vector<double> witness_weight_vector(const SetCoverInstance& inst, const SubsetLex& witness) {
    witness.validate();
    std::vector<double> w(static_cast<std::size_t>(inst.d), 0.0);
    const double value = 1.0 / std::sqrt(static_cast<double>(witness.k));
    for (int col : witness.members) w[static_cast<std::size_t>(col)] = value;
    return w;
}

HardnessStream::HardnessStream(SetCoverInstance inst, int k, Rng rng)
    : inst_(std::move(inst)),
      k_(k),
      rng_(rng),
      inv_sqrt_d_(1.0 / std::sqrt(static_cast<double>(inst_.d))),
      inv_sqrt_k_(1.0 / std::sqrt(static_cast<double>(k))) {
    if (k_ < 1) throw std::invalid_argument("HardnessStream: k must be >= 1");
}

bool HardnessStream::next(LabeledExample& out) {
    const int row = rng_.uniform_int(inst_.m);
    const double signed_scale = rng_.coin() ? inv_sqrt_d_ : -inv_sqrt_d_;
    out.x.assign(static_cast<std::size_t>(inst_.d), 0.0);
    for (int col = 0; col < inst_.d; ++col)
        if (inst_.at(row, col)) out.x[static_cast<std::size_t>(col)] = signed_scale;
    out.y = signed_scale * inv_sqrt_k_;
    return true;
}

void StochasticModel::validate() const {
    if (noise_level < 0.0) throw std::invalid_argument("StochasticModel: negative noise level");
    if (squared_norm(true_weights) > 1.0 + 1e-12)
        throw std::invalid_argument("StochasticModel: true weights have norm > 1");
    if (law == FeatureLaw::kFixedDesign) {
        if (fixed_design.empty()) throw std::invalid_argument("StochasticModel: empty fixed design");
        for (const auto& row : fixed_design) {
            if (row.size() != true_weights.size())
                throw std::invalid_argument("StochasticModel: fixed design row dimension mismatch");
            if (squared_norm(row) > 1.0 + 1e-12)
                throw std::invalid_argument("StochasticModel: fixed design row has norm > 1");
        }
    }
}

StochasticModel make_sparse_model(int d, int k, double noise_level, Rng& rng) {
    const SubsetLex support = sample_uniform_subset(d, k, rng);
    StochasticModel model;
    model.true_weights.assign(static_cast<std::size_t>(d), 0.0);
    double n2 = 0.0;
    std::vector<double> raw(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
        raw[static_cast<std::size_t>(i)] = rng.normal();
        n2 += raw[static_cast<std::size_t>(i)] * raw[static_cast<std::size_t>(i)];
    }
    const double inv = 1.0 / std::sqrt(n2);
    for (int i = 0; i < k; ++i)
        model.true_weights[static_cast<std::size_t>(support.members[static_cast<std::size_t>(i)])] =
            raw[static_cast<std::size_t>(i)] * inv;
    // guard against the normalization landing a hair above 1
    const double norm = std::sqrt(squared_norm(model.true_weights));
    if (norm > 1.0)
        for (double& w : model.true_weights) w /= norm;
    model.noise_level = noise_level;
    return model;
}

StochasticStream::StochasticStream(StochasticModel model, Rng rng) : model_(std::move(model)), rng_(rng) {
    model_.validate();
}

bool StochasticStream::next(LabeledExample& out) {
    const std::size_t d = model_.true_weights.size();
    if (model_.law == StochasticModel::FeatureLaw::kUnitBall) {
        out.x.resize(d);
        double n2 = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            out.x[i] = rng_.normal();
            n2 += out.x[i] * out.x[i];
        }
        const double radius = std::pow(rng_.uniform_unit(), 1.0 / static_cast<double>(d));
        const double scale = (n2 > 0.0) ? radius / std::sqrt(n2) : 0.0;
        for (std::size_t i = 0; i < d; ++i) out.x[i] *= scale;
    } else {
        out.x = model_.fixed_design[design_cursor_];
        design_cursor_ = (design_cursor_ + 1) % model_.fixed_design.size();
    }
    double y = dot(model_.true_weights, out.x);
    if (model_.noise_level > 0.0) y += model_.noise_level * rng_.normal();
    out.y = std::clamp(y, -1.0, 1.0);
    return true;
}

void write_instance(const std::string& path, const SetCoverInstance& inst,
                    const std::optional<SubsetLex>& witness) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_instance: cannot open " + path);
    out << inst.m << " " << inst.d << "\n";
    for (int r = 0; r < inst.m; ++r) {
        for (int c = 0; c < inst.d; ++c) {
            if (c) out << " ";
            out << static_cast<int>(inst.at(r, c));
        }
        out << "\n";
    }
    if (witness) {
        out << "witness:";
        for (int col : witness->members) out << " " << col;
        out << "\n";
    }
    if (!out) throw std::runtime_error("write_instance: failed writing " + path);
}

InstanceFile read_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_instance: cannot open " + path);
    InstanceFile out;
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("read_instance: " + path + " is empty");
    {
        std::istringstream head(line);
        if (!(head >> out.inst.m >> out.inst.d) || out.inst.m < 1 || out.inst.d < 1)
            throw std::runtime_error("read_instance: bad header in " + path);
    }
    out.inst.cells.assign(static_cast<std::size_t>(out.inst.m) * out.inst.d, 0);
    for (int r = 0; r < out.inst.m; ++r) {
        if (!std::getline(in, line))
            throw std::runtime_error("read_instance: " + path + " truncated at row " + std::to_string(r));
        std::istringstream row(line);
        for (int c = 0; c < out.inst.d; ++c) {
            int v = 0;
            if (!(row >> v) || (v != 0 && v != 1))
                throw std::runtime_error("read_instance: bad cell at row " + std::to_string(r) +
                                         " col " + std::to_string(c) + " in " + path);
            out.inst.set(r, c, static_cast<std::uint8_t>(v));
        }
    }
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const std::string prefix = "witness:";
        if (line.rfind(prefix, 0) != 0)
            throw std::runtime_error("read_instance: unexpected trailing line in " + path);
        std::istringstream rest(line.substr(prefix.size()));
        SubsetLex witness;
        witness.d = out.inst.d;
        int col = 0;
        while (rest >> col) witness.members.push_back(col);
        witness.k = static_cast<int>(witness.members.size());
        witness.validate();
        out.witness = witness;
    }
    return out;
}

}  // namespace osr
