#include "gmsel/collections.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include "gmsel/errors.hpp"
#include "gmsel/numerics.hpp"

namespace gmsel {

// ---------------------------------------------------------------------------
// ModelKey

namespace {

void check_sorted_unique(const std::vector<int>& v, int lo, int hi, const char* who) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] < lo || v[i] > hi || (i > 0 && v[i] <= v[i - 1])) {
            throw DomainError(std::string(who) + ": indices must be strictly increasing within range");
        }
    }
}

int nominal_partition_dim(int r, const std::vector<int>& k) {
    long long dim = 1;
    for (std::size_t i = 0; i < k.size(); ++i) dim *= r + 1;
    for (int ki : k) dim *= ki;
    if (dim > std::numeric_limits<int>::max()) throw DomainError("partition: dimension overflows");
    return static_cast<int>(dim);
}

}  // namespace

ModelKey ModelKey::coords(std::vector<int> idx, int n) {
    check_sorted_unique(idx, 0, n - 1, "ModelKey::coords");
    const int dim = static_cast<int>(idx.size());
    return {CoordSubset{std::move(idx)}, dim, n};
}

ModelKey ModelKey::columns(std::vector<int> idx, int n) {
    check_sorted_unique(idx, 0, std::numeric_limits<int>::max(), "ModelKey::columns");
    const int dim = static_cast<int>(idx.size());
    return {ColumnSubset{std::move(idx)}, dim, n};
}

ModelKey ModelKey::change_points(std::vector<int> starts, int n) {
    check_sorted_unique(starts, 1, n - 1, "ModelKey::change_points");
    const int dim = static_cast<int>(starts.size()) + 1;
    return {ChangePoints{std::move(starts)}, dim, n};
}

ModelKey ModelKey::partition(int r, std::vector<int> k, int n) {
    if (r < 0 || k.empty()) throw DomainError("ModelKey::partition: need r >= 0 and d >= 1");
    for (int ki : k) {
        if (ki < 1) throw DomainError("ModelKey::partition: cell counts must be positive");
    }
    const int dim = nominal_partition_dim(r, k);
    return {PartitionIndex{r, std::move(k)}, dim, n};
}

int ModelKey::size() const {
    return std::visit(
        [this](const auto& m) -> int {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, CoordSubset> || std::is_same_v<T, ColumnSubset>) {
                return static_cast<int>(m.idx.size());
            } else if constexpr (std::is_same_v<T, ChangePoints>) {
                return static_cast<int>(m.starts.size());
            } else {
                return dim;
            }
        },
        model);
}

std::vector<int> ModelKey::content() const {
    return std::visit(
        [](const auto& m) -> std::vector<int> {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, CoordSubset> || std::is_same_v<T, ColumnSubset>) {
                return m.idx;
            } else if constexpr (std::is_same_v<T, ChangePoints>) {
                return m.starts;
            } else {
                std::vector<int> out{m.r};
                out.insert(out.end(), m.k.begin(), m.k.end());
                return out;
            }
        },
        model);
}

std::string ModelKey::to_string() const {
    std::ostringstream os;
    const auto c = content();
    if (const auto* part = std::get_if<PartitionIndex>(&model)) {
        os << "r=" << part->r << ";k=";
        for (std::size_t i = 0; i < part->k.size(); ++i) os << (i ? "x" : "") << part->k[i];
        return os.str();
    }
    os << "{";
    for (std::size_t i = 0; i < c.size(); ++i) os << (i ? " " : "") << c[i] + 1;
    os << "}";
    return os.str();
}

bool operator<(const ModelKey& a, const ModelKey& b) {
    if (a.dim != b.dim) return a.dim < b.dim;
    if (a.model.index() != b.model.index()) return a.model.index() < b.model.index();
    return a.content() < b.content();
}

bool operator==(const ModelKey& a, const ModelKey& b) {
    return a.dim == b.dim && a.n == b.n && a.model.index() == b.model.index() &&
           a.content() == b.content();
}

// ---------------------------------------------------------------------------
// CollectionSpec

CollectionSpec CollectionSpec::nonzero(int n, int p) {
    CollectionSpec s;
    s.family = Family::NonzeroComponents;
    s.n = n;
    s.p = p;
    s.validate();
    return s;
}

CollectionSpec CollectionSpec::ordered(int n, int n_columns, int p) {
    CollectionSpec s;
    s.family = Family::OrderedVarsel;
    s.n = n;
    s.n_columns = n_columns;
    s.p = p;
    s.validate();
    return s;
}

CollectionSpec CollectionSpec::complete(int n, int n_columns, int p, WeightScheme scheme) {
    CollectionSpec s;
    s.family = Family::CompleteVarsel;
    s.n = n;
    s.n_columns = n_columns;
    s.p = p;
    s.scheme = scheme;
    s.validate();
    return s;
}

CollectionSpec CollectionSpec::change_points(int n, int p) {
    CollectionSpec s;
    s.family = Family::ChangePointsConst;
    s.n = n;
    s.p = p;
    s.validate();
    return s;
}

CollectionSpec CollectionSpec::partition(int n, int d, int r_max) {
    CollectionSpec s;
    s.family = Family::PartitionPoly;
    s.n = n;
    s.d = d;
    s.r_max = r_max;
    s.validate();
    return s;
}

CollectionSpec CollectionSpec::dyadic(int p) {
    CollectionSpec s;
    s.family = Family::DyadicSplines;
    s.p = p;
    s.validate();
    return s;
}

CollectionSpec CollectionSpec::with_uniform(double a_prime_value) const {
    if (!(a_prime_value > 0.0)) throw DomainError("uniform weights need a' > 0");
    CollectionSpec s = *this;
    s.scheme = WeightScheme::Uniform;
    s.a_prime = a_prime_value;
    return s;
}

void CollectionSpec::validate() const {
    if (budget == 0) throw DomainError("collection: search budget must be positive");
    if (p < 0) throw DomainError("collection: p must be non-negative");
    switch (family) {
        case Family::NonzeroComponents:
            if (n < 3 || p > n - 2) throw DomainError("nonzero components: need p <= n - 2");
            break;
        case Family::OrderedVarsel:
        case Family::CompleteVarsel:
            if (n_columns < 1) throw DomainError("variable selection: need at least one column");
            if (p > std::min(n_columns, n - 2)) throw DomainError("variable selection: need p <= min(N, n - 2)");
            if (scheme == WeightScheme::Canonical && !(c > 0.0)) throw DomainError("variable selection: need c > 0");
            break;
        case Family::ChangePointsConst:
            if (n < 4 || p > n - 3) throw DomainError("change points: need p <= n - 3");
            break;
        case Family::PartitionPoly:
            if (d < 1 || d > 2) throw DomainError("partition: d must be 1 or 2");
            if (r_max < 0) throw DomainError("partition: r_max must be non-negative");
            if (n < 3) throw DomainError("partition: need n >= 3");
            break;
        case Family::DyadicSplines:
            break;
    }
    if (scheme == WeightScheme::SubsetOnly && family != Family::CompleteVarsel) {
        throw DomainError("subset-only weights apply to complete variable selection");
    }
    if (scheme == WeightScheme::Uniform && !(a_prime > 0.0)) throw DomainError("uniform weights need a' > 0");
}

// ---------------------------------------------------------------------------
// Weights

double weight_uniform(double a_prime, int D) {
    if (D < 0) throw DomainError("weight_uniform: D must be non-negative");
    return a_prime * D;
}

double weight_nonzero(int D, int n) {
    if (D < 0 || D > n) throw DomainError("weight_nonzero: need 0 <= D <= n");
    return log_binomial(n, D) + 2.0 * std::log(D + 1.0);
}

double weight_varsel(int m_size, bool is_ordered_prefix, double c, int n_columns, int p) {
    if (m_size < 0 || m_size > p) throw DomainError("weight_varsel: need 0 <= |m| <= p");
    if (is_ordered_prefix) return c * m_size;
    return log_binomial(n_columns, m_size) + std::log(static_cast<double>(p)) + std::log(m_size + 1.0);
}

double weight_varsel_subset_only(int m_size, int n_columns, int p) {
    if (m_size < 0 || m_size > p) throw DomainError("weight_varsel: need 0 <= |m| <= p");
    return std::log(static_cast<double>(p)) + std::log(m_size + 1.0) + log_binomial(n_columns, m_size);
}

double weight_changepoint(int m_size, int n) {
    if (m_size < 0 || m_size > n - 1) throw DomainError("weight_changepoint: need 0 <= |m| <= n - 1");
    return log_binomial(n - 1, m_size) + 2.0 * std::log(m_size + 2.0);
}

double weight_dyadic(int j, int q, int p) {
    if (j < 1 || j > 62) throw DomainError("weight_dyadic: need 1 <= j <= 62");
    const double cells = std::ldexp(1.0, j) - 1.0;
    if (q < 0 || q > p || q > cells) throw DomainError("weight_dyadic: need 0 <= q <= min(2^j - 1, p)");
    return log_binomial(cells, q) + q + 2.0 * std::log(static_cast<double>(j));
}

double weight_partition(int r, const std::vector<int>& k) {
    if (r < 0 || k.empty()) throw DomainError("weight_partition: need r >= 0 and d >= 1");
    for (int ki : k) {
        if (ki < 1) throw DomainError("weight_partition: cell counts must be positive");
    }
    return nominal_partition_dim(r, k);
}

namespace {

bool is_prefix(const std::vector<int>& idx) {
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (idx[i] != static_cast<int>(i)) return false;
    }
    return true;
}

}  // namespace

double weight_of(const CollectionSpec& spec, const ModelKey& key) {
    if (spec.scheme == WeightScheme::Uniform) return weight_uniform(spec.a_prime, key.dim);
    switch (spec.family) {
        case Family::NonzeroComponents: return weight_nonzero(key.size(), spec.n);
        case Family::OrderedVarsel: return spec.c * key.size();
        case Family::CompleteVarsel: {
            const auto& idx = std::get<ColumnSubset>(key.model).idx;
            const int s = static_cast<int>(idx.size());
            if (spec.scheme == WeightScheme::SubsetOnly) return weight_varsel_subset_only(s, spec.n_columns, spec.p);
            return weight_varsel(s, is_prefix(idx), spec.c, spec.n_columns, spec.p);
        }
        case Family::ChangePointsConst: return weight_changepoint(key.size(), spec.n);
        case Family::PartitionPoly: {
            const auto& part = std::get<PartitionIndex>(key.model);
            return weight_partition(part.r, part.k);
        }
        case Family::DyadicSplines: break;
    }
    throw DomainError("weight_of: the dyadic family has no enumerable models");
}

WeightFn weight_fn(const CollectionSpec& spec) {
    return [spec](const ModelKey& key) { return weight_of(spec, key); };
}

// ---------------------------------------------------------------------------
// Sigma', complexity, counting

SigmaPrime sigma_prime(const CollectionSpec& spec) {
    spec.validate();
    const bool uniform = spec.scheme == WeightScheme::Uniform;
    // Accumulates count * (D + 1) * e^{-L} with count given as a log.
    double total = 0.0;
    auto add = [&](double log_count, int dim, double L) {
        total += std::exp(log_count + std::log(dim + 1.0) - L);
    };
    switch (spec.family) {
        case Family::NonzeroComponents:
            for (int D = 0; D <= spec.p; ++D) {
                add(log_binomial(spec.n, D), D, uniform ? spec.a_prime * D : weight_nonzero(D, spec.n));
            }
            break;
        case Family::OrderedVarsel:
            for (int D = 0; D <= spec.p; ++D) add(0.0, D, (uniform ? spec.a_prime : spec.c) * D);
            break;
        case Family::CompleteVarsel:
            for (int D = 0; D <= spec.p; ++D) {
                const double lc = log_binomial(spec.n_columns, D);
                if (uniform) {
                    add(lc, D, spec.a_prime * D);
                } else if (spec.scheme == WeightScheme::SubsetOnly) {
                    add(lc, D, weight_varsel_subset_only(D, spec.n_columns, spec.p));
                } else {
                    add(0.0, D, spec.c * D);
                    const double others = std::exp(lc) - 1.0;
                    if (others > 0.0) {
                        add(std::log(others), D, weight_varsel(D, false, spec.c, spec.n_columns, spec.p));
                    }
                }
            }
            break;
        case Family::ChangePointsConst:
            for (int s = 0; s <= spec.p; ++s) {
                add(log_binomial(spec.n - 1, s), s + 1,
                    uniform ? spec.a_prime * (s + 1) : weight_changepoint(s, spec.n));
            }
            break;
        case Family::PartitionPoly:
            for (const auto& key : partition_models(spec.n, spec.d, spec.r_max)) {
                add(0.0, key.dim, weight_of(spec, key));
            }
            break;
        case Family::DyadicSplines: {
            const double e = std::numbers::e;
            const double bound = std::numbers::pi * std::numbers::pi * e * (3.0 * e - 2.0) /
                                 (6.0 * (e - 1.0) * (e - 1.0));
            return {bound, true};
        }
    }
    return {total, false};
}

std::optional<ComplexityIndex> complexity_of(const CollectionSpec& spec) {
    switch (spec.family) {
        case Family::NonzeroComponents: return ComplexityIndex{1.0, std::log(static_cast<double>(spec.n))};
        case Family::OrderedVarsel: return ComplexityIndex{1.0, 0.0};
        case Family::CompleteVarsel: return ComplexityIndex{1.0, std::log(static_cast<double>(spec.n_columns))};
        case Family::ChangePointsConst: return ComplexityIndex{1.0, std::log(static_cast<double>(spec.n))};
        case Family::PartitionPoly:
        case Family::DyadicSplines: return std::nullopt;
    }
    return std::nullopt;
}

namespace {

std::uint64_t saturating_binomial_sum(int universe, int p) {
    long double total = 0.0L;
    for (int s = 0; s <= std::min(p, universe); ++s) {
        total += std::exp(static_cast<long double>(log_binomial(universe, s)));
    }
    if (total >= 1.8e19L) return std::numeric_limits<std::uint64_t>::max();
    return static_cast<std::uint64_t>(std::llround(total));
}

}  // namespace

std::uint64_t count_models(const CollectionSpec& spec) {
    spec.validate();
    switch (spec.family) {
        case Family::NonzeroComponents: return saturating_binomial_sum(spec.n, spec.p);
        case Family::OrderedVarsel: return static_cast<std::uint64_t>(spec.p) + 1;
        case Family::CompleteVarsel: return saturating_binomial_sum(spec.n_columns, spec.p);
        case Family::ChangePointsConst: return saturating_binomial_sum(spec.n - 1, spec.p);
        case Family::PartitionPoly: return partition_models(spec.n, spec.d, spec.r_max).size();
        case Family::DyadicSplines: break;
    }
    throw DomainError("count_models: the dyadic family is infinite");
}

std::vector<ModelKey> partition_models(int n, int d, int r_max) {
    if (d < 1 || d > 2) throw DomainError("partition_models: d must be 1 or 2");
    std::vector<ModelKey> out;
    const int cap = n - 2;
    for (int r = 0; r <= r_max; ++r) {
        const int unit = d == 1 ? r + 1 : (r + 1) * (r + 1);
        if (unit > cap) break;
        const int cells = cap / unit;
        if (d == 1) {
            for (int k = 1; k <= cells; ++k) out.push_back(ModelKey::partition(r, {k}, n));
        } else {
            for (int k1 = 1; k1 <= cells; ++k1) {
                for (int k2 = 1; k1 * k2 <= cells; ++k2) out.push_back(ModelKey::partition(r, {k1, k2}, n));
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------------------
// Enumeration

ModelEnumerator::ModelEnumerator(const CollectionSpec& spec) : spec_(spec) {
    count_ = count_models(spec);
    if (count_ > spec.budget) throw BudgetExceeded(count_, spec.budget);
    switch (spec.family) {
        case Family::NonzeroComponents: universe_ = spec.n; break;
        case Family::CompleteVarsel: universe_ = spec.n_columns; break;
        case Family::ChangePointsConst:
            universe_ = spec.n - 1;
            offset_ = 1;
            break;
        case Family::OrderedVarsel:
            for (int D = 0; D <= spec.p; ++D) {
                std::vector<int> idx(D);
                std::iota(idx.begin(), idx.end(), 0);
                listed_.push_back(ModelKey::columns(std::move(idx), spec.n));
            }
            break;
        case Family::PartitionPoly: listed_ = partition_models(spec.n, spec.d, spec.r_max); break;
        case Family::DyadicSplines: throw DomainError("the dyadic family cannot be enumerated");
    }
}

bool ModelEnumerator::advance_subset() {
    if (!started_) {
        started_ = true;
        current_.clear();
        return true;
    }
    const int s = static_cast<int>(current_.size());
    // Next combination of the same size in lexicographic order.
    for (int i = s - 1; i >= 0; --i) {
        if (current_[i] < universe_ - s + i) {
            ++current_[i];
            for (int j = i + 1; j < s; ++j) current_[j] = current_[j - 1] + 1;
            return true;
        }
    }
    if (s + 1 > spec_.p || s + 1 > universe_) return false;
    current_.resize(s + 1);
    std::iota(current_.begin(), current_.end(), 0);
    return true;
}

std::optional<ModelKey> ModelEnumerator::next() {
    if (done_) return std::nullopt;
    if (spec_.family == Family::OrderedVarsel || spec_.family == Family::PartitionPoly) {
        if (pos_ >= listed_.size()) {
            done_ = true;
            return std::nullopt;
        }
        return listed_[pos_++];
    }
    if (!advance_subset()) {
        done_ = true;
        return std::nullopt;
    }
    std::vector<int> idx(current_);
    for (int& v : idx) v += offset_;
    switch (spec_.family) {
        case Family::NonzeroComponents: return ModelKey::coords(std::move(idx), spec_.n);
        case Family::CompleteVarsel: return ModelKey::columns(std::move(idx), spec_.n);
        default: return ModelKey::change_points(std::move(idx), spec_.n);
    }
}

std::vector<ModelKey> enumerate_models(const CollectionSpec& spec) {
    ModelEnumerator it(spec);
    std::vector<ModelKey> out;
    out.reserve(it.count());
    while (auto key = it.next()) out.push_back(std::move(*key));
    return out;
}

}  // namespace gmsel
