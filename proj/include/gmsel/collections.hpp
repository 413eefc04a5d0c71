#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace gmsel {

// Indices inside model keys are 0-based. Reports print them 1-based.

/// Keep the listed coordinates of the observation vector.
struct CoordSubset {
    std::vector<int> idx;
};
/// Span of the listed design columns.
struct ColumnSubset {
    std::vector<int> idx;
};
/// Piecewise constant fits; each entry starts a new segment (values in 1..n-1).
struct ChangePoints {
    std::vector<int> starts;
};
/// Piecewise polynomials of degree <= r on a regular grid with k[i] cells
/// along axis i of [0, 1]^d.
struct PartitionIndex {
    int r = 0;
    std::vector<int> k;
};

using ModelVariant = std::variant<CoordSubset, ColumnSubset, ChangePoints, PartitionIndex>;

/// Identifies one model S_m. `dim` is the nominal dimension D_m; fits may
/// report a smaller effective rank.
struct ModelKey {
    ModelVariant model;
    int dim = 0;
    int n = 0;

    static ModelKey coords(std::vector<int> idx, int n);
    static ModelKey columns(std::vector<int> idx, int n);
    static ModelKey change_points(std::vector<int> starts, int n);
    static ModelKey partition(int r, std::vector<int> k, int n);

    int N() const noexcept { return n - dim; }
    /// Number of selected coordinates, columns or change points; for a
    /// partition, the nominal dimension.
    int size() const;
    /// The index list (coordinates, columns, starts, or (r, k...)).
    std::vector<int> content() const;
    std::string to_string() const;

    /// Ordered by dimension, then variant, then lexicographic content.
    friend bool operator<(const ModelKey& a, const ModelKey& b);
    friend bool operator==(const ModelKey& a, const ModelKey& b);
    friend bool operator!=(const ModelKey& a, const ModelKey& b) { return !(a == b); }
};

struct ComplexityIndex {
    double M = 1.0;
    double a = 0.0;
};

enum class Family {
    NonzeroComponents,
    OrderedVarsel,
    CompleteVarsel,
    ChangePointsConst,
    PartitionPoly,
    DyadicSplines
};

enum class WeightScheme {
    Uniform,    ///< L = a' D
    Canonical,  ///< the family's default weights
    SubsetOnly  ///< variable selection without an ordered list: e^-L = 1 / (p (D+1) C(N, D))
};

struct CollectionSpec {
    Family family = Family::NonzeroComponents;
    int n = 0;          ///< number of observations
    int p = 0;          ///< maximal |m| (or maximal dyadic q)
    int n_columns = 0;  ///< N, the number of candidate columns for variable selection
    int d = 1;          ///< partition dimension
    int r_max = 2;      ///< partition degree cap
    WeightScheme scheme = WeightScheme::Canonical;
    double a_prime = 1.0;  ///< uniform weight slope
    double c = 1.0;        ///< ordered-prefix weight slope
    std::uint64_t budget = 10'000'000;

    static CollectionSpec nonzero(int n, int p);
    static CollectionSpec ordered(int n, int n_columns, int p);
    static CollectionSpec complete(int n, int n_columns, int p, WeightScheme scheme = WeightScheme::Canonical);
    static CollectionSpec change_points(int n, int p);
    static CollectionSpec partition(int n, int d, int r_max = 2);
    static CollectionSpec dyadic(int p);

    /// Checks the family caps; throws DomainError.
    void validate() const;
    CollectionSpec with_uniform(double a_prime_value) const;
};

// Weight formulas.
double weight_uniform(double a_prime, int D);
double weight_nonzero(int D, int n);
double weight_varsel(int m_size, bool is_ordered_prefix, double c, int n_columns, int p);
/// -log of 1 / (p (D+1) C(N, D)).
double weight_varsel_subset_only(int m_size, int n_columns, int p);
double weight_changepoint(int m_size, int n);
double weight_dyadic(int j, int q, int p);
double weight_partition(int r, const std::vector<int>& k);

/// L_m for a model of the spec's family under the spec's scheme.
double weight_of(const CollectionSpec& spec, const ModelKey& key);

using WeightFn = std::function<double(const ModelKey&)>;
WeightFn weight_fn(const CollectionSpec& spec);

struct SigmaPrime {
    double value = 0.0;
    bool upper_bound = false;  ///< true when a closed-form bound is returned
};
/// Sum over models of (D_m + 1) e^{-L_m}, grouped by dimension.
SigmaPrime sigma_prime(const CollectionSpec& spec);

/// Complexity index of the family, or nullopt when none is available.
std::optional<ComplexityIndex> complexity_of(const CollectionSpec& spec);

/// Number of models in a finite family.
std::uint64_t count_models(const CollectionSpec& spec);

/// Single-pass iterator over a finite collection, in ModelKey order.
class ModelEnumerator {
public:
    /// Throws BudgetExceeded when the collection is larger than the budget.
    explicit ModelEnumerator(const CollectionSpec& spec);

    std::optional<ModelKey> next();
    std::uint64_t count() const noexcept { return count_; }

private:
    bool advance_subset();

    CollectionSpec spec_;
    std::uint64_t count_ = 0;
    int universe_ = 0;   // size of the ground set for subset families
    int offset_ = 0;     // added to subset entries (change points start at 1)
    std::vector<int> current_;
    bool started_ = false;
    bool done_ = false;
    std::vector<ModelKey> listed_;  // ordered and partition families
    std::size_t pos_ = 0;
};

std::vector<ModelKey> enumerate_models(const CollectionSpec& spec);

/// All partition indices with (r+1)^d k_1...k_d <= n - 2 and r <= r_max,
/// in ModelKey order.
std::vector<ModelKey> partition_models(int n, int d, int r_max);

}  // namespace gmsel
