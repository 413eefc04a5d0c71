#include "gmsel/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "gmsel/errors.hpp"

namespace gmsel {

Study parse_study(const std::string& name) {
    if (name == "nonzero") return Study::NonzeroGrid;
    if (name == "theta1") return Study::VarselTheta1;
    if (name == "theta2") return Study::VarselTheta2;
    if (name == "overfit") return Study::OverfitDemo;
    throw DomainError("unknown study '" + name + "' (expected nonzero, theta1, theta2 or overfit)");
}

std::string study_name(Study s) {
    switch (s) {
        case Study::NonzeroGrid: return "nonzero";
        case Study::VarselTheta1: return "theta1";
        case Study::VarselTheta2: return "theta2";
        case Study::OverfitDemo: return "overfit";
    }
    return "?";
}

void SimConfig::validate() const {
    if (reps < 1) throw DomainError("simulation: reps must be >= 1");
    if (ns.empty()) throw DomainError("simulation: empty n list");
    for (int n : ns) {
        if (n < 8) throw DomainError("simulation: n must be >= 8");
    }
    for (double K : Ks) {
        if (!(K > 1.0)) throw DomainError("simulation: K must exceed 1");
    }
    for (double s : sigmas) {
        if (!(s > 0.0)) throw DomainError("simulation: sigma must be positive");
    }
    if (designs < 1) throw DomainError("simulation: designs must be >= 1");
    if (p_varsel < 1 || p_varsel > 18) throw DomainError("simulation: p_varsel must lie in 1..18");
    if (!(overfit_C > 0.0 && overfit_C < 1.0)) throw DomainError("simulation: overfit C must lie in (0, 1)");
    if (overfit_dbar < 1) throw DomainError("simulation: overfit D_bar must be >= 1");
}

double binomial_se(double frac, int reps) { return reps > 0 ? std::sqrt(frac * (1.0 - frac) / reps) : 0.0; }

int nonzero_p(int n) { return static_cast<int>(std::floor(n / std::log(static_cast<double>(n)))); }

std::vector<int> nonzero_ks(int p) {
    std::vector<int> ks{0};
    for (int k = 1; k <= p; k *= 2) ks.push_back(k);
    if (ks.back() != p) ks.push_back(p);
    return ks;
}

std::vector<double> nonzero_penalties(const PenaltyRule& rule, int n, int p) {
    std::vector<double> pen(p + 1);
    for (int D = 0; D <= p; ++D) pen[D] = rule(D, weight_nonzero(D, n), n);
    return pen;
}

double nonzero_oracle(int k, double s, int p) {
    double best = std::numeric_limits<double>::infinity();
    for (int D = 0; D <= p; ++D) best = std::min(best, (D <= k ? s * s * (k - D) : 0.0) + D);
    return best;
}

namespace {

// Running sums for one (point, criterion) cell.
struct Accumulator {
    int reps = 0;
    double loss = 0.0, loss2 = 0.0;
    double dim = 0.0, dim2 = 0.0;
    int dim0 = 0, dim1 = 0, dim2plus = 0, full = 0, eq_m0 = 0, sup_m0 = 0;

    void add(double l, int d, int p, bool eq, bool sup) {
        ++reps;
        loss += l;
        loss2 += l * l;
        dim += d;
        dim2 += static_cast<double>(d) * d;
        if (d == 0) ++dim0;
        else if (d == 1) ++dim1;
        else ++dim2plus;
        if (d == p) ++full;
        if (eq) ++eq_m0;
        if (sup) ++sup_m0;
    }
};

double mean_se(double sum, double sum2, int reps) {
    if (reps < 2) return 0.0;
    const double mean = sum / reps;
    return std::sqrt(std::max(0.0, (sum2 - reps * mean * mean) / (reps - 1)) / reps);
}

SimRow finish_row(SimRow row, const Accumulator& a, bool with_m0) {
    const double r = a.reps;
    row.reps = a.reps;
    row.risk = a.loss / r;
    row.risk_se = mean_se(a.loss, a.loss2, a.reps);
    if (row.oracle > 0.0) {
        row.ratio = row.risk / row.oracle;
        row.ratio_se = row.risk_se / row.oracle;
    }
    row.mean_dim = a.dim / r;
    row.mean_dim_se = mean_se(a.dim, a.dim2, a.reps);
    row.frac_dim0 = a.dim0 / r;
    row.frac_dim1 = a.dim1 / r;
    row.frac_dim2plus = a.dim2plus / r;
    row.frac_full = a.full / r;
    row.frac_pos = 1.0 - row.frac_dim0;
    if (with_m0) {
        row.frac_eq_m0 = a.eq_m0 / r;
        row.frac_sup_m0 = a.sup_m0 / r;
    }
    return row;
}

std::uint64_t stream_id(std::uint64_t point, std::uint64_t rep) { return (point << 32) | rep; }

struct NamedRule {
    std::string name;
    PenaltyRule rule;
};

std::vector<NamedRule> nonzero_rules(const SimConfig& c) {
    std::vector<NamedRule> rules;
    for (double K : c.Ks) rules.push_back({PenaltyRule::kl(K).name(), PenaltyRule::kl(K)});
    if (c.classical) {
        rules.push_back({"AIC", PenaltyRule::aic()});
        rules.push_back({"BIC", PenaltyRule::bic()});
        rules.push_back({"AMDL", PenaltyRule::amdl()});
    }
    return rules;
}

}  // namespace

SimReport run_sim_nonzero(const SimConfig& config) {
    config.validate();
    const auto rules = nonzero_rules(config);
    SimReport report;
    std::uint64_t point = 0;
    for (int n : config.ns) {
        const int p = nonzero_p(n);
        std::vector<std::vector<double>> pens;
        for (const auto& r : rules) pens.push_back(nonzero_penalties(r.rule, n, p));
        std::vector<int> ks = config.ks.empty() ? nonzero_ks(p) : config.ks;
        for (int k : ks) {
            if (k < 0 || k > p) throw DomainError("simulation: need 0 <= k <= p");
            // The signal level is irrelevant when k = 0.
            const std::vector<double> ss = k == 0 ? std::vector<double>{0.0} : config.ss;
            for (double s : ss) {
                Eigen::VectorXd mu = Eigen::VectorXd::Zero(n);
                mu.head(k).setConstant(s);
                std::vector<Accumulator> acc(rules.size());
                for (int rep = 0; rep < config.reps; ++rep) {
                    RngStream stream(config.master_seed, stream_id(point, rep));
                    Eigen::VectorXd y(n);
                    for (int i = 0; i < n; ++i) y[i] = mu[i] + stream.gaussian();
                    for (std::size_t r = 0; r < rules.size(); ++r) {
                        const auto out = select_nonzero(y, pens[r]);
                        acc[r].add((out.fit.mu_hat - mu).squaredNorm(), out.m_hat.dim, p, false, false);
                    }
                }
                for (std::size_t r = 0; r < rules.size(); ++r) {
                    SimRow row;
                    row.study = "nonzero";
                    row.criterion = rules[r].name;
                    row.n = n;
                    row.p = p;
                    row.k = k;
                    row.s = s;
                    row.oracle = nonzero_oracle(k, s, p);
                    report.rows.push_back(finish_row(row, acc[r], false));
                }
                ++point;
            }
        }
    }
    return report;
}

Eigen::MatrixXd theta1_design(int n, RngStream& stream) {
    constexpr int N = 8;
    Eigen::MatrixXd cov(N, N);
    for (int j = 0; j < N; ++j) {
        for (int k = 0; k < N; ++k) cov(j, k) = std::pow(0.5, std::abs(j - k));
    }
    const Eigen::MatrixXd L = cov.llt().matrixL();
    Eigen::MatrixXd X(n, N);
    Eigen::VectorXd z(N);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < N; ++j) z[j] = stream.gaussian();
        X.row(i) = (L * z).transpose();
    }
    return X;
}

Eigen::VectorXd theta1_coefficients() {
    Eigen::VectorXd a = Eigen::VectorXd::Zero(8);
    a[0] = 3.0;
    a[1] = 1.5;
    a[4] = 2.0;
    return a;
}

Eigen::MatrixXd theta2_design(int n) {
    if (n < 4) throw DomainError("theta2_design: need n >= 4");
    Eigen::MatrixXd X = Eigen::MatrixXd::Identity(n, n);
    X.col(0).setZero();
    X(0, 0) = 1.0 / std::sqrt(2.0);
    X(1, 0) = -1.0 / std::sqrt(2.0);
    X.col(1).setZero();
    const double s2 = std::sqrt(1.0 + 1.001 * 1.001);
    X(0, 1) = -1.0 / s2;
    X(1, 1) = 1.001 / s2;
    const double s3 = std::sqrt(1.0 + (n - 2.0) / (static_cast<double>(n) * n));
    X.col(2).setConstant(1.0 / n / s3);
    X(0, 2) = 1.0 / std::sqrt(2.0) / s3;
    X(1, 2) = 1.0 / std::sqrt(2.0) / s3;
    return X;
}

Eigen::VectorXd theta2_mean(int n) {
    Eigen::VectorXd mu = Eigen::VectorXd::Zero(n);
    mu[0] = n;
    mu[1] = n;
    return mu;
}

double varsel_oracle(const Eigen::VectorXd& mu, const Eigen::MatrixXd& X, int p, double sigma) {
    const int n = static_cast<int>(mu.size());
    Design design;
    design.X = X;
    double best = std::numeric_limits<double>::infinity();
    ModelEnumerator models(CollectionSpec::complete(n, static_cast<int>(X.cols()), p));
    while (auto key = models.next()) {
        const FitRecord fit = project(mu, *key, &design);
        best = std::min(best, fit.rss + fit.effective_rank * sigma * sigma);
    }
    return best;
}

namespace {

bool same_set(const std::vector<int>& a, const std::vector<int>& b) { return a == b; }

bool contains_all(const std::vector<int>& a, const std::vector<int>& b) {
    return std::includes(a.begin(), a.end(), b.begin(), b.end());
}

// One design of a variable-selection study: reps draws, one row per K.
std::vector<SimRow> varsel_point(const SimConfig& config, const std::string& study, const Eigen::MatrixXd& X,
                                 const Eigen::VectorXd& mu, double sigma, const std::vector<int>& m0,
                                 std::uint64_t point, int design_index) {
    const int n = static_cast<int>(X.rows());
    const int N = static_cast<int>(X.cols());
    const int p = config.p_varsel;
    auto spec = CollectionSpec::complete(n, N, p, WeightScheme::SubsetOnly);
    const WeightFn weights = weight_fn(spec);
    const double oracle = varsel_oracle(mu, X, p, sigma);
    std::vector<Accumulator> acc(config.Ks.size());
    for (int rep = 0; rep < config.reps; ++rep) {
        RngStream stream(config.master_seed, stream_id(point, rep));
        Eigen::VectorXd y(n);
        for (int i = 0; i < n; ++i) y[i] = mu[i] + sigma * stream.gaussian();
        for (std::size_t r = 0; r < config.Ks.size(); ++r) {
            const auto out = select_complete(y, X, p, PenaltyRule::kl(config.Ks[r]), weights, spec.budget);
            const auto m = out.m_hat.content();
            acc[r].add((out.fit.mu_hat - mu).squaredNorm(), static_cast<int>(m.size()), p, same_set(m, m0),
                       contains_all(m, m0));
        }
    }
    std::vector<SimRow> rows;
    for (std::size_t r = 0; r < config.Ks.size(); ++r) {
        SimRow row;
        row.study = study;
        row.criterion = PenaltyRule::kl(config.Ks[r]).name();
        row.n = n;
        row.p = p;
        row.k = static_cast<int>(m0.size());
        row.sigma = sigma;
        row.design = design_index;
        row.oracle = oracle;
        rows.push_back(finish_row(row, acc[r], true));
    }
    return rows;
}

// Average of per-design rows; SEs combine as independent means.
SimRow pool_rows(const std::vector<SimRow>& rows) {
    SimRow out = rows.front();
    out.design = -1;
    const double S = static_cast<double>(rows.size());
    double risk = 0, risk_v = 0, oracle = 0, ratio = 0, ratio_v = 0, dim = 0, dim_v = 0;
    double f0 = 0, f1 = 0, f2 = 0, ff = 0, fp = 0, feq = 0, fsup = 0;
    int reps = 0;
    for (const auto& r : rows) {
        reps += r.reps;
        risk += r.risk;
        risk_v += r.risk_se * r.risk_se;
        oracle += r.oracle;
        ratio += r.ratio.value_or(0.0);
        ratio_v += r.ratio_se * r.ratio_se;
        dim += r.mean_dim;
        dim_v += r.mean_dim_se * r.mean_dim_se;
        f0 += r.frac_dim0;
        f1 += r.frac_dim1;
        f2 += r.frac_dim2plus;
        ff += r.frac_full;
        fp += r.frac_pos;
        feq += r.frac_eq_m0.value_or(0.0);
        fsup += r.frac_sup_m0.value_or(0.0);
    }
    out.reps = reps;
    out.risk = risk / S;
    out.risk_se = std::sqrt(risk_v) / S;
    out.oracle = oracle / S;
    out.ratio = ratio / S;
    out.ratio_se = std::sqrt(ratio_v) / S;
    out.mean_dim = dim / S;
    out.mean_dim_se = std::sqrt(dim_v) / S;
    out.frac_dim0 = f0 / S;
    out.frac_dim1 = f1 / S;
    out.frac_dim2plus = f2 / S;
    out.frac_full = ff / S;
    out.frac_pos = fp / S;
    out.frac_eq_m0 = feq / S;
    out.frac_sup_m0 = fsup / S;
    return out;
}

}  // namespace

SimReport run_sim_varsel(const SimConfig& config) {
    config.validate();
    constexpr int n = 20;
    SimReport report;
    if (config.study == Study::VarselTheta2) {
        const Eigen::MatrixXd X = theta2_design(n);
        report.rows = varsel_point(config, "theta2", X, theta2_mean(n), 1.0, {0, 1}, 0, -1);
        return report;
    }
    if (config.study != Study::VarselTheta1) throw DomainError("run_sim_varsel: not a variable-selection study");
    if (config.p_varsel > 8) throw DomainError("run_sim_varsel: Theta1 has 8 columns");
    const Eigen::VectorXd a = theta1_coefficients();
    // Design draws use stream indices above every replicate index.
    constexpr std::uint64_t kDesignStreams = std::uint64_t{1} << 62;
    std::vector<std::vector<SimRow>> per_sigma(config.sigmas.size());
    std::uint64_t point = 0;
    for (int d = 0; d < config.designs; ++d) {
        RngStream ds(config.master_seed, kDesignStreams + static_cast<std::uint64_t>(d));
        const Eigen::MatrixXd X = theta1_design(n, ds);
        const Eigen::VectorXd mu = X * a;
        for (std::size_t si = 0; si < config.sigmas.size(); ++si) {
            auto rows = varsel_point(config, "theta1", X, mu, config.sigmas[si], {0, 1, 4}, point++, d);
            for (auto& r : rows) {
                report.rows.push_back(r);
                per_sigma[si].push_back(r);
            }
        }
    }
    for (const auto& rows : per_sigma) {
        for (std::size_t r = 0; r < config.Ks.size(); ++r) {
            std::vector<SimRow> same;
            for (std::size_t i = r; i < rows.size(); i += config.Ks.size()) same.push_back(rows[i]);
            report.rows.push_back(pool_rows(same));
        }
    }
    return report;
}

SimReport run_overfit_demo(const SimConfig& config) {
    config.validate();
    SimReport report;
    std::uint64_t point = 0;

    // Nested chain {1..D}, D <= D_bar, with pen(D) = C D.
    {
        const int dbar = config.overfit_dbar;
        const int n = 2 * dbar;
        std::vector<ModelKey> chain;
        std::vector<int> idx;
        chain.push_back(ModelKey::coords({}, n));
        for (int D = 1; D <= dbar; ++D) {
            idx.push_back(D - 1);
            chain.push_back(ModelKey::coords(idx, n));
        }
        std::map<int, double> table;
        for (int D = 0; D <= dbar; ++D) table[D] = config.overfit_C * D;
        const auto rule = PenaltyRule::user_table(table);
        const WeightFn zero = [](const ModelKey&) { return 0.0; };
        Accumulator acc;
        int above = 0;
        const double threshold = 0.5 * (1.0 - config.overfit_C) * dbar;
        for (int rep = 0; rep < config.reps; ++rep) {
            RngStream stream(config.master_seed, stream_id(point, rep));
            Eigen::VectorXd y(n);
            for (int i = 0; i < n; ++i) y[i] = stream.gaussian();
            const auto out = select_generic(y, chain, rule, zero, Criterion::CritL);
            acc.add(out.fit.mu_hat.squaredNorm(), out.m_hat.dim, dbar, false, false);
            if (out.m_hat.dim >= threshold) ++above;
        }
        SimRow row;
        row.study = "overfit";
        char buf[64];
        std::snprintf(buf, sizeof buf, "chain C=%g", config.overfit_C);
        row.criterion = buf;
        row.n = n;
        row.p = dbar;
        row = finish_row(row, acc, false);
        row.frac_above = static_cast<double>(above) / config.reps;
        report.rows.push_back(row);
        ++point;
    }

    for (int n : config.ns) {
        const int p = nonzero_p(n);
        const std::vector<NamedRule> rules{{"AIC", PenaltyRule::aic()}, {"BIC", PenaltyRule::bic()}};
        std::vector<std::vector<double>> pens;
        for (const auto& r : rules) pens.push_back(nonzero_penalties(r.rule, n, p));
        std::vector<Accumulator> acc(rules.size());
        for (int rep = 0; rep < config.reps; ++rep) {
            RngStream stream(config.master_seed, stream_id(point, rep));
            Eigen::VectorXd y(n);
            for (int i = 0; i < n; ++i) y[i] = stream.gaussian();
            for (std::size_t r = 0; r < rules.size(); ++r) {
                const auto out = select_nonzero(y, pens[r]);
                acc[r].add(out.fit.mu_hat.squaredNorm(), out.m_hat.dim, p, false, false);
            }
        }
        for (std::size_t r = 0; r < rules.size(); ++r) {
            SimRow row;
            row.study = "overfit";
            row.criterion = rules[r].name;
            row.n = n;
            row.p = p;
            report.rows.push_back(finish_row(row, acc[r], false));
        }
        ++point;
    }
    return report;
}

SimReport run_study(const SimConfig& config) {
    switch (config.study) {
        case Study::NonzeroGrid: return run_sim_nonzero(config);
        case Study::VarselTheta1:
        case Study::VarselTheta2: return run_sim_varsel(config);
        case Study::OverfitDemo: return run_overfit_demo(config);
    }
    throw DomainError("run_study: unknown study");
}

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }

const std::vector<std::string> kColumns{
    "study",     "criterion", "n",        "p",           "k",         "s",         "sigma",     "design",
    "reps",      "risk",      "risk_se",  "oracle",      "ratio",     "ratio_se",  "mean_dim",  "mean_dim_se",
    "frac_dim0", "frac_dim1", "frac_dim2plus", "frac_full", "frac_pos", "frac_eq_m0", "frac_sup_m0", "frac_above"};

std::vector<std::string> cells(const SimRow& r) {
    return {r.study,
            r.criterion,
            std::to_string(r.n),
            std::to_string(r.p),
            std::to_string(r.k),
            fmt(r.s),
            fmt(r.sigma),
            r.design < 0 ? std::string("all") : std::to_string(r.design + 1),
            std::to_string(r.reps),
            fmt(r.risk),
            fmt(r.risk_se),
            fmt(r.oracle),
            fmt(r.ratio),
            r.ratio ? fmt(r.ratio_se) : std::string(),
            fmt(r.mean_dim),
            fmt(r.mean_dim_se),
            fmt(r.frac_dim0),
            fmt(r.frac_dim1),
            fmt(r.frac_dim2plus),
            fmt(r.frac_full),
            fmt(r.frac_pos),
            fmt(r.frac_eq_m0),
            fmt(r.frac_sup_m0),
            fmt(r.frac_above)};
}

}  // namespace

void write_csv(std::ostream& os, const SimReport& report) {
    for (std::size_t i = 0; i < kColumns.size(); ++i) os << (i ? "," : "") << kColumns[i];
    os << '\n';
    for (const auto& row : report.rows) {
        const auto c = cells(row);
        for (std::size_t i = 0; i < c.size(); ++i) os << (i ? "," : "") << c[i];
        os << '\n';
    }
}

void write_markdown(std::ostream& os, const SimReport& report) {
    for (const auto& name : kColumns) os << "| " << name << ' ';
    os << "|\n";
    for (std::size_t i = 0; i < kColumns.size(); ++i) os << "|---";
    os << "|\n";
    for (const auto& row : report.rows) {
        for (const auto& c : cells(row)) os << "| " << c << ' ';
        os << "|\n";
    }
}

std::vector<PenaltyCurveRow> emit_penalty_curve(int n, double K, int p) {
    if (p < 0 || p > n - 2) throw DomainError("emit_penalty_curve: need 0 <= p <= n - 2");
    const auto kl = nonzero_penalties(PenaltyRule::kl(K), n, p);
    std::vector<PenaltyCurveRow> rows;
    for (int D = 0; D <= p; ++D) rows.push_back({D, pen_classical(ClassicalKind::AMDL, D, n), kl[D]});
    return rows;
}

void write_penalty_curve_csv(std::ostream& os, const std::vector<PenaltyCurveRow>& rows) {
    os << "D,pen_amdl,pen_kl\n";
    for (const auto& r : rows) os << r.D << ',' << fmt(r.amdl) << ',' << fmt(r.kl) << '\n';
}

int CsvTable::find(const std::string& name) const {
    const auto it = std::find(names.begin(), names.end(), name);
    return it == names.end() ? -1 : static_cast<int>(it - names.begin());
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

}  // namespace

CsvTable read_csv(std::istream& is) {
    CsvTable table;
    std::string line;
    std::size_t lineno = 0;
    bool have_header = false;
    while (std::getline(is, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const auto parts = split(line);
        if (!have_header) {
            for (const auto& name : parts) {
                if (name.empty()) throw ParseError(lineno, "empty column name in header");
                if (table.find(name) >= 0) throw ParseError(lineno, "duplicate column '" + name + "'");
                table.names.push_back(name);
            }
            table.columns.resize(table.names.size());
            have_header = true;
            continue;
        }
        if (parts.size() != table.names.size()) {
            throw ParseError(lineno, "expected " + std::to_string(table.names.size()) + " fields, found " +
                                         std::to_string(parts.size()));
        }
        for (std::size_t j = 0; j < parts.size(); ++j) {
            const char* begin = parts[j].c_str();
            char* end = nullptr;
            const double v = std::strtod(begin, &end);
            if (parts[j].empty() || end != begin + parts[j].size() || !std::isfinite(v)) {
                throw ParseError(lineno, "column '" + table.names[j] + "': not a finite number: '" + parts[j] + "'");
            }
            table.columns[j].push_back(v);
        }
    }
    if (!have_header) throw ParseError(lineno, "missing header row");
    return table;
}

CsvTable read_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    return read_csv(in);
}

PenaltyRule make_rule(const FitOptions& o) {
    if (o.penalty == "kl") return PenaltyRule::kl(o.K);
    if (o.penalty == "fpe") return PenaltyRule::fpe();
    if (o.penalty == "aic") return PenaltyRule::aic();
    if (o.penalty == "bic") return PenaltyRule::bic();
    if (o.penalty == "amdl") return PenaltyRule::amdl();
    if (o.penalty == "kullback") return PenaltyRule::kullback(o.K1, o.K2);
    throw DomainError("unknown penalty '" + o.penalty + "'");
}

namespace {

Criterion parse_criterion(const std::string& name) {
    if (name == "auto") return Criterion::Auto;
    if (name == "crit-l") return Criterion::CritL;
    if (name == "crit-k") return Criterion::CritK;
    if (name == "kullback") return Criterion::CritKullback;
    throw DomainError("unknown criterion '" + name + "'");
}

// Columns prefix1, prefix2, ... in order; stops at the first missing index.
Eigen::MatrixXd numbered_columns(const CsvTable& t, const std::string& prefix) {
    std::vector<int> idx;
    for (int j = 1;; ++j) {
        const int c = t.find(prefix + std::to_string(j));
        if (c < 0) break;
        idx.push_back(c);
    }
    Eigen::MatrixXd M(static_cast<Eigen::Index>(t.rows()), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t j = 0; j < idx.size(); ++j) {
        for (std::size_t i = 0; i < t.rows(); ++i) M(i, j) = t.columns[idx[j]][i];
    }
    return M;
}

}  // namespace

SelectionOutcome fit_arrays(const Eigen::VectorXd& y, const Eigen::MatrixXd& X, const Eigen::MatrixXd& points,
                            const FitOptions& o) {
    const int n = static_cast<int>(y.size());
    if (n < 4) throw DomainError("need at least 4 observations");
    const PenaltyRule rule = make_rule(o);
    const Criterion criterion = parse_criterion(o.criterion);
    Design design;
    CollectionSpec spec;
    if (o.family == "nonzero") {
        spec = CollectionSpec::nonzero(n, o.p >= 0 ? o.p : std::max(1, nonzero_p(n)));
    } else if (o.family == "ordered" || o.family == "complete") {
        const int N = static_cast<int>(X.cols());
        if (N == 0) throw DomainError("family '" + o.family + "' needs design columns");
        if (X.rows() != n) throw DomainError("design and response differ in length");
        design.X = X;
        const int p = o.p >= 0 ? o.p : std::min(N, n - 2);
        spec = o.family == "ordered" ? CollectionSpec::ordered(n, N, p) : CollectionSpec::complete(n, N, p);
        spec.budget = o.budget;
    } else if (o.family == "changepoint") {
        spec = CollectionSpec::change_points(n, o.p >= 0 ? o.p : std::min(n - 3, 10));
    } else if (o.family == "partition") {
        const int d = static_cast<int>(points.cols());
        if (d == 0) throw DomainError("family 'partition' needs design points");
        if (points.rows() != n) throw DomainError("design points and response differ in length");
        design.points = points;
        spec = CollectionSpec::partition(n, d);
        if (o.p >= 0) spec.r_max = o.p;
    } else {
        throw DomainError("unknown family '" + o.family + "'");
    }
    return select_spec(y, spec, rule, criterion, &design);
}

SelectionOutcome fit_table(const CsvTable& table, const FitOptions& o) {
    const int yc = table.find("y");
    if (yc < 0) throw DomainError("data has no 'y' column");
    const int n = static_cast<int>(table.rows());
    const Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(table.columns[yc].data(), n);
    const bool varsel = o.family == "ordered" || o.family == "complete";
    const Eigen::MatrixXd X = varsel ? numbered_columns(table, "x") : Eigen::MatrixXd(n, 0);
    const Eigen::MatrixXd points = o.family == "partition" ? numbered_columns(table, "t") : Eigen::MatrixXd(n, 0);
    return fit_arrays(y, X, points, o);
}

SelectionOutcome fit_file(const std::string& path, const FitOptions& options) {
    return fit_table(read_csv_file(path), options);
}

void write_outcome(std::ostream& os, const SelectionOutcome& out) {
    os << "m_hat," << out.m_hat.to_string() << '\n';
    os << "dim," << out.fit.effective_rank << '\n';
    os << "sigma2_hat," << fmt(out.fit.sigma2_hat) << '\n';
    os << "criterion," << criterion_name(out.criterion) << '\n';
    os << "criterion_value," << fmt(out.criterion_value) << '\n';
    os << "penalty," << fmt(out.penalty) << '\n';
    os << "saturated," << (out.saturated ? "yes" : "no") << '\n';
    os << "models_evaluated," << out.evaluated << "\n\n";
    os << "dim,best_rss,penalty,criterion\n";
    for (const auto& t : out.trace) {
        os << t.dim << ',' << fmt(t.best_rss) << ',' << fmt(t.penalty) << ',' << fmt(t.criterion) << '\n';
    }
    os << "\ni,mu_hat\n";
    for (Eigen::Index i = 0; i < out.fit.mu_hat.size(); ++i) os << i + 1 << ',' << fmt(out.fit.mu_hat[i]) << '\n';
}

}  // namespace gmsel
