#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gmsel/dkhi.hpp"
#include "gmsel/errors.hpp"
#include "gmsel/harness.hpp"
#include "gmsel/kullback.hpp"
#include "gmsel/penalties.hpp"

namespace py = pybind11;
using namespace gmsel;

namespace {

py::dict outcome_dict(const SelectionOutcome& out) {
    py::dict d;
    d["model"] = out.m_hat.to_string();
    d["support"] = out.m_hat.content();
    d["dim"] = out.fit.effective_rank;
    d["mu_hat"] = out.fit.mu_hat;
    d["rss"] = out.fit.rss;
    d["sigma2_hat"] = out.fit.sigma2_hat;
    d["criterion"] = criterion_name(out.criterion);
    d["criterion_value"] = out.criterion_value;
    d["penalty"] = out.penalty;
    d["saturated"] = out.saturated;
    d["evaluated"] = out.evaluated;
    py::list trace;
    for (const auto& t : out.trace) {
        py::dict row;
        row["dim"] = t.dim;
        row["best_rss"] = t.best_rss;
        row["penalty"] = t.penalty;
        row["criterion"] = t.criterion;
        trace.append(row);
    }
    d["trace"] = trace;
    return d;
}

py::object opt(const std::optional<double>& v) { return v ? py::cast(*v) : py::none(); }

py::list report_rows(const SimReport& report) {
    py::list rows;
    for (const auto& r : report.rows) {
        py::dict d;
        d["study"] = r.study;
        d["criterion"] = r.criterion;
        d["n"] = r.n;
        d["p"] = r.p;
        d["k"] = r.k;
        d["s"] = r.s;
        d["sigma"] = r.sigma;
        d["design"] = r.design < 0 ? py::none() : py::cast(r.design);
        d["reps"] = r.reps;
        d["risk"] = r.risk;
        d["risk_se"] = r.risk_se;
        d["oracle"] = r.oracle;
        d["ratio"] = opt(r.ratio);
        d["mean_dim"] = r.mean_dim;
        d["frac_dim0"] = r.frac_dim0;
        d["frac_dim1"] = r.frac_dim1;
        d["frac_dim2plus"] = r.frac_dim2plus;
        d["frac_full"] = r.frac_full;
        d["frac_pos"] = r.frac_pos;
        d["frac_eq_m0"] = opt(r.frac_eq_m0);
        d["frac_sup_m0"] = opt(r.frac_sup_m0);
        d["frac_above"] = opt(r.frac_above);
        rows.append(d);
    }
    return rows;
}

ClassicalKind classical_kind(const std::string& name) {
    if (name == "fpe") return ClassicalKind::FPE;
    if (name == "aic") return ClassicalKind::AIC;
    if (name == "bic") return ClassicalKind::BIC;
    if (name == "amdl") return ClassicalKind::AMDL;
    throw DomainError("unknown classical penalty '" + name + "'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Gaussian model selection with unknown variance";

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<BudgetExceeded>(m, "BudgetExceeded", PyExc_RuntimeError);
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

    m.def("dkhi", &dkhi, py::arg("D"), py::arg("N"), py::arg("x"));
    m.def("fish", &fish, py::arg("D"), py::arg("N"), py::arg("x"));
    m.def("edkhi", &edkhi, py::arg("D"), py::arg("N"), py::arg("q"));
    m.def("efish", &efish, py::arg("D"), py::arg("N"), py::arg("q"));
    m.def("edkhi_log", &edkhi_log, py::arg("D"), py::arg("N"), py::arg("log_q"));

    m.def("phi", &phi, py::arg("x"));
    m.def("phi_inv", &phi_inv, py::arg("a"));
    m.def("pen_kl", &pen_kl, py::arg("K"), py::arg("L"), py::arg("D"), py::arg("n"));
    m.def("pen_kl_upper", &pen_kl_upper, py::arg("K"), py::arg("L"), py::arg("D"), py::arg("n"));
    m.def("pen_kullback", &pen_kullback, py::arg("K1"), py::arg("K2"), py::arg("L"), py::arg("D"), py::arg("n"));
    m.def("pen_kullback_upper", &pen_kullback_upper, py::arg("K1"), py::arg("K2"), py::arg("L"), py::arg("D"),
          py::arg("n"));
    m.def(
        "pen_classical", [](const std::string& kind, int D, int n) { return pen_classical(classical_kind(kind), D, n); },
        py::arg("kind"), py::arg("D"), py::arg("n"));
    m.def(
        "hka_check",
        [](double K, double M, double a, int n, int d_max) {
            const auto r = hka_check(K, M, a, n, d_max);
            py::dict d;
            d["feasible"] = r.feasible;
            d["t"] = r.t;
            d["gamma1"] = r.gamma1;
            d["gamma2"] = r.gamma2;
            d["d_max"] = r.d_max;
            d["request_ok"] = r.request_ok;
            d["residual_constant"] = r.residual_constant;
            return d;
        },
        py::arg("K"), py::arg("M"), py::arg("a"), py::arg("n"), py::arg("d_max"));

    m.def(
        "select",
        [](const Eigen::VectorXd& y, const std::string& family, std::optional<Eigen::MatrixXd> X,
           std::optional<Eigen::MatrixXd> points, const std::string& penalty, double K, double K1, double K2, int p,
           std::uint64_t budget, const std::string& criterion) {
            FitOptions o;
            o.family = family;
            o.penalty = penalty;
            o.K = K;
            o.K1 = K1;
            o.K2 = K2;
            o.p = p;
            o.budget = budget;
            o.criterion = criterion;
            const auto n = y.size();
            SelectionOutcome out;
            {
                py::gil_scoped_release release;
                out = fit_arrays(y, X.value_or(Eigen::MatrixXd(n, 0)), points.value_or(Eigen::MatrixXd(n, 0)), o);
            }
            return outcome_dict(out);
        },
        py::arg("y"), py::arg("family") = "nonzero", py::arg("X") = py::none(), py::arg("points") = py::none(),
        py::arg("penalty") = "kl", py::arg("K") = 1.1, py::arg("K1") = 1.1, py::arg("K2") = 0.0, py::arg("p") = -1,
        py::arg("budget") = 10'000'000, py::arg("criterion") = "auto");

    m.def(
        "kl_div",
        [](const Eigen::VectorXd& mu, double sigma2, const Eigen::VectorXd& nu, double tau2) {
            return kl_div({mu, sigma2}, {nu, tau2});
        },
        py::arg("mu"), py::arg("sigma2"), py::arg("nu"), py::arg("tau2"));

    m.def(
        "simulate",
        [](const std::string& study, int reps, std::uint64_t seed, std::vector<int> ns, std::vector<int> ks,
           std::vector<double> ss, std::vector<double> sigmas, std::vector<double> Ks, bool classical, int designs) {
            SimConfig c;
            c.study = parse_study(study);
            c.reps = reps;
            c.master_seed = seed;
            c.ns = std::move(ns);
            c.ks = std::move(ks);
            c.ss = std::move(ss);
            c.sigmas = std::move(sigmas);
            c.Ks = std::move(Ks);
            c.classical = classical;
            c.designs = designs;
            SimReport report;
            {
                py::gil_scoped_release release;
                report = run_study(c);
            }
            return report_rows(report);
        },
        py::arg("study") = "nonzero", py::arg("reps") = 1000, py::arg("seed") = 1,
        py::arg("ns") = std::vector<int>{32}, py::arg("ks") = std::vector<int>{},
        py::arg("ss") = std::vector<double>{3.0, 4.0, 5.0}, py::arg("sigmas") = std::vector<double>{1.0, 3.0},
        py::arg("Ks") = std::vector<double>{1.1, 1.2}, py::arg("classical") = true, py::arg("designs") = 50);

    m.def(
        "penalty_curve",
        [](int n, double K, int p) {
            std::vector<std::tuple<int, double, double>> rows;
            for (const auto& r : emit_penalty_curve(n, K, p < 0 ? nonzero_p(n) : p)) rows.emplace_back(r.D, r.amdl, r.kl);
            return rows;
        },
        py::arg("n"), py::arg("K") = 1.1, py::arg("p") = -1);
}
