// Command-line front end: model selection on CSV data, the simulation
// studies, penalty curves and the Dkhi/Fish functions.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>

#include "CLI11.hpp"
#include "gmsel/dkhi.hpp"
#include "gmsel/errors.hpp"
#include "gmsel/harness.hpp"
#include "gmsel/penalties.hpp"

namespace {

// Writes to the named file, or to stdout when the name is empty.
class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) throw std::runtime_error("cannot write '" + path + "'");
        }
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gaussian model selection with unknown variance"};
    app.require_subcommand(1);

    // select
    gmsel::FitOptions fit;
    std::string data_path, design_path, out_path;
    auto* select = app.add_subcommand("select", "Select a model for the response in a CSV file");
    select->add_option("--data", data_path, "CSV with a 'y' column (and x1..xN or t1..td)")->required();
    select->add_option("--design", design_path, "Optional CSV holding the x or t columns");
    select->add_option("--family", fit.family, "nonzero|ordered|complete|changepoint|partition")
        ->check(CLI::IsMember({"nonzero", "ordered", "complete", "changepoint", "partition"}));
    select->add_option("--penalty", fit.penalty, "kl|fpe|aic|bic|amdl|kullback")
        ->check(CLI::IsMember({"kl", "fpe", "aic", "bic", "amdl", "kullback"}));
    select->add_option("--K", fit.K, "Constant of the kl penalty (> 1)");
    select->add_option("--K1", fit.K1, "First constant of the kullback penalty");
    select->add_option("--K2", fit.K2, "Second constant of the kullback penalty (default K1 + 1)");
    select->add_option("--p", fit.p, "Maximal model size (degree cap for partitions)");
    select->add_option("--budget", fit.budget, "Largest collection an exhaustive search may visit");
    select->add_option("--criterion", fit.criterion, "auto|crit-l|crit-k|kullback")
        ->check(CLI::IsMember({"auto", "crit-l", "crit-k", "kullback"}));
    select->add_option("--out", out_path, "Output file (default stdout)");

    // simulate
    gmsel::SimConfig sim;
    std::string study = "nonzero";
    bool markdown = false;
    auto* simulate = app.add_subcommand("simulate", "Run a simulation study");
    simulate->add_option("--study", study, "nonzero|theta1|theta2|overfit")
        ->check(CLI::IsMember({"nonzero", "theta1", "theta2", "overfit"}));
    auto* reps_opt = simulate->add_option("--reps", sim.reps, "Replicates per configuration point");
    simulate->add_option("--seed", sim.master_seed, "Master seed");
    simulate->add_option("--n", sim.ns, "Sample sizes");
    simulate->add_option("--k", sim.ks, "Numbers of nonzero components (default I_p)");
    simulate->add_option("--s", sim.ss, "Signal levels");
    simulate->add_option("--sigma", sim.sigmas, "Noise levels (theta1)");
    simulate->add_option("--K", sim.Ks, "Constants of the kl penalty");
    simulate->add_option("--designs", sim.designs, "Number of theta1 designs");
    simulate->add_flag("--no-classical", [&](std::int64_t) { sim.classical = false; }, "Skip AIC, BIC and AMDL");
    simulate->add_flag("--markdown", markdown, "Render a markdown table instead of CSV");
    simulate->add_option("--out", out_path, "Output file (default stdout)");

    // penalty-curve
    int curve_n = 512, curve_p = -1;
    double curve_K = 1.1;
    auto* curve = app.add_subcommand("penalty-curve", "Tabulate the AMDL and kl penalties against D");
    curve->add_option("--n", curve_n, "Sample size");
    curve->add_option("--K", curve_K, "Constant of the kl penalty");
    curve->add_option("--p", curve_p, "Largest dimension (default floor(n / log n))");
    curve->add_option("--out", out_path, "Output file (default stdout)");

    // dkhi
    int D = 1, N = 10;
    double x = -1.0, q = -1.0;
    bool use_fish = false;
    auto* dkhi = app.add_subcommand("dkhi", "Evaluate Dkhi or Fish, or their inverses");
    dkhi->add_option("--D", D, "First degrees of freedom")->required();
    dkhi->add_option("--N", N, "Second degrees of freedom")->required();
    auto* x_opt = dkhi->add_option("--x", x, "Evaluate at x");
    auto* q_opt = dkhi->add_option("--q", q, "Invert at level q in (0, 1]");
    x_opt->excludes(q_opt);
    dkhi->add_flag("--fish", use_fish, "Use Fish instead of Dkhi");

    // penalty
    gmsel::FitOptions pen;
    double pen_L = 0.0;
    int pen_D = 1, pen_n = 32;
    auto* penalty = app.add_subcommand("penalty", "Evaluate one penalty rule");
    penalty->add_option("--penalty", pen.penalty, "kl|fpe|aic|bic|amdl|kullback")
        ->check(CLI::IsMember({"kl", "fpe", "aic", "bic", "amdl", "kullback"}));
    penalty->add_option("--K", pen.K, "Constant of the kl penalty");
    penalty->add_option("--K1", pen.K1, "First constant of the kullback penalty");
    penalty->add_option("--K2", pen.K2, "Second constant of the kullback penalty");
    penalty->add_option("--D", pen_D, "Model dimension");
    penalty->add_option("--L", pen_L, "Weight L_m");
    penalty->add_option("--n", pen_n, "Sample size");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*select) {
            gmsel::CsvTable table = gmsel::read_csv_file(data_path);
            if (!design_path.empty()) {
                const gmsel::CsvTable extra = gmsel::read_csv_file(design_path);
                if (extra.rows() != table.rows()) throw gmsel::DomainError("design and data differ in row count");
                for (std::size_t j = 0; j < extra.names.size(); ++j) {
                    table.names.push_back(extra.names[j]);
                    table.columns.push_back(extra.columns[j]);
                }
            }
            Output out(out_path);
            gmsel::write_outcome(out.stream(), gmsel::fit_table(table, fit));
        } else if (*simulate) {
            sim.study = gmsel::parse_study(study);
            if (reps_opt->count() == 0 && sim.study != gmsel::Study::NonzeroGrid &&
                sim.study != gmsel::Study::OverfitDemo) {
                sim.reps = 100;
            }
            const auto report = gmsel::run_study(sim);
            Output out(out_path);
            if (markdown) {
                gmsel::write_markdown(out.stream(), report);
            } else {
                gmsel::write_csv(out.stream(), report);
            }
        } else if (*curve) {
            const int p = curve_p >= 0 ? curve_p : gmsel::nonzero_p(curve_n);
            Output out(out_path);
            gmsel::write_penalty_curve_csv(out.stream(), gmsel::emit_penalty_curve(curve_n, curve_K, p));
        } else if (*dkhi) {
            if (x_opt->count() == 0 && q_opt->count() == 0) throw gmsel::DomainError("give --x or --q");
            double value;
            if (x_opt->count()) {
                value = use_fish ? gmsel::fish(D, N, x) : gmsel::dkhi(D, N, x);
            } else {
                value = use_fish ? gmsel::efish(D, N, q) : gmsel::edkhi(D, N, q);
            }
            std::printf("%.17g\n", value);
        } else if (*penalty) {
            std::printf("%.17g\n", gmsel::make_rule(pen)(pen_D, pen_L, pen_n));
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
