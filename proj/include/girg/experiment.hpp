#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "girg/analysis.hpp"
#include "girg/sampler.hpp"

namespace girg {

enum Measure : unsigned {
    kMeasureDegree = 1u << 0,
    kMeasureComponents = 1u << 1,
    kMeasureCore = 1u << 2,
    kMeasureGreedy = 1u << 3,
    kMeasureDistance = 1u << 4,
    kMeasureAll = (1u << 5) - 1,
};

// A kernel entry of a plan, with the dimension and sampler it runs under.
// In plan files: `kernel = chung_lu, distance(alpha=2,norm=min_component,d=2,sampler=grid)`.
struct PlanKernel {
    KernelKind kernel = ChungLuKernel{};
    std::size_t d = 1;
    SamplerKind sampler = SamplerKind::Naive;

    bool operator==(const PlanKernel&) const = default;
};

// Column value identifying a kernel entry, e.g. "chung_lu" or "distance(alpha=2,norm=max)/d=2".
std::string kernel_label(const PlanKernel& k);

struct ExperimentPlan {
    std::vector<std::size_t> n_values{1000};
    std::vector<double> betas{2.5};
    std::vector<PlanKernel> kernels{PlanKernel{}};
    std::size_t seeds = 1;  // replicates per cell
    std::uint64_t seed = 1;
    double w_min = 1.0;
    std::optional<double> w_bar;
    unsigned measures = kMeasureAll;
    std::size_t pairs = 2000;
    FitRange fit{};
    std::size_t workers = 1;
    bool save_graphs = false;
    std::string out_dir = "out";

    bool operator==(const ExperimentPlan&) const = default;
};

// Keys: n, beta, kernel, d, sampler, seeds, seed, w_min, w_bar, measure, pairs,
// fit_lo, fit_hi, workers, save_graphs, out. `d` and `sampler` are defaults for
// kernel entries that do not name their own. Throws ParseError / invalid_argument.
ExperimentPlan parse_plan(std::istream& in);
ExperimentPlan read_plan(const std::string& path);

// Throws std::invalid_argument unless every cell config validates and seeds >= 1.
void validate_plan(const ExperimentPlan& plan);

struct Cell {
    std::size_t index = 0;
    PlanKernel kernel;
    ModelConfig config;  // seed left at the plan seed; replicates derive their own
};

// Cells in deterministic order: kernel, then beta, then n.
std::vector<Cell> expand_cells(const ExperimentPlan& plan);

std::uint64_t replicate_seed(std::uint64_t plan_seed, std::size_t cell, std::size_t replicate) noexcept;

struct GreedySummary {
    std::size_t eligible = 0;   // vertices with w >= ln^2 n
    std::size_t reached = 0;    // of which reach the core within step_limit steps
    std::size_t step_limit = 0; // ceil(1.5 ln ln n / |ln(beta - 2)|) + 1
    double fraction() const noexcept { return eligible ? static_cast<double>(reached) / eligible : 1.0; }
};

GreedySummary greedy_summary(const Graph& graph);

struct RowResult {
    std::size_t cell = 0;
    std::size_t replicate = 0;
    std::size_t n = 0;
    double beta = 0.0;
    std::string kernel;
    std::size_t d = 1;
    SamplerKind sampler = SamplerKind::Naive;
    std::uint64_t seed = 0;
    std::string error;  // empty on success

    std::size_t edges = 0;
    std::optional<DegreeReport> degree;
    std::optional<ComponentReport> comps;
    std::optional<CoreReport> core;
    std::optional<GreedySummary> greedy;
    std::optional<DistanceReport> distance;

    bool ok() const noexcept { return error.empty(); }
};

// Generates and measures a single replicate; any exception becomes `error`.
RowResult run_replicate(const ExperimentPlan& plan, const Cell& cell, std::size_t replicate,
                        const std::string& graph_path = {});

struct ExperimentOutput {
    std::vector<RowResult> rows;        // cell-major, replicate-minor
    std::vector<std::string> files;     // paths written, relative to out_dir
    std::size_t failures = 0;
};

// Writes rows.csv, aggregate.csv, degree.csv, components.csv, core.csv,
// greedy.csv, distance.csv (for the measures requested), plots/*.svg when
// distances were measured, and graphs/*.g when save_graphs is set. Throws
// IoError when out_dir cannot be written.
ExperimentOutput run_experiment(const ExperimentPlan& plan);

std::string rows_csv(const std::vector<RowResult>& rows);

}  // namespace girg
