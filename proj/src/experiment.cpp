#include "girg/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "girg/config.hpp"
#include "girg/io.hpp"
#include "girg/rng.hpp"

namespace girg {

namespace fs = std::filesystem;

std::string kernel_label(const PlanKernel& k) {
    if (std::holds_alternative<ChungLuKernel>(k.kernel)) return describe(k.kernel);
    return describe(k.kernel) + "/d=" + std::to_string(k.d);
}

namespace {

unsigned parse_measure(std::string_view name) {
    if (name == "degree") return kMeasureDegree;
    if (name == "components") return kMeasureComponents;
    if (name == "core") return kMeasureCore;
    if (name == "greedy") return kMeasureGreedy;
    if (name == "distance") return kMeasureDistance;
    if (name == "all") return kMeasureAll;
    throw std::invalid_argument("unknown measure '" + std::string(name) +
                                "' (expected degree | components | core | greedy | distance | all)");
}

bool parse_bool(std::string_view s) {
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    throw std::invalid_argument("not a boolean: '" + std::string(s) + "'");
}

// Pulls d= and sampler= out of a kernel spec before handing the rest to parse_kernel.
PlanKernel parse_plan_kernel(std::string_view spec, std::size_t default_d, SamplerKind default_sampler) {
    PlanKernel k{ChungLuKernel{}, default_d, default_sampler};
    spec = trim(spec);
    const auto open = spec.find('(');
    if (open == std::string_view::npos || spec.back() != ')') {
        k.kernel = parse_kernel(spec);
        return k;
    }
    std::string rest;
    for (const auto& item : split_list(spec.substr(open + 1, spec.size() - open - 2))) {
        const auto eq = item.find('=');
        const auto key = eq == std::string::npos ? std::string_view(item) : trim(std::string_view(item).substr(0, eq));
        const auto value = eq == std::string::npos ? std::string_view{} : trim(std::string_view(item).substr(eq + 1));
        if (key == "d") {
            k.d = parse_u64(value);
        } else if (key == "sampler") {
            k.sampler = parse_sampler(value);
        } else {
            if (!rest.empty()) rest += ',';
            rest += item;
        }
    }
    k.kernel = parse_kernel(std::string(trim(spec.substr(0, open))) + "(" + rest + ")");
    return k;
}

}  // namespace

ExperimentPlan parse_plan(std::istream& in) {
    const auto entries = read_entries(in);
    ExperimentPlan plan;
    std::size_t default_d = 1;
    SamplerKind default_sampler = SamplerKind::Naive;
    const ConfigEntry* kernel_entry = nullptr;
    for (const auto& e : entries) {
        try {
            if (e.key == "d")
                default_d = parse_u64(e.value);
            else if (e.key == "sampler")
                default_sampler = parse_sampler(e.value);
        } catch (const std::invalid_argument& err) {
            throw ParseError(e.line, err.what());
        }
    }
    for (const auto& e : entries) {
        try {
            const auto list = split_list(e.value);
            if (list.empty()) throw std::invalid_argument("empty value for '" + e.key + "'");
            if (e.key == "n") {
                plan.n_values.clear();
                for (const auto& v : list) plan.n_values.push_back(parse_u64(v));
            } else if (e.key == "beta") {
                plan.betas.clear();
                for (const auto& v : list) plan.betas.push_back(parse_double(v));
            } else if (e.key == "kernel") {
                kernel_entry = &e;
            } else if (e.key == "measure") {
                plan.measures = 0;
                for (const auto& v : list) plan.measures |= parse_measure(v);
            } else if (e.key == "seeds") {
                plan.seeds = parse_u64(e.value);
            } else if (e.key == "seed") {
                plan.seed = parse_u64(e.value);
            } else if (e.key == "w_min") {
                plan.w_min = parse_double(e.value);
            } else if (e.key == "w_bar") {
                plan.w_bar = parse_double(e.value);
            } else if (e.key == "pairs") {
                plan.pairs = parse_u64(e.value);
            } else if (e.key == "fit_lo") {
                plan.fit.d_lo = parse_u64(e.value);
            } else if (e.key == "fit_hi") {
                plan.fit.d_hi = parse_u64(e.value);
            } else if (e.key == "workers") {
                plan.workers = parse_u64(e.value);
            } else if (e.key == "save_graphs") {
                plan.save_graphs = parse_bool(e.value);
            } else if (e.key == "out") {
                plan.out_dir = e.value;
            } else if (e.key != "d" && e.key != "sampler") {
                throw std::invalid_argument("unknown key '" + e.key + "'");
            }
        } catch (const std::invalid_argument& err) {
            throw ParseError(e.line, err.what());
        }
    }
    if (kernel_entry) {
        try {
            plan.kernels.clear();
            for (const auto& v : split_list(kernel_entry->value))
                plan.kernels.push_back(parse_plan_kernel(v, default_d, default_sampler));
        } catch (const std::invalid_argument& err) {
            throw ParseError(kernel_entry->line, err.what());
        }
    } else {
        plan.kernels = {PlanKernel{ChungLuKernel{}, default_d, default_sampler}};
    }
    validate_plan(plan);
    return plan;
}

ExperimentPlan read_plan(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open for reading: " + path);
    return parse_plan(in);
}

void validate_plan(const ExperimentPlan& plan) {
    if (plan.seeds < 1) throw std::invalid_argument("plan: seeds must be at least 1");
    if (plan.workers < 1) throw std::invalid_argument("plan: workers must be at least 1");
    if (plan.pairs < 1) throw std::invalid_argument("plan: pairs must be at least 1");
    if (plan.n_values.empty() || plan.betas.empty() || plan.kernels.empty())
        throw std::invalid_argument("plan: n, beta and kernel lists must be non-empty");
    if (plan.fit.d_lo < 1 || plan.fit.d_hi <= plan.fit.d_lo)
        throw std::invalid_argument("plan: need 1 <= fit_lo < fit_hi");
    for (const auto& cell : expand_cells(plan)) validate_config(cell.config);
}

std::vector<Cell> expand_cells(const ExperimentPlan& plan) {
    std::vector<Cell> cells;
    for (const auto& k : plan.kernels)
        for (double beta : plan.betas)
            for (std::size_t n : plan.n_values) {
                Cell c;
                c.index = cells.size();
                c.kernel = k;
                c.config.n = n;
                c.config.beta = beta;
                c.config.w_min = plan.w_min;
                c.config.d = k.d;
                c.config.kernel = k.kernel;
                c.config.sampler = k.sampler;
                c.config.seed = plan.seed;
                c.config.w_bar = plan.w_bar;
                cells.push_back(std::move(c));
            }
    return cells;
}

std::uint64_t replicate_seed(std::uint64_t plan_seed, std::size_t cell, std::size_t replicate) noexcept {
    return mix_seed(plan_seed, cell, replicate);
}

GreedySummary greedy_summary(const Graph& graph) {
    const double n = static_cast<double>(graph.num_vertices());
    const double ln_n = std::log(n);
    GreedySummary s;
    s.step_limit = static_cast<std::size_t>(
                       std::ceil(1.5 * std::log(ln_n) / std::abs(std::log(graph.weights().beta() - 2.0)))) +
                   1;
    for (Vertex v = 0; v < graph.num_vertices(); ++v) {
        if (graph.weight(v) < ln_n * ln_n) break;  // weights are sorted descending
        ++s.eligible;
        const auto g = greedy_path(graph, v);
        if (g.reached_core && g.path.size() - 1 <= s.step_limit) ++s.reached;
    }
    return s;
}

RowResult run_replicate(const ExperimentPlan& plan, const Cell& cell, std::size_t replicate,
                        const std::string& graph_path) {
    RowResult r;
    r.cell = cell.index;
    r.replicate = replicate;
    r.n = cell.config.n;
    r.beta = cell.config.beta;
    r.kernel = kernel_label(cell.kernel);
    r.d = cell.config.d;
    r.sampler = cell.config.sampler;
    r.seed = replicate_seed(plan.seed, cell.index, replicate);
    try {
        ModelConfig config = cell.config;
        config.seed = r.seed;
        const Graph g = generate(config);
        r.edges = g.num_edges();
        if (!graph_path.empty()) write_graph(graph_path, g);
        if (plan.measures & kMeasureDegree) {
            try {
                r.degree = degree_report(g, plan.fit);
            } catch (const std::domain_error&) {
                r.degree = degree_report(g);  // too few vertices in the fit range
            }
        }
        if (plan.measures & (kMeasureComponents | kMeasureDistance)) r.comps = components(g);
        if (plan.measures & kMeasureCore) r.core = core_report(g);
        if (plan.measures & kMeasureGreedy) r.greedy = greedy_summary(g);
        if (plan.measures & kMeasureDistance) r.distance = distance_report(g, plan.pairs, r.seed, &*r.comps);
        if (!(plan.measures & kMeasureComponents)) r.comps.reset();
    } catch (const IoError&) {
        throw;
    } catch (const std::exception& e) {
        r.error = e.what();
        if (r.error.empty()) r.error = "unknown error";
    }
    return r;
}

namespace {

std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

std::string num(double x) { return std::isfinite(x) ? format_double(x) : std::string(); }

class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header) : columns_(header.size()) { row(header); }

    void row(const std::vector<std::string>& fields) {
        if (fields.size() != columns_) throw std::logic_error("csv row has wrong column count");
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) out_ << ',';
            out_ << csv_field(fields[i]);
        }
        out_ << '\n';
    }

    std::string str() const { return out_.str(); }

private:
    std::size_t columns_;
    std::ostringstream out_;
};

template <class T>
std::string opt(const std::optional<T>& o, const std::function<std::string(const T&)>& f) {
    return o ? f(*o) : std::string();
}

std::vector<std::string> key_fields(const RowResult& r) {
    return {std::to_string(r.n), num(r.beta), r.kernel, std::to_string(r.seed)};
}

struct Stat {
    std::size_t count = 0;
    double sum = 0.0, sum_sq = 0.0, max = -INFINITY, min = INFINITY;
    void add(double x) {
        if (!std::isfinite(x)) return;
        ++count;
        sum += x;
        sum_sq += x * x;
        max = std::max(max, x);
        min = std::min(min, x);
    }
    double mean() const { return count ? sum / count : NAN; }
    double se() const {
        if (count < 2) return count ? 0.0 : NAN;
        const double m = mean();
        const double var = std::max(0.0, (sum_sq - count * m * m) / (count - 1.0));
        return std::sqrt(var / count);
    }
    double maximum() const { return count ? max : NAN; }
    double minimum() const { return count ? min : NAN; }
};

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out << content;
    if (!out) throw IoError("write failed: " + path.string());
}

std::string xml_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

struct SeriesPoint {
    double x, y, se;
};

// Mean distance against ln ln n, one series per kernel, target line through the
// target values of the same cells.
std::string distance_svg(double beta, const std::vector<std::pair<std::string, std::vector<SeriesPoint>>>& series,
                         const std::vector<std::pair<double, double>>& target) {
    constexpr double W = 720, H = 460, L = 70, R = 250, T = 40, B = 60;
    double x_lo = INFINITY, x_hi = -INFINITY, y_lo = 0.0, y_hi = -INFINITY;
    for (const auto& [x, y] : target) {
        x_lo = std::min(x_lo, x), x_hi = std::max(x_hi, x), y_hi = std::max(y_hi, y);
    }
    for (const auto& s : series)
        for (const auto& p : s.second) {
            x_lo = std::min(x_lo, p.x), x_hi = std::max(x_hi, p.x), y_hi = std::max(y_hi, p.y + p.se);
        }
    if (x_hi - x_lo < 1e-9) x_lo -= 0.5, x_hi += 0.5;
    const double pad = 0.05 * (x_hi - x_lo);
    x_lo -= pad, x_hi += pad;
    y_hi = std::ceil(y_hi * 1.1);
    const auto px = [&](double x) { return L + (x - x_lo) / (x_hi - x_lo) * (W - L - R); };
    const auto py = [&](double y) { return H - B - (y - y_lo) / (y_hi - y_lo) * (H - T - B); };
    const auto f = [](double v) {
        std::ostringstream s;
        s.setf(std::ios::fixed);
        s.precision(2);
        s << v;
        return s.str();
    };
    static const char* colours[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"};

    std::ostringstream o;
    o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
      << ' ' << H << "\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n"
      << "<text x=\"" << L << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"15\">mean distance, beta = "
      << xml_escape(format_double(beta)) << "</text>\n";
    // axes and ticks
    o << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B
      << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        const double xv = x_lo + (x_hi - x_lo) * i / 5.0;
        const double yv = y_lo + (y_hi - y_lo) * i / 5.0;
        o << "<line x1=\"" << f(px(xv)) << "\" y1=\"" << H - B << "\" x2=\"" << f(px(xv)) << "\" y2=\"" << H - B + 5
          << "\" stroke=\"black\"/>\n"
          << "<text x=\"" << f(px(xv)) << "\" y=\"" << H - B + 20
          << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">" << f(xv) << "</text>\n"
          << "<line x1=\"" << L - 5 << "\" y1=\"" << f(py(yv)) << "\" x2=\"" << L << "\" y2=\"" << f(py(yv))
          << "\" stroke=\"black\"/>\n"
          << "<text x=\"" << L - 8 << "\" y=\"" << f(py(yv) + 4)
          << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">" << f(yv) << "</text>\n";
    }
    o << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 15
      << "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">ln ln n</text>\n"
      << "<text x=\"18\" y=\"" << (T + H - B) / 2 << "\" font-family=\"sans-serif\" font-size=\"13\" "
      << "text-anchor=\"middle\" transform=\"rotate(-90 18 " << (T + H - B) / 2 << ")\">mean distance</text>\n";

    const auto polyline = [&](const auto& pts, const char* colour, const char* extra) {
        o << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\"" << extra << " points=\"";
        for (std::size_t i = 0; i < pts.size(); ++i) o << (i ? " " : "") << f(px(pts[i].first)) << ',' << f(py(pts[i].second));
        o << "\"/>\n";
    };
    polyline(target, "black", " stroke-dasharray=\"6 4\"");

    double legend_y = T + 10;
    o << "<line x1=\"" << W - R + 20 << "\" y1=\"" << legend_y << "\" x2=\"" << W - R + 45 << "\" y2=\"" << legend_y
      << "\" stroke=\"black\" stroke-dasharray=\"6 4\"/>\n"
      << "<text x=\"" << W - R + 52 << "\" y=\"" << legend_y + 4
      << "\" font-family=\"sans-serif\" font-size=\"11\">2 ln ln n / |ln(beta-2)|</text>\n";
    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* colour = colours[s % std::size(colours)];
        std::vector<std::pair<double, double>> pts;
        for (const auto& p : series[s].second) pts.emplace_back(p.x, p.y);
        polyline(pts, colour, "");
        for (const auto& p : series[s].second) {
            if (p.se > 0)
                o << "<line x1=\"" << f(px(p.x)) << "\" y1=\"" << f(py(p.y - p.se)) << "\" x2=\"" << f(px(p.x))
                  << "\" y2=\"" << f(py(p.y + p.se)) << "\" stroke=\"" << colour << "\"/>\n";
            o << "<circle cx=\"" << f(px(p.x)) << "\" cy=\"" << f(py(p.y)) << "\" r=\"3.5\" fill=\"" << colour
              << "\"/>\n";
        }
        legend_y += 18;
        o << "<circle cx=\"" << W - R + 32 << "\" cy=\"" << legend_y << "\" r=\"3.5\" fill=\"" << colour << "\"/>\n"
          << "<text x=\"" << W - R + 52 << "\" y=\"" << legend_y + 4 << "\" font-family=\"sans-serif\" font-size=\"11\">"
          << xml_escape(series[s].first) << "</text>\n";
    }
    o << "</svg>\n";
    return o.str();
}

}  // namespace

std::string rows_csv(const std::vector<RowResult>& rows) {
    CsvWriter w({"cell", "replicate", "n", "beta", "kernel", "d", "sampler", "seed", "status", "error", "m",
                 "mean_degree", "max_degree", "slope", "slope_stderr", "giant_fraction", "second_size",
                 "components", "core_vertices", "core_connected", "core_diameter", "greedy_eligible",
                 "greedy_reached", "greedy_fraction", "pairs", "mean", "stderr", "target", "ratio", "diam_lb"});
    for (const auto& r : rows) {
        std::vector<std::string> f{std::to_string(r.cell), std::to_string(r.replicate), std::to_string(r.n),
                                   num(r.beta), r.kernel, std::to_string(r.d), std::string(to_string(r.sampler)),
                                   std::to_string(r.seed), r.ok() ? "ok" : "error", r.error,
                                   r.ok() ? std::to_string(r.edges) : ""};
        using D = DegreeReport;
        using C = ComponentReport;
        using K = CoreReport;
        using G = GreedySummary;
        using S = DistanceReport;
        f.push_back(opt<D>(r.degree, [](const D& d) { return num(d.mean_degree); }));
        f.push_back(opt<D>(r.degree, [](const D& d) { return std::to_string(d.max_degree); }));
        f.push_back(opt<D>(r.degree, [](const D& d) { return num(d.fitted_slope); }));
        f.push_back(opt<D>(r.degree, [](const D& d) { return num(d.slope_stderr); }));
        f.push_back(opt<C>(r.comps, [](const C& c) { return num(c.giant_fraction); }));
        f.push_back(opt<C>(r.comps, [](const C& c) { return std::to_string(c.second_size); }));
        f.push_back(opt<C>(r.comps, [](const C& c) { return std::to_string(c.count()); }));
        f.push_back(opt<K>(r.core, [](const K& k) { return std::to_string(k.core_vertices); }));
        f.push_back(opt<K>(r.core, [](const K& k) { return std::string(k.core_connected ? "1" : "0"); }));
        f.push_back(opt<K>(r.core, [](const K& k) { return std::to_string(k.core_diameter); }));
        f.push_back(opt<G>(r.greedy, [](const G& g) { return std::to_string(g.eligible); }));
        f.push_back(opt<G>(r.greedy, [](const G& g) { return std::to_string(g.reached); }));
        f.push_back(opt<G>(r.greedy, [](const G& g) { return num(g.fraction()); }));
        f.push_back(opt<S>(r.distance, [](const S& s) { return std::to_string(s.sampled_pairs); }));
        f.push_back(opt<S>(r.distance, [](const S& s) { return num(s.mean_distance); }));
        f.push_back(opt<S>(r.distance, [](const S& s) { return num(s.std_error); }));
        f.push_back(opt<S>(r.distance, [](const S& s) { return num(s.target); }));
        f.push_back(opt<S>(r.distance, [](const S& s) { return num(s.ratio); }));
        f.push_back(opt<S>(r.distance, [](const S& s) { return std::to_string(s.diameter_estimate); }));
        w.row(f);
    }
    return w.str();
}

ExperimentOutput run_experiment(const ExperimentPlan& plan) {
    validate_plan(plan);
    const fs::path out = plan.out_dir;
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec) throw IoError("cannot create output directory " + out.string() + ": " + ec.message());
    if (plan.save_graphs) {
        fs::create_directories(out / "graphs", ec);
        if (ec) throw IoError("cannot create " + (out / "graphs").string() + ": " + ec.message());
    }

    const auto cells = expand_cells(plan);
    const std::size_t jobs = cells.size() * plan.seeds;
    ExperimentOutput result;
    result.rows.resize(jobs);
    std::atomic<std::size_t> next{0};
    std::exception_ptr io_failure;
    std::mutex failure_mutex;
    const auto worker = [&] {
        for (std::size_t j; (j = next.fetch_add(1)) < jobs;) {
            const auto& cell = cells[j / plan.seeds];
            const std::size_t rep = j % plan.seeds;
            std::string gpath;
            if (plan.save_graphs)
                gpath = (out / "graphs" / ("cell" + std::to_string(cell.index) + "_rep" + std::to_string(rep) + ".g"))
                            .string();
            try {
                result.rows[j] = run_replicate(plan, cell, rep, gpath);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!io_failure) io_failure = std::current_exception();
            }
        }
    };
    const std::size_t n_threads = std::min(plan.workers, std::max<std::size_t>(jobs, 1));
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        for (std::size_t t = 0; t < n_threads; ++t) threads.emplace_back(worker);
        for (auto& t : threads) t.join();
    }
    if (io_failure) std::rethrow_exception(io_failure);
    if (plan.save_graphs)
        for (std::size_t j = 0; j < jobs; ++j)
            if (result.rows[j].ok())
                result.files.push_back("graphs/cell" + std::to_string(j / plan.seeds) + "_rep" +
                                       std::to_string(j % plan.seeds) + ".g");
    for (const auto& r : result.rows) result.failures += !r.ok();

    const auto emit = [&](const std::string& name, const std::string& content) {
        write_file(out / name, content);
        result.files.push_back(name);
    };
    emit("rows.csv", rows_csv(result.rows));

    if (plan.measures & kMeasureDegree) {
        CsvWriter w({"n", "beta", "kernel", "seed", "m", "mean_degree", "max_degree", "slope", "slope_stderr"});
        for (const auto& r : result.rows)
            if (r.degree) {
                auto f = key_fields(r);
                f.insert(f.end(), {std::to_string(r.edges), num(r.degree->mean_degree),
                                   std::to_string(r.degree->max_degree), num(r.degree->fitted_slope),
                                   num(r.degree->slope_stderr)});
                w.row(f);
            }
        emit("degree.csv", w.str());
    }
    if (plan.measures & kMeasureComponents) {
        CsvWriter w({"n", "beta", "kernel", "seed", "components", "giant_fraction", "second_size"});
        for (const auto& r : result.rows)
            if (r.comps) {
                auto f = key_fields(r);
                f.insert(f.end(), {std::to_string(r.comps->count()), num(r.comps->giant_fraction),
                                   std::to_string(r.comps->second_size)});
                w.row(f);
            }
        emit("components.csv", w.str());
    }
    if (plan.measures & kMeasureCore) {
        CsvWriter w({"n", "beta", "kernel", "seed", "core_vertices", "core_connected", "core_diameter"});
        for (const auto& r : result.rows)
            if (r.core) {
                auto f = key_fields(r);
                f.insert(f.end(), {std::to_string(r.core->core_vertices), r.core->core_connected ? "1" : "0",
                                   std::to_string(r.core->core_diameter)});
                w.row(f);
            }
        emit("core.csv", w.str());
    }
    if (plan.measures & kMeasureGreedy) {
        CsvWriter w({"n", "beta", "kernel", "seed", "eligible", "reached", "fraction", "step_limit"});
        for (const auto& r : result.rows)
            if (r.greedy) {
                auto f = key_fields(r);
                f.insert(f.end(), {std::to_string(r.greedy->eligible), std::to_string(r.greedy->reached),
                                   num(r.greedy->fraction()), std::to_string(r.greedy->step_limit)});
                w.row(f);
            }
        emit("greedy.csv", w.str());
    }
    if (plan.measures & kMeasureDistance) {
        CsvWriter w({"n", "beta", "kernel", "seed", "pairs", "mean", "stderr", "target", "ratio", "diam_lb"});
        for (const auto& r : result.rows)
            if (r.distance) {
                auto f = key_fields(r);
                const auto& s = *r.distance;
                f.insert(f.end(), {std::to_string(s.sampled_pairs), num(s.mean_distance), num(s.std_error),
                                   num(s.target), num(s.ratio), std::to_string(s.diameter_estimate)});
                w.row(f);
            }
        emit("distance.csv", w.str());
    }

    CsvWriter agg({"cell", "n", "beta", "kernel", "d", "sampler", "replicates", "failures", "m_per_n_mean",
                   "m_per_n_se", "slope_mean", "slope_se", "giant_fraction_mean", "giant_fraction_min",
                   "second_size_max", "core_connected_fraction", "core_diameter_max", "greedy_fraction_mean",
                   "mean_distance_mean", "mean_distance_se", "target", "ratio_mean", "ratio_se", "diam_lb_max"});
    struct CellAgg {
        Stat m_per_n, slope, giant, second, connected, core_diam, greedy, mean, ratio, diam;
        double target = NAN;
        std::size_t ok = 0, failed = 0;
    };
    std::vector<CellAgg> aggs(cells.size());
    for (const auto& r : result.rows) {
        auto& a = aggs[r.cell];
        if (!r.ok()) {
            ++a.failed;
            continue;
        }
        ++a.ok;
        a.m_per_n.add(static_cast<double>(r.edges) / static_cast<double>(r.n));
        if (r.degree) a.slope.add(r.degree->fitted_slope);
        if (r.comps) a.giant.add(r.comps->giant_fraction), a.second.add(static_cast<double>(r.comps->second_size));
        if (r.core)
            a.connected.add(r.core->core_connected ? 1.0 : 0.0), a.core_diam.add(static_cast<double>(r.core->core_diameter));
        if (r.greedy) a.greedy.add(r.greedy->fraction());
        if (r.distance) {
            a.mean.add(r.distance->mean_distance);
            a.ratio.add(r.distance->ratio);
            a.diam.add(static_cast<double>(r.distance->diameter_estimate));
            a.target = r.distance->target;
        }
    }
    for (const auto& c : cells) {
        const auto& a = aggs[c.index];
        agg.row({std::to_string(c.index), std::to_string(c.config.n), num(c.config.beta), kernel_label(c.kernel),
                 std::to_string(c.config.d), std::string(to_string(c.config.sampler)), std::to_string(a.ok),
                 std::to_string(a.failed), num(a.m_per_n.mean()), num(a.m_per_n.se()), num(a.slope.mean()),
                 num(a.slope.se()), num(a.giant.mean()), num(a.giant.minimum()), num(a.second.maximum()), num(a.connected.mean()),
                 num(a.core_diam.maximum()), num(a.greedy.mean()), num(a.mean.mean()), num(a.mean.se()),
                 num(a.target), num(a.ratio.mean()), num(a.ratio.se()), num(a.diam.maximum())});
    }
    emit("aggregate.csv", agg.str());

    if (plan.measures & kMeasureDistance) {
        std::error_code pec;
        fs::create_directories(out / "plots", pec);
        if (pec) throw IoError("cannot create " + (out / "plots").string() + ": " + pec.message());
        for (double beta : plan.betas) {
            std::vector<std::pair<std::string, std::vector<SeriesPoint>>> series;
            std::map<std::size_t, double> target_by_n;
            for (const auto& k : plan.kernels) {
                std::vector<SeriesPoint> pts;
                for (const auto& c : cells) {
                    if (!(c.kernel == k) || c.config.beta != beta) continue;
                    const auto& a = aggs[c.index];
                    if (!a.mean.count) continue;
                    const double x = std::log(std::log(static_cast<double>(c.config.n)));
                    pts.push_back({x, a.mean.mean(), a.mean.se()});
                    target_by_n[c.config.n] = a.target;
                }
                if (!pts.empty()) series.emplace_back(kernel_label(k), std::move(pts));
            }
            if (series.empty()) continue;
            std::vector<std::pair<double, double>> target;
            for (const auto& [n, t] : target_by_n) target.emplace_back(std::log(std::log(static_cast<double>(n))), t);
            emit("plots/distance_beta" + format_double(beta) + ".svg", distance_svg(beta, series, target));
        }
    }
    return result;
}

}  // namespace girg
