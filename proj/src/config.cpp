#include "girg/config.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "girg/io.hpp"

namespace girg {

std::vector<ConfigEntry> read_entries(std::istream& in) {
    LineReader reader(in);
    std::vector<ConfigEntry> entries;
    std::set<std::string, std::less<>> seen;
    std::string raw;
    while (reader.next(raw)) {
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) reader.fail("expected 'key = value'");
        const auto key = trim(line.substr(0, eq));
        if (key.empty()) reader.fail("empty key");
        if (!seen.emplace(key).second) reader.fail("duplicate key '" + std::string(key) + "'");
        entries.push_back({std::string(key), std::string(trim(line.substr(eq + 1))), reader.line_number()});
    }
    return entries;
}

std::vector<std::string> split_list(std::string_view value) {
    std::vector<std::string> items;
    int depth = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= value.size(); ++i) {
        const char c = i < value.size() ? value[i] : ',';
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == ',' && depth == 0) {
            items.emplace_back(trim(value.substr(start, i - start)));
            start = i + 1;
        }
    }
    if (items.size() == 1 && items.front().empty()) items.clear();
    return items;
}

namespace {

void set_kernel_param(KernelKind& kernel, std::string_view key, std::string_view value) {
    bool used = false;
    if (auto* k = std::get_if<DistanceKernel>(&kernel)) {
        if (key == "alpha") k->alpha = parse_double(value), used = true;
        if (key == "norm") k->norm = parse_norm(value), used = true;
    } else if (auto* k = std::get_if<ThresholdKernel>(&kernel)) {
        if (key == "norm") k->norm = parse_norm(value), used = true;
        if (key == "c_low") k->c_low = parse_double(value), used = true;
        if (key == "c_high") k->c_high = parse_double(value), used = true;
    }
    if (!used)
        throw std::invalid_argument("parameter '" + std::string(key) + "' does not apply to kernel " +
                                    kernel_name(kernel));
}

}  // namespace

KernelKind parse_kernel(std::string_view spec) {
    spec = trim(spec);
    std::string_view name = spec;
    std::string_view params;
    if (const auto open = spec.find('('); open != std::string_view::npos) {
        if (spec.back() != ')') throw std::invalid_argument("kernel spec missing ')': " + std::string(spec));
        name = trim(spec.substr(0, open));
        params = spec.substr(open + 1, spec.size() - open - 2);
    }
    KernelKind kernel;
    if (name == "chung_lu")
        kernel = ChungLuKernel{};
    else if (name == "distance")
        kernel = DistanceKernel{};
    else if (name == "threshold")
        kernel = ThresholdKernel{};
    else
        throw std::invalid_argument("unknown kernel '" + std::string(name) +
                                    "' (expected chung_lu | distance | threshold)");
    for (const auto& item : split_list(params)) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("kernel parameter without '=': " + item);
        set_kernel_param(kernel, trim(std::string_view(item).substr(0, eq)),
                         trim(std::string_view(item).substr(eq + 1)));
    }
    return kernel;
}

ModelConfig parse_config(std::istream& in) {
    const auto entries = read_entries(in);
    ModelConfig c;
    // The kernel is applied first so that parameter keys can refine it wherever they appear.
    for (const auto& e : entries) {
        if (e.key != "kernel") continue;
        try {
            c.kernel = parse_kernel(e.value);
        } catch (const std::invalid_argument& err) {
            throw ParseError(e.line, err.what());
        }
    }
    for (const auto& e : entries) {
        try {
            if (e.key == "kernel") continue;
            if (e.key == "n")
                c.n = parse_u64(e.value);
            else if (e.key == "beta")
                c.beta = parse_double(e.value);
            else if (e.key == "w_min")
                c.w_min = parse_double(e.value);
            else if (e.key == "d")
                c.d = parse_u64(e.value);
            else if (e.key == "seed")
                c.seed = parse_u64(e.value);
            else if (e.key == "sampler")
                c.sampler = parse_sampler(e.value);
            else if (e.key == "w_bar")
                c.w_bar = parse_double(e.value);
            else if (e.key == "alpha" || e.key == "norm" || e.key == "c_low" || e.key == "c_high")
                set_kernel_param(c.kernel, e.key, e.value);
            else
                throw std::invalid_argument("unknown key '" + e.key + "'");
        } catch (const std::invalid_argument& err) {
            throw ParseError(e.line, err.what());
        }
    }
    validate_config(c);
    return c;
}

ModelConfig read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open for reading: " + path);
    return parse_config(in);
}

std::string serialize_config(const ModelConfig& c) {
    std::ostringstream out;
    out << "n = " << c.n << '\n'
        << "beta = " << format_double(c.beta) << '\n'
        << "w_min = " << format_double(c.w_min) << '\n'
        << "d = " << c.d << '\n'
        << "kernel = " << kernel_name(c.kernel) << '\n';
    if (const auto* k = std::get_if<DistanceKernel>(&c.kernel)) {
        out << "alpha = " << format_double(k->alpha) << '\n' << "norm = " << to_string(k->norm) << '\n';
    } else if (const auto* k = std::get_if<ThresholdKernel>(&c.kernel)) {
        out << "norm = " << to_string(k->norm) << '\n'
            << "c_low = " << format_double(k->c_low) << '\n'
            << "c_high = " << format_double(k->c_high) << '\n';
    }
    out << "seed = " << c.seed << '\n' << "sampler = " << to_string(c.sampler) << '\n';
    if (c.w_bar) out << "w_bar = " << format_double(*c.w_bar) << '\n';
    return out.str();
}

void write_config(const std::string& path, const ModelConfig& config) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << serialize_config(config);
    if (!out) throw IoError("write failed: " + path);
}

}  // namespace girg
