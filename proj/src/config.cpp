#include "omring/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace omring
{
namespace
{

namespace pt = boost::property_tree;

constexpr std::string_view task_names[] = {"pump",  "spectrum",  "phase",    "bandwidth", "contour",
                                           "noise", "squeezing", "classify", "verify"};

const std::map<std::string, std::set<std::string>> &allowed_keys()
{
    static const std::map<std::string, std::set<std::string>> keys{
        {"units", {"mode"}},
        {"device",
         {"omega_m", "kappa", "kappa_prime", "kappa_in", "gamma_m", "g0", "beta", "beta_im", "delta0",
          "carrier"}},
        {"pump", {"drive", "drive_im", "delta", "cancel_left", "curve"}},
        {"coupling", {"g_r", "g_r_im", "g_l", "g_l_im", "delta"}},
        {"grid", {"start", "stop", "points"}},
        {"spectrum", {"solver", "in", "out", "unwrap"}},
        {"phase", {"solver", "unwrap"}},
        {"bandwidth", {"threshold"}},
        {"contour", {"beta_start", "beta_stop", "beta_points", "g_start", "g_stop", "g_points", "threshold"}},
        {"noise", {"n_th", "half_width", "band_lo", "band_hi", "method", "output"}},
        {"verify", {"inputs"}},
        {"output", {"path", "format"}},
    };
    return keys;
}

std::string trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::string lower(std::string s)
{
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

double parse_plain_number(std::string_view text)
{
    double value = 0.0;
    const char *begin = text.data();
    const char *end = text.data() + text.size();
    if (begin != end && *begin == '+')
        ++begin;
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end || !std::isfinite(value))
        throw ConfigError("not a finite number: '" + std::string(text) + "'");
    return value;
}

bool parse_bool(const std::string &text)
{
    const std::string v = lower(text);
    if (v == "true" || v == "yes" || v == "1" || v == "on")
        return true;
    if (v == "false" || v == "no" || v == "0" || v == "off")
        return false;
    throw ConfigError("not a boolean: '" + text + "'");
}

// Typed access to one section with the unit scale applied to rate values.
class Section
{
public:
    Section(const pt::ptree *tree, std::string name, UnitMode mode, double rate_scale)
        : tree_(tree), name_(std::move(name)), mode_(mode), scale_(rate_scale)
    {
    }

    template <class F>
    auto wrap(const std::string &key, F f) const
    {
        try
        {
            return f();
        }
        catch (const ConfigError &e)
        {
            throw ConfigError(name_ + "." + key + ": " + e.what());
        }
    }

    bool present() const { return tree_ != nullptr; }
    bool has(const std::string &key) const { return tree_ && tree_->find(key) != tree_->not_found(); }

    std::string text(const std::string &key) const { return trim(tree_->get<std::string>(key)); }

    // Rate-like quantity: Hz suffixes in Hz mode, normalized by the rate scale.
    double rate(const std::string &key, double fallback) const
    {
        if (!has(key))
            return fallback;
        return wrap(key, [&] { return parse_quantity(text(key), mode_) * scale_; });
    }
    double number(const std::string &key, double fallback) const
    {
        if (!has(key))
            return fallback;
        return wrap(key, [&] { return parse_plain_number(text(key)); });
    }
    std::size_t count(const std::string &key, std::size_t fallback) const
    {
        const double v = number(key, static_cast<double>(fallback));
        if (v < 1.0 || v != std::floor(v) || v > 1e8)
            throw ConfigError(name_ + "." + key + ": expected a positive integer");
        return static_cast<std::size_t>(v);
    }
    bool flag(const std::string &key, bool fallback) const
    {
        if (!has(key))
            return fallback;
        return wrap(key, [&] { return parse_bool(text(key)); });
    }

private:
    const pt::ptree *tree_;
    std::string name_;
    UnitMode mode_;
    double scale_;
};

std::string strip_comments(std::istream &in)
{
    std::ostringstream out;
    std::string line;
    while (std::getline(in, line))
    {
        const auto cut = line.find_first_of("#;");
        if (cut != std::string::npos)
            line.erase(cut);
        out << line << '\n';
    }
    return out.str();
}

Grid read_grid(const Section &s, const std::string &prefix, Grid fallback)
{
    Grid g;
    g.start = s.rate(prefix + "start", fallback.start);
    g.stop = s.rate(prefix + "stop", fallback.stop);
    g.points = s.count(prefix + "points", fallback.points);
    return g;
}

} // namespace

std::string_view task_name(Task t) { return task_names[static_cast<int>(t)]; }

Task parse_task(std::string_view name)
{
    for (int k = 0; k < static_cast<int>(std::size(task_names)); ++k)
        if (task_names[k] == name)
            return static_cast<Task>(k);
    throw ConfigError("unknown task '" + std::string(name) + "'");
}

OutputFormat parse_format(std::string_view name)
{
    if (name == "csv")
        return OutputFormat::csv;
    if (name == "json")
        return OutputFormat::json;
    throw ConfigError("unknown output format '" + std::string(name) + "' (expected csv or json)");
}

std::vector<double> Grid::values() const
{
    std::vector<double> v(points);
    if (points == 1)
    {
        v[0] = start;
        return v;
    }
    const double step = (stop - start) / static_cast<double>(points - 1);
    for (std::size_t k = 0; k < points; ++k)
        v[k] = start + step * static_cast<double>(k);
    v.back() = stop;
    return v;
}

double parse_quantity(std::string_view raw, UnitMode mode)
{
    const std::string text = trim(raw);
    std::size_t split = text.size();
    while (split > 0 && std::isalpha(static_cast<unsigned char>(text[split - 1])))
        --split;
    const std::string number = trim(std::string_view(text).substr(0, split));
    const std::string suffix = text.substr(split);
    const double value = parse_plain_number(number);
    if (suffix.empty())
        return value;
    if (mode != UnitMode::hz)
        throw ConfigError("unit suffix '" + suffix + "' is only allowed with [units] mode = hz");

    static const std::map<std::string, double> factors{
        {"hz", 1.0}, {"khz", 1e3}, {"mhz", 1e6}, {"ghz", 1e9}, {"thz", 1e12}};
    const auto it = factors.find(lower(suffix));
    if (it == factors.end())
        throw ConfigError("unknown unit suffix '" + suffix + "'");
    return value * it->second;
}

RunConfig parse_config(std::istream &in, Task task)
{
    pt::ptree tree;
    try
    {
        std::istringstream cleaned(strip_comments(in));
        pt::read_ini(cleaned, tree);
    }
    catch (const pt::ini_parser_error &e)
    {
        throw ConfigError("config syntax error at line " + std::to_string(e.line()) + ": " + e.message());
    }

    for (const auto &[name, section] : tree)
    {
        const auto known = allowed_keys().find(name);
        if (known == allowed_keys().end() || !section.data().empty())
            throw ConfigError("unknown section or top-level key '" + name + "'");
        for (const auto &[key, value] : section)
            if (!known->second.count(key))
                throw ConfigError("unknown key '" + name + "." + key + "'");
    }

    const auto section = [&](const std::string &name, UnitMode mode, double scale) {
        const auto it = tree.find(name);
        return Section(it == tree.not_found() ? nullptr : &it->second, name, mode, scale);
    };

    RunConfig cfg;
    cfg.task = task;

    const Section units = section("units", UnitMode::kappa, 1.0);
    if (!units.has("mode"))
        throw ConfigError("units.mode must be declared (kappa or hz)");
    const std::string mode = lower(units.text("mode"));
    if (mode == "kappa")
        cfg.units = UnitMode::kappa;
    else if (mode == "hz")
        cfg.units = UnitMode::hz;
    else
        throw ConfigError("units.mode must be 'kappa' or 'hz'");

    // Device first: in Hz mode it fixes the normalization of every other rate.
    double scale = 1.0;
    {
        const Section dev = section("device", cfg.units, 1.0);
        if (cfg.units == UnitMode::hz)
        {
            if (!dev.has("omega_m") || !dev.has("kappa"))
                throw ConfigError("hz mode requires device.omega_m and device.kappa");
            PhysicalRates r;
            r.omega_m_hz = dev.rate("omega_m", 0.0);
            r.kappa_hz = dev.rate("kappa", 0.0);
            r.kappa_prime_hz = dev.rate("kappa_prime", 0.0);
            r.kappa_in_hz = dev.rate("kappa_in", 0.0);
            r.gamma_m_hz = dev.rate("gamma_m", 0.0);
            r.g0_hz = dev.rate("g0", 0.0);
            r.beta_hz = cplx{dev.rate("beta", 0.0), dev.rate("beta_im", 0.0)};
            r.delta0_hz = dev.rate("delta0", -r.omega_m_hz);
            if (dev.has("carrier"))
                r.carrier_hz = dev.rate("carrier", 0.0);
            try
            {
                cfg.device = normalize(r);
            }
            catch (const InvalidParameters &e)
            {
                throw ConfigError(e.what());
            }
            scale = 1.0 / (cfg.device.rate_unit.value() / (2.0 * 3.14159265358979323846));
        }
        else
        {
            if (dev.has("carrier"))
                throw ConfigError("device.carrier requires [units] mode = hz");
            DeviceParams &d = cfg.device;
            d.omega_m = dev.rate("omega_m", d.omega_m);
            d.kappa = dev.rate("kappa", d.kappa);
            d.kappa_prime = dev.rate("kappa_prime", d.kappa_prime);
            d.kappa_in = dev.rate("kappa_in", d.kappa_in);
            d.gamma_m = dev.rate("gamma_m", d.gamma_m);
            d.g0 = dev.rate("g0", d.g0);
            d.beta = cplx{dev.rate("beta", 0.0), dev.rate("beta_im", 0.0)};
            d.delta0 = dev.rate("delta0", -d.omega_m);
        }
        try
        {
            validate(cfg.device);
        }
        catch (const InvalidParameters &e)
        {
            throw ConfigError(std::string("invalid device: ") + e.what());
        }
    }

    const Section pump = section("pump", cfg.units, scale);
    const Section coupling = section("coupling", cfg.units, scale);
    if (pump.present() && coupling.present())
        throw ConfigError("[pump] and [coupling] are mutually exclusive");
    if (pump.present())
    {
        PumpSettings p;
        p.drive = cplx{pump.number("drive", 1.0), pump.number("drive_im", 0.0)};
        if (pump.has("delta"))
            p.delta = pump.rate("delta", 0.0);
        p.cancel_left = pump.flag("cancel_left", false);
        p.curve = pump.flag("curve", false);
        if (p.cancel_left && !p.delta)
            throw ConfigError("pump.cancel_left requires a shifted detuning pump.delta");
        cfg.pump = p;
    }
    else
    {
        DirectCoupling c;
        c.g_r = cplx{coupling.rate("g_r", 0.0), coupling.rate("g_r_im", 0.0)};
        c.g_l = cplx{coupling.rate("g_l", 0.0), coupling.rate("g_l_im", 0.0)};
        c.delta = coupling.rate("delta", cfg.device.delta0);
        cfg.coupling = c;
    }

    cfg.grid = read_grid(section("grid", cfg.units, scale), "", cfg.grid);

    const auto solver_of = [](const Section &s) {
        if (!s.has("solver"))
            return SolverKind::full;
        const std::string v = lower(s.text("solver"));
        if (v == "toy")
            return SolverKind::toy;
        if (v == "full")
            return SolverKind::full;
        throw ConfigError("solver must be 'toy' or 'full'");
    };
    const auto channel_of = [](const Section &s, const std::string &key) -> std::optional<Channel> {
        if (!s.has(key))
            return std::nullopt;
        try
        {
            return parse_channel(s.text(key));
        }
        catch (const InvalidParameters &e)
        {
            throw ConfigError(e.what());
        }
    };

    if (task == Task::spectrum)
    {
        const Section s = section("spectrum", cfg.units, scale);
        cfg.solver = solver_of(s);
        cfg.channel_in = channel_of(s, "in");
        cfg.channel_out = channel_of(s, "out");
        if (cfg.channel_in.has_value() != cfg.channel_out.has_value())
            throw ConfigError("spectrum.in and spectrum.out must be given together");
        if (cfg.channel_in && cfg.solver == SolverKind::toy)
            throw ConfigError("explicit channels need solver = full");
        cfg.unwrap_phase = s.flag("unwrap", false);
    }
    if (task == Task::phase)
    {
        const Section s = section("phase", cfg.units, scale);
        cfg.solver = solver_of(s);
        cfg.unwrap_phase = s.flag("unwrap", false);
    }
    if (task == Task::bandwidth)
        cfg.threshold = section("bandwidth", cfg.units, scale).number("threshold", 0.5);
    if (task == Task::contour)
    {
        const Section s = section("contour", cfg.units, scale);
        cfg.beta_grid = read_grid(s, "beta_", cfg.beta_grid);
        cfg.g_grid = read_grid(s, "g_", cfg.g_grid);
        cfg.threshold = s.number("threshold", 0.5);
    }
    if (task == Task::noise)
    {
        const Section s = section("noise", cfg.units, scale);
        cfg.n_th = s.number("n_th", 1.0);
        if (cfg.n_th < 0.0)
            throw ConfigError("noise.n_th must be non-negative");
        if (s.has("half_width") && (s.has("band_lo") || s.has("band_hi")))
            throw ConfigError("noise.half_width and noise.band_lo/band_hi are mutually exclusive");
        if (s.has("half_width"))
        {
            cfg.band_half_width = s.rate("half_width", 0.0);
            if (*cfg.band_half_width < 0.0)
                throw ConfigError("noise.half_width must be non-negative");
        }
        else if (s.has("band_lo") || s.has("band_hi"))
        {
            if (!s.has("band_lo") || !s.has("band_hi"))
                throw ConfigError("noise.band_lo and noise.band_hi must be given together");
            cfg.band = Band{s.rate("band_lo", 0.0), s.rate("band_hi", 0.0)};
            if (cfg.band->hi < cfg.band->lo)
                throw ConfigError("noise.band_hi must not be below noise.band_lo");
        }
        const std::string method = s.has("method") ? lower(s.text("method")) : "exact";
        if (method == "exact")
            cfg.noise_method = NoiseMethod::exact;
        else if (method == "approx")
            cfg.noise_method = NoiseMethod::approx;
        else
            throw ConfigError("noise.method must be 'exact' or 'approx'");
        const std::string output = s.has("output") ? lower(s.text("output")) : "report";
        if (output != "report" && output != "density")
            throw ConfigError("noise.output must be 'report' or 'density'");
        cfg.noise_density = output == "density";
    }
    if (task == Task::verify)
    {
        const Section s = section("verify", cfg.units, scale);
        if (s.has("inputs"))
        {
            cfg.verify_inputs.clear();
            std::istringstream list(s.text("inputs"));
            std::string item;
            while (std::getline(list, item, ','))
            {
                try
                {
                    cfg.verify_inputs.push_back(parse_channel(trim(item)));
                }
                catch (const InvalidParameters &e)
                {
                    throw ConfigError(e.what());
                }
            }
            if (cfg.verify_inputs.empty())
                throw ConfigError("verify.inputs is empty");
        }
    }

    const Section out = section("output", cfg.units, scale);
    if (out.has("path"))
        cfg.out_path = out.text("path");
    if (out.has("format"))
        cfg.format = parse_format(lower(out.text("format")));
    return cfg;
}

RunConfig load_config(const std::string &path, Task task)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file '" + path + "'");
    return parse_config(in, task);
}

} // namespace omring
