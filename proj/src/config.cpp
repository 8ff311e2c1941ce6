// config.cpp

#include "bayesphase/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "bayesphase/errors.hpp"

namespace bayesphase {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) parts.push_back(trim(cur));
    return parts;
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
    T value{};
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end || text.empty())
        throw ConfigError("cannot parse value '" + text + "' for " + key);
    return value;
}

}  // namespace

std::string format_double(double x) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    if (ec != std::errc{}) throw NumericalError("number formatting failed");
    return std::string(buf, ptr);
}

double parse_angle(const std::string& raw) {
    std::string text = trim(raw);
    text.erase(std::remove(text.begin(), text.end(), ' '), text.end());
    const auto pos = text.find("pi");
    if (pos == std::string::npos) return parse_number<double>("angle", text);
    std::string coef = text.substr(0, pos);
    if (!coef.empty() && coef.back() == '*') coef.pop_back();
    double value = std::numbers::pi * (coef.empty() ? 1.0 : parse_number<double>("angle", coef));
    const std::string rest = text.substr(pos + 2);
    if (!rest.empty()) {
        if (rest.front() != '/') throw ConfigError("cannot parse angle '" + raw + "'");
        value /= parse_number<double>("angle", rest.substr(1));
    }
    return value;
}

std::vector<int> default_mu_schedule(int mu_max) {
    if (mu_max < 1) throw ConfigError("mu_max must be at least 1");
    std::vector<int> mus;
    for (int m = 1; m <= std::min(20, mu_max); ++m) mus.push_back(m);
    for (int k = 14;; ++k) {
        const int m = static_cast<int>(std::lround(std::pow(10.0, k / 10.0)));
        if (m > mu_max) break;
        if (m > mus.back()) mus.push_back(m);
    }
    if (mus.back() != mu_max) mus.push_back(mu_max);
    return mus;
}

void ExperimentConfig::validate() const {
    if (mu_max < 1) throw ConfigError("run.mu_max must be at least 1");
    if (grid_size < 3 || grid_size % 2 == 0) throw ConfigError("run.grid_size must be odd and at least 3");
    if (!(epsilon_tau > 0.0)) throw ConfigError("run.epsilon_tau must be positive");
    if (trajectories < 2) throw ConfigError("run.trajectories must be at least 2");
    if (theta_nodes < 1) throw ConfigError("run.theta_nodes must be at least 1");
    if (width_trials < 1) throw ConfigError("width.trials must be at least 1");
    if (prior_width && !(*prior_width > 0.0 && *prior_width <= 2.0 * std::numbers::pi + 1e-12))
        throw ConfigError("prior.width must lie in (0, 2pi]");
    for (std::size_t i = 0; i < mu_schedule.size(); ++i) {
        if (mu_schedule[i] < 1 || mu_schedule[i] > mu_max)
            throw ConfigError("run.mu_schedule entries must lie in [1, mu_max]");
        if (i > 0 && mu_schedule[i] <= mu_schedule[i - 1])
            throw ConfigError("run.mu_schedule must be strictly increasing");
    }
}

std::vector<int> ExperimentConfig::schedule() const {
    return mu_schedule.empty() ? default_mu_schedule(mu_max) : mu_schedule;
}

ExperimentConfig parse_config(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (!kv.emplace(key, value).second) throw ConfigError("duplicate key " + key);
    }

    ExperimentConfig c;
    auto take = [&](const std::string& key) -> std::optional<std::string> {
        auto it = kv.find(key);
        if (it == kv.end()) return std::nullopt;
        std::string v = it->second;
        kv.erase(it);
        return v;
    };

    const auto family = take("probe.family");
    if (!family) throw ConfigError("probe.family is required");
    c.probe.family = parse_family(*family);
    const auto nbar = take("probe.nbar");
    const auto n = take("probe.N");
    const auto delta = take("probe.delta");
    switch (c.probe.family) {
        case ProbeFamily::Noon:
            if (n) c.probe.noon_n = parse_number<int>("probe.N", *n);
            else if (nbar) c.probe.noon_n = parse_number<int>("probe.nbar", *nbar);
            else throw ConfigError("noon probe needs probe.N");
            break;
        case ProbeFamily::DeltaOneMode:
            if (!n || !delta) throw ConfigError("delta probe needs probe.N and probe.delta");
            c.probe.delta_n = parse_number<double>("probe.N", *n);
            c.probe.delta = parse_number<double>("probe.delta", *delta);
            break;
        default:
            if (!nbar) throw ConfigError("probe.nbar is required");
            c.probe.nbar = parse_number<double>("probe.nbar", *nbar);
    }

    if (auto w = take("prior.width")) {
        c.prior_width_text = *w;
        if (*w == "intrinsic") c.prior_width.reset();
        else {
            try {
                c.prior_width = parse_angle(*w);
            } catch (const Error&) {
                throw ConfigError("cannot parse prior.width '" + *w + "'");
            }
        }
    }
    if (auto v = take("run.mu_max")) c.mu_max = parse_number<int>("run.mu_max", *v);
    if (auto v = take("run.mu_schedule"); v && *v != "default")
        for (const auto& part : split(*v, ',')) c.mu_schedule.push_back(parse_number<int>("run.mu_schedule", part));
    if (auto v = take("run.trajectories")) c.trajectories = parse_number<int>("run.trajectories", *v);
    if (auto v = take("run.grid_size")) c.grid_size = parse_number<int>("run.grid_size", *v);
    if (auto v = take("run.theta_nodes")) c.theta_nodes = parse_number<int>("run.theta_nodes", *v);
    if (auto v = take("run.epsilon_tau")) c.epsilon_tau = parse_number<double>("run.epsilon_tau", *v);
    const auto seed = take("run.seed");
    if (!seed) throw ConfigError("run.seed is required");
    c.seed = parse_number<std::uint64_t>("run.seed", *seed);
    if (auto v = take("run.bounds")) {
        c.zzb = c.wwb = false;
        for (const auto& b : split(*v, ',')) {
            if (b == "zzb") c.zzb = true;
            else if (b == "wwb") c.wwb = true;
            else if (b != "qcrb") throw ConfigError("unknown bound '" + b + "'");
        }
    }
    if (auto v = take("width.trials")) c.width_trials = parse_number<int>("width.trials", *v);
    if (auto v = take("out.path")) c.out_path = *v;

    if (!kv.empty()) throw ConfigError("unknown key " + kv.begin()->first);
    c.validate();
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string echo_config(const ExperimentConfig& c) {
    std::ostringstream out;
    out << "probe.family = " << to_string(c.probe.family) << '\n';
    switch (c.probe.family) {
        case ProbeFamily::Noon: out << "probe.N = " << c.probe.noon_n << '\n'; break;
        case ProbeFamily::DeltaOneMode:
            out << "probe.N = " << format_double(c.probe.delta_n) << '\n';
            out << "probe.delta = " << format_double(c.probe.delta) << '\n';
            break;
        default: out << "probe.nbar = " << format_double(c.probe.nbar) << '\n';
    }
    out << "prior.width = " << (c.prior_width ? c.prior_width_text : std::string("intrinsic")) << '\n';
    out << "run.mu_max = " << c.mu_max << '\n';
    out << "run.mu_schedule = ";
    if (c.mu_schedule.empty()) out << "default";
    for (std::size_t i = 0; i < c.mu_schedule.size(); ++i) out << (i ? "," : "") << c.mu_schedule[i];
    out << '\n';
    out << "run.trajectories = " << c.trajectories << '\n';
    out << "run.grid_size = " << c.grid_size << '\n';
    out << "run.theta_nodes = " << c.theta_nodes << '\n';
    out << "run.epsilon_tau = " << format_double(c.epsilon_tau) << '\n';
    out << "run.seed = " << c.seed << '\n';
    out << "run.bounds = qcrb" << (c.zzb ? ",zzb" : "") << (c.wwb ? ",wwb" : "") << '\n';
    out << "width.trials = " << c.width_trials << '\n';
    out << "out.path = " << c.out_path << '\n';
    return out.str();
}

ProbeSpec parse_probe_argument(const std::string& text) {
    const auto parts = split(text, ':');
    if (parts.empty() || parts[0].empty()) throw ConfigError("empty probe argument");
    ProbeSpec spec;
    spec.family = parse_family(parts[0]);
    const std::size_t want = spec.family == ProbeFamily::DeltaOneMode ? 3 : 2;
    if (parts.size() != want) throw ConfigError("probe argument '" + text + "' has the wrong number of fields");
    switch (spec.family) {
        case ProbeFamily::Noon: spec.noon_n = parse_number<int>("probe", parts[1]); break;
        case ProbeFamily::DeltaOneMode:
            spec.delta_n = parse_number<double>("probe", parts[1]);
            spec.delta = parse_number<double>("probe", parts[2]);
            break;
        default: spec.nbar = parse_number<double>("probe", parts[1]);
    }
    return spec;
}

}  // namespace bayesphase
