#include "nondecomp/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <set>

#include "nondecomp/dataset_io.hpp"
#include "nondecomp/metrics.hpp"

namespace nondecomp {
namespace {

const std::set<std::string> &known_keys() {
    static const std::set<std::string> keys{
        "seed",      "n",          "L",           "d",          "rank",
        "noise",     "theta_star", "sigma",       "wstar_scale", "n_test",
        "dataset",   "test_dataset", "ratio",     "ratios",     "omega_sizes",
        "solver",    "loss",       "pu_rho",      "lambda",     "lambda_c",
        "regularizer", "gamma_clip", "max_iters", "rel_tol",    "k",
        "ridge",     "metric",     "metrics",     "repeats",    "out_dir",
        "model",     "trace",      "results",     "append"};
    return keys;
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string &s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        const auto pos = s.find(',', start);
        const std::string item = trim(std::string_view(s).substr(
            start, pos == std::string::npos ? std::string::npos : pos - start));
        if (!item.empty())
            out.push_back(item);
        if (pos == std::string::npos)
            break;
        start = pos + 1;
    }
    return out;
}

InputError bad_value(const std::string &key, const std::string &value, const char *what) {
    return InputError("config key '" + key + "': expected " + what + ", got '" + value + "'");
}

template <class T>
T parse_as(const std::string &key, const std::string &value, const char *what) {
    T out{};
    const char *b = value.data();
    const char *e = b + value.size();
    if (b != e && *b == '+')
        ++b;
    const auto res = std::from_chars(b, e, out);
    if (res.ec != std::errc() || res.ptr != e)
        throw bad_value(key, value, what);
    if constexpr (std::is_floating_point_v<T>)
        if (!std::isfinite(out))
            throw bad_value(key, value, what);
    return out;
}

class Reader {
  public:
    explicit Reader(const ConfigFile &f) : f_(f) {}

    std::optional<std::string> str(const std::string &key) const {
        auto it = f_.values().find(key);
        if (it == f_.values().end())
            return std::nullopt;
        return it->second;
    }
    template <class T>
    void number(const std::string &key, T &out, const char *what) const {
        if (auto v = str(key))
            out = parse_as<T>(key, *v, what);
    }
    /// "auto" or "none" leave the optional empty.
    void optional_double(const std::string &key, std::optional<double> &out) const {
        if (auto v = str(key)) {
            if (*v == "auto" || *v == "none")
                out.reset();
            else
                out = parse_as<double>(key, *v, "a number, 'auto' or 'none'");
        }
    }

  private:
    const ConfigFile &f_;
};

} // namespace

ConfigFile ConfigFile::parse(std::istream &in) {
    ConfigFile cfg;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        const std::string t = trim(line);
        if (t.empty())
            continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw InputError("config line " + std::to_string(line_no) +
                             ": expected 'key = value'");
        cfg.set(trim(std::string_view(t).substr(0, eq)), trim(std::string_view(t).substr(eq + 1)));
    }
    return cfg;
}

ConfigFile ConfigFile::from_file(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open config file '" + path + "'");
    return parse(in);
}

void ConfigFile::set(std::string key, std::string value) {
    if (key.empty())
        throw InputError("config key must not be empty");
    if (!known_keys().count(key))
        throw InputError("unknown config key '" + key + "'");
    values_[std::move(key)] = std::move(value);
}

void ConfigFile::apply_override(std::string_view arg) {
    if (arg.substr(0, 2) != "--")
        throw InputError("override '" + std::string(arg) + "' must look like --key=value");
    arg.remove_prefix(2);
    const auto eq = arg.find('=');
    if (eq == std::string_view::npos)
        throw InputError("override '--" + std::string(arg) + "' must look like --key=value");
    set(trim(arg.substr(0, eq)), trim(arg.substr(eq + 1)));
}

std::string ConfigFile::canonical() const {
    std::string out;
    for (const auto &[k, v] : values_)
        out += k + "=" + v + "\n";
    return out;
}

std::string ConfigFile::hash() const { return stable_hash(canonical()); }

std::vector<std::string> task_names() {
    return {"synth", "fit", "threshold", "eval", "convergence", "compare", "rate_check"};
}

ExperimentConfig ExperimentConfig::from(const ConfigFile &file, std::string task) {
    const auto tasks = task_names();
    if (std::find(tasks.begin(), tasks.end(), task) == tasks.end())
        throw InputError("unknown task '" + task + "'");

    ExperimentConfig c;
    c.task = std::move(task);
    c.config_hash = file.hash();
    const Reader r(file);

    r.number("seed", c.seed, "a nonnegative integer");
    auto &s = c.synthetic;
    r.number("n", s.n, "an integer");
    r.number("L", s.L, "an integer");
    r.number("d", s.d, "an integer");
    r.number("rank", s.rank, "an integer");
    if (auto v = r.str("noise")) {
        if (*v == "noise_free_sign")
            s.noise.kind = NoiseKind::noise_free_sign;
        else if (*v == "bernoulli_logistic")
            s.noise.kind = NoiseKind::bernoulli_logistic;
        else if (*v == "gaussian")
            s.noise.kind = NoiseKind::gaussian;
        else
            throw bad_value("noise", *v, "noise_free_sign, bernoulli_logistic or gaussian");
    }
    r.number("theta_star", s.noise.theta_star, "a number");
    r.number("sigma", s.noise.sigma, "a number");
    std::optional<double> scale;
    r.optional_double("wstar_scale", scale);
    s.wstar_scale = scale ? *scale : 1.0 / std::sqrt(static_cast<double>(s.d) * s.rank);
    s.seed = c.seed;
    c.n_test = s.n;
    r.number("n_test", c.n_test, "an integer");
    if (c.n_test < 1)
        throw InputError("n_test must be positive");

    c.dataset = r.str("dataset");
    c.test_dataset = r.str("test_dataset");

    r.number("ratio", c.ratio, "a number");
    if (auto v = r.str("ratios")) {
        c.ratios.clear();
        for (const auto &item : split_list(*v))
            c.ratios.push_back(parse_as<double>("ratios", item, "a list of numbers"));
    }
    for (double v : c.ratios)
        if (!(v > 0 && v <= 1))
            throw InputError("config key 'ratios': every ratio must lie in (0, 1]");
    if (!(c.ratio > 0 && c.ratio <= 1))
        throw InputError("config key 'ratio' must lie in (0, 1]");
    if (auto v = r.str("omega_sizes"))
        for (const auto &item : split_list(*v))
            c.omega_sizes.push_back(
                parse_as<std::size_t>("omega_sizes", item, "a list of integers"));

    if (auto v = r.str("solver")) {
        if (*v != "alt_min" && *v != "prox_grad" && *v != "plugin")
            throw bad_value("solver", *v, "alt_min, prox_grad or plugin");
        c.solver = *v;
    }
    if (auto v = r.str("loss")) {
        ProperLoss::from_name(*v);
        c.loss = *v;
    }
    r.number("pu_rho", c.pu_rho, "a number");
    if (!(c.pu_rho >= 0 && c.pu_rho < 1))
        throw InputError("config key 'pu_rho' must lie in [0, 1)");
    r.optional_double("lambda", c.lambda);
    r.number("lambda_c", c.lambda_c, "a number");
    if (auto v = r.str("regularizer")) {
        if (*v == "param_norm")
            c.regularizer = RegularizerMode::param_norm;
        else if (*v == "score_norm")
            c.regularizer = RegularizerMode::score_norm;
        else
            throw bad_value("regularizer", *v, "param_norm or score_norm");
    }
    r.optional_double("gamma_clip", c.gamma_clip);
    r.number("max_iters", c.max_iters, "an integer");
    r.number("rel_tol", c.rel_tol, "a number");
    if (auto v = r.str("k"); v && *v != "auto")
        r.number("k", c.k, "an integer or 'auto'");
    r.number("ridge", c.ridge, "a number");
    if (c.lambda && !(*c.lambda >= 0 && std::isfinite(*c.lambda)))
        throw InputError("config key 'lambda' must be a nonnegative number");
    if (!(c.lambda_c >= 0 && std::isfinite(c.lambda_c)))
        throw InputError("config key 'lambda_c' must be a nonnegative number");
    if (c.gamma_clip && !(*c.gamma_clip > 0))
        throw InputError("config key 'gamma_clip' must be positive");
    if (c.max_iters < 1)
        throw InputError("config key 'max_iters' must be at least 1");
    if (!(c.rel_tol > 0))
        throw InputError("config key 'rel_tol' must be positive");
    if (!(c.ridge >= 0 && std::isfinite(c.ridge)))
        throw InputError("config key 'ridge' must be a nonnegative number");
    if (c.k < 0)
        throw InputError("config key 'k' must be positive or 'auto'");

    if (auto v = r.str("metric")) {
        metric_by_name(*v);
        c.metric = *v;
    }
    if (auto v = r.str("metrics")) {
        c.metrics = split_list(*v);
        for (const auto &m : c.metrics)
            metric_by_name(m);
        if (c.metrics.empty())
            throw InputError("config key 'metrics' is empty");
    }
    r.number("repeats", c.repeats, "an integer");
    if (c.repeats < 1)
        throw InputError("config key 'repeats' must be at least 1");

    if (auto v = r.str("out_dir"))
        c.out_dir = *v;
    c.model_path = r.str("model").value_or(c.out_dir + "/model.txt");
    c.trace_path = r.str("trace").value_or(c.out_dir + "/trace.csv");
    c.results_path = r.str("results").value_or(c.out_dir + "/results.csv");
    if (auto v = r.str("append")) {
        if (*v != "true" && *v != "false")
            throw bad_value("append", *v, "true or false");
        c.append = *v == "true";
    }

    if (!c.dataset)
        s.validate();
    return c;
}

SolverConfig ExperimentConfig::solver_config(std::size_t num_observations) const {
    SolverConfig sc;
    sc.lambda_reg = lambda ? *lambda : default_lambda(num_observations, lambda_c);
    sc.loss = TrainingLoss(ProperLoss::from_name(loss), pu_rho);
    sc.regularizer = regularizer;
    sc.gamma_clip = gamma_clip;
    sc.max_iters = max_iters;
    sc.rel_tol = rel_tol;
    sc.seed = seed;
    sc.validate();
    return sc;
}

int ExperimentConfig::rank_for(int d, int L) const {
    const int cap = std::min(d, L);
    if (k > 0) {
        if (k > cap)
            throw InputError("config key 'k' exceeds min(d, L) = " + std::to_string(cap));
        return k;
    }
    const int guess = static_cast<int>(std::lround(0.4 * L));
    return std::clamp(guess, 1, cap);
}

} // namespace nondecomp
