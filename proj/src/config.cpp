#include "womgraph/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>

#include "womgraph/error.hpp"
#include "womgraph/format.hpp"

namespace womgraph {

namespace {

std::string trim(const std::string &s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double real(const std::string &key, const std::string &value) {
    double v = 0.0;
    if (!parse_double(value, v) || !std::isfinite(v))
        throw ConfigError(key + ": expected a number, got '" + value + "'");
    return v;
}

template <typename T> T whole(const std::string &key, const std::string &value) {
    T v{};
    auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (value.empty() || ec != std::errc() || end != value.data() + value.size())
        throw ConfigError(key + ": expected a non-negative integer, got '" + value + "'");
    return v;
}

bool boolean(const std::string &key, const std::string &value) {
    if (value == "true" || value == "1" || value == "yes")
        return true;
    if (value == "false" || value == "0" || value == "no")
        return false;
    throw ConfigError(key + ": expected true or false, got '" + value + "'");
}

std::filesystem::path resolve(const std::filesystem::path &base, const std::string &value) {
    std::filesystem::path p(value);
    return p.is_relative() && !base.empty() ? base / p : p;
}

std::array<double, 12> seasonality(const std::string &key, const std::string &value) {
    std::array<double, 12> out{};
    std::size_t pos = 0;
    for (std::size_t m = 0; m < 12; ++m) {
        auto comma = value.find(',', pos);
        if ((comma == std::string::npos) != (m == 11))
            throw ConfigError(key + ": expected 12 comma-separated weights");
        out[m] = real(key, trim(value.substr(pos, comma == std::string::npos ? comma : comma - pos)));
        pos = comma + 1;
    }
    return out;
}

} // namespace

void Config::validate() const {
    try {
        if (!(alpha >= 0.0))
            throw InvalidArgument("alpha must be non-negative");
        weights.validate();
        pagerank.validate();
        if (!(tol > 0.0))
            throw InvalidArgument("tol must be positive");
        if (max_iter < 1)
            throw InvalidArgument("max_iter must be at least 1");
        // k >= r is checked by reinforced_selection; other commands only use k.
        if (reinforcement.k < 1 || reinforcement.r < 1 || reinforcement.th < 1)
            throw InvalidArgument("k, r and th must be at least 1");
        if (table.min_pair_count < 1)
            throw InvalidArgument("min_pair_count must be at least 1");
        if (table.top_n_per_word < 1)
            throw InvalidArgument("top_n_per_word must be at least 1");
        if (workers < 1)
            throw InvalidArgument("workers must be at least 1");
        synthesis.validate();
    } catch (const ConfigError &) {
        throw;
    } catch (const Error &e) {
        throw ConfigError(std::string("invalid configuration: ") + e.what());
    }
}

Preprocessor Config::preprocessor() const {
    auto open = [](const std::filesystem::path &p) {
        std::ifstream in(p);
        if (!in)
            throw ConfigError("cannot open " + p.string());
        return in;
    };
    StopwordSet words = default_stopwords();
    std::vector<StemRule> rules = default_stem_rules();
    if (stopwords) {
        auto in = open(*stopwords);
        words = load_stopwords(in);
    }
    if (stem_rules) {
        auto in = open(*stem_rules);
        rules = load_stem_rules(in);
    }
    return Preprocessor(std::move(words), std::move(rules));
}

AuthorityOptions Config::authority() const {
    AuthorityOptions options;
    options.power = pagerank;
    options.tol = tol;
    options.max_iter = max_iter;
    options.use_weights = use_weights;
    options.workers = workers;
    return options;
}

void apply_setting(Config &c, const std::string &key, const std::string &value,
                   const std::filesystem::path &base_dir) {
    auto &s = c.synthesis;
    if (key == "alpha")
        c.alpha = real(key, value);
    else if (key == "weight.like_on_comment")
        c.weights.like_on_comment = real(key, value);
    else if (key == "weight.like")
        c.weights.like = real(key, value);
    else if (key == "weight.comment")
        c.weights.comment = real(key, value);
    else if (key == "weight.share")
        c.weights.share = real(key, value);
    else if (key == "damping")
        c.pagerank.damping = real(key, value);
    else if (key == "pagerank.tol")
        c.pagerank.tol = real(key, value);
    else if (key == "pagerank.max_iter")
        c.pagerank.max_iter = whole<std::size_t>(key, value);
    else if (key == "tol")
        c.tol = real(key, value);
    else if (key == "max_iter")
        c.max_iter = whole<std::size_t>(key, value);
    else if (key == "use_weights")
        c.use_weights = boolean(key, value);
    else if (key == "k")
        c.reinforcement.k = whole<std::size_t>(key, value);
    else if (key == "r")
        c.reinforcement.r = whole<std::size_t>(key, value);
    else if (key == "th")
        c.reinforcement.th = whole<std::size_t>(key, value);
    else if (key == "method") {
        try {
            c.method = parse_method(value);
        } catch (const Error &e) {
            throw ConfigError(key + ": " + e.what());
        }
    } else if (key == "stopwords")
        c.stopwords = resolve(base_dir, value);
    else if (key == "stem_rules")
        c.stem_rules = resolve(base_dir, value);
    else if (key == "group_topic")
        c.group_topic = value;
    else if (key == "min_pair_count")
        c.table.min_pair_count = whole<std::size_t>(key, value);
    else if (key == "top_n_per_word")
        c.table.top_n_per_word = whole<std::size_t>(key, value);
    else if (key == "workers")
        c.workers = whole<unsigned>(key, value);
    else if (key == "seed")
        s.seed = whole<std::uint64_t>(key, value);
    else if (key == "synth.users")
        s.n_users = whole<std::size_t>(key, value);
    else if (key == "synth.posts")
        s.n_posts = whole<std::size_t>(key, value);
    else if (key == "synth.author_fraction")
        s.author_fraction = real(key, value);
    else if (key == "synth.pa_strength")
        s.pa_strength = real(key, value);
    else if (key == "synth.reactions_per_post")
        s.reactions_per_post = real(key, value);
    else if (key == "synth.author_reaction_share")
        s.author_reaction_share = real(key, value);
    else if (key == "synth.seasonality")
        s.seasonality = seasonality(key, value);
    else if (key == "synth.year")
        s.year = whole<int>(key, value);
    else
        throw ConfigError("unknown key '" + key + "'");
}

Config parse_config(std::istream &in, const std::filesystem::path &base_dir, Config config) {
    std::set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string body = trim(line);
        if (body.empty() || body.front() == '#')
            continue;
        const auto eq = body.find('=');
        const std::string where = "config line " + std::to_string(line_no) + ": ";
        if (eq == std::string::npos)
            throw ConfigError(where + "expected key = value");
        const std::string key = trim(body.substr(0, eq));
        const std::string value = trim(body.substr(eq + 1));
        if (!seen.insert(key).second)
            throw ConfigError(where + "repeated key '" + key + "'");
        try {
            apply_setting(config, key, value, base_dir);
        } catch (const ConfigError &e) {
            throw ConfigError(where + e.what());
        }
    }
    config.validate();
    return config;
}

Config load_config(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file " + path.string());
    return parse_config(in, path.parent_path());
}

} // namespace womgraph
