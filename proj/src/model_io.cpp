#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "optday/error.hpp"
#include "optday/trees.hpp"

namespace optday {

namespace {

constexpr std::string_view kMagic = "optday-model 1";

void write_header(std::ostream& out, std::string_view kind,
                  const std::vector<std::string>& schema, const FitParams& p) {
    fmt::print(out, "{}\nkind {}\nfeatures {}\n", kMagic, kind, schema.size());
    for (const auto& name : schema) fmt::print(out, "name {}\n", name);
    fmt::print(out,
               "params n_trees={} max_depth={} learning_rate={} lambda={} gamma={} "
               "min_samples_leaf={} features_per_split={} bootstrap={} seed={}\n",
               p.n_trees, p.max_depth, p.learning_rate, p.lambda, p.gamma, p.min_samples_leaf,
               p.features_per_split, p.bootstrap ? 1 : 0, p.seed);
}

void write_trees(std::ostream& out, const std::vector<RegressionTree>& trees) {
    fmt::print(out, "trees {}\n", trees.size());
    for (const auto& tree : trees) {
        fmt::print(out, "tree {} {}\n", tree.nodes().size(), tree.max_depth());
        for (const auto& n : tree.nodes()) {
            fmt::print(out, "{} {} {} {} {}\n", n.feature, n.threshold, n.left, n.right,
                       n.weight);
        }
    }
}

class LineReader {
public:
    explicit LineReader(std::istream& in) : in_(in) {}

    std::istringstream expect(std::string_view keyword) {
        std::string line;
        if (!std::getline(in_, line)) fail(fmt::format("expected '{}', got end of input", keyword));
        ++line_;
        std::istringstream fields(line);
        std::string word;
        fields >> word;
        if (word != keyword) fail(fmt::format("expected '{}', got '{}'", keyword, word));
        return fields;
    }

    std::string rest_of(std::istringstream& fields) {
        std::string rest;
        std::getline(fields, rest);
        if (!rest.empty() && rest.front() == ' ') rest.erase(0, 1);
        return rest;
    }

    std::istringstream line() {
        std::string text;
        if (!std::getline(in_, text)) fail("unexpected end of input");
        ++line_;
        return std::istringstream(text);
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw SchemaError(fmt::format("model file line {}: {}", line_, what));
    }

private:
    std::istream& in_;
    int line_ = 0;
};

template <typename T>
T read_value(LineReader& reader, std::istringstream& fields, std::string_view what) {
    T value{};
    if (!(fields >> value)) reader.fail(fmt::format("cannot read {}", what));
    return value;
}

FitParams parse_params(LineReader& reader, std::istringstream& fields) {
    FitParams p;
    std::string token;
    while (fields >> token) {
        const auto eq = token.find('=');
        if (eq == std::string::npos) reader.fail(fmt::format("bad parameter '{}'", token));
        const std::string key = token.substr(0, eq);
        std::istringstream value(token.substr(eq + 1));
        bool ok = true;
        if (key == "n_trees") ok = static_cast<bool>(value >> p.n_trees);
        else if (key == "max_depth") ok = static_cast<bool>(value >> p.max_depth);
        else if (key == "learning_rate") ok = static_cast<bool>(value >> p.learning_rate);
        else if (key == "lambda") ok = static_cast<bool>(value >> p.lambda);
        else if (key == "gamma") ok = static_cast<bool>(value >> p.gamma);
        else if (key == "min_samples_leaf") ok = static_cast<bool>(value >> p.min_samples_leaf);
        else if (key == "features_per_split") ok = static_cast<bool>(value >> p.features_per_split);
        else if (key == "bootstrap") {
            int b = 0;
            ok = static_cast<bool>(value >> b);
            p.bootstrap = b != 0;
        } else if (key == "seed") ok = static_cast<bool>(value >> p.seed);
        else reader.fail(fmt::format("unknown parameter '{}'", key));
        if (!ok) reader.fail(fmt::format("bad value for parameter '{}'", key));
    }
    return p;
}

struct Header {
    std::vector<std::string> schema;
    FitParams params;
};

Header read_header(LineReader& reader, std::istream& in, std::string_view kind) {
    std::string magic;
    if (!std::getline(in, magic) || magic != kMagic) reader.fail("not an optday model file");
    auto kind_line = reader.expect("kind");
    if (reader.rest_of(kind_line) != kind) {
        reader.fail(fmt::format("expected a {} model", kind));
    }
    auto features = reader.expect("features");
    const auto n = read_value<std::size_t>(reader, features, "feature count");
    Header h;
    for (std::size_t i = 0; i < n; ++i) {
        auto name = reader.expect("name");
        h.schema.push_back(reader.rest_of(name));
    }
    auto params = reader.expect("params");
    h.params = parse_params(reader, params);
    return h;
}

std::vector<RegressionTree> read_trees(LineReader& reader) {
    auto header = reader.expect("trees");
    const auto n_trees = read_value<std::size_t>(reader, header, "tree count");
    std::vector<RegressionTree> trees;
    trees.reserve(n_trees);
    for (std::size_t t = 0; t < n_trees; ++t) {
        auto tree_line = reader.expect("tree");
        const auto n_nodes = read_value<std::size_t>(reader, tree_line, "node count");
        const auto max_depth = read_value<int>(reader, tree_line, "max depth");
        std::vector<TreeNode> nodes(n_nodes);
        for (auto& node : nodes) {
            auto fields = reader.line();
            node.feature = read_value<int>(reader, fields, "feature");
            node.threshold = read_value<double>(reader, fields, "threshold");
            node.left = read_value<int>(reader, fields, "left");
            node.right = read_value<int>(reader, fields, "right");
            node.weight = read_value<double>(reader, fields, "weight");
        }
        try {
            trees.emplace_back(std::move(nodes), max_depth);
        } catch (const InvalidArgument& e) {
            reader.fail(e.what());
        }
    }
    return trees;
}

}  // namespace

void save_model(std::ostream& out, const BoostedEnsemble& model) {
    write_header(out, "boosted", model.feature_schema, model.params);
    fmt::print(out, "base_score {}\nlearning_rate {}\nlambda {}\ngamma {}\n", model.base_score,
               model.learning_rate, model.lambda, model.gamma);
    write_trees(out, model.trees);
}

void save_model(std::ostream& out, const RandomForestModel& model) {
    write_header(out, "forest", model.feature_schema, model.params);
    fmt::print(out, "features_per_split {}\nbootstrap {}\nseed {}\n", model.features_per_split,
               model.bootstrap ? 1 : 0, model.seed);
    write_trees(out, model.trees);
}

BoostedEnsemble load_boosted(std::istream& in) {
    LineReader reader(in);
    Header h = read_header(reader, in, "boosted");
    BoostedEnsemble model;
    model.feature_schema = std::move(h.schema);
    model.params = h.params;
    auto base = reader.expect("base_score");
    model.base_score = read_value<double>(reader, base, "base_score");
    auto eta = reader.expect("learning_rate");
    model.learning_rate = read_value<double>(reader, eta, "learning_rate");
    auto lambda = reader.expect("lambda");
    model.lambda = read_value<double>(reader, lambda, "lambda");
    auto gamma = reader.expect("gamma");
    model.gamma = read_value<double>(reader, gamma, "gamma");
    model.trees = read_trees(reader);
    return model;
}

RandomForestModel load_forest(std::istream& in) {
    LineReader reader(in);
    Header h = read_header(reader, in, "forest");
    RandomForestModel model;
    model.feature_schema = std::move(h.schema);
    model.params = h.params;
    auto fps = reader.expect("features_per_split");
    model.features_per_split = read_value<int>(reader, fps, "features_per_split");
    auto boot = reader.expect("bootstrap");
    model.bootstrap = read_value<int>(reader, boot, "bootstrap") != 0;
    auto seed = reader.expect("seed");
    model.seed = read_value<std::uint64_t>(reader, seed, "seed");
    model.trees = read_trees(reader);
    return model;
}

}  // namespace optday
