#include "dualkern/dsl.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "dualkern/csv.hpp"

namespace dualkern {
namespace {

struct Token {
  std::string_view text;
  std::size_t column;  // 1-based
};

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    if (i >= line.size()) break;
    const std::size_t start = i;
    int depth = 0;
    while (i < line.size()) {
      const char c = line[i];
      if (c == '(') ++depth;
      if (c == ')') --depth;
      if (depth == 0 && (c == ' ' || c == '\t' || c == '\r')) break;
      ++i;
    }
    tokens.push_back({line.substr(start, i - start), start + 1});
  }
  return tokens;
}

class Directive {
 public:
  Directive(std::size_t line, std::vector<Token> tokens) : line_(line), tokens_(std::move(tokens)) {
    for (std::size_t k = 1; k < tokens_.size(); ++k) {
      const auto& tok = tokens_[k];
      const auto eq = tok.text.find('=');
      if (eq == std::string_view::npos || eq == 0) {
        throw ParseError(line_, tok.column, "expected key=value, got '" + std::string(tok.text) + "'");
      }
      const std::string key(tok.text.substr(0, eq));
      if (!attributes_.emplace(key, k).second) {
        throw ParseError(line_, tok.column, "duplicate attribute '" + key + "'");
      }
    }
  }

  std::string_view keyword() const { return tokens_.front().text; }
  std::size_t line() const { return line_; }

  void allow(std::initializer_list<std::string_view> keys) const {
    for (const auto& [key, index] : attributes_) {
      bool ok = false;
      for (auto k : keys) ok = ok || key == k;
      if (!ok) throw ParseError(line_, tokens_[index].column, "unknown attribute '" + key + "'");
    }
  }

  bool has(const std::string& key) const { return attributes_.count(key) != 0; }

  std::pair<std::string_view, std::size_t> value(const std::string& key) const {
    const auto it = attributes_.find(key);
    if (it == attributes_.end()) {
      throw ParseError(line_, 0, "'" + std::string(keyword()) + "' requires " + key + "=");
    }
    const auto& tok = tokens_[it->second];
    const auto eq = tok.text.find('=');
    return {tok.text.substr(eq + 1), tok.column + eq + 1};
  }

  std::size_t positive_int(const std::string& key) const {
    const auto [text, column] = value(key);
    long long v = 0;
    try {
      v = parse_integer(text);
    } catch (const InvalidArgument&) {
      throw ParseError(line_, column, key + " must be an integer");
    }
    if (v < 1) throw ParseError(line_, column, key + " must be positive");
    return std::size_t(v);
  }

  double real(const std::string& key) const {
    const auto [text, column] = value(key);
    try {
      return parse_double(text);
    } catch (const InvalidArgument&) {
      throw ParseError(line_, column, key + " must be a number");
    }
  }

  Activation activation() const {
    const auto [text, column] = value("activation");
    try {
      return parse_activation_token(text);
    } catch (const InvalidArgument& e) {
      throw ParseError(line_, column, e.what());
    }
  }

 private:
  std::size_t line_;
  std::vector<Token> tokens_;
  std::map<std::string, std::size_t> attributes_;
};

std::vector<Directive> directives(std::string_view text) {
  std::vector<Directive> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    auto line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto tokens = tokenize(line);
    if (!tokens.empty()) out.emplace_back(line_no, std::move(tokens));
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  return out;
}

}  // namespace

Activation parse_activation_token(std::string_view token) {
  const auto open = token.find('(');
  if (open == std::string_view::npos) {
    if (token == "identity") return make_activation(ActivationKind::identity);
    if (token == "relu") return make_activation(ActivationKind::relu);
    if (token == "step") return make_activation(ActivationKind::step);
    if (token == "exp" || token == "sin" || token == "hermite") {
      throw InvalidArgument("activation '" + std::string(token) + "' requires a parameter");
    }
    throw InvalidArgument("unknown activation '" + std::string(token) + "'");
  }
  if (token.back() != ')') throw InvalidArgument("malformed activation '" + std::string(token) + "'");
  const auto name = token.substr(0, open);
  const auto inner = token.substr(open + 1, token.size() - open - 2);
  const auto eq = inner.find('=');
  if (eq == std::string_view::npos) throw InvalidArgument("malformed activation '" + std::string(token) + "'");
  const auto key = inner.substr(0, eq);
  const auto val = inner.substr(eq + 1);
  if (name == "exp" && key == "a") return make_activation(ActivationKind::exponential, parse_double(val));
  if (name == "sin" && key == "a") return make_activation(ActivationKind::sine, parse_double(val));
  if (name == "hermite" && key == "n") {
    const long long n = parse_integer(val);
    if (n < 0) throw InvalidArgument("hermite degree must be >= 0");
    return make_activation(ActivationKind::hermite, double(n));
  }
  throw InvalidArgument("unknown activation '" + std::string(token) + "'");
}

LayeredSpec parse_layered(std::string_view text) {
  const auto lines = directives(text);
  if (lines.empty()) throw ParseError(1, 0, "empty skeleton description");
  if (lines.front().keyword() != "inputs") {
    throw ParseError(lines.front().line(), 1, "first directive must be 'inputs'");
  }

  LayeredSpec spec;
  const auto& header = lines.front();
  header.allow({"n", "dim"});
  spec.coordinate_count = header.positive_int("n");
  spec.coordinate_dim = header.positive_int("dim");

  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto& d = lines[k];
    const auto kw = d.keyword();
    if (kw == "bias") {
      if (spec.beta || !spec.layers.empty()) throw ParseError(d.line(), 1, "'bias' must appear once, before any layer");
      d.allow({"beta"});
      const double beta = d.real("beta");
      if (!(beta >= 0.0 && beta <= 1.0)) throw ParseError(d.line(), d.value("beta").second, "beta must lie in [0, 1]");
      spec.beta = beta;
    } else if (kw == "conv" || kw == "fc") {
      LayerSpec layer;
      if (kw == "conv") {
        d.allow({"width", "stride", "activation", "delta"});
        layer.kind = LayerKind::conv1d;
        layer.width = d.positive_int("width");
        layer.stride = d.positive_int("stride");
      } else {
        d.allow({"activation", "delta"});
        layer.kind = LayerKind::fc;
      }
      layer.activation = d.activation();
      if (d.has("delta")) {
        const double delta = d.real("delta");
        if (!(delta > 0.0) || !std::isfinite(delta)) throw ParseError(d.line(), d.value("delta").second, "delta must be positive");
        layer.delta = delta;
      }
      spec.layers.push_back(std::move(layer));
    } else if (kw == "inputs") {
      throw ParseError(d.line(), 1, "duplicate 'inputs' directive");
    } else {
      throw ParseError(d.line(), 1, "unknown directive '" + std::string(kw) + "'");
    }
  }
  if (spec.layers.empty()) throw ParseError(lines.back().line(), 0, "skeleton has no layers");

  // Structural checks, reported against the layer's own line.
  std::size_t frontier = spec.coordinate_count;
  std::size_t layer_index = 0;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    if (lines[k].keyword() == "bias") continue;
    const auto& layer = spec.layers[layer_index++];
    if (layer.kind == LayerKind::fc) {
      frontier = 1;
      continue;
    }
    try {
      frontier = conv1d_windows(frontier, layer.width, layer.stride).size();
    } catch (const InvalidArgument& e) {
      throw ParseError(lines[k].line(), 0, e.what());
    }
  }
  if (spec.layers.back().kind != LayerKind::fc) {
    throw ParseError(lines.back().line(), 1, "final layer must be 'fc' (skeleton would have " +
                                                 std::to_string(frontier) + " output nodes)");
  }
  return spec;
}

Skeleton parse_skeleton(std::string_view text) { return Skeleton::from_layers(parse_layered(text)); }

std::string to_dsl(const LayeredSpec& spec) {
  std::ostringstream out;
  out << "inputs n=" << spec.coordinate_count << " dim=" << spec.coordinate_dim << "\n";
  if (spec.beta) out << "bias beta=" << format_double(*spec.beta) << "\n";
  for (const auto& layer : spec.layers) {
    if (layer.kind == LayerKind::conv1d) {
      out << "conv width=" << layer.width << " stride=" << layer.stride << " ";
    } else {
      out << "fc ";
    }
    out << "activation=" << layer.activation.token();
    if (layer.delta) out << " delta=" << format_double(*layer.delta);
    out << "\n";
  }
  return out.str();
}

std::string serialize(const Skeleton& skeleton) {
  if (!skeleton.layers()) throw InvalidArgument("serialize: skeleton was not built from layers");
  return to_dsl(*skeleton.layers());
}

Skeleton load_skeleton(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open skeleton file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_skeleton(buffer.str());
}

}  // namespace dualkern
