#include <sstream>

#include "dispel/common/csv.hpp"
#include "dispel/common/error.hpp"
#include "dispel/common/kv.hpp"
#include "dispel/nn/analysis.hpp"

namespace dispel::nn {

namespace {

void put_row(std::ostream& o, const double* v, size_t n) {
  for (size_t i = 0; i < n; ++i) o << (i ? " " : "") << format_double(v[i]);
  o << '\n';
}

class Reader {
 public:
  Reader(const std::string& text, std::string origin) : in_(text), origin_(std::move(origin)) {}

  std::vector<std::string> line(const std::string& key) {
    std::string s;
    do {
      if (!std::getline(in_, s)) fail("unexpected end of file, expected '" + key + "'");
      ++line_;
    } while (s.empty());
    std::istringstream ls(s);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty() || tok[0] != key) fail("expected '" + key + "'");
    tok.erase(tok.begin());
    return tok;
  }

  std::vector<double> numbers(const std::string& key, size_t n) {
    const auto tok = line(key);
    if (tok.size() != n) fail("'" + key + "' needs " + std::to_string(n) + " values, got " + std::to_string(tok.size()));
    std::vector<double> v;
    for (const auto& t : tok) {
      try {
        v.push_back(parse_double(t, "value"));
      } catch (const ConfigError&) {
        fail("bad number '" + t + "'");
      }
    }
    return v;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError(origin_ + ":" + std::to_string(line_) + ": " + msg);
  }

 private:
  std::istringstream in_;
  std::string origin_;
  int line_ = 0;
};

}  // namespace

std::string model_to_text(const MLP& m) {
  m.validate();
  std::ostringstream o;
  o << "dispel-mlp 1\n";
  o << "activation " << activation_name(m.act) << '\n';
  o << "seed " << m.seed << '\n';
  o << "sizes";
  for (int s : m.sizes) o << ' ' << s;
  o << "\nfeatures";
  for (const auto& n : m.feature_names) o << ' ' << n;
  o << "\nlabel";
  if (!m.label.empty()) o << ' ' << m.label;
  o << "\nx_lo ";
  put_row(o, m.x_lo.data(), m.x_lo.size());
  o << "x_hi ";
  put_row(o, m.x_hi.data(), m.x_hi.size());
  o << "y_bounds " << format_double(m.y_lo) << ' ' << format_double(m.y_hi) << '\n';
  for (int l = 0; l < m.n_layers(); ++l) {
    const int ni = m.sizes[l], no = m.sizes[l + 1];
    for (int r = 0; r < no; ++r) {
      o << "w ";
      put_row(o, &m.params[m.w_offset(l) + r * ni], ni);
    }
    o << "b ";
    put_row(o, &m.params[m.b_offset(l)], no);
  }
  return o.str();
}

MLP parse_model(const std::string& text, const std::string& origin) {
  Reader r(text, origin);
  const auto ver = r.line("dispel-mlp");
  if (ver.size() != 1 || ver[0] != "1") r.fail("unsupported model version");
  MLP m;
  const auto act = r.line("activation");
  if (act.size() != 1) r.fail("activation needs one value");
  m.act = parse_activation(act[0]);
  const auto seed = r.line("seed");
  if (seed.size() != 1) r.fail("seed needs one value");
  try {
    m.seed = std::stoull(seed[0]);
  } catch (const std::exception&) {
    r.fail("bad seed");
  }
  for (const auto& t : r.line("sizes")) {
    try {
      m.sizes.push_back(std::stoi(t));
    } catch (const std::exception&) {
      r.fail("bad layer size '" + t + "'");
    }
  }
  if (m.sizes.size() < 2) r.fail("need at least two layer sizes");
  for (int s : m.sizes)
    if (s < 1) r.fail("layer sizes must be >= 1");
  m.feature_names = r.line("features");
  const auto label = r.line("label");
  if (label.size() > 1) r.fail("label takes at most one name");
  if (!label.empty()) m.label = label[0];
  const size_t nf = m.sizes[0];
  m.x_lo = r.numbers("x_lo", nf);
  m.x_hi = r.numbers("x_hi", nf);
  const auto yb = r.numbers("y_bounds", 2);
  m.y_lo = yb[0];
  m.y_hi = yb[1];
  for (int l = 0; l + 1 < static_cast<int>(m.sizes.size()); ++l) {
    for (int o = 0; o < m.sizes[l + 1]; ++o) {
      const auto w = r.numbers("w", m.sizes[l]);
      m.params.insert(m.params.end(), w.begin(), w.end());
    }
    const auto b = r.numbers("b", m.sizes[l + 1]);
    m.params.insert(m.params.end(), b.begin(), b.end());
  }
  m.validate();
  return m;
}

void save_model(const MLP& m, const std::string& path) { write_file(path, model_to_text(m)); }
MLP load_model(const std::string& path) { return parse_model(read_file(path), path); }

}  // namespace dispel::nn
