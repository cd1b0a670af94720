#include "core/catalog.hpp"

#include <random>

namespace g2k {

namespace {

template <class M>
std::vector<std::string> keys_of(const M& m) {
  std::vector<std::string> out;
  out.reserve(m.size());
  for (const auto& [k, v] : m) out.push_back(k);
  return out;
}

template <class M>
const typename M::mapped_type& lookup(const M& m, const std::string& id,
                                      const char* what) {
  auto it = m.find(id);
  require(it != m.end(), ErrorCode::InvalidArgument,
          std::string("unknown ") + what + " id: " + id);
  return it->second;
}

// Fixed diagonalizable stable 4x4 generator with moderate conditioning.
CMat diag4_generator() {
  std::mt19937_64 rng(0x5eedULL);
  std::normal_distribution<double> g(0.0, 1.0);
  CMat v(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      v(i, j) = Complex(i == j ? 1.0 : 0.0, 0.0) + 0.3 * Complex(g(rng), g(rng));
  CVec lam(4);
  lam << Complex(0.5, 0.0), Complex(1.0, 0.6), Complex(1.0, -0.6),
      Complex(1.8, 0.0);
  return v * lam.asDiagonal() * v.inverse();
}

}  // namespace

Catalog Catalog::builtin() {
  Catalog cat;

  cat.weights.emplace("exp1", Weight::expo(1.0, 1.0));
  cat.weights.emplace("exp2", Weight::expo(1.0, 2.0));
  cat.weights.emplace("texp", Weight::expo(1.0, 1.0, 1));
  cat.weights.emplace("box01", Weight::indicator(1.0, 0.0, 1.0));
  cat.weights.emplace("tent",
                      convolve(Weight::indicator(1.0, 0.0, 1.0),
                               Weight::indicator(1.0, 0.0, 1.0)));
  {
    // e^{-t} cos(2t)
    Weight w = Weight::expo(Complex(0.5, 0.0), Complex(1.0, -2.0))
                   .plus(Weight::expo(Complex(0.5, 0.0), Complex(1.0, 2.0)));
    cat.weights.emplace("damped-cos", std::move(w));
  }
  cat.weights.emplace("shift-exp", Weight::expo(1.0, 1.0, 0, 1.0));

  cat.tensors.emplace("exp-exp",
                      TensorWeight({{cat.weights.at("exp1"), cat.weights.at("exp1")}}));
  cat.tensors.emplace("exp-exp2",
                      TensorWeight({{cat.weights.at("exp1"), cat.weights.at("exp2")}}));
  cat.tensors.emplace("texp-exp",
                      TensorWeight({{cat.weights.at("texp"), cat.weights.at("exp1")}}));
  cat.tensors.emplace("box-box",
                      TensorWeight({{cat.weights.at("box01"), cat.weights.at("box01")}}));
  cat.tensors.emplace(
      "mix2", TensorWeight({{cat.weights.at("exp1").scaled(0.7), cat.weights.at("exp2")},
                            {cat.weights.at("texp"), cat.weights.at("exp1")}}));

  cat.symbols.emplace("const1", Symbol::constant("const1", 1.0));
  cat.symbols.emplace("decay-half", Symbol::exp_decay("decay-half", 0.5));
  cat.symbols.emplace("decay-one", Symbol::exp_decay("decay-one", 1.0));
  cat.symbols.emplace("lap-exp1",
                      Symbol::laplace_of("lap-exp1", cat.weights.at("exp1")));
  cat.symbols.emplace("lap-texp",
                      Symbol::laplace_of("lap-texp", cat.weights.at("texp")));
  cat.symbols.emplace("lap-box01",
                      Symbol::laplace_of("lap-box01", cat.weights.at("box01")));
  cat.symbols.emplace("power-i", Symbol::power_imaginary("power-i", 1.0));
  cat.symbols.emplace(
      "shifted-lap-exp1",
      Symbol::shifted("shifted-lap-exp1",
                      Symbol::laplace_of("lap-exp1", cat.weights.at("exp1")), 0.5));

  auto add_model = [&](const std::string& id, const CMat& a) {
    cat.models.emplace(std::piecewise_construct, std::forward_as_tuple(id),
                       std::forward_as_tuple(id, a));
  };
  {
    CMat a(1, 1);
    a << Complex(1, 0);
    add_model("scal1", a);
    a << Complex(0.5, 0);
    add_model("scal-half", a);
  }
  {
    CMat a(2, 2);
    a << Complex(0, 0), Complex(-1, 0), Complex(1, 0), Complex(0, 0);
    add_model("rot", a);
    a << Complex(1, 0), Complex(1, 0), Complex(0, 0), Complex(1, 0);
    add_model("jordan1", a);
    a << Complex(0.2, 0), Complex(1, 0), Complex(0, 0), Complex(0.2, 0);
    add_model("jordan02", a);
    a << Complex(0.3, 0), Complex(2, 0), Complex(0, 0), Complex(0.4, 0);
    add_model("nonnormal", a);
  }
  add_model("diag4", diag4_generator());
  {
    CMat a = CMat::Zero(4, 4);
    a(0, 1) = Complex(-1, 0);
    a(1, 0) = Complex(1, 0);
    a(2, 2) = Complex(0.2, 0);
    a(2, 3) = Complex(1, 0);
    a(3, 3) = Complex(0.2, 0);
    add_model("rotjordan", a);
  }

  cat.polys.emplace("one", CirclePoly({Complex(1, 0)}));
  cat.polys.emplace("z2", CirclePoly({Complex(0, 0), Complex(0, 0), Complex(1, 0)}));
  cat.polys.emplace("half", CirclePoly({Complex(1, 0), Complex(0.5, 0)}));
  cat.polys.emplace("outer2",
                    CirclePoly({Complex(0.8, 0)})
                        .times(CirclePoly({Complex(1, 0), Complex(-0.6, 0)}))
                        .times(CirclePoly({Complex(1, 0), Complex(0.45, 0)})));
  cat.polys.emplace("mixed",
                    CirclePoly({Complex(-0.3, 0), Complex(1, 0)})
                        .times(CirclePoly({Complex(1, 0), Complex(0.2, 0)})));
  cat.polys.emplace("cmplx",
                    CirclePoly({Complex(-0.2, -0.3), Complex(1, 0)})
                        .times(CirclePoly({Complex(1, 0), Complex(-0.1, 0.4)})));
  return cat;
}

void Catalog::add_from_config(const nlohmann::json& cfg) {
  if (cfg.contains("weights")) {
    for (const auto& jw : cfg.at("weights")) {
      const std::string id = jw.at("id").get<std::string>();
      weights.insert_or_assign(id, Weight::from_json(jw));
    }
  }
  if (cfg.contains("tensors")) {
    for (const auto& jt : cfg.at("tensors")) {
      const std::string id = jt.at("id").get<std::string>();
      if (jt.contains("pairs")) {
        tensors.insert_or_assign(id, TensorWeight::from_json(jt));
      } else {
        // {"c": weight-id, "d": weight-id}
        tensors.insert_or_assign(
            id, TensorWeight({{weight(jt.at("c").get<std::string>()),
                               weight(jt.at("d").get<std::string>())}}));
      }
    }
  }
  if (cfg.contains("symbols")) {
    for (const auto& js : cfg.at("symbols"))
      symbols.insert_or_assign(js.at("id").get<std::string>(),
                               Symbol::from_json(js));
  }
  if (cfg.contains("models")) {
    for (const auto& jm : cfg.at("models")) {
      const std::string id = jm.at("id").get<std::string>();
      const auto& rows = jm.at("matrix");
      const int d = int(rows.size());
      CMat a(d, d);
      for (int i = 0; i < d; ++i) {
        require(int(rows[i].size()) == 2 * d, ErrorCode::ParseError,
                "model rows need interleaved re/im entries");
        for (int j = 0; j < d; ++j)
          a(i, j) = Complex(rows[i][2 * j].get<double>(),
                            rows[i][2 * j + 1].get<double>());
      }
      models.erase(id);
      models.emplace(std::piecewise_construct, std::forward_as_tuple(id),
                     std::forward_as_tuple(id, a));
    }
  }
  if (cfg.contains("polys")) {
    for (const auto& jp : cfg.at("polys"))
      polys.insert_or_assign(jp.at("id").get<std::string>(),
                             CirclePoly::from_json(jp.at("coeffs")));
  }
}

const Weight& Catalog::weight(const std::string& id) const {
  return lookup(weights, id, "weight");
}
const TensorWeight& Catalog::tensor(const std::string& id) const {
  return lookup(tensors, id, "tensor weight");
}
const Symbol& Catalog::symbol(const std::string& id) const {
  return lookup(symbols, id, "symbol");
}
const SemigroupModel& Catalog::model(const std::string& id) const {
  return lookup(models, id, "model");
}
const CirclePoly& Catalog::poly(const std::string& id) const {
  return lookup(polys, id, "polynomial");
}

std::vector<std::string> Catalog::weight_ids() const { return keys_of(weights); }
std::vector<std::string> Catalog::tensor_ids() const { return keys_of(tensors); }
std::vector<std::string> Catalog::symbol_ids() const { return keys_of(symbols); }
std::vector<std::string> Catalog::model_ids() const { return keys_of(models); }
std::vector<std::string> Catalog::poly_ids() const { return keys_of(polys); }

}  // namespace g2k
