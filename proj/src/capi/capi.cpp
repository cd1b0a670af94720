#include "gamma2kit/gamma2kit.h"

#include <cstring>
#include <string>

#include "core/gamma2.hpp"
#include "core/hardy.hpp"
#include "core/kernel.hpp"
#include "core/runner.hpp"
#include "core/semigroup.hpp"

using namespace g2k;

namespace {

thread_local std::string t_last_error;

g2k_status status_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return G2K_INVALID_ARGUMENT;
    case ErrorCode::DomainError: return G2K_DOMAIN_ERROR;
    case ErrorCode::ToleranceNotMet: return G2K_TOLERANCE_NOT_MET;
    case ErrorCode::NoConvergence: return G2K_NO_CONVERGENCE;
    case ErrorCode::ParseError: return G2K_PARSE_ERROR;
    case ErrorCode::IoError: return G2K_IO_ERROR;
  }
  return G2K_UNKNOWN_ERROR;
}

template <class F>
g2k_status guarded(F&& body) {
  try {
    body();
    return G2K_OK;
  } catch (const Error& e) {
    t_last_error = e.what();
    return status_of(e.code());
  } catch (const std::exception& e) {
    t_last_error = e.what();
    return G2K_UNKNOWN_ERROR;
  } catch (...) {
    t_last_error = "unknown failure";
    return G2K_UNKNOWN_ERROR;
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void set_complex(Complex v, double* re, double* im) {
  if (re) *re = v.real();
  if (im) *im = v.imag();
}

CVec vec_from_interleaved(const double* data, int dim) {
  CVec v(dim);
  for (int i = 0; i < dim; ++i) v(i) = Complex(data[2 * i], data[2 * i + 1]);
  return v;
}

}  // namespace

struct g2k_weight { Weight w; };
struct g2k_tensor { TensorWeight t; };
struct g2k_symbol { Symbol s; };
struct g2k_grid { SampleGrid g; };
struct g2k_matrix { KernelMatrix k; };
struct g2k_certificate { Gamma2Certificate c; };
struct g2k_model { SemigroupModel m; g2k_model(std::string id, CMat a) : m(std::move(id), std::move(a)) {} };

extern "C" {

const char* g2k_last_error(void) { return t_last_error.c_str(); }

const char* g2k_version(void) { return "0.1.0"; }

void g2k_string_free(char* text) { std::free(text); }

g2k_status g2k_weight_from_json(const char* json, g2k_weight** out) {
  return guarded([&] {
    require(json && out, ErrorCode::InvalidArgument, "null argument");
    auto doc = nlohmann::json::parse(json, nullptr, false);
    require(!doc.is_discarded(), ErrorCode::ParseError, "invalid JSON");
    *out = new g2k_weight{Weight::from_json(doc)};
  });
}

void g2k_weight_free(g2k_weight* w) { delete w; }

g2k_status g2k_weight_eval(const g2k_weight* w, double t, double* re,
                           double* im) {
  return guarded([&] {
    require(w, ErrorCode::InvalidArgument, "null weight");
    set_complex(w->w.eval(t), re, im);
  });
}

g2k_status g2k_weight_l1_norm(const g2k_weight* w, double* out) {
  return guarded([&] {
    require(w && out, ErrorCode::InvalidArgument, "null argument");
    *out = w->w.l1_norm();
  });
}

g2k_status g2k_weight_laplace(const g2k_weight* w, double z_re, double z_im,
                              double* re, double* im) {
  return guarded([&] {
    require(w, ErrorCode::InvalidArgument, "null weight");
    set_complex(w->w.laplace(Complex(z_re, z_im)), re, im);
  });
}

g2k_status g2k_weight_convolve(const g2k_weight* c, const g2k_weight* d,
                               g2k_weight** out) {
  return guarded([&] {
    require(c && d && out, ErrorCode::InvalidArgument, "null argument");
    *out = new g2k_weight{convolve(c->w, d->w)};
  });
}

g2k_status g2k_weight_poisson(const g2k_weight* w, double z_re, double z_im,
                              double tol, double* re, double* im, double* err) {
  return guarded([&] {
    require(w, ErrorCode::InvalidArgument, "null weight");
    const auto res = poisson_tilde(w->w, Complex(z_re, z_im), tol);
    set_complex(res.value, re, im);
    if (err) *err = res.quad_error + res.tail_bound;
  });
}

g2k_status g2k_tensor_from_json(const char* json, g2k_tensor** out) {
  return guarded([&] {
    require(json && out, ErrorCode::InvalidArgument, "null argument");
    auto doc = nlohmann::json::parse(json, nullptr, false);
    require(!doc.is_discarded(), ErrorCode::ParseError, "invalid JSON");
    *out = new g2k_tensor{TensorWeight::from_json(doc)};
  });
}

void g2k_tensor_free(g2k_tensor* t) { delete t; }

g2k_status g2k_symbol_from_json(const char* json, g2k_symbol** out) {
  return guarded([&] {
    require(json && out, ErrorCode::InvalidArgument, "null argument");
    auto doc = nlohmann::json::parse(json, nullptr, false);
    require(!doc.is_discarded(), ErrorCode::ParseError, "invalid JSON");
    *out = new g2k_symbol{Symbol::from_json(doc)};
  });
}

void g2k_symbol_free(g2k_symbol* s) { delete s; }

g2k_status g2k_symbol_eval(const g2k_symbol* s, double u, double* re,
                           double* im) {
  return guarded([&] {
    require(s, ErrorCode::InvalidArgument, "null symbol");
    set_complex(s->s.eval(u), re, im);
  });
}

g2k_status g2k_grid_make(const char* kind, int n, double lo, double hi,
                         g2k_grid** out) {
  return guarded([&] {
    require(kind && out, ErrorCode::InvalidArgument, "null argument");
    *out = new g2k_grid{make_grid(grid_kind_from_string(kind), n, lo, hi)};
  });
}

void g2k_grid_free(g2k_grid* g) { delete g; }

g2k_status g2k_hankel_sample(const g2k_symbol* m, const g2k_grid* gs,
                             const g2k_grid* gt, g2k_matrix** out) {
  return guarded([&] {
    require(m && gs && gt && out, ErrorCode::InvalidArgument, "null argument");
    *out = new g2k_matrix{sample_hankel(m->s, gs->g, gt->g)};
  });
}

g2k_status g2k_tensor_matrix(const g2k_tensor* psi, const g2k_grid* gs,
                             const g2k_grid* gu, g2k_matrix** out) {
  return guarded([&] {
    require(psi && gs && gu && out, ErrorCode::InvalidArgument, "null argument");
    *out = new g2k_matrix{weighted_tensor_matrix(psi->t, gs->g, gu->g)};
  });
}

g2k_status g2k_semigroup_kernel(const g2k_model* model, const double* x,
                                const double* y, const g2k_grid* gs,
                                const g2k_grid* gu, g2k_matrix** out) {
  return guarded([&] {
    require(model && x && y && gs && gu && out, ErrorCode::InvalidArgument,
            "null argument");
    *out = new g2k_matrix{sample_semigroup_kernel(
        model->m, vec_from_interleaved(x, model->m.dim()),
        vec_from_interleaved(y, model->m.dim()), gs->g, gu->g)};
  });
}

g2k_status g2k_matrix_from_dense(int rows, int cols, const double* interleaved,
                                 g2k_matrix** out) {
  return guarded([&] {
    require(interleaved && out && rows > 0 && cols > 0,
            ErrorCode::InvalidArgument, "bad matrix spec");
    KernelMatrix k;
    k.entries.resize(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j)
        k.entries(i, j) = Complex(interleaved[2 * (i * cols + j)],
                                  interleaved[2 * (i * cols + j) + 1]);
    k.provenance = {{"type", "dense"}};
    *out = new g2k_matrix{std::move(k)};
  });
}

g2k_status g2k_matrix_from_csv(const char* text, g2k_matrix** out) {
  return guarded([&] {
    require(text && out, ErrorCode::InvalidArgument, "null argument");
    *out = new g2k_matrix{KernelMatrix::from_csv(text)};
  });
}

g2k_status g2k_matrix_to_csv(const g2k_matrix* m, char** text) {
  return guarded([&] {
    require(m && text, ErrorCode::InvalidArgument, "null argument");
    *text = dup_string(m->k.to_csv());
  });
}

int g2k_matrix_rows(const g2k_matrix* m) { return m ? m->k.rows() : 0; }
int g2k_matrix_cols(const g2k_matrix* m) { return m ? m->k.cols() : 0; }

g2k_status g2k_matrix_get(const g2k_matrix* m, int i, int j, double* re,
                          double* im) {
  return guarded([&] {
    require(m && i >= 0 && j >= 0 && i < m->k.rows() && j < m->k.cols(),
            ErrorCode::InvalidArgument, "index out of range");
    set_complex(m->k.entries(i, j), re, im);
  });
}

void g2k_matrix_free(g2k_matrix* m) { delete m; }

g2k_status g2k_gamma2_norm(const g2k_matrix* m, double tol,
                           g2k_certificate** out) {
  return guarded([&] {
    require(m && out, ErrorCode::InvalidArgument, "null argument");
    *out = new g2k_certificate{gamma2_norm(m->k.entries, tol)};
  });
}

g2k_status g2k_gamma2_dual(const g2k_matrix* m, double tol,
                           g2k_certificate** out) {
  return guarded([&] {
    require(m && out, ErrorCode::InvalidArgument, "null argument");
    *out = new g2k_certificate{gamma2_dual(m->k.entries, tol)};
  });
}

double g2k_certificate_value(const g2k_certificate* c) {
  return c ? c->c.value : 0.0;
}
double g2k_certificate_dual(const g2k_certificate* c) {
  return c ? c->c.dual_value : 0.0;
}
double g2k_certificate_gap(const g2k_certificate* c) {
  return c ? c->c.gap : 0.0;
}
int g2k_certificate_rank(const g2k_certificate* c) {
  return c ? c->c.rank() : 0;
}
int g2k_certificate_iterations(const g2k_certificate* c) {
  return c ? c->c.iterations : 0;
}
int g2k_certificate_converged(const g2k_certificate* c) {
  return c && c->c.converged ? 1 : 0;
}

g2k_status g2k_certificate_to_json(const g2k_certificate* c, char** text) {
  return guarded([&] {
    require(c && text, ErrorCode::InvalidArgument, "null argument");
    *text = dup_string(c->c.to_json().dump());
  });
}

void g2k_certificate_free(g2k_certificate* c) { delete c; }

g2k_status g2k_brute_force_gamma2(const g2k_matrix* m, double* out) {
  return guarded([&] {
    require(m && out, ErrorCode::InvalidArgument, "null argument");
    *out = brute_force_gamma2(m->k.entries);
  });
}

g2k_status g2k_model_create(const char* id, int dim, const double* entries,
                            g2k_model** out) {
  return guarded([&] {
    require(id && entries && out && dim > 0, ErrorCode::InvalidArgument,
            "bad model spec");
    CMat a(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j)
        a(i, j) = Complex(entries[2 * (i * dim + j)],
                          entries[2 * (i * dim + j) + 1]);
    *out = new g2k_model(id, std::move(a));
  });
}

void g2k_model_free(g2k_model* m) { delete m; }

int g2k_model_bounded(const g2k_model* m) {
  return m && m->m.bounded() ? 1 : 0;
}

g2k_status g2k_model_growth_bound(const g2k_model* m, double* out) {
  return guarded([&] {
    require(m && out, ErrorCode::InvalidArgument, "null argument");
    *out = m->m.growth_bound();
  });
}

g2k_status g2k_semigroup_at(const g2k_model* m, double t, g2k_matrix** out) {
  return guarded([&] {
    require(m && out, ErrorCode::InvalidArgument, "null argument");
    KernelMatrix k;
    k.entries = semigroup_at(m->m, t);
    k.provenance = {{"type", "semigroup-at"}, {"model", m->m.id()}, {"t", t}};
    *out = new g2k_matrix{std::move(k)};
  });
}

g2k_status g2k_hille_phillips(const g2k_model* m, const g2k_weight* b,
                              double tol, g2k_matrix** op, double* op_norm) {
  return guarded([&] {
    require(m && b, ErrorCode::InvalidArgument, "null argument");
    const auto res = hille_phillips(m->m, b->w, tol);
    if (op_norm) *op_norm = res.operator_norm;
    if (op) {
      KernelMatrix k;
      k.entries = res.op;
      k.provenance = {{"type", "hille-phillips"}, {"model", m->m.id()}};
      *op = new g2k_matrix{std::move(k)};
    }
  });
}

g2k_status g2k_verify_calculus_bound(const g2k_model* m, const g2k_tensor* psi,
                                     const g2k_grid* gs, const g2k_grid* gu,
                                     double tol, char** report_json) {
  return guarded([&] {
    require(m && psi && gs && gu && report_json, ErrorCode::InvalidArgument,
            "null argument");
    const auto rep = verify_calculus_bound(m->m, psi->t, gs->g, gu->g, tol);
    *report_json = dup_string(rep.to_json().dump());
  });
}

g2k_status g2k_shift_consistency(const g2k_model* m, const g2k_weight* b,
                                 double eps, double tol, double* out) {
  return guarded([&] {
    require(m && b && out, ErrorCode::InvalidArgument, "null argument");
    *out = shift_consistency(m->m, b->w, eps, tol);
  });
}

g2k_status g2k_riesz_factorize(const double* coeffs, int ncoeffs, int fft_size,
                               char** result_json) {
  return guarded([&] {
    require(coeffs && result_json && ncoeffs > 0, ErrorCode::InvalidArgument,
            "bad polynomial spec");
    std::vector<Complex> c(ncoeffs);
    for (int i = 0; i < ncoeffs; ++i)
      c[i] = Complex(coeffs[2 * i], coeffs[2 * i + 1]);
    const auto fac = riesz_factorize_circle(CirclePoly(std::move(c)), fft_size);
    nlohmann::json j = {{"h1", fac.h1.to_json()},
                        {"h2", fac.h2.to_json()},
                        {"residual", fac.residual},
                        {"fftSize", fac.fft_size}};
    *result_json = dup_string(j.dump());
  });
}

g2k_status g2k_conformal_transfer(const double* coeffs, int ncoeffs, int p,
                                  double t, double* re, double* im) {
  return guarded([&] {
    require(coeffs && ncoeffs > 0, ErrorCode::InvalidArgument,
            "bad polynomial spec");
    std::vector<Complex> c(ncoeffs);
    for (int i = 0; i < ncoeffs; ++i)
      c[i] = Complex(coeffs[2 * i], coeffs[2 * i + 1]);
    set_complex(conformal_transfer(CirclePoly(std::move(c)), p, t), re, im);
  });
}

g2k_status g2k_fejer_hat(int n, double u, double* out) {
  return guarded([&] {
    require(out, ErrorCode::InvalidArgument, "null argument");
    *out = FejerApproximant(n).hat(u);
  });
}

g2k_status g2k_fejer_l1(int n, double* out) {
  return guarded([&] {
    require(out, ErrorCode::InvalidArgument, "null argument");
    *out = FejerApproximant(n).l1_norm();
  });
}

g2k_status g2k_plancherel_ratio(const g2k_weight* w, double* ratio,
                                double* err) {
  return guarded([&] {
    require(w && ratio, ErrorCode::InvalidArgument, "null argument");
    const auto res = plancherel_ratio(w->w);
    *ratio = res.ratio;
    if (err) *err = res.quad_error;
  });
}

g2k_status g2k_run_experiment(const char* config_path, const char* out_dir,
                              int threads, long long seed, int* exit_code) {
  return guarded([&] {
    require(config_path, ErrorCode::InvalidArgument, "null config path");
    const auto outcome = run_from_file(config_path,
                                       out_dir ? out_dir : std::string(),
                                       threads, seed);
    if (exit_code) *exit_code = outcome.exit_code;
  });
}

}  // extern "C"
