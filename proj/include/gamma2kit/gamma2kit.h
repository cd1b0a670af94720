#ifndef GAMMA2KIT_H
#define GAMMA2KIT_H

/*
 * C interface to the gamma2kit core: factorization norms of sampled
 * Hankel kernels, matrix semigroup calculus, and Hardy-space utilities.
 * All objects are opaque handles created and destroyed through this API;
 * every fallible call returns a g2k_status, and g2k_last_error() gives a
 * thread-local description of the most recent failure.
 */

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  G2K_OK = 0,
  G2K_INVALID_ARGUMENT = 1,
  G2K_DOMAIN_ERROR = 2,
  G2K_TOLERANCE_NOT_MET = 3,
  G2K_NO_CONVERGENCE = 4,
  G2K_PARSE_ERROR = 5,
  G2K_IO_ERROR = 6,
  G2K_UNKNOWN_ERROR = 7
} g2k_status;

const char* g2k_last_error(void);
const char* g2k_version(void);
void g2k_string_free(char* text);

typedef struct g2k_weight g2k_weight;
typedef struct g2k_tensor g2k_tensor;
typedef struct g2k_symbol g2k_symbol;
typedef struct g2k_grid g2k_grid;
typedef struct g2k_matrix g2k_matrix;
typedef struct g2k_certificate g2k_certificate;
typedef struct g2k_model g2k_model;

/* ---- weights (closed-form exponential-polynomial family) ---- */

/* JSON schema: {"terms":[{coeff_re,coeff_im,decay_re,decay_im,power,shift}],
 *               "indicators":[{coeff,a,b}]} */
g2k_status g2k_weight_from_json(const char* json, g2k_weight** out);
void g2k_weight_free(g2k_weight* w);
g2k_status g2k_weight_eval(const g2k_weight* w, double t, double* re,
                           double* im);
g2k_status g2k_weight_l1_norm(const g2k_weight* w, double* out);
g2k_status g2k_weight_laplace(const g2k_weight* w, double z_re, double z_im,
                              double* re, double* im);
g2k_status g2k_weight_convolve(const g2k_weight* c, const g2k_weight* d,
                               g2k_weight** out);
/* Poisson-integral evaluation of the Laplace transform; err reports the
 * quadrature-plus-tail estimate. */
g2k_status g2k_weight_poisson(const g2k_weight* w, double z_re, double z_im,
                              double tol, double* re, double* im, double* err);

/* {"pairs":[{"c":{...weight...},"d":{...weight...}}]} */
g2k_status g2k_tensor_from_json(const char* json, g2k_tensor** out);
void g2k_tensor_free(g2k_tensor* t);

/* ---- multiplier symbols ---- */

/* kinds: laplace-of-weight {weight}, power-imaginary {r},
 * shifted {base, eps}, custom {label} */
g2k_status g2k_symbol_from_json(const char* json, g2k_symbol** out);
void g2k_symbol_free(g2k_symbol* s);
g2k_status g2k_symbol_eval(const g2k_symbol* s, double u, double* re,
                           double* im);

/* ---- sampling grids ---- */

g2k_status g2k_grid_make(const char* kind, int n, double lo, double hi,
                         g2k_grid** out);
void g2k_grid_free(g2k_grid* g);

/* ---- kernel matrices ---- */

g2k_status g2k_hankel_sample(const g2k_symbol* m, const g2k_grid* gs,
                             const g2k_grid* gt, g2k_matrix** out);
g2k_status g2k_tensor_matrix(const g2k_tensor* psi, const g2k_grid* gs,
                             const g2k_grid* gu, g2k_matrix** out);
/* x and y are interleaved re/im arrays of the model dimension */
g2k_status g2k_semigroup_kernel(const g2k_model* model, const double* x,
                                const double* y, const g2k_grid* gs,
                                const g2k_grid* gu, g2k_matrix** out);
g2k_status g2k_matrix_from_dense(int rows, int cols, const double* interleaved,
                                 g2k_matrix** out);
g2k_status g2k_matrix_from_csv(const char* text, g2k_matrix** out);
g2k_status g2k_matrix_to_csv(const g2k_matrix* m, char** text);
int g2k_matrix_rows(const g2k_matrix* m);
int g2k_matrix_cols(const g2k_matrix* m);
g2k_status g2k_matrix_get(const g2k_matrix* m, int i, int j, double* re,
                          double* im);
void g2k_matrix_free(g2k_matrix* m);

/* ---- gamma2 and its dual ---- */

g2k_status g2k_gamma2_norm(const g2k_matrix* m, double tol,
                           g2k_certificate** out);
g2k_status g2k_gamma2_dual(const g2k_matrix* m, double tol,
                           g2k_certificate** out);
double g2k_certificate_value(const g2k_certificate* c);
double g2k_certificate_dual(const g2k_certificate* c);
double g2k_certificate_gap(const g2k_certificate* c);
int g2k_certificate_rank(const g2k_certificate* c);
int g2k_certificate_iterations(const g2k_certificate* c);
int g2k_certificate_converged(const g2k_certificate* c);
/* {"value","dualValue","gap","rank","iterations","converged"} */
g2k_status g2k_certificate_to_json(const g2k_certificate* c, char** text);
void g2k_certificate_free(g2k_certificate* c);
/* independent oracle, dims <= 3 */
g2k_status g2k_brute_force_gamma2(const g2k_matrix* m, double* out);

/* ---- matrix semigroups and functional calculus ---- */

/* generator A with T_t = e^{-tA}; entries interleaved re/im, row-major */
g2k_status g2k_model_create(const char* id, int dim, const double* entries,
                            g2k_model** out);
void g2k_model_free(g2k_model* m);
int g2k_model_bounded(const g2k_model* m);
g2k_status g2k_model_growth_bound(const g2k_model* m, double* out);
g2k_status g2k_semigroup_at(const g2k_model* m, double t, g2k_matrix** out);
g2k_status g2k_hille_phillips(const g2k_model* m, const g2k_weight* b,
                              double tol, g2k_matrix** op, double* op_norm);
/* emits the BoundReport as JSON */
g2k_status g2k_verify_calculus_bound(const g2k_model* m, const g2k_tensor* psi,
                                     const g2k_grid* gs, const g2k_grid* gu,
                                     double tol, char** report_json);
g2k_status g2k_shift_consistency(const g2k_model* m, const g2k_weight* b,
                                 double eps, double tol, double* out);

/* ---- Hardy-space utilities ---- */

/* coeffs are interleaved re/im Taylor coefficients; the result JSON holds
 * both factors and the residual diagnostics */
g2k_status g2k_riesz_factorize(const double* coeffs, int ncoeffs, int fft_size,
                               char** result_json);
g2k_status g2k_conformal_transfer(const double* coeffs, int ncoeffs, int p,
                                  double t, double* re, double* im);
g2k_status g2k_fejer_hat(int n, double u, double* out);
g2k_status g2k_fejer_l1(int n, double* out);
g2k_status g2k_plancherel_ratio(const g2k_weight* w, double* ratio,
                                double* err);

/* ---- experiment runner ---- */

/* out_dir may be NULL (keep the config value); threads < 0 and seed < 0
 * keep the config values. exit_code follows the CLI convention:
 * 0 ok, 3 when some rows failed. Config errors return G2K_PARSE_ERROR. */
g2k_status g2k_run_experiment(const char* config_path, const char* out_dir,
                              int threads, long long seed, int* exit_code);

#ifdef __cplusplus
}
#endif

#endif /* GAMMA2KIT_H */
