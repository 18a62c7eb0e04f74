//! Exact arithmetic for F_q\[theta\]: finite fields and polynomials, truncated
//! Laurent/Tate series with precision tracking, Carlitz special values (zeta,
//! arithmetic gamma, periods, polylogarithms, Bernoulli-Carlitz numbers),
//! Frobenius difference-equation verification, and exact linear relation
//! search with replayable certificates.

pub mod error;
pub mod field;
pub mod poly;
pub mod relations;
pub mod series;
pub mod tate;
pub mod tmotive;
pub mod values;

pub use error::{Error, Result};
pub use field::{embed_subfield, make_field, parse_fq, Embedding, Field, FqElem};
pub use poly::{monics_of_degree, parse_poly, parse_ratfunc, Poly, RatFunc};
pub use relations::classify::{
    classify_gamma_monomial, GammaMonomial, ReductionCert, ReductionStep, Verdict,
};
pub use relations::verify::{
    exhibit_negative_one_ratio, exhibit_q2_ratio, verify_chowla_selberg, verify_digit_split,
    verify_euler_carlitz, verify_frobenius_power, verify_gamma_omega, verify_omega_period,
    CheckOutcome,
};
pub use relations::{
    anderson_thakur_coeffs, expected_trdeg, find_fq_linear_relation, find_k_linear_relation,
    fq_kernel, k_relation_basis, split_prime_power, u_set, ATCert, FqRelation, IndependenceProfile,
};
pub use series::fmt::{laurent_from_json, laurent_to_json, parse_laurent};
pub use series::{embed_poly, embed_rat, Laurent, PREC_INF};
pub use tate::{tate_from_json, tate_to_json, TatePoly};
pub use tmotive::{
    block_to_json, build_carlitz_block, build_polylog_block, build_tensor_block,
    check_difference_equation, direct_sum, l_series_tate, sigma_bar_form, xi_powers_independent,
    BlockKind, DetShape, MotiveBlock, ResidualReport, TPoly,
};
pub use values::digits::{DigitExpansion, GammaArg};
pub use values::{
    bernoulli_carlitz, carlitz_exp_coeffs, carlitz_factorial, carlitz_log_coeffs, compose_qseries,
    d_poly, dbar_laurent, dbar_ratfunc, exp_eval, factorial_ratio, gamma_poly, goss_factorial,
    l_poly, omega_tate, omega_tate_in, omega_value, omega_value_in, pi_tilde, pi_tilde_in,
    polylog_coeffs, polylog_value, zeta,
};
