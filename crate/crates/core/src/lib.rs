//! Bernstein-Schurer-Kantorovich operators with a shape parameter.
//!
//! The crate evaluates the univariate operator
//!
//! ```text
//! K(f; u) = sum_{i=0}^{m+q} p_{m,i}(u) * integral_0^1 f((i + t^rho) / (m + 1)) dt
//! ```
//!
//! and its tensor-product extension to `[0, 1]^2`, computes raw and central
//! moments both from printed closed forms and from an exact-summation oracle,
//! and checks modulus-of-continuity error bounds empirically.
//!
//! ```
//! use skl::{apply, OperatorConfig, TargetFunction};
//!
//! let config = OperatorConfig::new(20, 5, 0.5, 0.1)?;
//! let f = TargetFunction::parse("table1-poly")?;
//! let error = (apply(&config, &f, 0.5)? - f.eval(0.5)).abs();
//! assert!((error - 0.1324072752).abs() < 1e-9);
//! # Ok::<(), skl::Error>(())
//! ```

pub mod analysis;
pub mod basis;
pub mod cli;
pub mod error;
pub mod expr;
pub mod function;
pub mod numerics;
pub mod operator;
pub mod operator_bi;
pub mod report;
pub mod svg;
pub mod table;
pub mod verify;

pub use analysis::{
    bound_thm33, bound_thm41, bound_thm71, bound_thm72, modulus, partial_moduli,
    weighted_convergence, LipschitzParams, ModulusEstimate, WeightedNormReport,
};
pub use basis::{basis_row, basis_weight, BasisParams};
pub use error::{Error, Result};
pub use function::{BivariateTarget, Polynomial, TargetFunction};
pub use numerics::{binomial, integrate_unit, sup_on_grid, Grid};
pub use operator::{
    apply, central_moments, error_curve, moments_closed, monomial_kantorovich_integral,
    CentralMomentSet, ErrorTable, KantorovichOperator, MomentSet, OperatorConfig,
};
pub use operator_bi::{
    apply_bi, bi_central_moments, bi_moments, BiMomentSet, BivariateConfig, BivariateOperator,
};
