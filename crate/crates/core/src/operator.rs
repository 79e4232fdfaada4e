//! The univariate Kantorovich operator
//!
//! ```text
//! K(f; u) = sum_{i=0}^{m+q} p_{m,i}(u) * integral_0^1 f((i + t^rho) / (m + 1)) dt
//! ```
//!
//! together with its raw and central moments. Every moment is available two
//! ways: the published closed forms (`closed_*`, transcribed as printed, with
//! `n` read as `m` and no `q` dependence) and an exact-summation oracle that
//! integrates monomials in closed form and sums them against the basis. The
//! two need not agree; [`MomentSet::max_discrepancy`] records the gap and all
//! downstream consumers use the oracle.

use rayon::prelude::*;

use crate::analysis::SampledFunction;
use crate::basis::BasisParams;
use crate::error::{check_finite, domain, Error, Result};
use crate::function::TargetFunction;
use crate::numerics::{binomial_f64, CompensatedSum, Grid, UnitQuadrature, DEFAULT_GRID_POINTS};
use crate::table::CsvTable;

/// Parameters `(m, q, lambda, rho)` of the operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatorConfig {
    basis: BasisParams,
    rho: f64,
}

impl OperatorConfig {
    pub fn new(m: u32, q: u32, lambda: f64, rho: f64) -> Result<Self> {
        Self::from_basis(BasisParams::new(m, q, lambda)?, rho)
    }

    /// Like [`OperatorConfig::new`] but lets `lambda` and the evaluation point
    /// leave `[0, 1]`; positivity is then not guaranteed.
    pub fn new_unchecked(m: u32, q: u32, lambda: f64, rho: f64) -> Result<Self> {
        Self::from_basis(BasisParams::new_unchecked(m, q, lambda)?, rho)
    }

    pub fn from_basis(basis: BasisParams, rho: f64) -> Result<Self> {
        if !(rho.is_finite() && rho > 0.0) {
            return Err(domain(format!("rho must be > 0, got {rho}")));
        }
        Ok(Self { basis, rho })
    }

    pub fn basis(&self) -> &BasisParams {
        &self.basis
    }

    pub fn m(&self) -> u32 {
        self.basis.m()
    }

    pub fn q(&self) -> u32 {
        self.basis.q()
    }

    pub fn lambda(&self) -> f64 {
        self.basis.lambda()
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// Interval containing every argument `(i + t^rho)/(m+1)` the operator samples.
    pub fn sample_range(&self) -> (f64, f64) {
        let m = self.m() as f64;
        (0.0, (self.basis.degree() as f64 + 1.0) / (m + 1.0))
    }

    /// Interval containing both the sampled arguments and the evaluation points.
    pub fn function_domain(&self) -> (f64, f64) {
        (0.0, self.sample_range().1.max(1.0))
    }
}

/// An operator bound to a quadrature rule for the inner integral.
#[derive(Debug, Clone)]
pub struct KantorovichOperator {
    config: OperatorConfig,
    quadrature: UnitQuadrature,
    /// `t_j^rho` at the quadrature nodes.
    powered_nodes: Vec<f64>,
}

impl KantorovichOperator {
    pub fn new(config: OperatorConfig) -> Self {
        Self::with_quadrature(config, UnitQuadrature::for_exponent(config.rho()))
    }

    pub fn with_quadrature(config: OperatorConfig, quadrature: UnitQuadrature) -> Self {
        let rho = config.rho();
        let powered_nodes = quadrature.nodes().iter().map(|t| t.powf(rho)).collect();
        Self {
            config,
            quadrature,
            powered_nodes,
        }
    }

    pub fn config(&self) -> &OperatorConfig {
        &self.config
    }

    pub fn quadrature(&self) -> &UnitQuadrature {
        &self.quadrature
    }

    /// Sample arguments `(i + t_j^rho)/(m+1)` and weights for basis index `i`.
    pub(crate) fn nodes_for(&self, i: u32) -> impl Iterator<Item = (f64, f64)> + '_ {
        let scale = 1.0 / (self.config.m() as f64 + 1.0);
        self.powered_nodes
            .iter()
            .zip(self.quadrature.weights())
            .map(move |(&tr, &w)| ((i as f64 + tr) * scale, w))
    }

    /// Inner integrals `c_i = integral_0^1 f((i + t^rho)/(m+1)) dt` for all `i`.
    /// These do not depend on the evaluation point.
    pub fn inner_integrals(&self, f: &TargetFunction) -> Result<Vec<f64>> {
        (0..=self.config.basis().degree())
            .map(|i| {
                let mut acc = CompensatedSum::new();
                for (s, w) in self.nodes_for(i) {
                    acc.add(w * check_finite(s, f.eval(s))?);
                }
                Ok(acc.value())
            })
            .collect()
    }

    /// `sum_i p_{m,i}(u) c_i` for precomputed inner integrals.
    pub fn combine(&self, inner: &[f64], u: f64) -> Result<f64> {
        let row = self.config.basis().basis_row(u)?;
        if row.len() != inner.len() {
            return Err(domain(format!(
                "expected {} inner integrals, got {}",
                row.len(),
                inner.len()
            )));
        }
        let mut acc = CompensatedSum::new();
        for (p, c) in row.iter().zip(inner) {
            acc.add(p * c);
        }
        Ok(acc.value())
    }

    pub fn apply(&self, f: &TargetFunction, u: f64) -> Result<f64> {
        self.config.basis().check_point(u)?;
        let inner = self.inner_integrals(f)?;
        self.combine(&inner, u)
    }

    /// `K(f; u)` at every point, in input order.
    pub fn apply_many(&self, f: &TargetFunction, points: &[f64]) -> Result<Vec<f64>> {
        let inner = self.inner_integrals(f)?;
        points
            .par_iter()
            .map(|&u| self.combine(&inner, u))
            .collect()
    }

    pub fn error_curve(&self, f: &TargetFunction, grid: &Grid) -> Result<ErrorTable> {
        error_curve_with(self, f, grid, DEFAULT_GRID_POINTS)
    }
}

/// `K(f; u)` with the default quadrature policy.
pub fn apply(config: &OperatorConfig, f: &TargetFunction, u: f64) -> Result<f64> {
    KantorovichOperator::new(*config).apply(f, u)
}

fn check_index(config: &OperatorConfig, i: u32) -> Result<()> {
    if i > config.basis().degree() {
        return Err(domain(format!(
            "basis index {i} outside 0..={}",
            config.basis().degree()
        )));
    }
    Ok(())
}

/// Exact `integral_0^1 ((i + t^rho)/(m+1))^k dt
///      = (m+1)^-k sum_j C(k,j) i^(k-j) / (rho j + 1)`.
pub fn monomial_kantorovich_integral(config: &OperatorConfig, i: u32, k: u32) -> Result<f64> {
    check_index(config, i)?;
    let rho = config.rho();
    let ii = i as f64;
    let mut acc = CompensatedSum::new();
    for j in 0..=k {
        acc.add(
            binomial_f64(k as i64, j as i64) * ii.powi((k - j) as i32) / (rho * j as f64 + 1.0),
        );
    }
    Ok(acc.value() / (config.m() as f64 + 1.0).powi(k as i32))
}

/// Exact `integral_0^1 ((i + t^rho)/(m+1) - u)^k dt`, expanded around `i/(m+1) - u`.
pub fn central_kantorovich_integral(
    config: &OperatorConfig,
    i: u32,
    k: u32,
    u: f64,
) -> Result<f64> {
    check_index(config, i)?;
    let rho = config.rho();
    let scale = 1.0 / (config.m() as f64 + 1.0);
    let a = i as f64 * scale - u;
    let mut acc = CompensatedSum::new();
    for j in 0..=k {
        acc.add(
            binomial_f64(k as i64, j as i64) * a.powi((k - j) as i32) * scale.powi(j as i32)
                / (rho * j as f64 + 1.0),
        );
    }
    Ok(acc.value())
}

/// Exact-summation value of `K(e_k; u)`.
pub fn oracle_moment(config: &OperatorConfig, u: f64, k: u32) -> Result<f64> {
    let row = config.basis().basis_row(u)?;
    let mut acc = CompensatedSum::new();
    for (i, p) in row.iter().enumerate() {
        acc.add(p * monomial_kantorovich_integral(config, i as u32, k)?);
    }
    Ok(acc.value())
}

/// Exact-summation value of `K((s - u)^k; u)`.
pub fn oracle_central_moment(config: &OperatorConfig, u: f64, k: u32) -> Result<f64> {
    let row = config.basis().basis_row(u)?;
    let mut acc = CompensatedSum::new();
    for (i, p) in row.iter().enumerate() {
        acc.add(p * central_kantorovich_integral(config, i as u32, k, u)?);
    }
    Ok(acc.value())
}

/// Printed closed form of `K(e_1; u)`.
pub fn closed_e1(m: f64, lambda: f64, rho: f64, u: f64) -> f64 {
    (m + 2.0 * (lambda - 1.0)) / (m + 1.0) * u
        + ((lambda + 1.0) * (rho + 1.0) + 1.0) / (2.0 * (rho + 1.0) * (m + 1.0))
}

fn closed_constant_term(n: f64, lambda: f64, rho: f64) -> f64 {
    (2.0 * n * (2.0 * rho + 1.0)
        + (lambda + 1.0) * (2.0 * rho + 1.0) * ((lambda + 2.0) * (rho + 1.0) + 2.0)
        + rho
        + 1.0)
        / ((2.0 * rho + 1.0) * (rho + 1.0) * (n + 1.0).powi(2))
}

/// Printed closed form of `K(e_2; u)`.
pub fn closed_e2(n: f64, lambda: f64, rho: f64, u: f64) -> f64 {
    let quad = (1.0 + (4.0 * lambda - 3.0) / n) * n * n * u * u / (n + 1.0).powi(2);
    let lin = ((rho + 1.0) * (n * (2.0 * lambda + 3.0) + (lambda - 1.0) * (2.0 * lambda + 7.0))
        + 4.0 * (lambda - 1.0))
        / ((rho + 1.0) * (n + 1.0).powi(2))
        * u;
    quad + lin + closed_constant_term(n, lambda, rho)
}

/// Printed closed form of `K(s - u; u)`.
pub fn closed_psi1(n: f64, lambda: f64, rho: f64, u: f64) -> f64 {
    (2.0 * lambda - 3.0) / (n + 1.0) * u
        + ((lambda + 1.0) * (rho + 1.0) + 1.0) / ((rho + 1.0) * (n + 1.0))
}

/// Printed closed form of `K((s - u)^2; u)`.
pub fn closed_psi2(n: f64, lambda: f64, rho: f64, u: f64) -> f64 {
    closed_psi2_parts(n, n, lambda, rho, u)
}

/// `closed_psi2` with the linear coefficient's leading `n` given separately,
/// for transcribing printed variants that mix indices.
pub(crate) fn closed_psi2_parts(n: f64, n_linear: f64, lambda: f64, rho: f64, u: f64) -> f64 {
    let quad = ((1.0 + (4.0 * lambda - 3.0) / n) * n * n / (n + 1.0).powi(2)
        - (2.0 * n + 4.0 * lambda - 1.0) / (n + 1.0)
        + 1.0)
        * u
        * u;
    let lin = ((rho + 1.0)
        * (n_linear * (2.0 * lambda + 3.0) + (lambda - 1.0) * (2.0 * lambda + 7.0)
            - 2.0 * (lambda + 1.0))
        + lambda
        - 6.0)
        / ((rho + 1.0) * (n + 1.0).powi(2))
        * u;
    quad + lin + closed_constant_term(n, lambda, rho)
}

/// Raw moments `K(e_k; u)`, `k = 0, 1, 2`, from both routes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentSet {
    pub at: f64,
    pub e0: f64,
    pub e1: f64,
    pub e2: f64,
    pub oracle_e0: f64,
    pub oracle_e1: f64,
    pub oracle_e2: f64,
    pub max_discrepancy: f64,
}

pub fn moments_closed(config: &OperatorConfig, u: f64) -> Result<MomentSet> {
    config.basis().check_point(u)?;
    let (m, lam, rho) = (config.m() as f64, config.lambda(), config.rho());
    let (e0, e1, e2) = (1.0, closed_e1(m, lam, rho, u), closed_e2(m, lam, rho, u));
    let oracle_e0 = oracle_moment(config, u, 0)?;
    let oracle_e1 = oracle_moment(config, u, 1)?;
    let oracle_e2 = oracle_moment(config, u, 2)?;
    let max_discrepancy = [e0 - oracle_e0, e1 - oracle_e1, e2 - oracle_e2]
        .iter()
        .fold(0.0f64, |a, d| a.max(d.abs()));
    Ok(MomentSet {
        at: u,
        e0,
        e1,
        e2,
        oracle_e0,
        oracle_e1,
        oracle_e2,
        max_discrepancy,
    })
}

/// Central moments `K((s - u)^k; u)`, `k = 1, 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CentralMomentSet {
    pub at: f64,
    /// Printed closed forms.
    pub psi1: f64,
    pub psi2: f64,
    /// Direct exact summation of the central monomials.
    pub oracle_psi1: f64,
    pub oracle_psi2: f64,
    /// `|oracle_psi2 - (oracle_e2 - 2u oracle_e1 + u^2)|`.
    pub identity_residual: f64,
    /// `|psi2 - (e2 - 2u e1 + u^2)|` with every value taken from the closed forms.
    pub closed_identity_residual: f64,
}

impl CentralMomentSet {
    /// `sqrt(oracle_psi2)`; rounding noise below zero is clipped, anything
    /// more negative than `-1e-12` is an error.
    pub fn delta(&self) -> Result<f64> {
        if self.oracle_psi2 < -1e-12 {
            return Err(Error::Inconsistent(format!(
                "second central moment {} < 0 at u = {}",
                self.oracle_psi2, self.at
            )));
        }
        Ok(self.oracle_psi2.max(0.0).sqrt())
    }
}

pub fn central_moments(config: &OperatorConfig, u: f64) -> Result<CentralMomentSet> {
    let raw = moments_closed(config, u)?;
    let (m, lam, rho) = (config.m() as f64, config.lambda(), config.rho());
    let psi1 = closed_psi1(m, lam, rho, u);
    let psi2 = closed_psi2(m, lam, rho, u);
    let oracle_psi1 = oracle_central_moment(config, u, 1)?;
    let oracle_psi2 = oracle_central_moment(config, u, 2)?;
    let from_raw = raw.oracle_e2 - 2.0 * u * raw.oracle_e1 + u * u;
    let closed_from_raw = raw.e2 - 2.0 * u * raw.e1 + u * u;
    Ok(CentralMomentSet {
        at: u,
        psi1,
        psi2,
        oracle_psi1,
        oracle_psi2,
        identity_residual: (oracle_psi2 - from_raw).abs(),
        closed_identity_residual: (psi2 - closed_from_raw).abs(),
    })
}

/// One row of an error curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorRow {
    pub x: f64,
    pub error: f64,
    /// `2 * omega(f; delta)` with the grid modulus.
    pub bound: f64,
    pub delta: f64,
}

/// Pointwise errors `|K(f; x) - f(x)|` with the modulus bound.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorTable {
    pub rows: Vec<ErrorRow>,
}

impl ErrorTable {
    pub const HEADER: [&'static str; 4] = ["x", "error", "bound_thm33", "delta"];

    pub fn max_error(&self) -> f64 {
        self.rows.iter().fold(0.0, |a, r| a.max(r.error))
    }

    pub fn to_table(&self) -> CsvTable {
        let mut t = CsvTable::new(Self::HEADER);
        for r in &self.rows {
            t.push(vec![r.x, r.error, r.bound, r.delta]);
        }
        t
    }

    pub fn to_csv(&self) -> String {
        self.to_table().to_csv()
    }
}

pub fn error_curve(config: &OperatorConfig, f: &TargetFunction, grid: &Grid) -> Result<ErrorTable> {
    KantorovichOperator::new(*config).error_curve(f, grid)
}

pub(crate) fn error_curve_with(
    op: &KantorovichOperator,
    f: &TargetFunction,
    grid: &Grid,
    modulus_points: usize,
) -> Result<ErrorTable> {
    let config = op.config();
    if !config.basis().is_unchecked() && (grid.lo() < 0.0 || grid.hi() > 1.0) {
        return Err(domain("error curve grid must lie within [0, 1]"));
    }
    let values = op.apply_many(f, grid.points())?;
    let (lo, hi) = config.function_domain();
    let lo = lo.min(grid.lo());
    let hi = hi.max(grid.hi());
    let sampled = SampledFunction::new(|x| f.eval(x), lo, hi, modulus_points)?;
    let rows = grid
        .points()
        .par_iter()
        .zip(values.par_iter())
        .map(|(&x, &k)| {
            let fx = check_finite(x, f.eval(x))?;
            let delta = central_moments(config, x)?.delta()?;
            let bound = 2.0 * sampled.modulus(delta)?.value;
            Ok(ErrorRow {
                x,
                error: (k - fx).abs(),
                bound,
                delta,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ErrorTable { rows })
}
