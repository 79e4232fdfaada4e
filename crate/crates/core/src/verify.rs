//! Invariant suite and closed-form lemma audit behind `skl verify`.
//!
//! Invariants gate the exit status. The audit compares every printed moment
//! formula with its exact-summation counterpart and is reported only.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::analysis::{verify_thm33, verify_thm71, weighted_convergence};
use crate::basis::BasisParams;
use crate::error::{Error, Result};
use crate::function::{BivariateTarget, Polynomial, TargetFunction};
use crate::numerics::{Grid, UnitQuadrature};
use crate::operator::{
    central_moments, moments_closed, oracle_moment, KantorovichOperator, OperatorConfig,
};
use crate::operator_bi::{bi_central_moments, bi_moments, BivariateConfig, BivariateOperator};
use crate::report::{self, SurfaceSpec, FIGURE3_M, TABLE1_LAMBDA, TABLE1_M, TABLE1_Q, TABLE1_RHO};

const SEED: u64 = 0x5eed_0b5e;

/// Gap above which a closed-form lemma is reported as inconsistent.
pub const AUDIT_THRESHOLD: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    Fast,
    Full,
}

impl FromStr for Level {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fast" => Ok(Level::Fast),
            "full" => Ok(Level::Full),
            other => Err(Error::Usage(format!(
                "level must be fast or full, got {other:?}"
            ))),
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Level::Fast => "fast",
            Level::Full => "full",
        })
    }
}

impl Level {
    fn pick(self, fast: usize, full: usize) -> usize {
        match self {
            Level::Fast => fast,
            Level::Full => full,
        }
    }
}

/// Outcome of one asserted invariant.
#[derive(Debug, Clone, PartialEq)]
pub struct InvariantResult {
    pub name: &'static str,
    pub cases: usize,
    pub worst: f64,
    pub threshold: f64,
    pub passed: bool,
    pub detail: String,
}

impl InvariantResult {
    fn within(name: &'static str, cases: usize, worst: f64, threshold: f64) -> Self {
        Self {
            name,
            cases,
            worst,
            threshold,
            passed: worst <= threshold,
            detail: String::new(),
        }
    }

    fn with_detail(mut self, detail: String) -> Self {
        self.detail = detail;
        self
    }
}

/// One closed-form value against its oracle at one parameter point.
#[derive(Debug, Clone, PartialEq)]
pub struct AuditRecord {
    pub check: &'static str,
    pub parameters: String,
    pub closed_value: f64,
    pub oracle_value: f64,
    pub abs_gap: f64,
}

impl AuditRecord {
    fn new(check: &'static str, parameters: &str, closed_value: f64, oracle_value: f64) -> Self {
        Self {
            check,
            parameters: parameters.to_string(),
            closed_value,
            oracle_value,
            abs_gap: (closed_value - oracle_value).abs(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Consistent,
    Inconsistent,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuditSummary {
    pub check: &'static str,
    pub records: usize,
    pub max_gap: f64,
    pub pass_threshold: f64,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuditReport {
    pub level: Level,
    pub invariants: Vec<InvariantResult>,
    pub records: Vec<AuditRecord>,
    pub summary: Vec<AuditSummary>,
    /// Reported beside the invariants; does not gate the exit status.
    pub table1: report::Table1Report,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.invariants.iter().all(|r| r.passed)
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            2
        }
    }

    pub fn invariant(&self, name: &str) -> Option<&InvariantResult> {
        self.invariants.iter().find(|r| r.name == name)
    }

    pub fn render(&self) -> String {
        let mut out = format!("verify level={}\n", self.level);
        out.push_str("invariants:\n");
        for r in &self.invariants {
            let _ = write!(
                out,
                "  {} {:<28} cases={:<5} worst={:.3e} threshold={:.1e}",
                if r.passed { "PASS" } else { "FAIL" },
                r.name,
                r.cases,
                r.worst,
                r.threshold
            );
            if !r.detail.is_empty() {
                let _ = write!(out, " ({})", r.detail);
            }
            out.push('\n');
        }
        out.push_str("lemma audit (reported only):\n");
        for s in &self.summary {
            let _ = writeln!(
                out,
                "  {:<12} {:<22} points={:<4} max_gap={:.3e} threshold={:.0e}",
                match s.verdict {
                    Verdict::Consistent => "consistent",
                    Verdict::Inconsistent => "inconsistent",
                },
                s.check,
                s.records,
                s.max_gap,
                s.pass_threshold
            );
        }
        let _ = writeln!(out, "table1: {}", self.table1.summary());
        let _ = writeln!(
            out,
            "result: {}",
            if self.passed() { "PASS" } else { "FAIL" }
        );
        out
    }

    /// Audit records as CSV; parameters are `;`-separated `key=value` pairs.
    pub fn audit_csv(&self) -> String {
        use crate::table::fmt_sig;
        let mut out = String::from("check,parameters,closed_value,oracle_value,abs_gap\n");
        for r in &self.records {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                r.check,
                r.parameters,
                fmt_sig(r.closed_value),
                fmt_sig(r.oracle_value),
                fmt_sig(r.abs_gap)
            );
        }
        out
    }
}

#[derive(Debug, Clone, Copy)]
struct Point {
    m: u32,
    q: u32,
    lambda: f64,
    rho: f64,
    u: f64,
}

impl Point {
    fn random(rng: &mut ChaCha8Rng, max_m: u32, max_q: u32) -> Self {
        Self {
            m: rng.random_range(2..=max_m),
            q: rng.random_range(0..=max_q),
            lambda: rng.random::<f64>(),
            rho: rng.random_range(0.1..3.0),
            u: rng.random::<f64>(),
        }
    }

    fn config(&self) -> Result<OperatorConfig> {
        OperatorConfig::new(self.m, self.q, self.lambda, self.rho)
    }

    fn label(&self) -> String {
        format!(
            "m={};q={};lambda={:.6};rho={:.6};u={:.6}",
            self.m, self.q, self.lambda, self.rho, self.u
        )
    }
}

fn audit_records(level: Level) -> Result<Vec<AuditRecord>> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 0xa0d1);
    let n = level.pick(10, 100);
    let uni: Vec<Point> = (0..n).map(|_| Point::random(&mut rng, 60, 5)).collect();
    let bi: Vec<(Point, Point)> = (0..n)
        .map(|_| {
            let a = Point::random(&mut rng, 40, 5);
            let mut b = Point::random(&mut rng, 40, 5);
            b.rho = a.rho;
            (a, b)
        })
        .collect();

    let mut records = Vec::new();
    for p in &uni {
        let cfg = p.config()?;
        let label = p.label();
        let raw = moments_closed(&cfg, p.u)?;
        records.push(AuditRecord::new("lemma_e1", &label, raw.e1, raw.oracle_e1));
        records.push(AuditRecord::new("lemma_e2", &label, raw.e2, raw.oracle_e2));
        let c = central_moments(&cfg, p.u)?;
        records.push(AuditRecord::new(
            "lemma_psi1",
            &label,
            c.psi1,
            c.oracle_psi1,
        ));
        records.push(AuditRecord::new(
            "lemma_psi2",
            &label,
            c.psi2,
            c.oracle_psi2,
        ));
    }
    for (a, b) in &bi {
        let cfg = BivariateConfig::new(a.config()?, b.config()?)?;
        let label = format!(
            "m1={};q1={};lambda1={:.6};m2={};q2={};lambda2={:.6};rho={:.6};y1={:.6};y2={:.6}",
            a.m, a.q, a.lambda, b.m, b.q, b.lambda, a.rho, a.u, b.u
        );
        let raw = bi_moments(&cfg, a.u, b.u)?;
        let worst = |c: [f64; 6], o: [f64; 6]| {
            c.into_iter()
                .zip(o)
                .max_by(|x, y| (x.0 - x.1).abs().total_cmp(&(y.0 - y.1).abs()))
                .expect("six moments")
        };
        let raw_values =
            |m: &crate::operator_bi::BiMoments| [m.e00, m.e10, m.e01, m.e11, m.e20, m.e02];
        let (c, o) = worst(raw_values(&raw.closed), raw_values(&raw.oracle));
        records.push(AuditRecord::new("lemma_bivariate_raw", &label, c, o));
        let central = bi_central_moments(&cfg, a.u, b.u)?;
        let (c, o) = worst(central.closed.values(), central.oracle.values());
        records.push(AuditRecord::new("lemma_bivariate_central", &label, c, o));
    }
    Ok(records)
}

fn summarize(records: &[AuditRecord]) -> Vec<AuditSummary> {
    let mut checks: Vec<&'static str> = Vec::new();
    for r in records {
        if !checks.contains(&r.check) {
            checks.push(r.check);
        }
    }
    checks
        .into_iter()
        .map(|check| {
            let of: Vec<&AuditRecord> = records.iter().filter(|r| r.check == check).collect();
            let max_gap = of.iter().fold(0.0f64, |a, r| a.max(r.abs_gap));
            AuditSummary {
                check,
                records: of.len(),
                max_gap,
                pass_threshold: AUDIT_THRESHOLD,
                verdict: if max_gap <= AUDIT_THRESHOLD {
                    Verdict::Consistent
                } else {
                    Verdict::Inconsistent
                },
            }
        })
        .collect()
}

/// Max `|sum_i p_i(y) - 1|` and min weight over random `(m <= 100, q <= 10)`.
pub fn check_partition_of_unity(cases: usize) -> Result<Vec<InvariantResult>> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 1);
    let mut worst_sum = 0.0f64;
    let mut min_weight = f64::INFINITY;
    for _ in 0..cases {
        let params = BasisParams::new(
            rng.random_range(2..=100),
            rng.random_range(0..=10),
            rng.random::<f64>(),
        )?;
        let row = params.basis_row(rng.random::<f64>())?;
        worst_sum =
            worst_sum.max((crate::numerics::compensated_sum(row.iter().copied()) - 1.0).abs());
        min_weight = row.iter().copied().fold(min_weight, f64::min);
    }
    Ok(vec![
        InvariantResult::within("partition_of_unity", cases, worst_sum, 1e-12),
        InvariantResult::within("basis_nonnegative", cases, (-min_weight).max(0.0), 1e-14)
            .with_detail(format!("min weight {min_weight:.3e}")),
    ])
}

fn random_polynomial(rng: &mut ChaCha8Rng, max_degree: usize) -> Polynomial {
    let degree = rng.random_range(0..=max_degree);
    Polynomial::new((0..=degree).map(|_| rng.random_range(-2.0..2.0)).collect())
}

/// `K(f) >= 0` for `f = (y - c)^2` and `f = |y - c|` at random points.
pub fn check_positivity(cases: usize) -> Result<InvariantResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 2);
    let points: Vec<(Point, f64)> = (0..cases)
        .map(|_| (Point::random(&mut rng, 50, 5), rng.random::<f64>()))
        .collect();
    let worst = points
        .par_iter()
        .map(|(p, c)| {
            let cfg = p.config()?;
            let c = *c;
            let sq = TargetFunction::custom(move |y| (y - c) * (y - c));
            let ab = TargetFunction::custom(move |y| (y - c).abs());
            let a = crate::operator::apply(&cfg, &sq, p.u)?;
            let b = crate::operator::apply(&cfg, &ab, p.u)?;
            Ok((-a.min(b)).max(0.0))
        })
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    Ok(InvariantResult::within("positivity", cases, worst, 1e-12))
}

/// `K(a f + b g) = a K(f) + b K(g)` for random polynomials.
pub fn check_linearity(cases: usize) -> Result<InvariantResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 3);
    let mut worst = 0.0f64;
    for _ in 0..cases {
        let p = Point::random(&mut rng, 50, 5);
        let cfg = p.config()?;
        let (f, g) = (
            random_polynomial(&mut rng, 4),
            random_polynomial(&mut rng, 4),
        );
        let (a, b) = (rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
        let (f2, g2) = (f.clone(), g.clone());
        let combo = TargetFunction::custom(move |y| a * f2.eval(y) + b * g2.eval(y));
        let op = KantorovichOperator::new(cfg);
        let lhs = op.apply(&combo, p.u)?;
        let rhs = a * op.apply(&f.into(), p.u)? + b * op.apply(&g.into(), p.u)?;
        worst = worst.max((lhs - rhs).abs());
    }
    Ok(InvariantResult::within("linearity", cases, worst, 1e-11))
}

/// Quadrature path against the exact monomial summation, `k <= 4`.
pub fn check_oracle_agreement(cases: usize) -> Result<InvariantResult> {
    const RHOS: [f64; 4] = [0.1, 0.5, 1.0, 2.0];
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 4);
    let configs: Vec<(OperatorConfig, f64)> = (0..cases)
        .map(|_| {
            let cfg = OperatorConfig::new(
                rng.random_range(2..=50),
                rng.random_range(0..=5),
                rng.random::<f64>(),
                RHOS[rng.random_range(0..RHOS.len())],
            )?;
            Ok((cfg, rng.random::<f64>()))
        })
        .collect::<Result<_>>()?;
    // worst gap relative to its tolerance
    let ratios = configs
        .par_iter()
        .map(|(cfg, u)| {
            let tol = if cfg.rho() < 0.2 { 1e-7 } else { 1e-9 };
            let op = KantorovichOperator::new(*cfg);
            let mut worst = 0.0f64;
            for k in 0..=4 {
                let quad = op.apply(&TargetFunction::monomial(k), *u)?;
                let exact = oracle_moment(cfg, *u, k as u32)?;
                worst = worst.max((quad - exact).abs() / tol);
            }
            Ok(worst)
        })
        .collect::<Result<Vec<f64>>>()?;
    let worst = ratios.into_iter().fold(0.0, f64::max);
    Ok(
        InvariantResult::within("oracle_agreement", cases, worst, 1.0)
            .with_detail("gap / tolerance; tolerance 1e-9, 1e-7 for rho = 0.1".into()),
    )
}

/// Oracle `psi2 = e2 - 2u e1 + u^2` and `psi2 >= 0`.
pub fn check_central_algebra(cases: usize) -> Result<Vec<InvariantResult>> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 5);
    let mut residual = 0.0f64;
    let mut negativity = 0.0f64;
    for _ in 0..cases {
        let p = Point::random(&mut rng, 100, 10);
        let c = central_moments(&p.config()?, p.u)?;
        residual = residual.max(c.identity_residual);
        negativity = negativity.max(-c.oracle_psi2);
    }
    Ok(vec![
        InvariantResult::within("central_moment_algebra", cases, residual, 1e-12),
        InvariantResult::within("psi2_nonnegative", cases, negativity.max(0.0), 1e-12),
    ])
}

/// Generic tensor quadrature against products of univariate applications.
pub fn check_tensor_factorization(cases: usize) -> Result<InvariantResult> {
    const RHOS: [f64; 3] = [0.5, 1.0, 2.0];
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 6);
    let quadrature = UnitQuadrature::new(8, 2, 6)?;
    let mut worst = 0.0f64;
    for _ in 0..cases {
        let rho = RHOS[rng.random_range(0..RHOS.len())];
        let c1 = OperatorConfig::new(
            rng.random_range(2..=12),
            rng.random_range(0..=3),
            rng.random(),
            rho,
        )?;
        let c2 = OperatorConfig::new(
            rng.random_range(2..=12),
            rng.random_range(0..=3),
            rng.random(),
            rho,
        )?;
        let (p1, p2) = (
            random_polynomial(&mut rng, 3),
            random_polynomial(&mut rng, 3),
        );
        let (y1, y2) = (rng.random::<f64>(), rng.random::<f64>());
        let k1 = KantorovichOperator::with_quadrature(c1, quadrature.clone());
        let k2 = KantorovichOperator::with_quadrature(c2, quadrature.clone());
        let product = k1.apply(&p1.clone().into(), y1)? * k2.apply(&p2.clone().into(), y2)?;
        let op = BivariateOperator::with_operators(k1, k2)?;
        let g = BivariateTarget::custom(move |s, t| p1.eval(s) * p2.eval(t));
        worst = worst.max((op.apply(&g, y1, y2)? - product).abs());
    }
    Ok(InvariantResult::within(
        "tensor_factorization",
        cases,
        worst,
        1e-10,
    ))
}

fn decreasing_with_slack(values: &[f64], slack: f64) -> bool {
    values.windows(2).all(|w| w[1] <= w[0] * (1.0 + slack))
}

/// `sup |K(e_k) - e_k|`, `k = 1, 2`, along `m = 10, 20, 40, 80, 160`.
pub fn korovkin_trend() -> Result<[Vec<f64>; 2]> {
    let ladder = [10u32, 20, 40, 80, 160];
    let grid = Grid::unit(1001)?;
    let mut rows = [Vec::new(), Vec::new()];
    for &m in &ladder {
        let op = KantorovichOperator::new(OperatorConfig::new(m, 5, 0.5, 0.1)?);
        for (slot, k) in rows.iter_mut().zip([1usize, 2]) {
            let values = op.apply_many(&TargetFunction::monomial(k), grid.points())?;
            let sup = grid
                .points()
                .iter()
                .zip(values)
                .fold(0.0f64, |a, (&u, v)| a.max((v - u.powi(k as i32)).abs()));
            slot.push(sup);
        }
    }
    Ok(rows)
}

/// Trend along the ladder for `k = 1, 2` and `sup |K(e_1) - e_1| < 0.05` at
/// `m = 160`. The `k = 2` sup at `m = 160` sits near `2q/(m+1)` and is
/// reported beside the analytic value.
pub fn check_korovkin() -> Result<InvariantResult> {
    let rows = korovkin_trend()?;
    let trend = decreasing_with_slack(&rows[0], 0.1) && decreasing_with_slack(&rows[1], 0.1);
    let mut r = InvariantResult::within("korovkin_trend", 5, rows[0][4], 0.05);
    r.passed &= trend;
    Ok(r.with_detail(format!(
        "k=1 sup at m=160; k=2 sup {:.4e} vs 2q/(m+1) = {:.4e}; decreasing: {trend}",
        rows[1][4],
        10.0 / 161.0
    )))
}

/// Rows `i = 0, 1, 2` of the weighted norm along `n = 10, 20, 40, 80`.
pub fn check_weighted_norm() -> Result<InvariantResult> {
    let report = weighted_convergence(5, 0.5, 0.1, &[10, 20, 40, 80], &Grid::unit(1001)?, false)?;
    let zero_row = report.row(0).into_iter().fold(0.0, f64::max);
    let trend =
        decreasing_with_slack(&report.row(1), 0.1) && decreasing_with_slack(&report.row(2), 0.1);
    let mut r = InvariantResult::within("weighted_norm_trend", 4, zero_row, 1e-12);
    r.passed &= trend;
    Ok(r.with_detail(format!("worst is the e0 row; rows 1-2 decreasing: {trend}")))
}

/// Theorem 3.3 on the Table 1 configuration, 101 points, `L_f = 6`.
pub fn check_bound_thm33() -> Result<InvariantResult> {
    let f = TargetFunction::parse("table1-poly")?;
    let grid = Grid::unit(101)?;
    let mut checks = Vec::new();
    for &m in &TABLE1_M {
        let cfg = OperatorConfig::new(m, TABLE1_Q, TABLE1_LAMBDA, TABLE1_RHO)?;
        checks.extend(verify_thm33(&cfg, &f, &grid, 6.0)?);
    }
    let worst = checks
        .iter()
        .map(|c| c.error - c.bound - c.padding)
        .fold(f64::NEG_INFINITY, f64::max);
    let mut r = InvariantResult::within("bound_thm33", checks.len(), worst.max(0.0), 1e-9);
    r.passed = checks.iter().all(|c| c.holds());
    Ok(r.with_detail(format!("max(error - bound - padding) = {worst:.3e}")))
}

/// Theorem 7.1 on the Figure 3 configuration, 11 x 11 points.
pub fn check_bound_thm71(surface_points: usize) -> Result<InvariantResult> {
    let spec = SurfaceSpec::figure_default()?;
    let grid = Grid::unit(11)?;
    // |d/dy1| <= 3 (16/11)^4 and |d/dy2| <= 2 (16/11)^4 on the sampled square
    let lipschitz = 14.0;
    let mut checks = Vec::new();
    for &m in &FIGURE3_M {
        let cfg = BivariateConfig::symmetric(m, spec.q, spec.lambda, spec.rho)?;
        checks.extend(verify_thm71(
            &cfg,
            &spec.g,
            &grid,
            lipschitz,
            surface_points,
        )?);
    }
    let worst = checks
        .iter()
        .map(|c| c.error - c.bound - c.padding)
        .fold(f64::NEG_INFINITY, f64::max);
    let mut r = InvariantResult::within("bound_thm71", checks.len(), worst.max(0.0), 1e-9);
    r.passed = checks.iter().all(|c| c.holds());
    Ok(r.with_detail(format!("max(error - bound - padding) = {worst:.3e}")))
}

/// Figure 3 sup errors at `m = 10` and `m = 20`.
pub fn figure3_sup_errors() -> Result<Vec<(u32, f64)>> {
    let spec = SurfaceSpec::figure_default()?;
    FIGURE3_M
        .iter()
        .map(|&m| {
            let cfg = BivariateConfig::symmetric(m, spec.q, spec.lambda, spec.rho)?;
            Ok((
                m,
                report::sup_error(&report::surface_table(&cfg, &spec.g, &spec.grid)?),
            ))
        })
        .collect()
}

pub fn check_bivariate_convergence() -> Result<InvariantResult> {
    let sups = figure3_sup_errors()?;
    let (coarse, fine) = (sups[0].1, sups[1].1);
    let mut r = InvariantResult::within("bivariate_convergence", 2, fine, coarse);
    r.passed = fine < coarse;
    Ok(r.with_detail(format!("sup error m=10: {coarse:.6e}, m=20: {fine:.6e}")))
}

/// Runs every invariant and the lemma audit.
pub fn run(level: Level) -> Result<AuditReport> {
    let mut invariants = check_partition_of_unity(1000)?;
    invariants.push(check_positivity(level.pick(100, 500))?);
    invariants.push(check_linearity(level.pick(50, 200))?);
    invariants.push(check_oracle_agreement(level.pick(40, 200))?);
    invariants.extend(check_central_algebra(level.pick(200, 1000))?);
    invariants.push(check_tensor_factorization(level.pick(10, 50))?);
    invariants.push(check_korovkin()?);
    invariants.push(check_weighted_norm()?);
    invariants.push(check_bound_thm33()?);
    invariants.push(check_bound_thm71(level.pick(401, 1001))?);
    invariants.push(check_bivariate_convergence()?);
    let records = audit_records(level)?;
    let summary = summarize(&records);
    Ok(AuditReport {
        level,
        invariants,
        records,
        summary,
        table1: report::table1()?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level_parses() {
        assert_eq!("fast".parse::<Level>().unwrap(), Level::Fast);
        assert!("slow".parse::<Level>().is_err());
    }

    #[test]
    fn cheap_invariants_pass() {
        for r in check_partition_of_unity(200).unwrap() {
            assert!(r.passed, "{r:?}");
        }
        assert!(check_linearity(10).unwrap().passed);
        assert!(check_positivity(10).unwrap().passed);
        for r in check_central_algebra(50).unwrap() {
            assert!(r.passed, "{r:?}");
        }
    }

    #[test]
    fn audit_has_one_record_per_check_and_point() {
        let records = audit_records(Level::Fast).unwrap();
        let summary = summarize(&records);
        assert_eq!(summary.len(), 6);
        assert!(summary.iter().all(|s| s.records == 10));
        for r in &records {
            assert_eq!(r.abs_gap, (r.closed_value - r.oracle_value).abs());
        }
    }

    #[test]
    fn verdict_follows_threshold() {
        let records = vec![
            AuditRecord::new("a", "", 1.0, 1.0),
            AuditRecord::new("b", "", 1.0, 1.1),
        ];
        let s = summarize(&records);
        assert_eq!(s[0].verdict, Verdict::Consistent);
        assert_eq!(s[1].verdict, Verdict::Inconsistent);
    }
}
