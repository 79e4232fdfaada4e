//! Moduli of continuity, pointwise error bounds, and convergence sweeps.
//!
//! Moduli are estimated on a uniform grid and are therefore lower bounds of
//! the true supremum. Checks that compare an observed error against a bound
//! built from a grid modulus add an explicit padding `L * h`, where `L` is a
//! caller-supplied Lipschitz constant of the target and `h` the grid step.
//!
//! Every `delta` fed into a bound is the square root of the exact-summation
//! second central moment, never the printed closed form.

use std::collections::VecDeque;

use rayon::prelude::*;

use crate::error::{check_finite, domain, Result};
use crate::function::{BivariateTarget, TargetFunction};
use crate::numerics::{Grid, DEFAULT_GRID_POINTS};
use crate::operator::{central_moments, oracle_moment, KantorovichOperator, OperatorConfig};
use crate::operator_bi::{BivariateConfig, BivariateOperator};

/// Grid points per axis for partial moduli of bivariate functions.
pub const DEFAULT_SURFACE_POINTS: usize = 1001;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModulusKind {
    Full,
    Partial1,
    Partial2,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModulusEstimate {
    pub delta: f64,
    pub value: f64,
    pub kind: ModulusKind,
    pub grid_resolution: usize,
}

/// Largest `max - min` over all windows of `width + 1` consecutive samples.
fn sliding_range<I>(values: I, len: usize, width: usize) -> f64
where
    I: Fn(usize) -> f64,
{
    if len == 0 {
        return 0.0;
    }
    let width = width.min(len - 1);
    let mut maxq: VecDeque<usize> = VecDeque::new();
    let mut minq: VecDeque<usize> = VecDeque::new();
    let mut best = 0.0f64;
    for j in 0..len {
        let v = values(j);
        while maxq.back().is_some_and(|&b| values(b) <= v) {
            maxq.pop_back();
        }
        maxq.push_back(j);
        while minq.back().is_some_and(|&b| values(b) >= v) {
            minq.pop_back();
        }
        minq.push_back(j);
        let start = j.saturating_sub(width);
        while maxq.front().is_some_and(|&f| f < start) {
            maxq.pop_front();
        }
        while minq.front().is_some_and(|&f| f < start) {
            minq.pop_front();
        }
        best = best.max(values(maxq[0]) - values(minq[0]));
    }
    best
}

fn window_width(delta: f64, step: f64) -> usize {
    ((delta / step) * (1.0 + 1e-12)).floor() as usize
}

fn check_delta(delta: f64) -> Result<()> {
    if !(delta.is_finite() && delta >= 0.0) {
        return Err(domain(format!(
            "delta must be finite and >= 0, got {delta}"
        )));
    }
    Ok(())
}

/// A univariate function sampled once on a uniform grid, answering
/// modulus-of-continuity queries for any `delta`.
#[derive(Debug, Clone)]
pub struct SampledFunction {
    grid: Grid,
    values: Vec<f64>,
}

impl SampledFunction {
    pub fn new<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, resolution: usize) -> Result<Self> {
        let grid = Grid::new(lo, hi, resolution)?;
        let values = grid
            .points()
            .iter()
            .map(|&x| check_finite(x, f(x)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { grid, values })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn step(&self) -> f64 {
        self.grid.step()
    }

    /// Grid estimate of `sup_{|r1 - r2| <= delta} |f(r1) - f(r2)|`.
    pub fn modulus(&self, delta: f64) -> Result<ModulusEstimate> {
        check_delta(delta)?;
        let width = window_width(delta, self.step());
        let value = sliding_range(|j| self.values[j], self.values.len(), width);
        Ok(ModulusEstimate {
            delta,
            value,
            kind: ModulusKind::Full,
            grid_resolution: self.values.len(),
        })
    }
}

/// A bivariate function sampled on a uniform tensor grid.
#[derive(Debug, Clone)]
pub struct SampledSurface {
    first: Grid,
    second: Grid,
    /// Row-major: `values[i1 * n2 + i2]`.
    values: Vec<f64>,
}

impl SampledSurface {
    pub fn new<G: Fn(f64, f64) -> f64 + Sync>(
        g: G,
        first: (f64, f64),
        second: (f64, f64),
        resolution: usize,
    ) -> Result<Self> {
        let first = Grid::new(first.0, first.1, resolution)?;
        let second = Grid::new(second.0, second.1, resolution)?;
        let values = first
            .points()
            .par_iter()
            .flat_map_iter(|&s| second.points().iter().map(move |&t| (s, t)))
            .map(|(s, t)| check_finite(s, g(s, t)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            first,
            second,
            values,
        })
    }

    pub fn steps(&self) -> (f64, f64) {
        (self.first.step(), self.second.step())
    }

    /// `omega_1(g; delta)`: variation in the first coordinate, sup over the second.
    pub fn partial_first(&self, delta: f64) -> Result<ModulusEstimate> {
        check_delta(delta)?;
        let (n1, n2) = (self.first.count(), self.second.count());
        let width = window_width(delta, self.first.step());
        let value = (0..n2)
            .map(|i2| sliding_range(|i1| self.values[i1 * n2 + i2], n1, width))
            .fold(0.0, f64::max);
        Ok(ModulusEstimate {
            delta,
            value,
            kind: ModulusKind::Partial1,
            grid_resolution: n1,
        })
    }

    /// `omega_2(g; delta)`: variation in the second coordinate, sup over the first.
    pub fn partial_second(&self, delta: f64) -> Result<ModulusEstimate> {
        check_delta(delta)?;
        let (n1, n2) = (self.first.count(), self.second.count());
        let width = window_width(delta, self.second.step());
        let value = (0..n1)
            .map(|i1| sliding_range(|i2| self.values[i1 * n2 + i2], n2, width))
            .fold(0.0, f64::max);
        Ok(ModulusEstimate {
            delta,
            value,
            kind: ModulusKind::Partial2,
            grid_resolution: n2,
        })
    }
}

/// Lower grid estimate of `omega(f; delta)` on `[lo, hi]`.
pub fn modulus(
    f: &TargetFunction,
    domain_range: (f64, f64),
    delta: f64,
    resolution: usize,
) -> Result<ModulusEstimate> {
    if resolution < 100 {
        return Err(domain(format!(
            "modulus resolution must be >= 100, got {resolution}"
        )));
    }
    if delta.is_nan() || delta <= 0.0 {
        return Err(domain(format!("delta must be > 0, got {delta}")));
    }
    SampledFunction::new(|x| f.eval(x), domain_range.0, domain_range.1, resolution)?.modulus(delta)
}

/// Partial moduli `(omega_1, omega_2)` on `[0, 1]^2`.
pub fn partial_moduli(
    g: &BivariateTarget,
    delta1: f64,
    delta2: f64,
    resolution: usize,
) -> Result<(ModulusEstimate, ModulusEstimate)> {
    partial_moduli_on(g, (0.0, 1.0), (0.0, 1.0), delta1, delta2, resolution)
}

pub fn partial_moduli_on(
    g: &BivariateTarget,
    first: (f64, f64),
    second: (f64, f64),
    delta1: f64,
    delta2: f64,
    resolution: usize,
) -> Result<(ModulusEstimate, ModulusEstimate)> {
    if resolution < 100 {
        return Err(domain(format!(
            "modulus resolution must be >= 100, got {resolution}"
        )));
    }
    if !(delta1 > 0.0 && delta2 > 0.0) {
        return Err(domain("partial moduli need delta1, delta2 > 0"));
    }
    let surface = SampledSurface::new(|s, t| g.eval(s, t), first, second, resolution)?;
    Ok((
        surface.partial_first(delta1)?,
        surface.partial_second(delta2)?,
    ))
}

/// `2 omega(f; delta)` with `delta = sqrt(K((s-u)^2; u))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModulusBound {
    pub bound: f64,
    pub delta: f64,
}

pub fn bound_thm33(config: &OperatorConfig, f: &TargetFunction, u: f64) -> Result<ModulusBound> {
    let (lo, hi) = config.function_domain();
    let sampled = SampledFunction::new(|x| f.eval(x), lo.min(u), hi.max(u), DEFAULT_GRID_POINTS)?;
    bound_thm33_sampled(config, &sampled, u)
}

/// [`bound_thm33`] against a pre-sampled target.
pub fn bound_thm33_sampled(
    config: &OperatorConfig,
    sampled: &SampledFunction,
    u: f64,
) -> Result<ModulusBound> {
    let delta = central_moments(config, u)?.delta()?;
    let omega = sampled.modulus(delta)?.value;
    Ok(ModulusBound {
        bound: 2.0 * omega,
        delta,
    })
}

/// Constants of the Lipschitz-type classes used by the pointwise bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct LipschitzParams {
    /// The class constant `M >= 0`.
    pub scale: f64,
    pub k1: f64,
    pub k2: f64,
    /// Hölder exponent in `(0, 1]` of the univariate class.
    pub gamma: f64,
    /// Per-coordinate exponents of the bivariate maximal class.
    pub tau: [f64; 2],
    /// Finite reference set `E` for the distance terms `d(y, E)`.
    pub e_set: Vec<f64>,
}

impl LipschitzParams {
    /// Univariate class with weights `k1, k2` and exponent `gamma`.
    pub fn weighted(scale: f64, k1: f64, k2: f64, gamma: f64) -> Self {
        Self {
            scale,
            k1,
            k2,
            gamma,
            tau: [1.0, 1.0],
            e_set: Vec::new(),
        }
    }

    /// Bivariate maximal class with exponents `tau` and reference set `e_set`.
    pub fn maximal(scale: f64, tau: [f64; 2], e_set: Vec<f64>) -> Self {
        Self {
            scale,
            k1: 1.0,
            k2: 1.0,
            gamma: 1.0,
            tau,
            e_set,
        }
    }

    fn check_scale(&self) -> Result<()> {
        if !(self.scale.is_finite() && self.scale >= 0.0) {
            return Err(domain(format!("M must be >= 0, got {}", self.scale)));
        }
        Ok(())
    }

    /// `d(y, E) = min_{e in E} |y - e|`.
    pub fn distance_to_set(&self, y: f64) -> Result<f64> {
        if self.e_set.is_empty() {
            return Err(domain("reference set E is empty"));
        }
        Ok(self
            .e_set
            .iter()
            .map(|e| (y - e).abs())
            .fold(f64::INFINITY, f64::min))
    }
}

/// `M (psi2(u) / (k1 u + k2 u^2))^(gamma/2)` for `u > 0`.
pub fn bound_thm41(config: &OperatorConfig, params: &LipschitzParams, u: f64) -> Result<f64> {
    params.check_scale()?;
    if !(params.k1 > 0.0 && params.k2 > 0.0) {
        return Err(domain("k1 and k2 must be > 0"));
    }
    if !(params.gamma > 0.0 && params.gamma <= 1.0) {
        return Err(domain(format!(
            "gamma must lie in (0, 1], got {}",
            params.gamma
        )));
    }
    if u.is_nan() || u <= 0.0 {
        return Err(domain(format!("the weighted bound needs u > 0, got {u}")));
    }
    let psi2 = central_moments(config, u)?.delta()?.powi(2);
    let ratio = psi2 / (params.k1 * u + params.k2 * u * u);
    Ok(params.scale * ratio.powf(params.gamma / 2.0))
}

/// `2 (omega_1(g; d1) + omega_2(g; d2))` and the coordinate deltas.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BivariateBound {
    pub bound: f64,
    pub d1: f64,
    pub d2: f64,
}

fn coordinate_deltas(config: &BivariateConfig, y1: f64, y2: f64) -> Result<(f64, f64)> {
    let d1 = central_moments(config.first(), y1)?.delta()?;
    let d2 = central_moments(config.second(), y2)?.delta()?;
    Ok((d1, d2))
}

pub fn bound_thm71(
    config: &BivariateConfig,
    g: &BivariateTarget,
    y1: f64,
    y2: f64,
) -> Result<BivariateBound> {
    let (a, b) = config.function_domain();
    let surface = SampledSurface::new(
        |s, t| g.eval(s, t),
        (a.0, a.1.max(y1)),
        (b.0, b.1.max(y2)),
        DEFAULT_SURFACE_POINTS,
    )?;
    bound_thm71_sampled(config, &surface, y1, y2)
}

pub fn bound_thm71_sampled(
    config: &BivariateConfig,
    surface: &SampledSurface,
    y1: f64,
    y2: f64,
) -> Result<BivariateBound> {
    let (d1, d2) = coordinate_deltas(config, y1, y2)?;
    let bound = 2.0 * (surface.partial_first(d1)?.value + surface.partial_second(d2)?.value);
    Ok(BivariateBound { bound, d1, d2 })
}

/// `M {(d1^t1 + delta1^t1)(d2^t2 + delta2^t2) + d1^t1 d2^t2}` with
/// `d_i = d(y_i, E)`.
pub fn bound_thm72(
    config: &BivariateConfig,
    params: &LipschitzParams,
    y1: f64,
    y2: f64,
) -> Result<f64> {
    params.check_scale()?;
    for t in params.tau {
        if !(t > 0.0 && t <= 1.0) {
            return Err(domain(format!("tau must lie in (0, 1], got {t}")));
        }
    }
    let dist1 = params.distance_to_set(y1)?.powf(params.tau[0]);
    let dist2 = params.distance_to_set(y2)?.powf(params.tau[1]);
    let (d1, d2) = coordinate_deltas(config, y1, y2)?;
    let spread1 = d1.powf(params.tau[0]);
    let spread2 = d2.powf(params.tau[1]);
    Ok(params.scale * ((dist1 + spread1) * (dist2 + spread2) + dist1 * dist2))
}

/// `sup_u |K(e_i; u) - u^i| / (1 + u^2)` for `i = 0, 1, 2` along a ladder of `m`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedNormReport {
    pub n_ladder: Vec<u32>,
    /// `norms[j][i]` for `n_ladder[j]` and test monomial `e_i`.
    pub norms: Vec<[f64; 3]>,
}

impl WeightedNormReport {
    pub fn row(&self, i: usize) -> Vec<f64> {
        self.norms.iter().map(|n| n[i]).collect()
    }
}

pub fn weighted_convergence(
    q: u32,
    lambda: f64,
    rho: f64,
    n_ladder: &[u32],
    grid: &Grid,
    unchecked: bool,
) -> Result<WeightedNormReport> {
    if n_ladder.is_empty() || n_ladder.windows(2).any(|w| w[0] >= w[1]) {
        return Err(domain("n ladder must be non-empty and strictly increasing"));
    }
    if !unchecked && (grid.lo() < 0.0 || grid.hi() > 1.0) {
        return Err(domain(
            "weighted-norm grid must lie within [0, 1] unless unchecked",
        ));
    }
    let norms = n_ladder
        .iter()
        .map(|&n| {
            let config = if unchecked {
                OperatorConfig::new_unchecked(n, q, lambda, rho)?
            } else {
                OperatorConfig::new(n, q, lambda, rho)?
            };
            let per_point = grid
                .points()
                .par_iter()
                .map(|&u| {
                    let w = 1.0 + u * u;
                    let mut out = [0.0; 3];
                    for (k, slot) in out.iter_mut().enumerate() {
                        let e = oracle_moment(&config, u, k as u32)?;
                        *slot = (e - u.powi(k as i32)).abs() / w;
                    }
                    Ok(out)
                })
                .collect::<Result<Vec<[f64; 3]>>>()?;
            Ok(per_point.iter().fold([0.0f64; 3], |acc, v| {
                [acc[0].max(v[0]), acc[1].max(v[1]), acc[2].max(v[2])]
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(WeightedNormReport {
        n_ladder: n_ladder.to_vec(),
        norms,
    })
}

/// One point of an empirical bound check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundCheck {
    pub at: (f64, f64),
    pub error: f64,
    pub bound: f64,
    pub padding: f64,
}

impl BoundCheck {
    pub fn holds(&self) -> bool {
        self.error <= self.bound + self.padding + 1e-9
    }
}

/// Checks `|K(f; x) - f(x)| <= 2 omega(f; delta(x)) + L h` at each grid point.
pub fn verify_thm33(
    config: &OperatorConfig,
    f: &TargetFunction,
    grid: &Grid,
    lipschitz: f64,
) -> Result<Vec<BoundCheck>> {
    let op = KantorovichOperator::new(*config);
    let values = op.apply_many(f, grid.points())?;
    let (lo, hi) = config.function_domain();
    let sampled = SampledFunction::new(
        |x| f.eval(x),
        lo.min(grid.lo()),
        hi.max(grid.hi()),
        DEFAULT_GRID_POINTS,
    )?;
    let padding = lipschitz * sampled.step();
    grid.points()
        .par_iter()
        .zip(values.par_iter())
        .map(|(&x, &k)| {
            let b = bound_thm33_sampled(config, &sampled, x)?;
            Ok(BoundCheck {
                at: (x, 0.0),
                error: (k - f.eval(x)).abs(),
                bound: b.bound,
                padding,
            })
        })
        .collect()
}

/// Checks the bivariate partial-moduli bound on `grid x grid`.
pub fn verify_thm71(
    config: &BivariateConfig,
    g: &BivariateTarget,
    grid: &Grid,
    lipschitz: f64,
    surface_points: usize,
) -> Result<Vec<BoundCheck>> {
    let op = BivariateOperator::new(*config);
    let compiled = op.compile(g)?;
    let (a, b) = config.function_domain();
    let surface = SampledSurface::new(
        |s, t| g.eval(s, t),
        (a.0.min(grid.lo()), a.1.max(grid.hi())),
        (b.0.min(grid.lo()), b.1.max(grid.hi())),
        surface_points,
    )?;
    let (h1, h2) = surface.steps();
    let padding = lipschitz * h1.max(h2);
    // d1 depends on y1 only and d2 on y2 only
    let omega1 = grid
        .points()
        .par_iter()
        .map(|&y| surface.partial_first(central_moments(config.first(), y)?.delta()?))
        .collect::<Result<Vec<_>>>()?;
    let omega2 = grid
        .points()
        .par_iter()
        .map(|&y| surface.partial_second(central_moments(config.second(), y)?.delta()?))
        .collect::<Result<Vec<_>>>()?;
    let n = grid.count();
    (0..n * n)
        .into_par_iter()
        .map(|idx| {
            let (a, b) = (idx / n, idx % n);
            let (y1, y2) = (grid.points()[a], grid.points()[b]);
            let k = compiled.evaluate(y1, y2)?;
            Ok(BoundCheck {
                at: (y1, y2),
                error: (k - g.eval(y1, y2)).abs(),
                bound: 2.0 * (omega1[a].value + omega2[b].value),
                padding,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_modulus(f: TargetFunction, delta: f64) -> f64 {
        modulus(&f, (0.0, 1.0), delta, DEFAULT_GRID_POINTS)
            .unwrap()
            .value
    }

    #[test]
    fn modulus_examples() {
        assert_eq!(unit_modulus(TargetFunction::Constant(4.0), 0.3), 0.0);
        assert!((unit_modulus(TargetFunction::monomial(1), 0.1) - 0.1).abs() < 1e-4);
        assert!((unit_modulus(TargetFunction::monomial(2), 0.1) - 0.19).abs() < 1e-3);
        // delta wider than the domain
        assert!((unit_modulus(TargetFunction::monomial(1), 5.0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn modulus_rejects_bad_input() {
        let f = TargetFunction::monomial(1);
        assert!(modulus(&f, (0.0, 1.0), 0.1, 50).is_err());
        assert!(modulus(&f, (0.0, 1.0), 0.0, 500).is_err());
        let bad = TargetFunction::custom(|x| 1.0 / (x - 0.5));
        assert!(modulus(&bad, (0.0, 1.0), 0.1, 101).is_err());
    }

    #[test]
    fn sliding_range_matches_brute_force() {
        let vals: Vec<f64> = (0..97).map(|j| ((j * 7919) % 101) as f64).collect();
        for width in [0, 1, 3, 10, 96, 200] {
            let mut brute = 0.0f64;
            for a in 0..vals.len() {
                for b in a..vals.len().min(a + width + 1) {
                    brute = brute.max((vals[a] - vals[b]).abs());
                }
            }
            assert_eq!(sliding_range(|j| vals[j], vals.len(), width), brute);
        }
    }

    #[test]
    fn partial_moduli_examples() {
        let c = BivariateTarget::parse("const:3").unwrap();
        let (w1, w2) = partial_moduli(&c, 0.1, 0.1, 201).unwrap();
        assert_eq!((w1.value, w2.value), (0.0, 0.0));

        let s = BivariateTarget::parse("y1").unwrap();
        let (w1, w2) = partial_moduli(&s, 0.2, 0.2, 1001).unwrap();
        assert!((w1.value - 0.2).abs() < 1e-9);
        assert_eq!(w2.value, 0.0);
        assert_eq!(w1.kind, ModulusKind::Partial1);

        let p = BivariateTarget::parse("y1*y2").unwrap();
        let (w1, w2) = partial_moduli(&p, 0.1, 0.1, 1001).unwrap();
        assert!((w1.value - 0.1).abs() < 1e-3);
        assert!((w2.value - 0.1).abs() < 1e-3);
    }

    #[test]
    fn thm41_examples() {
        let c = OperatorConfig::new(20, 5, 0.5, 0.1).unwrap();
        let p = LipschitzParams::weighted(1.0, 1.0, 1.0, 1.0);
        let psi2 = central_moments(&c, 1.0).unwrap().oracle_psi2;
        let b = bound_thm41(&c, &p, 1.0).unwrap();
        assert!((b - (psi2 / 2.0).sqrt()).abs() < 1e-15);
        let zero = LipschitzParams::weighted(0.0, 1.0, 1.0, 0.5);
        assert_eq!(bound_thm41(&c, &zero, 0.5).unwrap(), 0.0);
        assert!(bound_thm41(&c, &p, 0.0).is_err());
        assert!(bound_thm41(&c, &LipschitzParams::weighted(1.0, 1.0, 1.0, 1.5), 0.5).is_err());
    }

    #[test]
    fn thm41_smaller_for_larger_gamma_when_ratio_below_one() {
        let c = OperatorConfig::new(40, 0, 0.5, 1.0).unwrap();
        let u = 0.5;
        let psi2 = central_moments(&c, u).unwrap().oracle_psi2;
        assert!(psi2 / (u + u * u) < 1.0);
        let one = bound_thm41(&c, &LipschitzParams::weighted(1.0, 1.0, 1.0, 1.0), u).unwrap();
        let half = bound_thm41(&c, &LipschitzParams::weighted(1.0, 1.0, 1.0, 0.5), u).unwrap();
        assert!(one < half);
    }

    #[test]
    fn thm33_for_identity_is_twice_delta() {
        let c = OperatorConfig::new(10, 2, 0.3, 0.5).unwrap();
        for u in [0.0, 0.5, 1.0] {
            let b = bound_thm33(&c, &TargetFunction::monomial(1), u).unwrap();
            // grid modulus of the identity is delta rounded down to the grid
            let h = c.function_domain().1 / (DEFAULT_GRID_POINTS - 1) as f64;
            assert!(b.bound <= 2.0 * b.delta + 1e-12);
            assert!(b.bound >= 2.0 * (b.delta - h) - 1e-12);
        }
        let b = bound_thm33(&c, &TargetFunction::Constant(2.0), 0.3).unwrap();
        assert_eq!(b.bound, 0.0);
    }

    #[test]
    fn thm72_examples() {
        let cfg = BivariateConfig::new(
            OperatorConfig::new(10, 0, 0.5, 1.0).unwrap(),
            OperatorConfig::new(12, 1, 0.2, 1.0).unwrap(),
        )
        .unwrap();
        let d1 = central_moments(cfg.first(), 0.7)
            .unwrap()
            .oracle_psi2
            .sqrt();
        let d2 = central_moments(cfg.second(), 0.7)
            .unwrap()
            .oracle_psi2
            .sqrt();
        let p = LipschitzParams::maximal(1.0, [1.0, 1.0], vec![0.5]);
        let b = bound_thm72(&cfg, &p, 0.7, 0.7).unwrap();
        let expected = (0.2 + d1) * (0.2 + d2) + 0.2 * 0.2;
        assert!((b - expected).abs() < 1e-12, "{b} vs {expected}");

        let on_set = LipschitzParams::maximal(2.0, [0.5, 1.0], vec![0.25, 0.6]);
        let b = bound_thm72(&cfg, &on_set, 0.25, 0.6).unwrap();
        let d1 = central_moments(cfg.first(), 0.25)
            .unwrap()
            .oracle_psi2
            .sqrt();
        let d2 = central_moments(cfg.second(), 0.6)
            .unwrap()
            .oracle_psi2
            .sqrt();
        assert!((b - 2.0 * d1.sqrt() * d2).abs() < 1e-12);

        let zero = LipschitzParams::maximal(0.0, [1.0, 1.0], vec![0.1]);
        assert_eq!(bound_thm72(&cfg, &zero, 0.3, 0.9).unwrap(), 0.0);
        let empty = LipschitzParams::maximal(1.0, [1.0, 1.0], vec![]);
        assert!(bound_thm72(&cfg, &empty, 0.3, 0.9).is_err());
    }

    #[test]
    fn thm71_examples() {
        let cfg = BivariateConfig::new(
            OperatorConfig::new(10, 5, 0.5, 0.9).unwrap(),
            OperatorConfig::new(10, 5, 0.5, 0.9).unwrap(),
        )
        .unwrap();
        let c = BivariateTarget::parse("const:1").unwrap();
        assert_eq!(bound_thm71(&cfg, &c, 0.5, 0.5).unwrap().bound, 0.0);

        // separable g1 (x) 1 has no variation in the second coordinate
        let g =
            BivariateTarget::separable(TargetFunction::monomial(2), TargetFunction::Constant(1.0));
        let b = bound_thm71(&cfg, &g, 0.4, 0.6).unwrap();
        let (lo, hi) = cfg.first().function_domain();
        let uni = modulus(
            &TargetFunction::monomial(2),
            (lo, hi),
            b.d1,
            DEFAULT_SURFACE_POINTS,
        )
        .unwrap();
        assert!((b.bound - 2.0 * uni.value).abs() < 1e-12);
    }

    #[test]
    fn weighted_report_shape() {
        let grid = Grid::unit(51).unwrap();
        let r = weighted_convergence(0, 0.5, 1.0, &[10, 20, 40, 80], &grid, false).unwrap();
        assert_eq!(r.norms.len(), 4);
        assert!(r.norms.iter().flatten().all(|&v| v >= 0.0));
        let e1 = r.row(1);
        assert!(e1.windows(2).all(|w| w[1] < w[0]), "{e1:?}");
        assert!(weighted_convergence(0, 0.5, 1.0, &[20, 10], &grid, false).is_err());
        let wide = Grid::new(0.0, 2.0, 11).unwrap();
        assert!(weighted_convergence(0, 0.5, 1.0, &[10], &wide, false).is_err());
        assert!(weighted_convergence(0, 0.5, 1.0, &[10], &wide, true).is_ok());
    }
}
