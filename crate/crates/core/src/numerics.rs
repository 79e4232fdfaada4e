//! Combinatorics, quadrature and grid utilities shared by every operator module.
//!
//! Everything here is double precision and deterministic. Binomial
//! coefficients are exact integers up to `C(64, k)` and switch to a
//! log-gamma evaluation above that; quadrature is composite Gauss-Legendre
//! on the unit interval with optional geometric grading toward `t = 0`.

use std::sync::OnceLock;

use crate::error::{check_finite, domain, Result};

/// Largest top index whose binomial row is stored exactly.
pub const EXACT_BINOMIAL_MAX: u32 = 64;

/// Default number of Gauss-Legendre nodes per subinterval.
pub const DEFAULT_ORDER: usize = 32;
/// Default number of uniform subintervals of `[0, 1]`.
pub const DEFAULT_SUBDIVISIONS: usize = 8;
/// Geometric refinement levels of the first subinterval for non-smooth `t^rho`.
pub const DEFAULT_GRADING_LEVELS: u32 = 20;
/// Default point count for sup and modulus grids.
pub const DEFAULT_GRID_POINTS: usize = 10_001;

/// A binomial coefficient, exact where it fits in `u64`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Binomial {
    Zero,
    Exact(u64),
    /// Natural logarithm of a positive coefficient too large for the exact table.
    Log(f64),
}

impl Binomial {
    pub fn to_f64(self) -> f64 {
        match self {
            Binomial::Zero => 0.0,
            Binomial::Exact(v) => v as f64,
            Binomial::Log(l) => l.exp(),
        }
    }

    pub fn ln(self) -> f64 {
        match self {
            Binomial::Zero => f64::NEG_INFINITY,
            Binomial::Exact(v) => (v as f64).ln(),
            Binomial::Log(l) => l,
        }
    }
}

/// Pascal's triangle up to `max_n`, built once and shared.
#[derive(Debug)]
pub struct BinomialTable {
    max_n: u32,
    rows: Vec<Vec<u64>>,
}

impl BinomialTable {
    pub fn new(max_n: u32) -> Self {
        assert!(max_n <= EXACT_BINOMIAL_MAX, "C({max_n}, k) overflows u64");
        let mut rows: Vec<Vec<u64>> = Vec::with_capacity(max_n as usize + 1);
        for n in 0..=max_n as usize {
            let mut row = vec![1u64; n + 1];
            for k in 1..n {
                row[k] = rows[n - 1][k - 1] + rows[n - 1][k];
            }
            rows.push(row);
        }
        Self { max_n, rows }
    }

    /// The process-wide table covering `0..=EXACT_BINOMIAL_MAX`.
    pub fn shared() -> &'static BinomialTable {
        static TABLE: OnceLock<BinomialTable> = OnceLock::new();
        TABLE.get_or_init(|| BinomialTable::new(EXACT_BINOMIAL_MAX))
    }

    pub fn max_n(&self) -> u32 {
        self.max_n
    }

    /// Exact `C(n, k)`, or `None` when `n` exceeds the table.
    pub fn get(&self, n: i64, k: i64) -> Option<u64> {
        if n < 0 || n > self.max_n as i64 {
            return None;
        }
        if k < 0 || k > n {
            return Some(0);
        }
        Some(self.rows[n as usize][k as usize])
    }
}

/// `ln C(n, k)` through the log-gamma function; requires `0 <= k <= n`.
pub fn ln_binomial(n: u64, k: u64) -> f64 {
    debug_assert!(k <= n);
    let n = n as f64;
    let k = k as f64;
    libm::lgamma(n + 1.0) - libm::lgamma(k + 1.0) - libm::lgamma(n - k + 1.0)
}

/// `C(n, k)` with `C(n, k) = 0` for `k < 0` or `k > n`.
pub fn binomial(n: i64, k: i64) -> Result<Binomial> {
    if n < 0 {
        return Err(domain(format!("binomial top index must be >= 0, got {n}")));
    }
    if k < 0 || k > n {
        return Ok(Binomial::Zero);
    }
    if let Some(v) = BinomialTable::shared().get(n, k) {
        return Ok(Binomial::Exact(v));
    }
    let k = k.min(n - k);
    if k == 0 {
        return Ok(Binomial::Exact(1));
    }
    Ok(Binomial::Log(ln_binomial(n as u64, k as u64)))
}

/// `C(n, k)` as a double, with out-of-range `k` mapped to zero.
pub fn binomial_f64(n: i64, k: i64) -> f64 {
    match binomial(n, k) {
        Ok(b) => b.to_f64(),
        Err(_) => 0.0,
    }
}

/// Neumaier-compensated summation.
#[derive(Debug, Default, Clone, Copy)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut acc = CompensatedSum::new();
    for v in values {
        acc.add(v);
    }
    acc.value()
}

/// An n-point Gauss-Legendre rule mapped to `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    order: usize,
}

impl QuadratureRule {
    /// Nodes from Newton iteration on the Legendre polynomial `P_order`.
    pub fn gauss_legendre(order: usize) -> Result<Self> {
        if order == 0 {
            return Err(domain("quadrature order must be >= 1"));
        }
        let n = order;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            // x is descending from near 1; store mirrored pairs on [0, 1].
            nodes[i] = 0.5 * (1.0 - x);
            nodes[n - 1 - i] = 0.5 * (1.0 + x);
            weights[i] = 0.5 * w;
            weights[n - 1 - i] = 0.5 * w;
        }
        Ok(Self {
            nodes,
            weights,
            order,
        })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Rule applied once on `[a, b]`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64) -> f64 {
        let h = b - a;
        let mut acc = CompensatedSum::new();
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc.add(w * f(a + h * x));
        }
        h * acc.value()
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Composite rule on `[0, 1]`, flattened into one node/weight list.
///
/// With `grading_levels = L > 0` the first uniform subinterval `[0, h]` is
/// replaced by the pieces `[0, h/2^L], [h/2^L, h/2^(L-1)], ..., [h/2, h]`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitQuadrature {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    subdivisions: usize,
    grading_levels: u32,
}

impl UnitQuadrature {
    pub fn new(order: usize, subdivisions: usize, grading_levels: u32) -> Result<Self> {
        if subdivisions == 0 {
            return Err(domain("subdivisions must be >= 1"));
        }
        let rule = QuadratureRule::gauss_legendre(order)?;
        let h = 1.0 / subdivisions as f64;
        let mut edges = vec![0.0];
        if grading_levels > 0 {
            for level in (1..=grading_levels).rev() {
                edges.push(h / 2f64.powi(level as i32));
            }
        }
        for j in 1..=subdivisions {
            edges.push(j as f64 / subdivisions as f64);
        }
        let mut nodes = Vec::with_capacity((edges.len() - 1) * order);
        let mut weights = Vec::with_capacity(nodes.capacity());
        for pair in edges.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            for (x, w) in rule.nodes().iter().zip(rule.weights()) {
                nodes.push(a + (b - a) * x);
                weights.push((b - a) * w);
            }
        }
        Ok(Self {
            nodes,
            weights,
            subdivisions,
            grading_levels,
        })
    }

    /// Default policy for integrands built on `t^rho`: grading only when
    /// `rho` is not a non-negative integer (otherwise `t^rho` is a polynomial).
    pub fn for_exponent(rho: f64) -> Self {
        let smooth = rho >= 0.0 && rho.fract() == 0.0;
        let levels = if smooth { 0 } else { DEFAULT_GRADING_LEVELS };
        Self::new(DEFAULT_ORDER, DEFAULT_SUBDIVISIONS, levels)
            .expect("default quadrature parameters are valid")
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn subdivisions(&self) -> usize {
        self.subdivisions
    }

    pub fn grading_levels(&self) -> u32 {
        self.grading_levels
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> Result<f64> {
        let mut acc = CompensatedSum::new();
        for (&t, &w) in self.nodes.iter().zip(&self.weights) {
            acc.add(w * check_finite(t, f(t))?);
        }
        Ok(acc.value())
    }
}

/// Composite Gauss-Legendre estimate of the integral of `f` over `[0, 1]`,
/// 32 nodes per piece, graded toward `t = 0`.
pub fn integrate_unit<F: Fn(f64) -> f64>(f: F, subdivisions: usize) -> Result<f64> {
    UnitQuadrature::new(DEFAULT_ORDER, subdivisions, DEFAULT_GRADING_LEVELS)?.integrate(f)
}

/// Uniform samples of `[lo, hi]` including both endpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    lo: f64,
    hi: f64,
    points: Vec<f64>,
}

impl Grid {
    pub fn new(lo: f64, hi: f64, count: usize) -> Result<Self> {
        if count < 2 {
            return Err(domain(format!("grid needs at least 2 points, got {count}")));
        }
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(domain(format!(
                "grid bounds must satisfy lo < hi, got [{lo}, {hi}]"
            )));
        }
        let last = (count - 1) as f64;
        let mut points: Vec<f64> = (0..count)
            .map(|j| lo + (hi - lo) * (j as f64 / last))
            .collect();
        points[count - 1] = hi;
        Ok(Self { lo, hi, points })
    }

    /// The grid `0, 1/(count-1), ..., 1`.
    pub fn unit(count: usize) -> Result<Self> {
        Self::new(0.0, 1.0, count)
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn count(&self) -> usize {
        self.points.len()
    }

    pub fn step(&self) -> f64 {
        (self.hi - self.lo) / (self.points.len() - 1) as f64
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }
}

/// Maximum of `f` over `points` and its location; ties go to the smallest abscissa.
pub fn sup_on_grid<F: Fn(f64) -> f64>(f: F, points: &[f64]) -> Result<(f64, f64)> {
    if points.is_empty() {
        return Err(domain("sup over an empty grid"));
    }
    let mut best: Option<(f64, f64)> = None;
    for &x in points {
        let v = check_finite(x, f(x))?;
        best = match best {
            None => Some((v, x)),
            Some((bv, bx)) if v > bv || (v == bv && x < bx) => Some((v, x)),
            keep => keep,
        };
    }
    Ok(best.expect("non-empty"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_binomials() {
        assert_eq!(binomial(5, 2).unwrap(), Binomial::Exact(10));
        assert_eq!(binomial(7, -2).unwrap(), Binomial::Zero);
        assert_eq!(binomial(3, 4).unwrap(), Binomial::Zero);
        assert_eq!(binomial(0, 0).unwrap(), Binomial::Exact(1));
        assert!(binomial(-1, 0).is_err());
    }

    #[test]
    fn central_binomial_matches_product_form() {
        // C(60,30) = prod_{j=1..30} (30 + j) / j
        let mut oracle = 1.0f64;
        for j in 1..=30 {
            oracle *= (30 + j) as f64 / j as f64;
        }
        let v = binomial(60, 30).unwrap().to_f64();
        assert!(((v - oracle) / oracle).abs() < 1e-12);
    }

    #[test]
    fn log_branch_beyond_exact_table() {
        let b = binomial(100, 50).unwrap();
        assert!(matches!(b, Binomial::Log(_)));
        let mut oracle = 1.0f64;
        for j in 1..=50 {
            oracle *= (50 + j) as f64 / j as f64;
        }
        assert!(((b.to_f64() - oracle) / oracle).abs() < 1e-12);
        assert_eq!(binomial(100, 0).unwrap(), Binomial::Exact(1));
        assert_eq!(binomial(100, 100).unwrap(), Binomial::Exact(1));
    }

    #[test]
    fn exact_and_log_agree_on_overlap() {
        for n in 1..=EXACT_BINOMIAL_MAX as u64 {
            for k in 0..=n {
                let exact = BinomialTable::shared().get(n as i64, k as i64).unwrap() as f64;
                let via_log = ln_binomial(n, k).exp();
                assert!(
                    ((exact - via_log) / exact).abs() < 1e-12,
                    "C({n},{k}): {exact} vs {via_log}"
                );
            }
        }
    }

    #[test]
    fn rule_weights_and_exactness() {
        for order in [1, 2, 5, 16, 32] {
            let rule = QuadratureRule::gauss_legendre(order).unwrap();
            let s: f64 = rule.weights().iter().sum();
            assert!((s - 1.0).abs() < 1e-14, "order {order}: {s}");
            assert!(rule.nodes().iter().all(|&x| x > 0.0 && x < 1.0));
            assert!(rule.weights().iter().all(|&w| w > 0.0));
            for k in 0..(2 * order) {
                let v = rule.integrate(|t| t.powi(k as i32), 0.0, 1.0);
                let exact = 1.0 / (k as f64 + 1.0);
                assert!((v - exact).abs() < 1e-13, "order {order} k {k}: {v}");
            }
        }
    }

    #[test]
    fn integrate_unit_examples() {
        assert!((integrate_unit(|_| 1.0, 8).unwrap() - 1.0).abs() < 1e-14);
        assert!((integrate_unit(|t| t * t, 8).unwrap() - 1.0 / 3.0).abs() < 1e-14);
        let v = integrate_unit(|t| t.powf(0.1), 16).unwrap();
        assert!((v - 1.0 / 1.1).abs() < 1e-9, "{v}");
    }

    #[test]
    fn integrate_unit_rejects_non_finite() {
        assert!(integrate_unit(|t| if t < 0.5 { f64::NAN } else { 1.0 }, 4).is_err());
        assert!(integrate_unit(|t| t, 0).is_err());
    }

    #[test]
    fn refinement_converges_for_fractional_powers() {
        for rho in [0.1, 0.5, 0.9, 2.0] {
            let exact = 1.0 / (rho + 1.0);
            let mut prev = f64::INFINITY;
            for subdivisions in [1, 2, 4, 8, 16, 32] {
                let q = UnitQuadrature::new(DEFAULT_ORDER, subdivisions, 4).unwrap();
                let err = (q.integrate(|t| t.powf(rho)).unwrap() - exact).abs();
                assert!(
                    err <= prev + 1e-15,
                    "rho {rho} n {subdivisions}: {err} > {prev}"
                );
                prev = err;
            }
        }
    }

    #[test]
    fn integer_exponent_skips_grading() {
        assert_eq!(UnitQuadrature::for_exponent(1.0).grading_levels(), 0);
        assert_eq!(UnitQuadrature::for_exponent(2.0).grading_levels(), 0);
        assert_eq!(
            UnitQuadrature::for_exponent(0.1).grading_levels(),
            DEFAULT_GRADING_LEVELS
        );
    }

    #[test]
    fn grid_endpoints() {
        let g = Grid::new(-1.0, 3.0, 5).unwrap();
        assert_eq!(g.points(), &[-1.0, 0.0, 1.0, 2.0, 3.0]);
        assert!(Grid::new(0.0, 1.0, 1).is_err());
        assert!(Grid::new(1.0, 0.0, 3).is_err());
        let g = Grid::unit(11).unwrap();
        assert_eq!(g.points()[1], 0.1);
        assert!(g.points().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn sup_examples() {
        let g = Grid::unit(11).unwrap();
        assert_eq!(sup_on_grid(|u| -u * u, g.points()).unwrap(), (0.0, 0.0));
        let g = Grid::new(0.0, 6.0, 6001).unwrap();
        let (v, at) = sup_on_grid(|u| u / (1.0 + u * u), g.points()).unwrap();
        assert!((v - 0.5).abs() < 1e-12);
        assert!((at - 1.0).abs() <= g.step());
        let g = Grid::new(2.0, 5.0, 7).unwrap();
        assert_eq!(sup_on_grid(|_| 3.0, g.points()).unwrap(), (3.0, 2.0));
        assert!(sup_on_grid(|u| u, &[]).is_err());
        assert!(sup_on_grid(|_| f64::INFINITY, g.points()).is_err());
    }

    #[test]
    fn sup_ignores_evaluation_order() {
        let pts: Vec<f64> = (0..50).map(|j| ((j * 37) % 50) as f64 / 49.0).collect();
        let mut sorted = pts.clone();
        sorted.sort_by(f64::total_cmp);
        let f = |u: f64| (6.0 * u).sin().abs();
        assert_eq!(
            sup_on_grid(f, &pts).unwrap(),
            sup_on_grid(f, &sorted).unwrap()
        );
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let v = compensated_sum([1.0, 1e-16, -1.0, 1e-16]);
        assert!((v - 2e-16).abs() < 1e-30);
    }
}
