//! Target functions: built-in polynomials, parsed expressions, or closures.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::expr::Expr;

/// Polynomial with coefficients in ascending order of degree.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Self { coeffs }
    }

    /// The monomial `e_k(s) = s^k`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![0.0; k + 1];
        coeffs[k] = 1.0;
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    /// Largest `|p'(x)|` over `[lo, hi]`, bounded coefficient-wise.
    pub fn derivative_bound(&self, lo: f64, hi: f64) -> f64 {
        let r = lo.abs().max(hi.abs());
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| k as f64 * c.abs() * r.powi(k as i32 - 1))
            .sum()
    }
}

/// `y^3 - 5 y^2 + 6 y + 2`, the univariate benchmark polynomial.
pub fn benchmark_polynomial() -> Polynomial {
    Polynomial::new(vec![2.0, 6.0, -5.0, 1.0])
}

pub type Callable = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
pub type Callable2 = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// A real function of one variable.
#[derive(Clone)]
pub enum TargetFunction {
    Constant(f64),
    Polynomial(Polynomial),
    Expr(Expr),
    Custom(Callable),
}

impl TargetFunction {
    pub fn custom<F: Fn(f64) -> f64 + Send + Sync + 'static>(f: F) -> Self {
        TargetFunction::Custom(Arc::new(f))
    }

    pub fn monomial(k: usize) -> Self {
        TargetFunction::Polynomial(Polynomial::monomial(k))
    }

    /// Parses a selector: `table1-poly`, `const:C`, `e<k>` / `e_<k>`, or an
    /// expression in `y`.
    pub fn parse(selector: &str) -> Result<Self> {
        let s = selector.trim();
        if s == "table1-poly" {
            return Ok(TargetFunction::Polynomial(benchmark_polynomial()));
        }
        if let Some(c) = s.strip_prefix("const:") {
            let v = c
                .trim()
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad constant in {s:?}")))?;
            return Ok(TargetFunction::Constant(v));
        }
        if let Some(k) = monomial_index(s) {
            return Ok(TargetFunction::monomial(k));
        }
        let e = Expr::parse(s)?;
        if e.arity() > 1 {
            return Err(Error::Parse(format!(
                "{s:?} uses y2 in a univariate context"
            )));
        }
        Ok(TargetFunction::Expr(e))
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            TargetFunction::Constant(c) => *c,
            TargetFunction::Polynomial(p) => p.eval(x),
            TargetFunction::Expr(e) => e.eval([x, 0.0]),
            TargetFunction::Custom(f) => f(x),
        }
    }
}

impl fmt::Debug for TargetFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TargetFunction::Constant(c) => write!(f, "Constant({c})"),
            TargetFunction::Polynomial(p) => write!(f, "Polynomial({:?})", p.coeffs()),
            TargetFunction::Expr(e) => write!(f, "Expr({e})"),
            TargetFunction::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

impl From<Polynomial> for TargetFunction {
    fn from(p: Polynomial) -> Self {
        TargetFunction::Polynomial(p)
    }
}

fn monomial_index(s: &str) -> Option<usize> {
    let rest = s.strip_prefix("e_").or_else(|| s.strip_prefix('e'))?;
    if rest.is_empty() || !rest.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    rest.parse().ok()
}

/// A real function of two variables.
#[derive(Clone)]
pub enum BivariateTarget {
    /// `g(s, t) = first(s) * second(t)`; evaluated through the tensor structure.
    Separable(TargetFunction, TargetFunction),
    Expr(Expr),
    Custom(Callable2),
}

impl BivariateTarget {
    pub fn separable(first: TargetFunction, second: TargetFunction) -> Self {
        BivariateTarget::Separable(first, second)
    }

    pub fn custom<F: Fn(f64, f64) -> f64 + Send + Sync + 'static>(f: F) -> Self {
        BivariateTarget::Custom(Arc::new(f))
    }

    /// `y1^3 y2^2`, the bivariate benchmark.
    pub fn benchmark() -> Self {
        BivariateTarget::Separable(TargetFunction::monomial(3), TargetFunction::monomial(2))
    }

    /// Parses `fig3-poly`, `const:C`, or an expression in `y1`, `y2`.
    pub fn parse(selector: &str) -> Result<Self> {
        let s = selector.trim();
        if s == "fig3-poly" {
            return Ok(Self::benchmark());
        }
        if s.starts_with("const:") {
            return Ok(BivariateTarget::Separable(
                TargetFunction::parse(s)?,
                TargetFunction::Constant(1.0),
            ));
        }
        Ok(BivariateTarget::Expr(Expr::parse(s)?))
    }

    pub fn eval(&self, s: f64, t: f64) -> f64 {
        match self {
            BivariateTarget::Separable(a, b) => a.eval(s) * b.eval(t),
            BivariateTarget::Expr(e) => e.eval([s, t]),
            BivariateTarget::Custom(f) => f(s, t),
        }
    }

    pub fn is_separable(&self) -> bool {
        matches!(self, BivariateTarget::Separable(..))
    }

    /// Same function with the coordinates swapped.
    pub fn transposed(&self) -> Self {
        match self {
            BivariateTarget::Separable(a, b) => BivariateTarget::Separable(b.clone(), a.clone()),
            other => {
                let g = other.clone();
                BivariateTarget::custom(move |s, t| g.eval(t, s))
            }
        }
    }
}

impl fmt::Debug for BivariateTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BivariateTarget::Separable(a, b) => write!(f, "Separable({a:?}, {b:?})"),
            BivariateTarget::Expr(e) => write!(f, "Expr({e})"),
            BivariateTarget::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selectors() {
        let f = TargetFunction::parse("table1-poly").unwrap();
        assert_eq!(f.eval(0.5), 0.125 - 1.25 + 3.0 + 2.0);
        assert_eq!(TargetFunction::parse("const:1").unwrap().eval(0.3), 1.0);
        assert_eq!(TargetFunction::parse("e2").unwrap().eval(0.3), 0.09);
        assert_eq!(TargetFunction::parse("e_3").unwrap().eval(2.0), 8.0);
        assert_eq!(TargetFunction::parse("e0").unwrap().eval(7.0), 1.0);
        assert_eq!(TargetFunction::parse("2*y+1").unwrap().eval(1.0), 3.0);
        assert!(TargetFunction::parse("const:x").is_err());
        assert!(TargetFunction::parse("y1*y2").is_err());
    }

    #[test]
    fn bivariate_selectors() {
        let g = BivariateTarget::parse("fig3-poly").unwrap();
        assert!(g.is_separable());
        assert_eq!(g.eval(0.5, 2.0), 0.5);
        let h = BivariateTarget::parse("y1 + y2").unwrap();
        assert!(!h.is_separable());
        assert_eq!(h.transposed().eval(1.0, 3.0), 4.0);
        assert_eq!(
            BivariateTarget::parse("const:2").unwrap().eval(0.1, 0.9),
            2.0
        );
    }

    #[test]
    fn derivative_bound_covers_benchmark() {
        // |3y^2 - 10y + 6| <= 6 on [0, 1]; the coefficient bound is looser.
        let p = benchmark_polynomial();
        let b = p.derivative_bound(0.0, 1.0);
        assert!(b >= 6.0);
        for j in 0..=100 {
            let y = j as f64 / 100.0;
            assert!((3.0 * y * y - 10.0 * y + 6.0).abs() <= b);
        }
    }
}
