//! Shape-parameter Bernstein-Schurer basis `p_{m,i}(y)`, `i = 0..=m+q`.
//!
//! With `N = m + q` each weight is the sum of three non-negative terms
//!
//! ```text
//! (1-λ) C(N-2, i)   y^i     (1-y)^(N-i-1)
//! (1-λ) C(N-2, i-2) y^(i-1) (1-y)^(N-i)
//!   λ   C(N, i)     y^i     (1-y)^(N-i)
//! ```
//!
//! which is the bracketed three-term form with the outer `y^(i-1) (1-y)^(N-i-1)`
//! multiplied through. Terms whose binomial vanishes are skipped, so no
//! negative power is formed and the endpoints `y = 0, 1` are exact.

use crate::error::{domain, Result};
use crate::numerics::{binomial_f64, CompensatedSum};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisParams {
    m: u32,
    q: u32,
    lambda: f64,
    unchecked: bool,
}

impl BasisParams {
    /// Validated parameters: `m >= 2`, `0 <= lambda <= 1`.
    pub fn new(m: u32, q: u32, lambda: f64) -> Result<Self> {
        if m < 2 {
            return Err(domain(format!("m must be >= 2, got {m}")));
        }
        if !(0.0..=1.0).contains(&lambda) {
            return Err(domain(format!("lambda must lie in [0, 1], got {lambda}")));
        }
        Ok(Self {
            m,
            q,
            lambda,
            unchecked: false,
        })
    }

    /// Accepts any finite `lambda` and lets evaluation leave `[0, 1]`.
    /// Non-negativity of the weights is no longer guaranteed.
    pub fn new_unchecked(m: u32, q: u32, lambda: f64) -> Result<Self> {
        if m < 2 {
            return Err(domain(format!("m must be >= 2, got {m}")));
        }
        if !lambda.is_finite() {
            return Err(domain("lambda must be finite"));
        }
        Ok(Self {
            m,
            q,
            lambda,
            unchecked: true,
        })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn is_unchecked(&self) -> bool {
        self.unchecked
    }

    /// Top index `m + q`; the row has `m + q + 1` entries.
    pub fn degree(&self) -> u32 {
        self.m + self.q
    }

    pub(crate) fn check_point(&self, y: f64) -> Result<()> {
        if !y.is_finite() {
            return Err(domain(format!("evaluation point must be finite, got {y}")));
        }
        if !self.unchecked && !(0.0..=1.0).contains(&y) {
            return Err(domain(format!("evaluation point {y} outside [0, 1]")));
        }
        Ok(())
    }

    pub fn basis_weight(&self, i: u32, y: f64) -> Result<f64> {
        if i > self.degree() {
            return Err(domain(format!(
                "basis index {i} outside 0..={}",
                self.degree()
            )));
        }
        self.check_point(y)?;
        Ok(self.weight_unchecked(i, y))
    }

    fn weight_unchecked(&self, i: u32, y: f64) -> f64 {
        let n = self.degree() as i64;
        let i = i as i64;
        let lam = self.lambda;
        let z = 1.0 - y;
        let mut acc = CompensatedSum::new();
        if i <= n - 2 {
            acc.add(
                (1.0 - lam)
                    * binomial_f64(n - 2, i)
                    * y.powi(i as i32)
                    * z.powi((n - i - 1) as i32),
            );
        }
        if i >= 2 {
            acc.add(
                (1.0 - lam)
                    * binomial_f64(n - 2, i - 2)
                    * y.powi((i - 1) as i32)
                    * z.powi((n - i) as i32),
            );
        }
        acc.add(lam * binomial_f64(n, i) * y.powi(i as i32) * z.powi((n - i) as i32));
        acc.value()
    }

    /// All weights `p_{m,0}(y), ..., p_{m,m+q}(y)`.
    pub fn basis_row(&self, y: f64) -> Result<Vec<f64>> {
        self.check_point(y)?;
        Ok((0..=self.degree())
            .map(|i| self.weight_unchecked(i, y))
            .collect())
    }
}

/// `p_{m,i}(y)` for the given parameters.
pub fn basis_weight(params: &BasisParams, i: u32, y: f64) -> Result<f64> {
    params.basis_weight(i, y)
}

pub fn basis_row(params: &BasisParams, y: f64) -> Result<Vec<f64>> {
    params.basis_row(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::compensated_sum;

    fn bernstein(n: i64, i: i64, y: f64) -> f64 {
        binomial_f64(n, i) * y.powi(i as i32) * (1.0 - y).powi((n - i) as i32)
    }

    #[test]
    fn lambda_one_is_classical_bernstein() {
        let p = BasisParams::new(2, 0, 1.0).unwrap();
        assert!((p.basis_weight(1, 0.5).unwrap() - 0.5).abs() < 1e-15);
        let p = BasisParams::new(10, 5, 1.0).unwrap();
        let row = p.basis_row(0.4).unwrap();
        for (i, w) in row.iter().enumerate() {
            assert!((w - bernstein(15, i as i64, 0.4)).abs() < 1e-15);
        }
    }

    #[test]
    fn first_weight_at_zero_is_one() {
        for (m, q, lam) in [(2, 0, 0.0), (3, 4, 0.3), (10, 5, 0.5), (40, 0, 1.0)] {
            let p = BasisParams::new(m, q, lam).unwrap();
            assert_eq!(p.basis_weight(0, 0.0).unwrap(), 1.0);
        }
    }

    #[test]
    fn three_term_value_against_rational_evaluation() {
        // m=10, q=5, lambda=1/2, i=3, y=3/10. Exact rational value:
        //   1/2 * C(13,3) * 3^3 * 7^11 / 10^14
        // + 1/2 * C(13,1) * 3^2 * 7^12 / 10^14
        // + 1/2 * C(15,3) * 3^3 * 7^12 / 10^15
        let t1 = 286u128 * 27 * 7u128.pow(11) * 10;
        let t2 = 13u128 * 9 * 7u128.pow(12) * 10;
        let t3 = 455u128 * 27 * 7u128.pow(12);
        let num = t1 + t2 + t3;
        let den = 2u128 * 10u128.pow(15);
        let exact = num as f64 / den as f64;
        let p = BasisParams::new(10, 5, 0.5).unwrap();
        let v = p.basis_weight(3, 0.3).unwrap();
        assert!(((v - exact) / exact).abs() < 1e-14, "{v} vs {exact}");
    }

    #[test]
    fn rows_sum_to_one() {
        let p = BasisParams::new(2, 0, 0.0).unwrap();
        assert!((p.basis_row(0.5).unwrap().iter().sum::<f64>() - 1.0).abs() < 1e-15);
        for &(m, q) in &[(2, 0), (5, 3), (20, 5), (100, 10)] {
            for &lam in &[0.0, 0.25, 0.5, 1.0] {
                let p = BasisParams::new(m, q, lam).unwrap();
                for j in 0..=20 {
                    let y = j as f64 / 20.0;
                    let row = p.basis_row(y).unwrap();
                    assert_eq!(row.len(), (m + q + 1) as usize);
                    assert!((compensated_sum(row.iter().copied()) - 1.0).abs() < 1e-12);
                    assert!(row.iter().all(|&w| w >= -1e-14));
                }
            }
        }
    }

    #[test]
    fn endpoint_rows_are_unit_vectors() {
        let p = BasisParams::new(10, 5, 0.5).unwrap();
        let left = p.basis_row(0.0).unwrap();
        assert_eq!(left[0], 1.0);
        assert!(left[1..].iter().all(|&w| w == 0.0));
        let right = p.basis_row(1.0).unwrap();
        assert_eq!(right[15], 1.0);
        assert!(right[..15].iter().all(|&w| w == 0.0));
    }

    #[test]
    fn rejects_out_of_domain() {
        assert!(BasisParams::new(1, 0, 0.5).is_err());
        assert!(BasisParams::new(2, 0, 1.5).is_err());
        assert!(BasisParams::new(2, 0, -0.1).is_err());
        let p = BasisParams::new(4, 1, 0.5).unwrap();
        assert!(p.basis_weight(6, 0.5).is_err());
        assert!(p.basis_weight(0, 1.2).is_err());
        assert!(p.basis_row(-0.1).is_err());
        assert!(p.basis_row(f64::NAN).is_err());
    }

    #[test]
    fn unchecked_allows_wider_ranges() {
        let p = BasisParams::new_unchecked(4, 1, -0.5).unwrap();
        assert!(p.is_unchecked());
        let row = p.basis_row(1.3).unwrap();
        assert!((compensated_sum(row) - 1.0).abs() < 1e-12);
    }
}
