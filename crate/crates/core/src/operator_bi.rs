//! Tensor-product operator on `[0, 1]^2`.
//!
//! `K(g; y1, y2) = sum_{i1} sum_{i2} p_{m1,i1}(y1) p_{m2,i2}(y2) * c_{i1,i2}`
//! with `c_{i1,i2}` the double inner integral of
//! `g((i1 + t1^rho)/(m1+1), (i2 + t2^rho)/(m2+1))`. A separable `g`
//! factorises into two univariate operators; anything else goes through a
//! tensor quadrature of the two univariate rules.

use rayon::prelude::*;

use crate::error::{check_finite, domain, Result};
use crate::function::BivariateTarget;
use crate::numerics::CompensatedSum;
use crate::operator::{
    central_moments, closed_e1, closed_e2, closed_psi1, closed_psi2, closed_psi2_parts,
    oracle_moment, KantorovichOperator, OperatorConfig,
};

/// Two univariate configurations sharing the exponent `rho`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BivariateConfig {
    first: OperatorConfig,
    second: OperatorConfig,
}

impl BivariateConfig {
    pub fn new(first: OperatorConfig, second: OperatorConfig) -> Result<Self> {
        if first.rho() != second.rho() {
            return Err(domain(format!(
                "both coordinates share one rho, got {} and {}",
                first.rho(),
                second.rho()
            )));
        }
        Ok(Self { first, second })
    }

    /// `m1 = m2 = m`, `q1 = q2 = q`, `lambda1 = lambda2 = lambda`.
    pub fn symmetric(m: u32, q: u32, lambda: f64, rho: f64) -> Result<Self> {
        let c = OperatorConfig::new(m, q, lambda, rho)?;
        Self::new(c, c)
    }

    pub fn first(&self) -> &OperatorConfig {
        &self.first
    }

    pub fn second(&self) -> &OperatorConfig {
        &self.second
    }

    pub fn rho(&self) -> f64 {
        self.first.rho()
    }

    pub fn swapped(&self) -> Self {
        Self {
            first: self.second,
            second: self.first,
        }
    }

    pub fn function_domain(&self) -> ((f64, f64), (f64, f64)) {
        (self.first.function_domain(), self.second.function_domain())
    }
}

#[derive(Debug, Clone)]
pub struct BivariateOperator {
    config: BivariateConfig,
    first: KantorovichOperator,
    second: KantorovichOperator,
}

/// Inner integrals of a fixed target, ready for evaluation at any point.
#[derive(Debug, Clone)]
pub struct CompiledBivariate<'a> {
    op: &'a BivariateOperator,
    inner: Inner,
}

#[derive(Debug, Clone)]
enum Inner {
    Separable(Vec<f64>, Vec<f64>),
    /// Row-major `(n1 + 1) x (n2 + 1)`.
    Matrix(Vec<f64>, usize),
}

impl BivariateOperator {
    pub fn new(config: BivariateConfig) -> Self {
        Self {
            config,
            first: KantorovichOperator::new(config.first),
            second: KantorovichOperator::new(config.second),
        }
    }

    pub fn with_operators(first: KantorovichOperator, second: KantorovichOperator) -> Result<Self> {
        let config = BivariateConfig::new(*first.config(), *second.config())?;
        Ok(Self {
            config,
            first,
            second,
        })
    }

    pub fn config(&self) -> &BivariateConfig {
        &self.config
    }

    pub fn compile(&self, g: &BivariateTarget) -> Result<CompiledBivariate<'_>> {
        let inner = match g {
            BivariateTarget::Separable(a, b) => Inner::Separable(
                self.first.inner_integrals(a)?,
                self.second.inner_integrals(b)?,
            ),
            _ => {
                let n1 = self.config.first.basis().degree() as usize + 1;
                let n2 = self.config.second.basis().degree() as usize + 1;
                let rows = (0..n1)
                    .into_par_iter()
                    .map(|i1| {
                        let outer: Vec<(f64, f64)> = self.first.nodes_for(i1 as u32).collect();
                        (0..n2)
                            .map(|i2| {
                                let mut acc = CompensatedSum::new();
                                for &(s, ws) in &outer {
                                    for (t, wt) in self.second.nodes_for(i2 as u32) {
                                        acc.add(ws * wt * check_finite(s, g.eval(s, t))?);
                                    }
                                }
                                Ok(acc.value())
                            })
                            .collect::<Result<Vec<f64>>>()
                    })
                    .collect::<Result<Vec<Vec<f64>>>>()?;
                Inner::Matrix(rows.concat(), n2)
            }
        };
        Ok(CompiledBivariate { op: self, inner })
    }

    pub fn apply(&self, g: &BivariateTarget, y1: f64, y2: f64) -> Result<f64> {
        self.compile(g)?.evaluate(y1, y2)
    }
}

impl CompiledBivariate<'_> {
    pub fn evaluate(&self, y1: f64, y2: f64) -> Result<f64> {
        match &self.inner {
            Inner::Separable(c1, c2) => {
                Ok(self.op.first.combine(c1, y1)? * self.op.second.combine(c2, y2)?)
            }
            Inner::Matrix(values, n2) => {
                let p1 = self.op.config.first.basis().basis_row(y1)?;
                let p2 = self.op.config.second.basis().basis_row(y2)?;
                let mut acc = CompensatedSum::new();
                for (i1, a) in p1.iter().enumerate() {
                    if *a == 0.0 {
                        continue;
                    }
                    let row = &values[i1 * n2..(i1 + 1) * n2];
                    let mut inner = CompensatedSum::new();
                    for (b, c) in p2.iter().zip(row) {
                        inner.add(b * c);
                    }
                    acc.add(a * inner.value());
                }
                Ok(acc.value())
            }
        }
    }
}

pub fn apply_bi(config: &BivariateConfig, g: &BivariateTarget, y1: f64, y2: f64) -> Result<f64> {
    BivariateOperator::new(*config).apply(g, y1, y2)
}

/// Raw mixed moments `K(y1^i y2^j)` for `(i, j)` in the second-order set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BiMoments {
    pub e00: f64,
    pub e10: f64,
    pub e01: f64,
    pub e11: f64,
    pub e20: f64,
    pub e02: f64,
}

impl BiMoments {
    fn values(&self) -> [f64; 6] {
        [self.e00, self.e10, self.e01, self.e11, self.e20, self.e02]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BiMomentSet {
    pub at: (f64, f64),
    /// Printed closed forms, index slips included.
    pub closed: BiMoments,
    /// Products of univariate exact-summation moments.
    pub oracle: BiMoments,
    pub max_discrepancy: f64,
}

pub fn bi_moments(config: &BivariateConfig, y1: f64, y2: f64) -> Result<BiMomentSet> {
    let (c1, c2) = (config.first(), config.second());
    let rho = config.rho();
    let (m1, l1) = (c1.m() as f64, c1.lambda());
    let (m2, l2) = (c2.m() as f64, c2.lambda());

    let e10 = closed_e1(m1, l1, rho, y1);
    // printed with m1, lambda1 in the slope of the second coordinate
    let e01 = (m1 + 2.0 * (l1 - 1.0)) / (m2 + 1.0) * y2
        + ((l2 + 1.0) * (rho + 1.0) + 1.0) / (2.0 * (rho + 1.0) * (m2 + 1.0));
    let closed = BiMoments {
        e00: 1.0,
        e10,
        e01,
        e11: e10 * closed_e1(m2, l2, rho, y2),
        e20: closed_e2(m1, l1, rho, y1),
        e02: closed_e2(m2, l2, rho, y2),
    };

    let a = [
        oracle_moment(c1, y1, 0)?,
        oracle_moment(c1, y1, 1)?,
        oracle_moment(c1, y1, 2)?,
    ];
    let b = [
        oracle_moment(c2, y2, 0)?,
        oracle_moment(c2, y2, 1)?,
        oracle_moment(c2, y2, 2)?,
    ];
    let oracle = BiMoments {
        e00: a[0] * b[0],
        e10: a[1] * b[0],
        e01: a[0] * b[1],
        e11: a[1] * b[1],
        e20: a[2] * b[0],
        e02: a[0] * b[2],
    };
    let max_discrepancy = closed
        .values()
        .iter()
        .zip(oracle.values())
        .fold(0.0f64, |acc, (c, o)| acc.max((c - o).abs()));
    Ok(BiMomentSet {
        at: (y1, y2),
        closed,
        oracle,
        max_discrepancy,
    })
}

/// Central mixed moments `K((s - y1)^i (t - y2)^j)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BiCentralMoments {
    pub eta00: f64,
    pub eta10: f64,
    pub eta01: f64,
    pub eta11: f64,
    pub eta20: f64,
    pub eta02: f64,
}

impl BiCentralMoments {
    pub fn values(&self) -> [f64; 6] {
        [
            self.eta00, self.eta10, self.eta01, self.eta11, self.eta20, self.eta02,
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BiCentralMomentSet {
    pub at: (f64, f64),
    pub closed: BiCentralMoments,
    pub oracle: BiCentralMoments,
    pub max_discrepancy: f64,
}

pub fn bi_central_moments(
    config: &BivariateConfig,
    y1: f64,
    y2: f64,
) -> Result<BiCentralMomentSet> {
    let (c1, c2) = (config.first(), config.second());
    let rho = config.rho();
    let (m1, l1) = (c1.m() as f64, c1.lambda());
    let (m2, l2) = (c2.m() as f64, c2.lambda());

    let eta10 = closed_psi1(m1, l1, rho, y1);
    // printed with lambda1 in the slope of the second coordinate
    let eta01 = (2.0 * l1 - 3.0) / (m2 + 1.0) * y2
        + ((l2 + 1.0) * (rho + 1.0) + 1.0) / ((rho + 1.0) * (m2 + 1.0));
    let closed = BiCentralMoments {
        eta00: 1.0,
        eta10,
        eta01,
        eta11: eta10 * eta01,
        eta20: closed_psi2(m1, l1, rho, y1),
        // printed with m1 in the linear coefficient
        eta02: closed_psi2_parts(m2, m1, l2, rho, y2),
    };

    let raw = bi_moments(config, y1, y2)?.oracle;
    let eta10 = central_moments(c1, y1)?.oracle_psi1;
    let eta01 = central_moments(c2, y2)?.oracle_psi1;
    let oracle = BiCentralMoments {
        eta00: raw.e00,
        eta10,
        eta01,
        eta11: eta10 * eta01,
        eta20: raw.e20 - 2.0 * y1 * raw.e10 + y1 * y1,
        eta02: raw.e02 - 2.0 * y2 * raw.e01 + y2 * y2,
    };
    let max_discrepancy = closed
        .values()
        .iter()
        .zip(oracle.values())
        .fold(0.0f64, |acc, (c, o)| acc.max((c - o).abs()));
    Ok(BiCentralMomentSet {
        at: (y1, y2),
        closed,
        oracle,
        max_discrepancy,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::TargetFunction;
    use crate::numerics::UnitQuadrature;
    use crate::operator::apply;

    #[test]
    fn rejects_mismatched_rho() {
        let a = OperatorConfig::new(5, 0, 0.5, 1.0).unwrap();
        let b = OperatorConfig::new(5, 0, 0.5, 2.0).unwrap();
        assert!(BivariateConfig::new(a, b).is_err());
    }

    #[test]
    fn constants_and_products() {
        let cfg = BivariateConfig::symmetric(10, 0, 0.5, 1.0).unwrap();
        let one = BivariateTarget::parse("const:1").unwrap();
        assert!((apply_bi(&cfg, &one, 0.2, 0.9).unwrap() - 1.0).abs() < 1e-12);
        let st =
            BivariateTarget::separable(TargetFunction::monomial(1), TargetFunction::monomial(1));
        assert!((apply_bi(&cfg, &st, 0.5, 0.5).unwrap() - 0.25).abs() < 1e-9);
        // same product through the generic tensor path
        let generic = BivariateTarget::parse("y1*y2").unwrap();
        assert!((apply_bi(&cfg, &generic, 0.5, 0.5).unwrap() - 0.25).abs() < 1e-9);
    }

    #[test]
    fn generic_path_matches_separable_path() {
        let a = OperatorConfig::new(6, 2, 0.3, 0.5).unwrap();
        let b = OperatorConfig::new(4, 1, 0.8, 0.5).unwrap();
        let quad = UnitQuadrature::new(8, 2, 6).unwrap();
        let op = BivariateOperator::with_operators(
            KantorovichOperator::with_quadrature(a, quad.clone()),
            KantorovichOperator::with_quadrature(b, quad),
        )
        .unwrap();
        let sep =
            BivariateTarget::separable(TargetFunction::monomial(2), TargetFunction::monomial(3));
        let gen = BivariateTarget::parse("y1^2 * y2^3").unwrap();
        for (y1, y2) in [(0.0, 0.0), (0.3, 0.8), (1.0, 0.5)] {
            let s = op.apply(&sep, y1, y2).unwrap();
            let g = op.apply(&gen, y1, y2).unwrap();
            assert!((s - g).abs() < 1e-12, "{s} vs {g}");
        }
    }

    #[test]
    fn separable_equals_product_of_univariate() {
        let a = OperatorConfig::new(8, 3, 0.25, 0.9).unwrap();
        let b = OperatorConfig::new(11, 0, 0.75, 0.9).unwrap();
        let cfg = BivariateConfig::new(a, b).unwrap();
        let f = TargetFunction::parse("y^3 - y + 2").unwrap();
        let g = TargetFunction::parse("2*y^2 + 1").unwrap();
        let sep = BivariateTarget::separable(f.clone(), g.clone());
        let v = apply_bi(&cfg, &sep, 0.35, 0.6).unwrap();
        let expected = apply(&a, &f, 0.35).unwrap() * apply(&b, &g, 0.6).unwrap();
        assert!((v - expected).abs() < 1e-10);
    }

    #[test]
    fn moment_sets() {
        let cfg = BivariateConfig::symmetric(10, 0, 0.5, 1.0).unwrap();
        let m = bi_moments(&cfg, 0.5, 0.5).unwrap();
        assert_eq!(m.closed.e00, 1.0);
        assert!((m.oracle.e00 - 1.0).abs() < 1e-12);
        assert!((m.oracle.e10 - 0.5).abs() < 1e-14);
        assert_eq!(m.oracle.e11, m.oracle.e10 * m.oracle.e01);
        assert!((m.closed.e10 - 0.5).abs() < 1e-15);

        let eta = bi_central_moments(&cfg, 0.5, 0.5).unwrap();
        assert!(eta.oracle.eta10.abs() < 1e-14);
        assert!((eta.oracle.eta00 - 1.0).abs() < 1e-12);
        assert!((eta.oracle.eta11 - eta.oracle.eta10 * eta.oracle.eta01).abs() < 1e-12);
    }

    #[test]
    fn printed_index_slips_show_in_the_audit() {
        let a = OperatorConfig::new(10, 0, 0.2, 1.0).unwrap();
        let b = OperatorConfig::new(30, 0, 0.9, 1.0).unwrap();
        let cfg = BivariateConfig::new(a, b).unwrap();
        let m = bi_moments(&cfg, 0.4, 0.7).unwrap();
        let correct = closed_e1(30.0, 0.9, 1.0, 0.7);
        assert!((m.closed.e01 - correct).abs() > 1e-3);
    }
}
