// Printed moment formulas against the exact-summation oracle.

use skl::{bi_moments, central_moments, moments_closed, BivariateConfig, OperatorConfig};

pub fn run_example() -> skl::Result<()> {
    let config = OperatorConfig::new(10, 0, 0.5, 1.0)?;
    let raw = moments_closed(&config, 0.5)?;
    println!("e1 closed {:.12} oracle {:.12}", raw.e1, raw.oracle_e1);
    println!("e2 closed {:.12} oracle {:.12}", raw.e2, raw.oracle_e2);

    let shifted = OperatorConfig::new(20, 5, 0.5, 0.1)?;
    let c = central_moments(&shifted, 0.5)?;
    println!(
        "q=5: psi2 closed {:.6e} oracle {:.6e}, identity residual {:.1e}",
        c.psi2, c.oracle_psi2, c.identity_residual
    );
    assert!(c.identity_residual < 1e-12);

    let bi = bi_moments(&BivariateConfig::symmetric(10, 5, 0.5, 0.9)?, 0.3, 0.7)?;
    println!(
        "bivariate raw moments: max closed-vs-oracle gap {:.3e}",
        bi.max_discrepancy
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> skl::Result<()> {
    run_example()
}
