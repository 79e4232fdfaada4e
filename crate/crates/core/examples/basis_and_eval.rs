// Basis weights and one operator evaluation.

use skl::{basis_row, BasisParams, KantorovichOperator, OperatorConfig, TargetFunction};

pub fn run_example() -> skl::Result<()> {
    let params = BasisParams::new(10, 5, 0.5)?;
    let row = basis_row(&params, 0.3)?;
    let total: f64 = row.iter().sum();
    println!(
        "m=10 q=5 lambda=0.5: {} weights at y=0.3, sum {total:.15}",
        row.len()
    );
    assert!((total - 1.0).abs() < 1e-12);

    let op = KantorovichOperator::new(OperatorConfig::new(20, 5, 0.5, 0.1)?);
    let f = TargetFunction::parse("y^3 - 5*y^2 + 6*y + 2")?;
    for u in [0.1, 0.5, 1.0] {
        let k = op.apply(&f, u)?;
        println!(
            "K(f; {u}) = {k:.10}  |K - f| = {:.10}",
            (k - f.eval(u)).abs()
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> skl::Result<()> {
    run_example()
}
