// Tensor-product operator on y1^3 y2^2 and a non-separable target.

use skl::report::{sup_error, surface_table};
use skl::{BivariateConfig, BivariateOperator, BivariateTarget, Grid};

pub fn run_example() -> skl::Result<()> {
    let g = BivariateTarget::parse("fig3-poly")?;
    let grid = Grid::unit(21)?;
    for m in [10, 20] {
        let config = BivariateConfig::symmetric(m, 5, 0.5, 0.9)?;
        let table = surface_table(&config, &g, &grid)?;
        println!("m = {m}: sup error on 21x21 grid {:.6}", sup_error(&table));
    }

    let config = BivariateConfig::symmetric(6, 1, 0.5, 1.0)?;
    let op = BivariateOperator::new(config);
    let h = BivariateTarget::parse("y1*y2 + y1^2")?;
    println!(
        "K(y1 y2 + y1^2; 0.4, 0.6) = {:.10}",
        op.apply(&h, 0.4, 0.6)?
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> skl::Result<()> {
    run_example()
}
