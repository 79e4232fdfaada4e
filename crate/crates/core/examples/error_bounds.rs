// Pointwise error bounds of Theorems 3.3, 4.1, 7.1 and 7.2.

use skl::{
    apply, bound_thm33, bound_thm41, bound_thm71, bound_thm72, BivariateConfig, BivariateTarget,
    LipschitzParams, OperatorConfig, TargetFunction,
};

pub fn run_example() -> skl::Result<()> {
    let config = OperatorConfig::new(20, 5, 0.5, 0.1)?;
    let f = TargetFunction::parse("table1-poly")?;
    let u = 0.5;
    let error = (apply(&config, &f, u)? - f.eval(u)).abs();
    let b33 = bound_thm33(&config, &f, u)?;
    println!(
        "u = {u}: error {error:.10} <= 2 omega(f; {:.6}) = {:.10}",
        b33.delta, b33.bound
    );
    assert!(error <= b33.bound);

    let lip = LipschitzParams::weighted(6.0, 1.0, 1.0, 1.0);
    println!(
        "weighted Lipschitz bound: {:.10}",
        bound_thm41(&config, &lip, u)?
    );

    let bi = BivariateConfig::symmetric(20, 5, 0.5, 0.9)?;
    let g = BivariateTarget::benchmark();
    let b71 = bound_thm71(&bi, &g, 0.5, 0.5)?;
    println!(
        "partial-moduli bound at (0.5, 0.5): {:.6} (d1 = {:.4})",
        b71.bound, b71.d1
    );
    let maximal = LipschitzParams::maximal(1.0, [1.0, 1.0], vec![0.0, 1.0]);
    println!(
        "maximal-class bound at (0.5, 0.5): {:.6}",
        bound_thm72(&bi, &maximal, 0.5, 0.5)?
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> skl::Result<()> {
    run_example()
}
