// Figures 1-3 as CSV and SVG files in a scratch directory.

use skl::report::{self, CurveSpec, SurfaceSpec};

pub fn run_example() -> skl::Result<()> {
    let dir = std::env::temp_dir().join(format!("skl-figures-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|source| skl::Error::Io {
        path: dir.clone(),
        source,
    })?;

    let curves = CurveSpec::figure_default()?;
    let surfaces = SurfaceSpec::figure_default()?;
    for artifact in [
        report::figure1(&curves)?,
        report::figure2(&curves)?,
        report::figure3(&surfaces)?,
    ] {
        for (name, table) in &artifact.tables {
            table.write(&dir.join(name))?;
            println!("{name}: {} rows", table.rows.len());
        }
        for (name, svg) in &artifact.svgs {
            std::fs::write(dir.join(name), svg).map_err(|source| skl::Error::Io {
                path: dir.join(name),
                source,
            })?;
            println!("{name}: {} bytes", svg.len());
        }
    }
    println!("written to {}", dir.display());
    let _ = std::fs::remove_dir_all(&dir);
    Ok(())
}

#[allow(dead_code)]
fn main() -> skl::Result<()> {
    run_example()
}
