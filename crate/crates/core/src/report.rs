//! Table 1 and Figures 1-3 as CSV tables and SVG documents.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::function::{BivariateTarget, TargetFunction};
use crate::numerics::Grid;
use crate::operator::{KantorovichOperator, OperatorConfig};
use crate::operator_bi::{BivariateConfig, BivariateOperator};
use crate::svg::{Heatmap, LineChart, Series};
use crate::table::CsvTable;

/// Ladder of `m` used by Table 1 and Figures 1-2.
pub const TABLE1_M: [u32; 3] = [20, 30, 40];
pub const TABLE1_Q: u32 = 5;
pub const TABLE1_LAMBDA: f64 = 0.5;
pub const TABLE1_RHO: f64 = 0.1;

pub const FIGURE3_M: [u32; 2] = [10, 20];
pub const FIGURE3_Q: u32 = 5;
pub const FIGURE3_LAMBDA: f64 = 0.5;
pub const FIGURE3_RHO: f64 = 0.9;
pub const FIGURE3_POINTS: usize = 41;

/// Points per curve in Figures 1-2.
pub const FIGURE_CURVE_POINTS: usize = 501;

pub const EXACT_TIER: f64 = 1e-6;
pub const QUALITATIVE_TIER: f64 = 5e-3;

/// Published error table: `x` and `E(x)` for `m = 20, 30, 40`, verbatim.
pub const TABLE1_REFERENCE: [(&str, [&str; 3]); 10] = [
    ("0.1", ["0.2717372121", "0.1887446733", "0.1445360958"]),
    ("0.2", ["0.2677254718", "0.1886482134", "0.1455017073"]),
    ("0.3", ["0.2412358918", "0.1732429202", "0.1348677403"]),
    ("0.4", ["0.1951644878", "0.1444179547", "0.1140349291"]),
    ("0.5", ["0.1324072752", "0.1040624783", "0.0844040078"]),
    ("0.6", ["0.0558602697", "0.0540656519", "0.0473757106"]),
    ("0.7", ["0.0315805132", "0.0036833631", "0.0043507716"]),
    ("0.8", ["0.1270190580", "0.0672954058", "0.0432700748"]),
    ("0.9", ["0.2275593491", "0.134881315", "0.0940860947"]),
    ("1", ["0.3303053711", "0.2045519293", "0.1466965539"]),
];

/// The reference table as numbers, one row per abscissa.
pub fn table1_reference() -> Vec<[f64; 4]> {
    TABLE1_REFERENCE
        .iter()
        .map(|(x, cols)| {
            let p = |s: &str| s.parse::<f64>().expect("embedded reference value");
            [p(x), p(cols[0]), p(cols[1]), p(cols[2])]
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table1Report {
    /// Columns `x,E_n20,E_n30,E_n40`.
    pub table: CsvTable,
    pub max_deviation: f64,
    /// `(x, m)` of the largest deviation.
    pub worst_at: (f64, u32),
}

impl Table1Report {
    pub fn exact_tier(&self) -> bool {
        self.max_deviation <= EXACT_TIER
    }

    pub fn qualitative_tier(&self) -> bool {
        self.max_deviation <= QUALITATIVE_TIER
    }

    pub fn summary(&self) -> String {
        let tier = if self.exact_tier() {
            "exact"
        } else if self.qualitative_tier() {
            "qualitative"
        } else {
            "none"
        };
        format!(
            "max |computed - reference| = {:.3e} at x = {}, m = {}; tier: {tier} (exact <= {EXACT_TIER:e}, qualitative <= {QUALITATIVE_TIER:e})",
            self.max_deviation, self.worst_at.0, self.worst_at.1
        )
    }
}

fn table1_configs() -> Result<Vec<OperatorConfig>> {
    TABLE1_M
        .iter()
        .map(|&m| OperatorConfig::new(m, TABLE1_Q, TABLE1_LAMBDA, TABLE1_RHO))
        .collect()
}

/// Recomputes the 30 entries of Table 1 and compares them with the reference.
pub fn table1() -> Result<Table1Report> {
    let f = TargetFunction::parse("table1-poly")?;
    let reference = table1_reference();
    let xs: Vec<f64> = reference.iter().map(|r| r[0]).collect();
    let columns = table1_configs()?
        .par_iter()
        .map(|cfg| {
            let op = KantorovichOperator::new(*cfg);
            let k = op.apply_many(&f, &xs)?;
            Ok(xs
                .iter()
                .zip(k)
                .map(|(&x, k)| (k - f.eval(x)).abs())
                .collect())
        })
        .collect::<Result<Vec<Vec<f64>>>>()?;
    let mut table = CsvTable::new(["x", "E_n20", "E_n30", "E_n40"]);
    let mut max_deviation = 0.0;
    let mut worst_at = (xs[0], TABLE1_M[0]);
    for (r, reference_row) in reference.iter().enumerate() {
        let mut row = vec![xs[r]];
        for (c, column) in columns.iter().enumerate() {
            let dev = (column[r] - reference_row[c + 1]).abs();
            if dev > max_deviation {
                max_deviation = dev;
                worst_at = (xs[r], TABLE1_M[c]);
            }
            row.push(column[r]);
        }
        table.push(row);
    }
    Ok(Table1Report {
        table,
        max_deviation,
        worst_at,
    })
}

/// Rendered output of a figure or sweep: named CSV tables and SVG documents.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Artifact {
    pub tables: Vec<(String, CsvTable)>,
    pub svgs: Vec<(String, String)>,
}

impl Artifact {
    pub fn table(&self, name: &str) -> Option<&CsvTable> {
        self.tables.iter().find(|(n, _)| n == name).map(|(_, t)| t)
    }
}

/// Parameters of a univariate curve figure.
#[derive(Debug, Clone)]
pub struct CurveSpec {
    pub m_list: Vec<u32>,
    pub q: u32,
    pub lambda: f64,
    pub rho: f64,
    pub f: TargetFunction,
    pub grid: Grid,
    pub unchecked: bool,
}

impl CurveSpec {
    /// The configuration of Figures 1-2.
    pub fn figure_default() -> Result<Self> {
        Ok(Self {
            m_list: TABLE1_M.to_vec(),
            q: TABLE1_Q,
            lambda: TABLE1_LAMBDA,
            rho: TABLE1_RHO,
            f: TargetFunction::parse("table1-poly")?,
            grid: Grid::unit(FIGURE_CURVE_POINTS)?,
            unchecked: false,
        })
    }

    fn configs(&self) -> Result<Vec<OperatorConfig>> {
        if self.m_list.is_empty() {
            return Err(Error::Usage("m-list must not be empty".into()));
        }
        self.m_list
            .iter()
            .map(|&m| {
                if self.unchecked {
                    OperatorConfig::new_unchecked(m, self.q, self.lambda, self.rho)
                } else {
                    OperatorConfig::new(m, self.q, self.lambda, self.rho)
                }
            })
            .collect()
    }

    fn operator_values(&self) -> Result<Vec<Vec<f64>>> {
        self.configs()?
            .iter()
            .map(|cfg| KantorovichOperator::new(*cfg).apply_many(&self.f, self.grid.points()))
            .collect()
    }
}

fn series_from(table: &CsvTable, columns: &[&str]) -> Vec<Series> {
    let x = table.column("x").unwrap_or_default();
    columns
        .iter()
        .filter_map(|&c| {
            let y = table.column(c)?;
            Some(Series {
                name: c.to_string(),
                points: x.iter().copied().zip(y).collect(),
            })
        })
        .collect()
}

/// Figure 1: `f` and `K_m(f)` for each `m` of the ladder.
pub fn figure1(spec: &CurveSpec) -> Result<Artifact> {
    let values = spec.operator_values()?;
    let mut header = vec!["x".to_string(), "f".to_string()];
    header.extend(spec.m_list.iter().map(|m| format!("K_n{m}")));
    let mut table = CsvTable::new(header.clone());
    for (j, &x) in spec.grid.points().iter().enumerate() {
        let mut row = vec![x, spec.f.eval(x)];
        row.extend(values.iter().map(|col| col[j]));
        table.push(row);
    }
    let cols: Vec<&str> = header[1..].iter().map(String::as_str).collect();
    let chart = LineChart {
        title: "Approximation by the operator".into(),
        x_label: "x".into(),
        y_label: "value".into(),
        series: series_from(&table.quantized(), &cols),
    };
    Ok(Artifact {
        tables: vec![("figure1.csv".into(), table)],
        svgs: vec![("figure1.svg".into(), chart.render())],
    })
}

/// Figure 2: `|K_m(f; x) - f(x)|` for each `m` of the ladder.
pub fn figure2(spec: &CurveSpec) -> Result<Artifact> {
    let values = spec.operator_values()?;
    let mut header = vec!["x".to_string()];
    header.extend(spec.m_list.iter().map(|m| format!("E_n{m}")));
    let mut table = CsvTable::new(header.clone());
    for (j, &x) in spec.grid.points().iter().enumerate() {
        let fx = spec.f.eval(x);
        let mut row = vec![x];
        row.extend(values.iter().map(|col| (col[j] - fx).abs()));
        table.push(row);
    }
    let cols: Vec<&str> = header[1..].iter().map(String::as_str).collect();
    let chart = LineChart {
        title: "Error of the operator".into(),
        x_label: "x".into(),
        y_label: "|K(f;x) - f(x)|".into(),
        series: series_from(&table.quantized(), &cols),
    };
    Ok(Artifact {
        tables: vec![("figure2.csv".into(), table)],
        svgs: vec![("figure2.svg".into(), chart.render())],
    })
}

/// Parameters of a bivariate surface sweep.
#[derive(Debug, Clone)]
pub struct SurfaceSpec {
    pub m_list: Vec<u32>,
    pub q: u32,
    pub lambda: f64,
    pub rho: f64,
    pub g: BivariateTarget,
    pub grid: Grid,
    pub unchecked: bool,
}

impl SurfaceSpec {
    /// The configuration of Figure 3.
    pub fn figure_default() -> Result<Self> {
        Ok(Self {
            m_list: FIGURE3_M.to_vec(),
            q: FIGURE3_Q,
            lambda: FIGURE3_LAMBDA,
            rho: FIGURE3_RHO,
            g: BivariateTarget::benchmark(),
            grid: Grid::unit(FIGURE3_POINTS)?,
            unchecked: false,
        })
    }

    fn config(&self, m: u32) -> Result<BivariateConfig> {
        let one = if self.unchecked {
            OperatorConfig::new_unchecked(m, self.q, self.lambda, self.rho)?
        } else {
            OperatorConfig::new(m, self.q, self.lambda, self.rho)?
        };
        BivariateConfig::new(one, one)
    }
}

/// Columns `y1,y2,K,f,error`, `y1` outer and `y2` inner.
pub fn surface_table(
    config: &BivariateConfig,
    g: &BivariateTarget,
    grid: &Grid,
) -> Result<CsvTable> {
    let op = BivariateOperator::new(*config);
    let compiled = op.compile(g)?;
    let pairs: Vec<(f64, f64)> = grid
        .points()
        .iter()
        .flat_map(|&s| grid.points().iter().map(move |&t| (s, t)))
        .collect();
    let rows = pairs
        .par_iter()
        .map(|&(s, t)| {
            let k = compiled.evaluate(s, t)?;
            let f = g.eval(s, t);
            Ok(vec![s, t, k, f, (k - f).abs()])
        })
        .collect::<Result<Vec<_>>>()?;
    let mut table = CsvTable::new(["y1", "y2", "K", "f", "error"]);
    rows.into_iter().for_each(|r| table.push(r));
    Ok(table)
}

/// Largest value of the `error` column.
pub fn sup_error(table: &CsvTable) -> f64 {
    table
        .column("error")
        .unwrap_or_default()
        .into_iter()
        .fold(0.0, f64::max)
}

fn error_heatmap(table: &CsvTable, grid: &Grid, m: u32) -> String {
    let q = table.quantized();
    Heatmap {
        title: format!("Bivariate error, m = {m}"),
        x_label: "y1".into(),
        y_label: "y2".into(),
        xs: grid.points().to_vec(),
        ys: grid.points().to_vec(),
        values: q.column("error").unwrap_or_default(),
    }
    .render()
}

/// One surface CSV per `m` and a heatmap of the error for the largest `m`.
pub fn surfaces(spec: &SurfaceSpec, stem: &str) -> Result<Artifact> {
    if spec.m_list.is_empty() {
        return Err(Error::Usage("m-list must not be empty".into()));
    }
    let mut artifact = Artifact::default();
    for &m in &spec.m_list {
        let table = surface_table(&spec.config(m)?, &spec.g, &spec.grid)?;
        artifact.tables.push((format!("{stem}_m{m}.csv"), table));
    }
    let (last_m, last) = spec
        .m_list
        .iter()
        .zip(&artifact.tables)
        .max_by_key(|(m, _)| **m)
        .map(|(m, (_, t))| (*m, t))
        .expect("non-empty ladder");
    let svg = error_heatmap(last, &spec.grid, last_m);
    artifact
        .svgs
        .push((format!("{stem}_m{last_m}_error.svg"), svg));
    Ok(artifact)
}

/// Figure 3: surfaces for `m = 10, 20` and the `m = 20` error heatmap.
pub fn figure3(spec: &SurfaceSpec) -> Result<Artifact> {
    surfaces(spec, "figure3")
}
