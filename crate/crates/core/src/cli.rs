//! The `skl` command line: flag parsing, config files, and command handlers.
//!
//! Precedence is flags, then the `--config` file, then per-command defaults.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Parser, ValueEnum};

use crate::analysis::{bound_thm33, bound_thm41, bound_thm71, bound_thm72, LipschitzParams};
use crate::error::{Error, Result};
use crate::function::{BivariateTarget, TargetFunction};
use crate::numerics::Grid;
use crate::operator::{central_moments, moments_closed, KantorovichOperator, OperatorConfig};
use crate::operator_bi::{BivariateConfig, BivariateOperator};
use crate::report::{self, Artifact, CurveSpec, SurfaceSpec};
use crate::table::{write_text, CsvTable};
use crate::verify::{self, Level};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Eval,
    Moments,
    Table1,
    Figure,
    Bivariate,
    Bounds,
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    Csv,
    Svg,
    #[default]
    Both,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Format::from_str_ci(s)
    }
}

impl Format {
    fn from_str_ci(s: &str) -> Result<Self> {
        <Format as ValueEnum>::from_str(s, true)
            .map_err(|_| Error::Parse(format!("format must be csv, svg or both, got {s:?}")))
    }

    fn csv(self) -> bool {
        matches!(self, Format::Csv | Format::Both)
    }

    fn svg(self) -> bool {
        matches!(self, Format::Svg | Format::Both)
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "skl",
    version,
    about = "Bernstein-Schurer-Kantorovich operators: evaluation, moments, error bounds and reproduction artifacts"
)]
pub struct CliArgs {
    #[arg(value_enum)]
    pub command: Command,
    #[arg(long)]
    pub m: Option<u32>,
    /// Comma-separated ladder, e.g. 20,30,40
    #[arg(long = "m-list", value_delimiter = ',')]
    pub m_list: Option<Vec<u32>>,
    #[arg(long)]
    pub q: Option<u32>,
    #[arg(long, allow_negative_numbers = true)]
    pub lambda: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub rho: Option<f64>,
    /// table1-poly, fig3-poly, const:C, eK or an expression
    #[arg(long)]
    pub f: Option<String>,
    /// LO:HI:COUNT
    #[arg(long)]
    pub grid: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Allow points outside [0, 1]
    #[arg(long)]
    pub unchecked: bool,
    #[arg(long, allow_negative_numbers = true)]
    pub u: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub y1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub y2: Option<f64>,
    /// Bound to evaluate: 33, 41, 71 or 72
    #[arg(long)]
    pub thm: Option<u32>,
    /// Figure number: 1, 2 or 3
    #[arg(long)]
    pub id: Option<u32>,
    /// fast or full
    #[arg(long)]
    pub level: Option<String>,
    /// Flat `key = value` file
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Class constant M of the Lipschitz bounds
    #[arg(long = "lip-m")]
    pub lip_m: Option<f64>,
    #[arg(long)]
    pub k1: Option<f64>,
    #[arg(long)]
    pub k2: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    /// tau1,tau2
    #[arg(long, value_delimiter = ',')]
    pub tau: Option<Vec<f64>>,
    /// Comma-separated reference set E
    #[arg(long = "e-set", value_delimiter = ',', allow_negative_numbers = true)]
    pub e_set: Option<Vec<f64>>,
}

const CONFIG_KEYS: [&str; 22] = [
    "m",
    "m-list",
    "q",
    "lambda",
    "rho",
    "f",
    "grid",
    "out",
    "format",
    "unchecked",
    "u",
    "y1",
    "y2",
    "thm",
    "id",
    "level",
    "lip-m",
    "k1",
    "k2",
    "gamma",
    "tau",
    "e-set",
];

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("config line {}: expected key = value", n + 1)))?;
        let key = key.trim().replace('_', "-");
        if !CONFIG_KEYS.contains(&key.as_str()) {
            return Err(Error::Parse(format!(
                "config line {}: unknown key {key:?}",
                n + 1
            )));
        }
        map.insert(key, value.trim().to_string());
    }
    Ok(map)
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Parse(format!("bad value {value:?} for {key}")))
}

fn parse_list<T: FromStr>(key: &str, value: &str) -> Result<Vec<T>> {
    value
        .split(',')
        .map(|v| parse_value(key, v.trim()))
        .collect()
}

/// `LO:HI:COUNT`.
pub fn parse_grid(text: &str) -> Result<Grid> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::Parse(format!(
            "grid must be LO:HI:COUNT, got {text:?}"
        )));
    }
    Grid::new(
        parse_value("grid", parts[0])?,
        parse_value("grid", parts[1])?,
        parse_value("grid", parts[2])?,
    )
}

/// Fully resolved invocation.
#[derive(Debug, Clone, Default)]
pub struct RunConfig {
    pub m: Option<u32>,
    pub m_list: Option<Vec<u32>>,
    pub q: Option<u32>,
    pub lambda: Option<f64>,
    pub rho: Option<f64>,
    pub f: Option<String>,
    pub grid: Option<Grid>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub unchecked: bool,
    pub u: Option<f64>,
    pub y1: Option<f64>,
    pub y2: Option<f64>,
    pub thm: Option<u32>,
    pub id: Option<u32>,
    pub level: Option<Level>,
    pub lip_m: Option<f64>,
    pub k1: Option<f64>,
    pub k2: Option<f64>,
    pub gamma: Option<f64>,
    pub tau: Option<Vec<f64>>,
    pub e_set: Option<Vec<f64>>,
}

impl RunConfig {
    /// Merges flags over the config file.
    pub fn resolve(args: &CliArgs, file: &BTreeMap<String, String>) -> Result<Self> {
        fn pick<T: FromStr + Clone>(
            flag: &Option<T>,
            file: &BTreeMap<String, String>,
            key: &str,
        ) -> Result<Option<T>> {
            match (flag, file.get(key)) {
                (Some(v), _) => Ok(Some(v.clone())),
                (None, Some(s)) => parse_value(key, s).map(Some),
                (None, None) => Ok(None),
            }
        }
        fn pick_list<T: FromStr + Clone>(
            flag: &Option<Vec<T>>,
            file: &BTreeMap<String, String>,
            key: &str,
        ) -> Result<Option<Vec<T>>> {
            match (flag, file.get(key)) {
                (Some(v), _) => Ok(Some(v.clone())),
                (None, Some(s)) => parse_list(key, s).map(Some),
                (None, None) => Ok(None),
            }
        }

        if args.m.is_some() && args.m_list.is_some() {
            return Err(Error::Usage("give either --m or --m-list, not both".into()));
        }
        // --m and --m-list share one slot: a flag for either hides both file keys
        let (m, m_list) = if args.m.is_some() || args.m_list.is_some() {
            (args.m, args.m_list.clone())
        } else {
            let m = pick(&None::<u32>, file, "m")?;
            let list = pick_list(&None::<Vec<u32>>, file, "m-list")?;
            if m.is_some() && list.is_some() {
                return Err(Error::Usage("config sets both m and m-list".into()));
            }
            (m, list)
        };
        let grid = match (&args.grid, file.get("grid")) {
            (Some(g), _) => Some(parse_grid(g)?),
            (None, Some(g)) => Some(parse_grid(g)?),
            (None, None) => None,
        };
        let level = match (&args.level, file.get("level")) {
            (Some(l), _) | (None, Some(l)) => Some(l.parse::<Level>()?),
            (None, None) => None,
        };
        let format = match (args.format, file.get("format")) {
            (Some(f), _) => Some(f),
            (None, Some(s)) => Some(Format::from_str_ci(s)?),
            (None, None) => None,
        };
        let unchecked = args.unchecked
            || file
                .get("unchecked")
                .map(|v| parse_value::<bool>("unchecked", v))
                .transpose()?
                .unwrap_or(false);
        Ok(Self {
            m,
            m_list,
            q: pick(&args.q, file, "q")?,
            lambda: pick(&args.lambda, file, "lambda")?,
            rho: pick(&args.rho, file, "rho")?,
            f: pick(&args.f, file, "f")?,
            grid,
            out: pick(&args.out, file, "out")?,
            format,
            unchecked,
            u: pick(&args.u, file, "u")?,
            y1: pick(&args.y1, file, "y1")?,
            y2: pick(&args.y2, file, "y2")?,
            thm: pick(&args.thm, file, "thm")?,
            id: pick(&args.id, file, "id")?,
            level,
            lip_m: pick(&args.lip_m, file, "lip-m")?,
            k1: pick(&args.k1, file, "k1")?,
            k2: pick(&args.k2, file, "k2")?,
            gamma: pick(&args.gamma, file, "gamma")?,
            tau: pick_list(&args.tau, file, "tau")?,
            e_set: pick_list(&args.e_set, file, "e-set")?,
        })
    }

    fn single_m(&self, default: u32) -> Result<u32> {
        match (&self.m, &self.m_list) {
            (Some(m), _) => Ok(*m),
            (None, Some(list)) if list.len() == 1 => Ok(list[0]),
            (None, Some(_)) => Err(Error::Usage("this command takes a single --m".into())),
            (None, None) => Ok(default),
        }
    }

    fn ladder(&self, default: &[u32]) -> Result<Vec<u32>> {
        let list = match (&self.m, &self.m_list) {
            (Some(m), _) => vec![*m],
            (None, Some(list)) => list.clone(),
            (None, None) => default.to_vec(),
        };
        if list.is_empty() {
            return Err(Error::Usage("m-list must not be empty".into()));
        }
        Ok(list)
    }

    fn operator(&self, m: u32, defaults: Defaults) -> Result<OperatorConfig> {
        let (q, lambda, rho) = (
            self.q.unwrap_or(defaults.q),
            self.lambda.unwrap_or(defaults.lambda),
            self.rho.unwrap_or(defaults.rho),
        );
        if self.unchecked {
            OperatorConfig::new_unchecked(m, q, lambda, rho)
        } else {
            OperatorConfig::new(m, q, lambda, rho)
        }
    }

    fn univariate_target(&self) -> Result<TargetFunction> {
        TargetFunction::parse(self.f.as_deref().unwrap_or("table1-poly"))
    }

    fn bivariate_target(&self) -> Result<BivariateTarget> {
        BivariateTarget::parse(self.f.as_deref().unwrap_or("fig3-poly"))
    }

    /// `--u` or `--grid`, exactly one.
    fn points(&self, what: &str) -> Result<Vec<f64>> {
        match (self.u, &self.grid) {
            (Some(_), Some(_)) => Err(Error::Usage(format!(
                "{what}: give --u or --grid, not both"
            ))),
            (Some(u), None) => Ok(vec![u]),
            (None, Some(g)) => Ok(g.points().to_vec()),
            (None, None) => Err(Error::Usage(format!("{what} needs --u or --grid"))),
        }
    }

    /// `(y1, y2)` pairs from `--y1 --y2` or `grid x grid`.
    fn pairs(&self, what: &str) -> Result<Vec<(f64, f64)>> {
        match (self.y1, self.y2, &self.grid) {
            (Some(_), Some(_), Some(_)) => Err(Error::Usage(format!(
                "{what}: give --y1/--y2 or --grid, not both"
            ))),
            (Some(a), Some(b), None) => Ok(vec![(a, b)]),
            (None, None, Some(g)) => Ok(g
                .points()
                .iter()
                .flat_map(|&s| g.points().iter().map(move |&t| (s, t)))
                .collect()),
            _ => Err(Error::Usage(format!(
                "{what} needs both --y1 and --y2, or --grid"
            ))),
        }
    }

    fn csv_only(&self, what: &str) -> Result<()> {
        if self.format == Some(Format::Svg) {
            return Err(Error::Usage(format!("{what} only writes CSV")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy)]
struct Defaults {
    q: u32,
    lambda: f64,
    rho: f64,
}

const UNIVARIATE: Defaults = Defaults {
    q: report::TABLE1_Q,
    lambda: report::TABLE1_LAMBDA,
    rho: report::TABLE1_RHO,
};

const BIVARIATE: Defaults = Defaults {
    q: report::FIGURE3_Q,
    lambda: report::FIGURE3_LAMBDA,
    rho: report::FIGURE3_RHO,
};

/// What a command produced.
pub enum Outcome {
    Done,
    VerifyFailed,
}

struct Io<'a> {
    stdout: &'a mut dyn Write,
    stderr: &'a mut dyn Write,
}

impl Io<'_> {
    fn out(&mut self, text: &str) -> Result<()> {
        self.stdout
            .write_all(text.as_bytes())
            .map_err(|source| Error::Io {
                path: PathBuf::from("<stdout>"),
                source,
            })
    }

    fn note(&mut self, text: &str) {
        let _ = writeln!(self.stderr, "{text}");
    }

    /// CSV to `--out` if given, else stdout.
    fn emit(&mut self, table: &CsvTable, out: Option<&Path>) -> Result<()> {
        match out {
            Some(path) => {
                table.write(path)?;
                self.note(&format!("wrote {}", path.display()));
                Ok(())
            }
            None => self.out(&table.to_csv()),
        }
    }

    fn emit_artifact(&mut self, artifact: &Artifact, dir: &Path, format: Format) -> Result<()> {
        std::fs::create_dir_all(dir).map_err(|source| Error::Io {
            path: dir.to_path_buf(),
            source,
        })?;
        if format.csv() {
            for (name, table) in &artifact.tables {
                let path = dir.join(name);
                table.write(&path)?;
                self.note(&format!("wrote {}", path.display()));
            }
        }
        if format.svg() {
            for (name, svg) in &artifact.svgs {
                let path = dir.join(name);
                write_text(&path, svg)?;
                self.note(&format!("wrote {}", path.display()));
            }
        }
        Ok(())
    }
}

fn cmd_eval(cfg: &RunConfig, io: &mut Io) -> Result<Outcome> {
    cfg.csv_only("eval")?;
    let op = KantorovichOperator::new(cfg.operator(cfg.single_m(20)?, UNIVARIATE)?);
    let f = cfg.univariate_target()?;
    let points = cfg.points("eval")?;
    let values = op.apply_many(&f, &points)?;
    let mut table = CsvTable::new(["x", "K", "f", "error"]);
    for (&x, k) in points.iter().zip(values) {
        let fx = f.eval(x);
        table.push(vec![x, k, fx, (k - fx).abs()]);
    }
    io.emit(&table, cfg.out.as_deref())?;
    Ok(Outcome::Done)
}

fn cmd_moments(cfg: &RunConfig, io: &mut Io) -> Result<Outcome> {
    cfg.csv_only("moments")?;
    let op = cfg.operator(cfg.single_m(20)?, UNIVARIATE)?;
    let mut table = CsvTable::new([
        "x",
        "e0",
        "e1",
        "e2",
        "oracle_e0",
        "oracle_e1",
        "oracle_e2",
        "psi1",
        "psi2",
        "oracle_psi1",
        "oracle_psi2",
        "max_gap",
    ]);
    for u in cfg.points("moments")? {
        let raw = moments_closed(&op, u)?;
        let c = central_moments(&op, u)?;
        let gap = raw
            .max_discrepancy
            .max((c.psi1 - c.oracle_psi1).abs())
            .max((c.psi2 - c.oracle_psi2).abs());
        table.push(vec![
            u,
            raw.e0,
            raw.e1,
            raw.e2,
            raw.oracle_e0,
            raw.oracle_e1,
            raw.oracle_e2,
            c.psi1,
            c.psi2,
            c.oracle_psi1,
            c.oracle_psi2,
            gap,
        ]);
    }
    io.emit(&table, cfg.out.as_deref())?;
    Ok(Outcome::Done)
}

fn cmd_table1(cfg: &RunConfig, io: &mut Io) -> Result<Outcome> {
    cfg.csv_only("table1")?;
    let report = report::table1()?;
    io.emit(&report.table, cfg.out.as_deref())?;
    io.note(&report.summary());
    Ok(Outcome::Done)
}

fn curve_spec(cfg: &RunConfig) -> Result<CurveSpec> {
    let mut spec = CurveSpec::figure_default()?;
    spec.m_list = cfg.ladder(&report::TABLE1_M)?;
    spec.q = cfg.q.unwrap_or(spec.q);
    spec.lambda = cfg.lambda.unwrap_or(spec.lambda);
    spec.rho = cfg.rho.unwrap_or(spec.rho);
    spec.f = cfg.univariate_target()?;
    if let Some(g) = &cfg.grid {
        spec.grid = g.clone();
    }
    spec.unchecked = cfg.unchecked;
    Ok(spec)
}

fn surface_spec(cfg: &RunConfig) -> Result<SurfaceSpec> {
    let mut spec = SurfaceSpec::figure_default()?;
    spec.m_list = cfg.ladder(&report::FIGURE3_M)?;
    spec.q = cfg.q.unwrap_or(spec.q);
    spec.lambda = cfg.lambda.unwrap_or(spec.lambda);
    spec.rho = cfg.rho.unwrap_or(spec.rho);
    spec.g = cfg.bivariate_target()?;
    if let Some(g) = &cfg.grid {
        spec.grid = g.clone();
    }
    spec.unchecked = cfg.unchecked;
    Ok(spec)
}

fn out_dir(cfg: &RunConfig) -> PathBuf {
    cfg.out.clone().unwrap_or_else(|| PathBuf::from("."))
}

fn cmd_figure(cfg: &RunConfig, io: &mut Io) -> Result<Outcome> {
    let artifact = match cfg.id {
        Some(1) => report::figure1(&curve_spec(cfg)?)?,
        Some(2) => report::figure2(&curve_spec(cfg)?)?,
        Some(3) => {
            let spec = surface_spec(cfg)?;
            let artifact = report::figure3(&spec)?;
            for ((_, table), m) in artifact.tables.iter().zip(&spec.m_list) {
                io.note(&format!(
                    "m = {m}: sup error {}",
                    crate::table::fmt_sig(report::sup_error(table))
                ));
            }
            artifact
        }
        Some(other) => {
            return Err(Error::Usage(format!(
                "figure id must be 1, 2 or 3, got {other}"
            )))
        }
        None => return Err(Error::Usage("figure needs --id 1|2|3".into())),
    };
    io.emit_artifact(&artifact, &out_dir(cfg), cfg.format.unwrap_or_default())?;
    Ok(Outcome::Done)
}

fn cmd_bivariate(cfg: &RunConfig, io: &mut Io) -> Result<Outcome> {
    let spec = surface_spec(cfg)?;
    if cfg.y1.is_none() && cfg.y2.is_none() {
        let artifact = report::surfaces(&spec, "surface")?;
        io.emit_artifact(&artifact, &out_dir(cfg), cfg.format.unwrap_or_default())?;
        return Ok(Outcome::Done);
    }
    cfg.csv_only("bivariate at a point")?;
    let (y1, y2) = match (cfg.y1, cfg.y2) {
        (Some(a), Some(b)) if cfg.grid.is_none() => (a, b),
        _ => {
            return Err(Error::Usage(
                "bivariate needs both --y1 and --y2 and no --grid".into(),
            ))
        }
    };
    let mut table = CsvTable::new(["m", "y1", "y2", "K", "f", "error"]);
    for &m in &spec.m_list {
        let one = cfg.operator(m, BIVARIATE)?;
        let op = BivariateOperator::new(BivariateConfig::new(one, one)?);
        let k = op.apply(&spec.g, y1, y2)?;
        let f = spec.g.eval(y1, y2);
        table.push(vec![m as f64, y1, y2, k, f, (k - f).abs()]);
    }
    io.emit(&table, cfg.out.as_deref())?;
    Ok(Outcome::Done)
}

fn cmd_bounds(cfg: &RunConfig, io: &mut Io) -> Result<Outcome> {
    cfg.csv_only("bounds")?;
    let scale = cfg.lip_m.unwrap_or(1.0);
    let table = match cfg.thm.unwrap_or(33) {
        33 => {
            let op = cfg.operator(cfg.single_m(20)?, UNIVARIATE)?;
            let f = cfg.univariate_target()?;
            let k = KantorovichOperator::new(op);
            let mut t = CsvTable::new(crate::operator::ErrorTable::HEADER);
            for x in cfg.points("bounds --thm 33")? {
                let b = bound_thm33(&op, &f, x)?;
                t.push(vec![
                    x,
                    (k.apply(&f, x)? - f.eval(x)).abs(),
                    b.bound,
                    b.delta,
                ]);
            }
            t
        }
        41 => {
            let op = cfg.operator(cfg.single_m(20)?, UNIVARIATE)?;
            let f = cfg.univariate_target()?;
            let k = KantorovichOperator::new(op);
            let params = LipschitzParams::weighted(
                scale,
                cfg.k1.unwrap_or(1.0),
                cfg.k2.unwrap_or(1.0),
                cfg.gamma.unwrap_or(1.0),
            );
            let mut t = CsvTable::new(["x", "error", "bound_thm41"]);
            for x in cfg.points("bounds --thm 41")? {
                let b = bound_thm41(&op, &params, x)?;
                t.push(vec![x, (k.apply(&f, x)? - f.eval(x)).abs(), b]);
            }
            t
        }
        thm @ (71 | 72) => {
            let one = cfg.operator(cfg.single_m(20)?, BIVARIATE)?;
            let bcfg = BivariateConfig::new(one, one)?;
            let g = cfg.bivariate_target()?;
            let op = BivariateOperator::new(bcfg);
            let compiled = op.compile(&g)?;
            let pairs = cfg.pairs(&format!("bounds --thm {thm}"))?;
            if thm == 71 {
                let mut t = CsvTable::new(["y1", "y2", "error", "bound_thm71", "d1", "d2"]);
                for (y1, y2) in pairs {
                    let b = bound_thm71(&bcfg, &g, y1, y2)?;
                    let e = (compiled.evaluate(y1, y2)? - g.eval(y1, y2)).abs();
                    t.push(vec![y1, y2, e, b.bound, b.d1, b.d2]);
                }
                t
            } else {
                let tau = match cfg.tau.as_deref() {
                    None => [1.0, 1.0],
                    Some([t]) => [*t, *t],
                    Some([a, b]) => [*a, *b],
                    Some(_) => return Err(Error::Usage("--tau takes one or two values".into())),
                };
                let params = LipschitzParams::maximal(
                    scale,
                    tau,
                    cfg.e_set.clone().unwrap_or_else(|| vec![0.0]),
                );
                let mut t = CsvTable::new(["y1", "y2", "error", "bound_thm72"]);
                for (y1, y2) in pairs {
                    let b = bound_thm72(&bcfg, &params, y1, y2)?;
                    let e = (compiled.evaluate(y1, y2)? - g.eval(y1, y2)).abs();
                    t.push(vec![y1, y2, e, b]);
                }
                t
            }
        }
        other => {
            return Err(Error::Usage(format!(
                "--thm must be 33, 41, 71 or 72, got {other}"
            )))
        }
    };
    io.emit(&table, cfg.out.as_deref())?;
    Ok(Outcome::Done)
}

fn cmd_verify(cfg: &RunConfig, io: &mut Io) -> Result<Outcome> {
    let level = cfg.level.unwrap_or(Level::Fast);
    let report = match verify::run(level) {
        Ok(r) => r,
        Err(e) => {
            io.note(&format!("verification aborted: {e}"));
            return Ok(Outcome::VerifyFailed);
        }
    };
    io.out(&report.render())?;
    if let Some(path) = &cfg.out {
        write_text(path, &report.audit_csv())?;
        io.note(&format!("wrote {}", path.display()));
    }
    Ok(if report.passed() {
        Outcome::Done
    } else {
        Outcome::VerifyFailed
    })
}

pub fn execute(
    command: Command,
    cfg: &RunConfig,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<Outcome> {
    let mut io = Io { stdout, stderr };
    match command {
        Command::Eval => cmd_eval(cfg, &mut io),
        Command::Moments => cmd_moments(cfg, &mut io),
        Command::Table1 => cmd_table1(cfg, &mut io),
        Command::Figure => cmd_figure(cfg, &mut io),
        Command::Bivariate => cmd_bivariate(cfg, &mut io),
        Command::Bounds => cmd_bounds(cfg, &mut io),
        Command::Verify => cmd_verify(cfg, &mut io),
    }
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, S>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let args = match CliArgs::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = if code == 0 {
                write!(stdout, "{e}")
            } else {
                write!(stderr, "{e}")
            };
            return code;
        }
    };
    let file = match &args.config {
        None => Ok(BTreeMap::new()),
        Some(path) => std::fs::read_to_string(path)
            .map_err(|source| Error::Io {
                path: path.clone(),
                source,
            })
            .and_then(|text| parse_config(&text)),
    };
    let result = file
        .and_then(|file| RunConfig::resolve(&args, &file))
        .and_then(|cfg| execute(args.command, &cfg, stdout, stderr));
    match result {
        Ok(Outcome::Done) => 0,
        Ok(Outcome::VerifyFailed) => 2,
        Err(e) => {
            let _ = writeln!(stderr, "skl: {e}");
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let mut full = vec!["skl"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn config_lines() {
        let map = parse_config("# c\nm = 20\nm_list=1,2 # trailing\n\n").unwrap();
        assert_eq!(map["m"], "20");
        assert_eq!(map["m-list"], "1,2");
        assert!(parse_config("bogus = 1").is_err());
        assert!(parse_config("m 20").is_err());
    }

    #[test]
    fn grid_syntax() {
        let g = parse_grid("0:1:11").unwrap();
        assert_eq!(g.count(), 11);
        assert!(parse_grid("0:1").is_err());
        assert!(parse_grid("1:0:5").is_err());
    }

    #[test]
    fn eval_constant() {
        let (code, out, _) = run_capture(&["eval", "--f", "const:1", "--m", "10", "--u", "0.3"]);
        assert_eq!(code, 0);
        let row: Vec<&str> = out.lines().nth(1).unwrap().split(',').collect();
        assert_eq!(&row[..3], ["0.3", "1", "1"]);
        assert!(row[3].parse::<f64>().unwrap() < 1e-15);
    }

    #[test]
    fn moments_symmetric_point() {
        let (code, out, _) = run_capture(&[
            "moments", "--m", "10", "--q", "0", "--lambda", "0.5", "--rho", "1", "--u", "0.5",
        ]);
        assert_eq!(code, 0);
        let t = CsvTable::parse(&out).unwrap();
        assert!((t.column("e1").unwrap()[0] - 0.5).abs() < 1e-12);
        assert!((t.column("oracle_e1").unwrap()[0] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(
            run_capture(&["eval", "--m", "3", "--m-list", "3,4", "--u", "0.5"]).0,
            1
        );
        assert_eq!(run_capture(&["eval", "--u", "0.5", "--grid", "0:1:3"]).0, 1);
        assert_eq!(run_capture(&["eval"]).0, 1);
        assert_eq!(run_capture(&["figure"]).0, 1);
        assert_eq!(run_capture(&["nonsense"]).0, 1);
        assert_eq!(run_capture(&["eval", "--u", "1.5"]).0, 1);
        assert_eq!(run_capture(&["bounds", "--thm", "12", "--u", "0.5"]).0, 1);
        assert_eq!(run_capture(&["eval", "--u", "0.5", "--format", "svg"]).0, 1);
    }

    #[test]
    fn bound_dominates_table_entry() {
        let (code, out, _) = run_capture(&["bounds", "--thm", "33", "--u", "0.5"]);
        assert_eq!(code, 0);
        let t = CsvTable::parse(&out).unwrap();
        assert!(t.column("bound_thm33").unwrap()[0] >= 0.1324072752);
        assert!((t.column("error").unwrap()[0] - 0.1324072752).abs() < 1e-9);
    }
}
