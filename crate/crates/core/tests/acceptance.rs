//! Acceptance criteria 1-8, one status line each. Exits non-zero on FAIL.

use std::time::Instant;

use skl::report;
use skl::verify::{self, InvariantResult};
use skl::{BivariateConfig, BivariateTarget, Grid, TargetFunction};

#[derive(PartialEq)]
enum Status {
    Pass,
    /// The criterion's absolute number is unreachable; the checked substitute passed.
    Deviation,
    Fail,
}

struct Line {
    id: u32,
    name: &'static str,
    status: Status,
    detail: String,
}

fn status(ok: bool) -> Status {
    if ok {
        Status::Pass
    } else {
        Status::Fail
    }
}

fn describe(r: &InvariantResult) -> String {
    format!(
        "{} cases, worst {:.3e} vs {:.1e}",
        r.cases, r.worst, r.threshold
    )
}

fn criterion_1() -> skl::Result<Line> {
    let t = report::table1()?;
    let anchors = [
        (0, 1, 0.2717372121),
        (4, 1, 0.1324072752),
        (9, 3, 0.1466965539),
    ];
    let anchored = anchors
        .iter()
        .all(|&(r, c, v)| (t.table.rows[r][c] - v).abs() <= report::EXACT_TIER);
    let status = if t.exact_tier() && anchored {
        Status::Pass
    } else if t.qualitative_tier() {
        Status::Deviation
    } else {
        Status::Fail
    };
    Ok(Line {
        id: 1,
        name: "table 1 reproduction",
        status,
        detail: t.summary(),
    })
}

fn criterion_2() -> skl::Result<Line> {
    let r = verify::check_oracle_agreement(200)?;
    Ok(Line {
        id: 2,
        name: "quadrature vs exact summation",
        status: status(r.passed),
        detail: describe(&r),
    })
}

fn criterion_3() -> skl::Result<Line> {
    let r = verify::check_partition_of_unity(1000)?;
    let ok = r.iter().all(|x| x.passed);
    let detail = format!("sum: {}; nonnegativity: {}", describe(&r[0]), r[1].detail);
    Ok(Line {
        id: 3,
        name: "partition of unity",
        status: status(ok),
        detail,
    })
}

fn criterion_4() -> skl::Result<Line> {
    let r = verify::check_central_algebra(1000)?;
    let ok = r.iter().all(|x| x.passed);
    let detail = format!("identity: {}; -psi2: {}", describe(&r[0]), describe(&r[1]));
    Ok(Line {
        id: 4,
        name: "central-moment algebra",
        status: status(ok),
        detail,
    })
}

fn criterion_5() -> skl::Result<Line> {
    let [k1, k2] = verify::korovkin_trend()?;
    let decreasing = |v: &[f64]| v.windows(2).all(|w| w[1] <= 1.1 * w[0]);
    let trend = decreasing(&k1) && decreasing(&k2);
    let analytic = 2.0 * 5.0 / 161.0;
    let k2_explained = (k2[4] - analytic).abs() <= 0.01 * analytic;
    let status = match (trend && k1[4] < 0.05, k2[4] < 0.05) {
        (true, true) => Status::Pass,
        (true, false) if k2_explained => Status::Deviation,
        _ => Status::Fail,
    };
    let detail = format!(
        "m=160 sup: k=1 {:.4e}, k=2 {:.4e} (2q/(m+1) = {analytic:.4e}); decreasing: {trend}; k=1 ladder {:?}",
        k1[4],
        k2[4],
        k1.iter().map(|v| format!("{v:.3e}")).collect::<Vec<_>>()
    );
    Ok(Line {
        id: 5,
        name: "Korovkin trend",
        status,
        detail,
    })
}

fn criterion_6() -> skl::Result<Line> {
    let a = verify::check_bound_thm33()?;
    let b = verify::check_bound_thm71(skl::analysis::DEFAULT_SURFACE_POINTS)?;
    let detail = format!(
        "thm 3.3: {} points, {}; thm 7.1: {} points, {}",
        a.cases, a.detail, b.cases, b.detail
    );
    Ok(Line {
        id: 6,
        name: "bound soundness",
        status: status(a.passed && b.passed),
        detail,
    })
}

fn criterion_7() -> skl::Result<Line> {
    let r = verify::check_tensor_factorization(50)?;
    let sups = verify::figure3_sup_errors()?;
    // the fast separable path agrees with the same identity
    let cfg = BivariateConfig::symmetric(20, 5, 0.5, 0.9)?;
    let g = BivariateTarget::benchmark();
    let direct = skl::apply_bi(&cfg, &g, 0.3, 0.7)?;
    let product = skl::apply(cfg.first(), &TargetFunction::monomial(3), 0.3)?
        * skl::apply(cfg.second(), &TargetFunction::monomial(2), 0.7)?;
    let ok = r.passed && sups[1].1 < sups[0].1 && (direct - product).abs() <= 1e-10;
    let detail = format!(
        "{}; figure 3 sup error m=10 {:.6e} > m=20 {:.6e}",
        describe(&r),
        sups[0].1,
        sups[1].1
    );
    Ok(Line {
        id: 7,
        name: "bivariate factorization",
        status: status(ok),
        detail,
    })
}

fn criterion_8() -> skl::Result<Line> {
    let report =
        skl::weighted_convergence(5, 0.5, 0.1, &[10, 20, 40, 80], &Grid::unit(1001)?, false)?;
    let decreasing = |v: Vec<f64>| v.windows(2).all(|w| w[1] <= 1.1 * w[0]);
    let zero = report.row(0).into_iter().fold(0.0, f64::max);
    let ok = decreasing(report.row(1)) && decreasing(report.row(2)) && zero <= 1e-12;
    let detail = format!(
        "i=1 {:?}; i=2 {:?}; i=0 max {zero:.1e} (rounding of sum p_i = 1)",
        report
            .row(1)
            .iter()
            .map(|v| format!("{v:.3e}"))
            .collect::<Vec<_>>(),
        report
            .row(2)
            .iter()
            .map(|v| format!("{v:.3e}"))
            .collect::<Vec<_>>()
    );
    Ok(Line {
        id: 8,
        name: "weighted-norm convergence",
        status: status(ok),
        detail,
    })
}

fn main() {
    let criteria: [fn() -> skl::Result<Line>; 8] = [
        criterion_1,
        criterion_2,
        criterion_3,
        criterion_4,
        criterion_5,
        criterion_6,
        criterion_7,
        criterion_8,
    ];
    let mut failed = 0;
    for (k, criterion) in criteria.iter().enumerate() {
        let start = Instant::now();
        let line = criterion().unwrap_or_else(|e| Line {
            id: k as u32 + 1,
            name: "error",
            status: Status::Fail,
            detail: e.to_string(),
        });
        let tag = match line.status {
            Status::Pass => "PASS",
            Status::Deviation => "DEVIATION",
            Status::Fail => "FAIL",
        };
        if line.status == Status::Fail {
            failed += 1;
        }
        println!(
            "criterion {} [{tag}] {} ({:.2}s): {}",
            line.id,
            line.name,
            start.elapsed().as_secs_f64(),
            line.detail
        );
    }
    println!("acceptance: {} of 8 criteria without FAIL", 8 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
