//! One function per subcommand, each producing a `Report`.

use lp_certify::constants::{
    c_n, check_estqq, check_nu_k, check_psi_positive, largest_real_root, limit_threshold, q_infinity, verify_c_interleaving, verify_family, BisectionResult,
    InequalityReport, NamedPolynomial, RelationStatus,
};
use lp_certify::criteria::{hutchinson_test, mthm1_criterion, necessary_q2q3_test, necessary_sign_test, ScanPolicy};
use lp_certify::real::to_f64;
use lp_certify::series::{truncate, CoefficientSequence, FamilySpec, CUBE_ROOT_REGIME};
use lp_certify::zeros::{count_zeros_disk, disk_radius, locate_zeros, nonreal_census, quartic_unit_disk_count, sign_alternation_check, ContourPolicy};
use lp_certify::{Error, Precision};
use serde_json::{json, Value};

use crate::args::{CensusArgs, ConstantsCommand, CriterionArg, InequalityArgs, TestArgs, ZerosArgs};
use crate::report::{sci, Failure, Report, Status, Table};

type Outcome = Result<Report, Failure>;

/// Grid for the generic quartic and `psi` checks.
pub const QUOTIENT_GRID: [f64; 5] = [2.5199, 3.0, 3.5, 4.0, 9.0];

fn family(text: &str, flag: &str, prec: Precision) -> Result<CoefficientSequence, Failure> {
    let spec = FamilySpec::parse(text).map_err(|e| match e {
        Error::Domain { field, reason } => Failure::usage(Some(field.clone()), format!("--{flag}: field '{field}': {reason}")),
        other => other.into(),
    })?;
    Ok(CoefficientSequence::new(&spec, prec)?)
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize to JSON")
}

pub fn test(args: &TestArgs, prec: Precision) -> Outcome {
    if args.scan_nodes < 2 {
        return Err(Failure::usage(Some("scan-nodes".into()), "need at least 2 scan nodes"));
    }
    if args.n_max < 2 {
        return Err(Failure::usage(Some("n-max".into()), "need n-max >= 2"));
    }
    let seq = family(&args.function, "function", prec)?;
    let policy = ScanPolicy { nodes: args.scan_nodes, ..ScanPolicy::default() };
    let verdict = match args.criterion {
        CriterionArg::Hutchinson => hutchinson_test(&seq, args.n_max)?,
        CriterionArg::Lemma12 => necessary_q2q3_test(&seq)?,
        CriterionArg::TheoremD => necessary_sign_test(&seq, &policy)?,
        CriterionArg::Mthm1 => mthm1_criterion(&seq, args.n_max, &policy)?,
    };
    let mut table = Table::new("verdict", &["field", "value"]);
    table.push(vec!["criterion".into(), verdict.criterion.name().into()]);
    table.push(vec!["outcome".into(), Status::from(verdict.outcome).name().into()]);
    if let Some(h) = &verdict.failed_hypothesis {
        table.push(vec!["failed_hypothesis".into(), h.clone()]);
    }
    for (k, v) in &verdict.measurements {
        table.push(vec![k.clone(), cell(v)]);
    }
    let mut report = Report::new("test", verdict.outcome.into(), to_value(&verdict));
    report.table = Some(table);
    Ok(report)
}

fn cell(v: &Value) -> String {
    match v {
        Value::Number(n) if n.is_f64() => sci(n.as_f64().unwrap_or(f64::NAN)),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

pub fn zeros(args: &ZerosArgs, prec: Precision) -> Outcome {
    if !(args.real_tol > 0.0 && args.real_tol < 1.0) {
        return Err(Failure::usage(Some("real-tol".into()), "must lie in (0, 1)"));
    }
    let seq = family(&args.function, "function", prec)?;
    let poly = truncate(&seq, args.degree)?;
    let mut zr = locate_zeros(&poly, args.real_tol)?;
    let mut status = if zr.count_unresolved > 0 { Status::Unresolved } else { Status::Ok };
    let mut table = Table::new("roots", &["re", "im", "radius", "residual", "class", "simple"]);
    for r in &zr.roots {
        table.push(vec![sci(r.re), sci(r.im), sci(r.radius), sci(r.residual), to_value(&r.class).as_str().unwrap_or("").into(), r.simple.to_string()]);
    }
    if let Some((lo, hi)) = args.disks {
        if lo < 2 {
            return Err(Failure::usage(Some("disks".into()), "disk indices start at 2"));
        }
        table = Table::new("disks", &["j", "rho_j", "count", "nonreal"]);
        for j in lo..=hi {
            let radius = disk_radius(&seq, j)?;
            let mut dc = count_zeros_disk(&seq, &radius, &ContourPolicy::for_disk(j))?;
            dc.j = Some(j);
            let (real, _, _) = zr.counts_inside(dc.radius);
            table.push(vec![j.to_string(), sci(dc.radius), dc.count.to_string(), (dc.count as i64 - real as i64).to_string()]);
            zr.disk_counts.push(dc);
        }
    }
    let mut result = to_value(&zr);
    let mut plot = None;
    if args.census {
        let (lo, hi) = args.disks.expect("clap enforces --disks with --census");
        let census = nonreal_census(&seq, lo, hi, args.degree)?;
        if status == Status::Ok && census.outcome == lp_certify::criteria::Outcome::HypothesesNotMet {
            status = Status::HypothesesNotMet;
        }
        plot = Some(census_table(&census));
        result["census"] = to_value(&census);
    }
    if let Some(k) = args.alternation {
        if k < 2 {
            return Err(Failure::usage(Some("alternation".into()), "need K >= 2"));
        }
        let alt = sign_alternation_check(&seq, k)?;
        if status == Status::Ok && alt.outcome == lp_certify::criteria::Outcome::HypothesesNotMet {
            status = Status::HypothesesNotMet;
        }
        result["alternation"] = to_value(&alt);
    }
    let mut report = Report::new("zeros", status, result);
    report.table = Some(table);
    report.plot = plot;
    Ok(report)
}

fn census_table(c: &lp_certify::zeros::Census) -> Table {
    let mut t = Table::new("census", &["j", "rho_j", "winding", "real_inside", "nonreal_inside"]);
    for r in &c.rows {
        t.push(vec![r.j.to_string(), sci(r.radius), r.winding.to_string(), r.real_inside.to_string(), r.nonreal.to_string()]);
    }
    t
}

pub fn census(args: &CensusArgs, prec: Precision) -> Outcome {
    let seq = family(&args.function, "function", prec)?;
    let (lo, hi) = args.j_range;
    let c = match args.degree {
        Some(d) => nonreal_census(&seq, lo, hi, d)?,
        None => match nonreal_census(&seq, lo, hi, hi + 2) {
            Err(Error::Degree { recommended, .. }) => nonreal_census(&seq, lo, hi, recommended)?,
            other => other?,
        },
    };
    let status = match c.outcome {
        lp_certify::criteria::Outcome::HypothesesNotMet => Status::HypothesesNotMet,
        _ if c.stabilized => Status::Pass,
        _ => Status::Fail,
    };
    let table = census_table(&c);
    let mut report = Report::new("census", status, to_value(&c));
    report.table = Some(table.clone());
    report.plot = Some(table);
    Ok(report)
}

fn check_tol(tol: f64) -> Result<(), Failure> {
    if tol > 0.0 && tol <= 1e-3 {
        Ok(())
    } else {
        Err(Failure::usage(Some("tol".into()), format!("must lie in (0, 1e-3], got {tol}")))
    }
}

fn bisection_value(r: &BisectionResult) -> Value {
    let mut v = to_value(r);
    v["±"] = json!(r.tolerance);
    v
}

fn constants_table(kind: &'static str, q: &BisectionResult, cs: &[(usize, BisectionResult)]) -> Table {
    let mut t = Table::new(kind, &["n", "c_n", "gap_to_qinf"]);
    for (n, c) in cs {
        t.push(vec![n.to_string(), sci(c.value), sci(to_f64(&(c.midpoint() - q.midpoint())))]);
    }
    t
}

pub fn constants(cmd: &ConstantsCommand) -> Outcome {
    match cmd {
        ConstantsCommand::QInf { tol } => {
            check_tol(*tol)?;
            let r = q_infinity(*tol)?;
            let mut t = Table::new("q-inf", &["value", "lo", "hi", "tolerance"]);
            t.push(vec![sci(r.value), sci(r.lo), sci(r.hi), sci(r.tolerance)]);
            let mut report = Report::new("constants q-inf", Status::Ok, bisection_value(&r));
            report.table = Some(t);
            Ok(report)
        }
        ConstantsCommand::CN { n: (lo, hi), tol } => {
            check_tol(*tol)?;
            if *lo < 2 {
                return Err(Failure::usage(Some("n".into()), "section constants start at n = 2"));
            }
            let q = q_infinity(*tol)?;
            let cs: Vec<(usize, BisectionResult)> = (*lo..=*hi).map(|n| c_n(n, *tol).map(|r| (n, r))).collect::<Result<_, _>>()?;
            let table = constants_table("c-n", &q, &cs);
            let constants: Vec<Value> = cs
                .iter()
                .map(|(n, c)| json!({ "n": n, "c_n": bisection_value(c), "gap_to_qinf": to_f64(&(c.midpoint() - q.midpoint())) }))
                .collect();
            let mut report = Report::new("constants c-n", Status::Ok, json!({ "q_infinity": bisection_value(&q), "constants": constants }));
            report.table = Some(table.clone());
            report.plot = Some(table);
            Ok(report)
        }
        ConstantsCommand::Interleaving { n_max, tol } => {
            check_tol(*tol)?;
            let r = verify_c_interleaving(*n_max, *tol)?;
            let status = if r.all_hold {
                Status::Pass
            } else if r.relations.iter().any(|x| x.status == RelationStatus::Unresolved) {
                Status::Unresolved
            } else {
                Status::Fail
            };
            let cs: Vec<(usize, BisectionResult)> = r.constants.iter().map(|s| (s.n, s.c_n.clone())).collect();
            let table = constants_table("interleaving", &r.q_infinity, &cs);
            let mut report = Report::new("constants interleaving", status, to_value(&r));
            report.table = Some(table.clone());
            report.plot = Some(table);
            Ok(report)
        }
        ConstantsCommand::Roots { poly } => {
            let ids = match poly {
                Some(p) => vec![NamedPolynomial::parse(p)?],
                None => NamedPolynomial::ALL.to_vec(),
            };
            let bounds: Vec<_> = ids.into_iter().map(largest_real_root).collect();
            let mut t = Table::new("roots", &["poly", "largest_root", "quoted_bound", "below_quoted_bound", "residual", "argmin_nonnegative", "min_nonnegative"]);
            let opt = |x: Option<f64>| x.map(sci).unwrap_or_default();
            for b in &bounds {
                t.push(vec![
                    b.poly_id.name().into(),
                    opt(b.largest_root),
                    opt(b.quoted_bound),
                    b.below_quoted_bound.map(|x| x.to_string()).unwrap_or_default(),
                    opt(b.residual),
                    sci(b.minimum_nonnegative.0),
                    sci(b.minimum_nonnegative.1),
                ]);
            }
            let mut report = Report::new("constants roots", Status::Ok, json!({ "polynomials": bounds }));
            report.table = Some(t);
            Ok(report)
        }
    }
}

fn inequality_table(reports: &[InequalityReport]) -> Table {
    let mut t = Table::new("inequalities", &["name", "point", "lhs", "rhs", "margin", "holds", "in_regime"]);
    for r in reports {
        let point = r.point.iter().map(|x| sci(*x)).collect::<Vec<_>>().join(" ");
        t.push(vec![r.name.clone(), point, sci(r.lhs), sci(r.rhs), sci(r.margin), r.holds.to_string(), r.in_regime.to_string()]);
    }
    t
}

pub fn verify_inequalities(args: &InequalityArgs, prec: Precision) -> Outcome {
    let (lo, hi) = args.j_range;
    if let Some(text) = &args.family {
        let seq = family(text, "family", prec)?;
        let reports = verify_family(&seq, lo, hi)?;
        // only the inequalities whose hypotheses hold are claims
        let all_hold = reports.iter().filter(|r| r.in_regime).all(|r| r.holds);
        let table = inequality_table(&reports);
        let status = if all_hold { Status::Pass } else { Status::Fail };
        let mut report = Report::new("verify-inequalities", status, json!({ "j_range": [lo, hi], "reports": reports, "all_hold": all_hold }));
        report.table = Some(table);
        return Ok(report);
    }
    let mut reports = Vec::new();
    for &a in &QUOTIENT_GRID {
        let mut r = check_estqq(&[a; 7])?;
        r.name = format!("estqq[q={a}]");
        reports.push(r);
    }
    for &a in &[3.0, 3.5, 4.0, 9.0] {
        let mut r = check_nu_k(&[a; 5])?;
        r.name = format!("nu_k[q={a}]");
        reports.push(r);
    }
    let mut quartic = Vec::new();
    for &qj in &QUOTIENT_GRID {
        for &qj1 in &QUOTIENT_GRID {
            let mut r = check_psi_positive(qj, qj1)?;
            r.name = format!("psi_positive[{qj},{qj1}]");
            reports.push(r);
            quartic.push(quartic_unit_disk_count(qj, qj1)?);
        }
    }
    let polys: Vec<_> = NamedPolynomial::ALL.into_iter().map(largest_real_root).collect();
    let threshold = limit_threshold();
    let all_hold = reports.iter().filter(|r| r.in_regime).all(|r| r.holds)
        && quartic.iter().filter(|q| q.q_j <= q.q_j1).all(|q| q.unit_disk_count == 2 && q.circle_zeros == 0)
        && polys.iter().all(|p| p.below_quoted_bound != Some(false));
    let table = inequality_table(&reports);
    let status = if all_hold { Status::Pass } else { Status::Fail };
    let result = json!({
        "regime_floor": CUBE_ROOT_REGIME,
        "limit_threshold": threshold,
        "reports": reports,
        "quartic": quartic,
        "polynomials": polys,
        "all_hold": all_hold,
    });
    let mut report = Report::new("verify-inequalities", status, result);
    report.table = Some(table);
    Ok(report)
}
