use std::collections::BTreeMap;

use campana_core::curve::{
    analytic_jacobian, b_zero, evaluation_map, jacobian_rank, normalized_markings,
    projectively_equal, seeded_markings, separability_rank, two_point_solve, CurveJson,
    ExponentMatrix, SolveMode, TwoPointSolution,
};
use campana_core::field::format_rational;
use campana_core::{
    build_curve, evaluate, projective_space_fan, verify_tangency, ContactCollection, Error,
    RationalCurvePd,
};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde_json::{json, Value};

use crate::{input, CliError, Context, Curve, RunReport};

/// Relative step for central differences and the agreement tolerance.
pub const FD_STEP: f64 = 1e-6;
pub const FD_TOLERANCE: f64 = 1e-6;
/// Tolerance on `max |prod s^A / r - 1|` for floating-point two-point solutions.
pub const TWO_POINT_TOLERANCE: f64 = 1e-9;

fn contact_table(
    curve: &Curve,
    inputs: &mut BTreeMap<String, Value>,
) -> Result<Vec<Vec<u64>>, CliError> {
    inputs.insert("dim".into(), Value::from(curve.dim));
    let fan = projective_space_fan(curve.dim)?;
    let contacts = ContactCollection::from_json(&fan, &input::contacts(&curve.contacts, inputs)?)?;
    Ok(contacts.coefficient_table())
}

fn strings(v: &[BigRational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

/// Failures of the tangency check that certify the curve is wrong, as
/// opposed to malformed input.
fn is_certified_negative(e: &Error) -> bool {
    matches!(
        e,
        Error::TangencyMismatch { .. } | Error::CommonRoot | Error::InvalidCurve(_)
    )
}

fn tangency_verdicts(
    report: &mut RunReport,
    curve: &RationalCurvePd,
    mults: Option<&[campana_core::Multiplicity]>,
) -> Result<(), CliError> {
    match verify_tangency(curve, mults) {
        Ok(cert) => {
            report.verdict(
                "tangency",
                "verify_tangency",
                "tangency orders",
                cert.table == curve.contacts,
                &cert.table,
            );
            report.verdict(
                "coprime_forms",
                "verify_tangency",
                "coprime forms",
                cert.forms_coprime,
                json!(null),
            );
            if let Some(c) = cert.campana {
                report.verdict(
                    "campana_type",
                    "campana_type_of_table",
                    "Campana type",
                    c.is_campana_type(),
                    &c.violations,
                );
            }
        }
        Err(e) if is_certified_negative(&e) => {
            report.verdict(
                "tangency",
                "verify_tangency",
                "tangency orders",
                false,
                e.to_string(),
            );
        }
        Err(e) => return Err(e.into()),
    }
    Ok(())
}

pub fn build(
    curve: &Curve,
    markings: Option<&str>,
    x_inf: Option<&str>,
    mult: Option<&str>,
    inputs: &mut BTreeMap<String, Value>,
    ctx: Context,
) -> Result<RunReport, CliError> {
    let table = contact_table(curve, inputs)?;
    let (s, seeded) = match markings {
        Some(arg) => (input::rationals(arg, "markings", inputs)?, false),
        None => (
            seeded_markings(ctx.seed, table.len(), ctx.characteristic),
            true,
        ),
    };
    let x = match x_inf {
        Some(arg) => input::rationals(arg, "x-inf", inputs)?,
        None => vec![BigRational::one(); curve.dim + 1],
    };
    let mults = mult.map(|m| input::multiplicities(m, inputs)).transpose()?;
    let built = build_curve(curve.dim, &normalized_markings(&s), &table, &x)?;
    let mut report = RunReport::new("build-curve", inputs, ctx.characteristic.get());
    if seeded {
        report.seed = Some(ctx.seed);
    }
    report.verdict(
        "image_of_infinity",
        "evaluate",
        "prescribed point at infinity",
        evaluate(&built, &campana_core::curve::b_infinity()) == x,
        strings(&x),
    );
    tangency_verdicts(&mut report, &built, mults.as_deref())?;
    report.witness("curve", built.to_json());
    Ok(report)
}

pub fn verify(
    curve: &str,
    mult: Option<&str>,
    inputs: &mut BTreeMap<String, Value>,
    ctx: Context,
) -> Result<RunReport, CliError> {
    let json: CurveJson = input::load(curve, "curve", inputs)?;
    let mults = mult.map(|m| input::multiplicities(m, inputs)).transpose()?;
    let curve = RationalCurvePd::from_json(&json)?;
    let mut report = RunReport::new("verify-curve", inputs, ctx.characteristic.get());
    tangency_verdicts(&mut report, &curve, mults.as_deref())?;
    Ok(report)
}

pub fn two_point(
    curve: &Curve,
    x: &str,
    y: &str,
    exact: bool,
    numeric: bool,
    inputs: &mut BTreeMap<String, Value>,
    ctx: Context,
) -> Result<RunReport, CliError> {
    let table = contact_table(curve, inputs)?;
    let x = input::rationals(x, "x", inputs)?;
    let y = input::rationals(y, "y", inputs)?;
    let mode = match (exact, numeric) {
        (true, _) => SolveMode::Exact,
        (_, true) => SolveMode::Numeric,
        _ => SolveMode::Auto,
    };
    inputs.insert(
        "mode".into(),
        serde_json::to_value(mode).expect("mode serializes"),
    );
    let solution = match two_point_solve(curve.dim, &table, &x, &y, mode) {
        Ok(s) => Some(s),
        Err(Error::NoRationalSolution(why)) if mode == SolveMode::Exact => {
            return Err(CliError::Infeasible(why))
        }
        Err(Error::NoRationalSolution(why)) => {
            let mut report = RunReport::new("two-point", inputs, ctx.characteristic.get());
            report.verdict(
                "interpolates",
                "two_point_solve",
                "two-point interpolation",
                false,
                why,
            );
            return Ok(report);
        }
        Err(e) => return Err(e.into()),
    };
    let mut report = RunReport::new("two-point", inputs, ctx.characteristic.get());
    match solution.expect("handled above") {
        TwoPointSolution::Exact { markings } => {
            let rebuilt = build_curve(curve.dim, &normalized_markings(&markings), &table, &x)?;
            let image = evaluate(&rebuilt, &b_zero());
            report.verdict(
                "interpolates",
                "two_point_solve",
                "two-point interpolation",
                projectively_equal(&image, &y),
                json!({ "exact": true, "image_of_zero": strings(&image) }),
            );
            report.residual("two_point", 0.0, 0.0);
            report.witness("markings", strings(&markings));
            report.witness("curve", rebuilt.to_json());
        }
        TwoPointSolution::Numeric {
            markings,
            max_residual,
            obstruction,
        } => {
            report.verdict(
                "interpolates",
                "two_point_solve",
                "two-point interpolation",
                max_residual <= TWO_POINT_TOLERANCE,
                json!({ "exact": false, "obstruction": obstruction }),
            );
            report.residual("two_point", max_residual, TWO_POINT_TOLERANCE);
            report.witness("markings", markings);
        }
    }
    Ok(report)
}

/// Largest `|fd - analytic| / max(1, |analytic|)` over all Jacobian entries,
/// central differences with relative step [`FD_STEP`].
pub fn finite_difference_error(a: &ExponentMatrix, lam: &[f64], m: &[f64], s: f64, t: f64) -> f64 {
    let (d, n) = (a.d(), a.n());
    let analytic = analytic_jacobian(a, lam, m, &s, &t);
    let mut point: Vec<f64> = lam.iter().chain(m).copied().chain([s, t]).collect();
    let eval = |p: &[f64]| {
        let (xs, ys) = evaluation_map(a, &p[..d], &p[d..d + n], &p[d + n], &p[d + n + 1]);
        xs.into_iter().chain(ys).collect::<Vec<f64>>()
    };
    let mut worst = 0.0f64;
    for j in 0..point.len() {
        let h = FD_STEP * point[j].abs().max(1.0);
        let orig = point[j];
        point[j] = orig + h;
        let plus = eval(&point);
        point[j] = orig - h;
        let minus = eval(&point);
        point[j] = orig;
        for (i, row) in analytic.iter().enumerate() {
            let fd = (plus[i] - minus[i]) / (2.0 * h);
            worst = worst.max((fd - row[j]).abs() / row[j].abs().max(1.0));
        }
    }
    worst
}

pub fn jacobian(
    curve: &Curve,
    markings: Option<&str>,
    lambda: Option<&str>,
    inputs: &mut BTreeMap<String, Value>,
    ctx: Context,
) -> Result<RunReport, CliError> {
    let table = contact_table(curve, inputs)?;
    let mut seeded = false;
    let m = match markings {
        Some(arg) => input::rationals(arg, "markings", inputs)?,
        None => {
            seeded = true;
            seeded_markings(ctx.seed, table.len(), ctx.characteristic)
        }
    };
    let lam = match lambda {
        Some(arg) => input::rationals(arg, "lambda", inputs)?,
        None => {
            seeded = true;
            seeded_markings(ctx.seed.wrapping_add(1), curve.dim + 1, ctx.characteristic)
        }
    };
    let jac = jacobian_rank(curve.dim, &table, &m, &lam, ctx.characteristic)?;
    let mut report = RunReport::new("jacobian-rank", inputs, ctx.characteristic.get());
    if seeded {
        report.seed = Some(ctx.seed);
    }
    report.verdict(
        "full_rank",
        "jacobian_rank",
        "Jacobian rank",
        jac.is_full_rank(),
        json!({ "rank": jac.rank, "target": jac.target_rank, "marking_block_rank": jac.marking_block_rank }),
    );
    report.verdict(
        "lambda_block_identity",
        "jacobian_rank",
        "scalar block",
        jac.lambda_block_identity,
        json!(null),
    );
    let a = ExponentMatrix::from_contacts(curve.dim, &table)?;
    let to_f = |v: &BigRational| v.to_f64().unwrap_or(f64::NAN);
    let lam_f: Vec<f64> = lam[1..].iter().map(|l| to_f(&(l / &lam[0]))).collect();
    let m_f: Vec<f64> = m.iter().map(to_f).collect();
    report.residual(
        "finite_difference",
        finite_difference_error(&a, &lam_f, &m_f, 0.0, 0.0),
        FD_TOLERANCE,
    );
    report.witness("jacobian", &jac);
    report.witness("markings", strings(&m));
    report.witness("lambda", strings(&lam));
    Ok(report)
}

pub fn separability(
    curve: &Curve,
    inputs: &mut BTreeMap<String, Value>,
    ctx: Context,
) -> Result<RunReport, CliError> {
    let table = contact_table(curve, inputs)?;
    let sep = separability_rank(curve.dim, &table, ctx.characteristic)?;
    let mut report = RunReport::new("separability", inputs, ctx.characteristic.get());
    report.verdict(
        "separable",
        "separability_rank",
        "separability",
        sep.full_rank,
        &sep,
    );
    Ok(report)
}
