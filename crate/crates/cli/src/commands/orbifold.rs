use std::collections::BTreeMap;

use campana_core::field::format_rational;
use campana_core::p1::{
    composed_log_normal_degree, cover_availability, cyclic_cover, dihedral_cover,
    icosahedral_cover, klt_fano_check, log_normal_degree, maximal_cases, riemann_hurwitz,
    verify_branch_data, CoverJson, OrbifoldCover,
};
use campana_core::Error;
use serde_json::{json, Value};

use crate::{
    expected_dimension, input, toric_expected_dimension, CliError, Context, CoverCase, RunReport,
};

pub fn classify(
    mult: &str,
    inputs: &mut BTreeMap<String, Value>,
    ctx: Context,
) -> Result<RunReport, CliError> {
    let mults = input::multiplicities(mult, inputs)?;
    let check = klt_fano_check(&mults);
    let mut report = RunReport::new("p1-classify", inputs, ctx.characteristic.get());
    let degree = format_rational(&check.degree);
    report.verdict(
        "klt",
        "klt_fano_check",
        "klt Fano",
        check.is_klt,
        json!(null),
    );
    report.verdict(
        "fano",
        "klt_fano_check",
        "klt Fano",
        check.is_fano,
        json!({ "degree": degree }),
    );
    if check.is_klt && check.is_fano {
        report.witness("reduction", maximal_cases(&mults)?);
        report.witness(
            "cover_availability",
            cover_availability(&mults, ctx.characteristic)?,
        );
    }
    Ok(report)
}

fn cover_verdicts(
    report: &mut RunReport,
    cover: &OrbifoldCover,
    compose: Option<u64>,
) -> Result<(), CliError> {
    report.verdict(
        "branch_data",
        "verify_branch_data",
        "branch data",
        cover.certificate.certified(),
        &cover.certificate,
    );
    let rh = riemann_hurwitz(cover.degree(), &cover.partitions())?;
    report.verdict(
        "riemann_hurwitz",
        "riemann_hurwitz",
        "Riemann-Hurwitz",
        rh.rational,
        &rh,
    );
    if let Some(s) = cover.syzygy {
        report.verdict("syzygy", "KleinForms::syzygy", "Klein syzygy", true, s);
    }
    let (n, b, r) = cover.log_normal_data();
    let base = log_normal_degree(n, b, r);
    report.verdict(
        "log_normal_degree",
        "log_normal_degree",
        "log normal degree",
        base == 0,
        json!({ "n": n, "b": b, "r": r, "degree": base }),
    );
    if let Some(max_d) = compose {
        let rows: Vec<Value> = (1..=max_d)
            .map(|d| {
                json!({
                    "d": d,
                    "general": composed_log_normal_degree(cover, d, false),
                    "simple_ramification": composed_log_normal_degree(cover, d, true),
                })
            })
            .collect();
        let ok = (1..=max_d).all(|d| {
            composed_log_normal_degree(cover, d, false) == 2 * d as i64 - 2
                && composed_log_normal_degree(cover, d, true) == 2 * d as i64 - 3
        });
        report.verdict(
            "composed_log_normal_degree",
            "composed_log_normal_degree",
            "log normal degree",
            ok,
            rows,
        );
    }
    report.witness("cover", cover.to_json());
    Ok(())
}

pub fn cover(
    case: Option<CoverCase>,
    m: Option<u64>,
    cover_arg: Option<&str>,
    compose: Option<u64>,
    inputs: &mut BTreeMap<String, Value>,
    ctx: Context,
) -> Result<RunReport, CliError> {
    if let Some(d) = compose {
        inputs.insert("compose".into(), Value::from(d));
    }
    if let Some(arg) = cover_arg {
        let json: CoverJson = input::load(arg, "cover", inputs)?;
        let (num, den, branch) = json.parse()?;
        let cert = verify_branch_data(&num, &den, &branch, ctx.characteristic)?;
        let mut report = RunReport::new("p1-cover", inputs, ctx.characteristic.get());
        report.verdict(
            "branch_data",
            "verify_branch_data",
            "branch data",
            cert.certified(),
            &cert,
        );
        let partitions: Vec<Vec<u64>> = branch.iter().map(|(_, p)| p.clone()).collect();
        match riemann_hurwitz(json.degree, &partitions) {
            Ok(rh) => report.verdict(
                "riemann_hurwitz",
                "riemann_hurwitz",
                "Riemann-Hurwitz",
                rh.rational,
                &rh,
            ),
            Err(e) => report.verdict(
                "riemann_hurwitz",
                "riemann_hurwitz",
                "Riemann-Hurwitz",
                false,
                e.to_string(),
            ),
        }
        return Ok(report);
    }
    let case =
        case.ok_or_else(|| CliError::Input("one of --case or --cover is required".into()))?;
    let needs_m = || {
        m.ok_or_else(|| CliError::Input("--m is required for cyclic and dihedral covers".into()))
    };
    let built = match case {
        CoverCase::Cyclic => {
            let m = needs_m()?;
            inputs.insert("cover".into(), json!({ "case": "cyclic", "m": m }));
            cyclic_cover(m, ctx.characteristic)
        }
        CoverCase::Dihedral => {
            let m = needs_m()?;
            inputs.insert("cover".into(), json!({ "case": "dihedral", "m": m }));
            dihedral_cover(m, ctx.characteristic)
        }
        CoverCase::Icosahedral => {
            inputs.insert("cover".into(), json!({ "case": "icosahedral" }));
            icosahedral_cover(ctx.characteristic)
        }
    };
    let mut report = RunReport::new("p1-cover", inputs, ctx.characteristic.get());
    match built {
        Ok(cover) => cover_verdicts(&mut report, &cover, compose)?,
        // self-certification failed: the shipped data are wrong in this characteristic
        Err(e @ (Error::BranchMismatch(_) | Error::SyzygyFailed)) => {
            report.verdict(
                "branch_data",
                "verify_branch_data",
                "branch data",
                false,
                e.to_string(),
            );
        }
        Err(e) => return Err(e.into()),
    }
    Ok(report)
}

pub fn rh_check(
    degree: u64,
    branch: &str,
    inputs: &mut BTreeMap<String, Value>,
    ctx: Context,
) -> Result<RunReport, CliError> {
    inputs.insert("degree".into(), Value::from(degree));
    let partitions: Vec<Vec<u64>> = input::load(branch, "branch", inputs)?;
    let mut report = RunReport::new("rh-check", inputs, ctx.characteristic.get());
    match riemann_hurwitz(degree, &partitions) {
        Ok(rh) => report.verdict(
            "consistent",
            "riemann_hurwitz",
            "Riemann-Hurwitz",
            true,
            &rh,
        ),
        Err(e @ Error::InconsistentBranchData(_)) => report.verdict(
            "consistent",
            "riemann_hurwitz",
            "Riemann-Hurwitz",
            false,
            e.to_string(),
        ),
        Err(e) => return Err(e.into()),
    }
    Ok(report)
}

pub fn expected_dim(
    genus: u64,
    markings: u64,
    chi: Option<i64>,
    toric_dim: Option<u64>,
    inputs: &mut BTreeMap<String, Value>,
    ctx: Context,
) -> Result<RunReport, CliError> {
    inputs.insert("genus".into(), Value::from(genus));
    inputs.insert("markings".into(), Value::from(markings));
    let report = match (chi, toric_dim) {
        (_, Some(dim)) => {
            inputs.insert("toric_dim".into(), Value::from(dim));
            let mut report = RunReport::new("expected-dim", inputs, ctx.characteristic.get());
            if genus != 0 {
                return Err(CliError::Input("the toric form is for genus 0".into()));
            }
            let toric = toric_expected_dimension(dim, markings);
            let general = expected_dimension(0, markings, dim as i64);
            report.verdict(
                "toric_form",
                "toric_expected_dimension",
                "expected dimension",
                toric == general,
                json!({ "toric": toric, "general": general }),
            );
            report.witness("expected_dimension", toric);
            report
        }
        (Some(chi), None) => {
            inputs.insert("chi".into(), Value::from(chi));
            let mut report = RunReport::new("expected-dim", inputs, ctx.characteristic.get());
            let value = expected_dimension(genus, markings, chi);
            report.verdict(
                "formula",
                "expected_dimension",
                "expected dimension",
                true,
                json!({ "value": value }),
            );
            report.witness("expected_dimension", value);
            report
        }
        (None, None) => {
            return Err(CliError::Input(
                "one of --chi or --toric-dim is required".into(),
            ))
        }
    };
    Ok(report)
}
