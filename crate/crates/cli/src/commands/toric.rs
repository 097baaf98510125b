use std::collections::BTreeMap;

use campana_core::campana::{
    check_campana_jet, generate_campana_contacts, is_campana_type, JetJson,
};
use campana_core::lattice::has_char_torsion;
use campana_core::{
    quotient_torsion, sublattice_rank, CampanaJet, CampanaStructure, ContactCollection, Error, Fan,
};
use serde_json::{json, Value};

use super::load_fan;
use crate::{input, CliError, Context, RunReport};

pub fn fan_check(
    fan: &str,
    inputs: &mut BTreeMap<String, Value>,
    ctx: Context,
) -> Result<RunReport, CliError> {
    let fan = load_fan(fan, inputs)?;
    let mut report = RunReport::new("fan-check", inputs, ctx.characteristic.get());
    report.verdict(
        "smooth",
        "Fan::is_smooth",
        "smooth fan",
        fan.is_smooth(),
        json!({ "cones": fan.max_cones().len() }),
    );
    report.verdict(
        "complete",
        "Fan::is_complete",
        "complete fan",
        fan.is_complete(),
        json!({ "rays": fan.ray_count() }),
    );
    report.witness("fan", fan.to_json());
    Ok(report)
}

/// Balancing, Campana type, rank and char-torsion verdicts for a collection.
fn certify_collection(
    report: &mut RunReport,
    fan: &Fan,
    contacts: &ContactCollection,
    structure: &CampanaStructure,
    ctx: Context,
) -> Result<(), CliError> {
    let degrees = contacts.divisor_degrees();
    report.verdict(
        "balancing",
        "ContactCollection::check_balancing",
        "balancing condition",
        contacts.check_balancing(),
        json!({ "weighted_sum": degrees.weighted_sum(fan), "divisor_degrees": degrees }),
    );
    let campana = is_campana_type(contacts, structure)?;
    report.verdict(
        "campana_type",
        "is_campana_type",
        "Campana type",
        campana.is_campana_type(),
        &campana.violations,
    );
    let points = contacts.points();
    let rank = sublattice_rank(&points, fan.dim())?;
    report.verdict(
        "full_rank",
        "sublattice_rank",
        "lattice rank",
        rank == fan.dim(),
        json!({ "rank": rank, "dim": fan.dim() }),
    );
    let torsion = quotient_torsion(&points, fan.dim())?;
    let bad = has_char_torsion(&torsion, ctx.characteristic);
    report.verdict(
        "no_char_torsion",
        "quotient_torsion",
        "quotient torsion",
        !bad,
        json!({ "torsion": torsion.iter().map(|t| t.to_string()).collect::<Vec<_>>(), "characteristic": ctx.characteristic.get() }),
    );
    Ok(())
}

pub fn campana_check(
    fan: &str,
    contacts: &str,
    mult: &str,
    inputs: &mut BTreeMap<String, Value>,
    ctx: Context,
) -> Result<RunReport, CliError> {
    let fan = load_fan(fan, inputs)?;
    let contacts = ContactCollection::from_json(&fan, &input::contacts(contacts, inputs)?)?;
    let structure = CampanaStructure::new(&fan, input::multiplicities(mult, inputs)?)?;
    let mut report = RunReport::new("campana-check", inputs, ctx.characteristic.get());
    certify_collection(&mut report, &fan, &contacts, &structure, ctx)?;
    report.witness("coefficient_table", contacts.coefficient_table());
    Ok(report)
}

pub fn gen_contacts(
    fan: &str,
    mult: &str,
    degree: Option<u64>,
    degrees: Option<&str>,
    inputs: &mut BTreeMap<String, Value>,
    ctx: Context,
) -> Result<RunReport, CliError> {
    let fan = load_fan(fan, inputs)?;
    let structure = CampanaStructure::new(&fan, input::multiplicities(mult, inputs)?)?;
    let per_ray: Vec<u64> = match (degree, degrees) {
        (Some(d), _) => {
            inputs.insert("degree".into(), Value::from(d));
            vec![d; fan.ray_count()]
        }
        (None, Some(arg)) => input::load(arg, "degrees", inputs)?,
        (None, None) => {
            return Err(CliError::Input(
                "one of --degree or --degrees is required".into(),
            ))
        }
    };
    let mut report = RunReport::new("gen-contacts", inputs, ctx.characteristic.get());
    match generate_campana_contacts(&fan, &structure, &per_ray, ctx.characteristic) {
        Ok(contacts) => {
            report.verdict(
                "generated",
                "generate_campana_contacts",
                "two markings per ray",
                contacts.len() == 2 * fan.ray_count(),
                json!({ "markings": contacts.len() }),
            );
            certify_collection(&mut report, &fan, &contacts, &structure, ctx)?;
            report.witness("contacts", contacts.to_json());
            report.witness("coefficient_table", contacts.coefficient_table());
        }
        // the data admit no collection of this shape: a certified negative
        Err(
            e @ (Error::DegreeBelowBound { .. }
            | Error::InfeasibleSplit { .. }
            | Error::UnbalancedDegrees(_)),
        ) => {
            report.verdict(
                "generated",
                "generate_campana_contacts",
                "two markings per ray",
                false,
                e.to_string(),
            );
        }
        Err(e) => return Err(e.into()),
    }
    Ok(report)
}

pub fn jet_check(
    jet: &str,
    mult: &str,
    inputs: &mut BTreeMap<String, Value>,
    ctx: Context,
) -> Result<RunReport, CliError> {
    let jet_json: JetJson = input::load(jet, "jet", inputs)?;
    let mults = input::multiplicities(mult, inputs)?;
    let jet = CampanaJet::from_json(&jet_json);
    let ok = check_campana_jet(&jet, &mults)?;
    let mut report = RunReport::new("jet-check", inputs, ctx.characteristic.get());
    report.verdict(
        "campana_jet",
        "check_campana_jet",
        "Campana jet",
        ok,
        json!({ "order": jet.order, "valuations": jet.valuations }),
    );
    Ok(report)
}
