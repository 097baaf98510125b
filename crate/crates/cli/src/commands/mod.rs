pub mod curves;
mod orbifold;
mod toric;

use std::collections::BTreeMap;

use campana_core::{projective_space_fan, Fan};
use serde_json::Value;

use crate::{input, CliError, Command, Context, RunReport};

pub fn dispatch(command: &Command, ctx: Context) -> Result<RunReport, CliError> {
    let mut inputs = BTreeMap::new();
    // the seed and characteristic are part of what the run depends on
    inputs.insert("char".to_string(), Value::from(ctx.characteristic.get()));
    inputs.insert("seed".to_string(), Value::from(ctx.seed));
    match command {
        Command::FanCheck { fan } => toric::fan_check(fan, &mut inputs, ctx),
        Command::CampanaCheck {
            fan,
            contacts,
            mult,
        } => toric::campana_check(fan, contacts, mult, &mut inputs, ctx),
        Command::GenContacts {
            fan,
            mult,
            degree,
            degrees,
        } => toric::gen_contacts(fan, mult, *degree, degrees.as_deref(), &mut inputs, ctx),
        Command::JetCheck { jet, mult } => toric::jet_check(jet, mult, &mut inputs, ctx),
        Command::BuildCurve {
            curve,
            markings,
            x_inf,
            mult,
        } => curves::build(
            curve,
            markings.as_deref(),
            x_inf.as_deref(),
            mult.as_deref(),
            &mut inputs,
            ctx,
        ),
        Command::VerifyCurve { curve, mult } => {
            curves::verify(curve, mult.as_deref(), &mut inputs, ctx)
        }
        Command::TwoPoint {
            curve,
            x,
            y,
            exact,
            numeric,
        } => curves::two_point(curve, x, y, *exact, *numeric, &mut inputs, ctx),
        Command::JacobianRank {
            curve,
            markings,
            lambda,
        } => curves::jacobian(
            curve,
            markings.as_deref(),
            lambda.as_deref(),
            &mut inputs,
            ctx,
        ),
        Command::Separability { curve } => curves::separability(curve, &mut inputs, ctx),
        Command::P1Classify { mult } => orbifold::classify(mult, &mut inputs, ctx),
        Command::P1Cover {
            case,
            m,
            cover,
            compose,
        } => orbifold::cover(*case, *m, cover.as_deref(), *compose, &mut inputs, ctx),
        Command::RhCheck { degree, branch } => {
            orbifold::rh_check(*degree, branch, &mut inputs, ctx)
        }
        Command::ExpectedDim {
            genus,
            markings,
            chi,
            toric_dim,
        } => orbifold::expected_dim(*genus, *markings, *chi, *toric_dim, &mut inputs, ctx),
    }
}

/// `P<d>` names the fan of projective space; anything else is fan JSON.
pub(crate) fn load_fan(arg: &str, inputs: &mut BTreeMap<String, Value>) -> Result<Fan, CliError> {
    if let Some(d) = arg
        .strip_prefix('P')
        .or_else(|| arg.strip_prefix('p'))
        .and_then(|d| d.parse::<usize>().ok())
    {
        inputs.insert("fan".into(), Value::from(format!("P{d}")));
        return Ok(projective_space_fan(d)?);
    }
    let json = input::load(arg, "fan", inputs)?;
    Ok(Fan::from_json(&json)?)
}
