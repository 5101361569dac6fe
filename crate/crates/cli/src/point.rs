use std::io::Write;

use serde_json::{json, Value};
use spinqcorr::lmg::lmg_validate;
use spinqcorr::measures::{closed_xxz, information_deficit_report, measures, trace_distance_discord_report};
use spinqcorr::states::{lmg_pair_state, xxz_state, XState};
use spinqcorr::sweep::{Model, Phase};
use spinqcorr::xxz::correlators;

use crate::{Failure, PointArgs};

fn bases(state: &XState) -> Result<Value, Failure> {
    let rho = state.to_operator();
    let deficit = information_deficit_report(&rho)?;
    let tdd = trace_distance_discord_report(&rho)?;
    Ok(json!({ "deficit": deficit, "tdd": tdd }))
}

fn xxz_point(delta: f64, r: u32) -> Result<Value, Failure> {
    if !delta.is_finite() {
        return Err(Failure::Usage(format!("--delta must be finite, got {delta}")));
    }
    if r != 1 && r != 2 {
        return Err(Failure::Usage(format!("--r must be 1 or 2, got {r}")));
    }
    let c = correlators(delta, r)?;
    let state = xxz_state(&c)?;
    Ok(json!({
        "model": "xxz",
        "delta": delta,
        "r": r,
        "regime": c.regime.label(),
        "correlators": { "zz": c.zz, "xx": c.xx },
        "state": state,
        "closed": closed_xxz(&c)?,
        "definitional": measures(&state.to_operator())?,
        "optimal_bases": bases(&state)?,
    }))
}

fn lmg_point(lambda: f64) -> Result<Value, Failure> {
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Failure::Usage(format!("--lambda must be finite and non-negative, got {lambda}")));
    }
    let p = lmg_validate(lambda)?;
    let state = lmg_pair_state(lambda, true)?;
    Ok(json!({
        "model": "lmg",
        "lambda": lambda,
        "regime": Phase::of(Model::Lmg, lambda).label(),
        "angle": p.alpha,
        "state": state,
        "closed": p.closed,
        "definitional": p.definitional,
        "lqu": {
            "definitional": p.lqu.lqu_definitional,
            "published": p.lqu.lqu_published,
            "mismatch": p.lqu.mismatch,
            "finding": p.lqu.is_mismatch(),
        },
        "optimal_bases": bases(&state)?,
    }))
}

pub fn run(a: PointArgs) -> Result<u8, Failure> {
    let value = match (a.model, a.delta, a.lambda) {
        (Model::Xxz, Some(d), None) => xxz_point(d, a.r)?,
        (Model::Lmg, None, Some(l)) => lmg_point(l)?,
        (Model::Xxz, _, _) => return Err(Failure::Usage("--model xxz needs --delta".into())),
        (Model::Lmg, _, _) => return Err(Failure::Usage("--model lmg needs --lambda".into())),
    };
    let text = serde_json::to_string_pretty(&value).expect("point serialises");
    // A closed pipe downstream is not an error.
    let _ = writeln!(std::io::stdout().lock(), "{text}");
    Ok(0)
}
