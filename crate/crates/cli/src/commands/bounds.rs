use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use spreadlab_core::bounds::{bound_survey_for, ff_bound_exponents, BoundParams, BoundReport, FFBoundReport, SetClass};

use crate::config::{Num, OneOrMany};
use crate::output::Artifacts;
use crate::{CliError, Ctx};

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct EvalConfig {
    pub n: OneOrMany<i64>,
    pub k: OneOrMany<i64>,
    pub s: OneOrMany<Num>,
    pub t: OneOrMany<Num>,
    #[serde(default = "spread")]
    pub class: SetClass,
    /// Also report the finite-field exponents for each `(n, k, s)`.
    #[serde(default)]
    pub finite_field: bool,
}

fn spread() -> SetClass {
    SetClass::Spread
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            n: OneOrMany::One(7),
            k: OneOrMany::One(4),
            s: OneOrMany::One(Num("7/2".parse().expect("literal"))),
            t: OneOrMany::One(Num(12.into())),
            class: SetClass::Spread,
            finite_field: false,
        }
    }
}

#[derive(Serialize)]
struct Skipped {
    n: i64,
    k: i64,
    s: String,
    t: String,
    reason: String,
}

#[derive(Serialize)]
struct EvalResult {
    reports: Vec<BoundReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    finite_field: Vec<FFBoundReport>,
    skipped: Vec<Skipped>,
}

pub fn eval(cfg: EvalConfig, ctx: &Ctx) -> Result<Artifacts, CliError> {
    let mut reports = Vec::new();
    let mut skipped = Vec::new();
    let mut ff = Vec::new();
    for n in cfg.n.to_vec() {
        for k in cfg.k.to_vec() {
            for s in cfg.s.to_vec() {
                for t in cfg.t.to_vec() {
                    match BoundParams::new(n, k, s.0.clone(), t.0.clone()) {
                        Ok(p) => reports.push(bound_survey_for(&p, cfg.class)),
                        Err(e) => skipped.push(Skipped {
                            n,
                            k,
                            s: s.0.to_string(),
                            t: t.0.to_string(),
                            reason: e.to_string(),
                        }),
                    }
                }
                if cfg.finite_field {
                    if let Ok(r) = ff_bound_exponents(n, k, &s.0) {
                        ff.push(r);
                    }
                }
            }
        }
    }
    if reports.is_empty() {
        let why = skipped.first().map_or("empty grid".to_string(), |s| s.reason.clone());
        return Err(CliError::Config(format!("no valid parameter tuple: {why}")));
    }
    let summary = table(&reports);
    let mut art = Artifacts::new(
        "bounds eval",
        ctx.seed,
        &cfg,
        &EvalResult {
            reports,
            finite_field: ff,
            skipped,
        },
    )?;
    art.summary = Some(summary);
    Ok(art)
}

fn table(reports: &[BoundReport]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{:>3} {:>3} {:>10} {:>10}  {:<28} {:>10}", "n", "k", "s", "t", "best", "value");
    for r in reports {
        let p = &r.params;
        let (name, value) = match &r.best {
            Some(b) => (b.name.as_str(), b.value.to_string()),
            None if r.positive_measure => ("(positive measure)", "-".to_string()),
            None => ("(none applicable)", "-".to_string()),
        };
        let _ = writeln!(
            out,
            "{:>3} {:>3} {:>10} {:>10}  {:<28} {:>10}",
            p.n,
            p.k,
            p.s.to_string(),
            p.t.to_string(),
            name,
            value
        );
    }
    out
}
