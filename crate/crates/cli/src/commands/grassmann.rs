use serde::{Deserialize, Serialize};
use spreadlab_core::grassmann::lemmas::{
    metric_axioms, min_rotation_norm, rotated_subflat_lemma, rotation_lemma, translation_lemma, PropertyReport,
};
use spreadlab_core::grassmann::{ball_measure_estimate, haar_sample};
use spreadlab_core::rng::child_seed;

use crate::output::Artifacts;
use crate::{CliError, Ctx};

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct VerifyConfig {
    /// `(n, k)` pairs to test.
    pub shapes: Vec<(usize, usize)>,
    pub samples: usize,
    pub subflat_samples: usize,
    pub metric_triples: usize,
    pub max_offset: f64,
    pub max_radius: f64,
    pub rotation_constant: f64,
    pub subflat_constant: f64,
    pub ball: Option<BallConfig>,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct BallConfig {
    pub n: usize,
    pub k: usize,
    pub delta: f64,
    pub samples: usize,
    /// Allowed relative deviation of the ratio from `2^{k(n-k)}`.
    #[serde(default = "default_rel_tol")]
    pub rel_tol: f64,
}

fn default_rel_tol() -> f64 {
    0.3
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            shapes: vec![(3, 1), (4, 2), (5, 3)],
            samples: 10_000,
            subflat_samples: 1_000,
            metric_triples: 1_000,
            max_offset: 10.0,
            max_radius: 5.0,
            rotation_constant: 2.0,
            subflat_constant: 10.0,
            ball: Some(BallConfig {
                n: 3,
                k: 1,
                delta: 0.2,
                samples: 1_000_000,
                rel_tol: 0.3,
            }),
        }
    }
}

#[derive(Serialize)]
struct BallScaling {
    n: usize,
    k: usize,
    delta: f64,
    samples: usize,
    estimate: f64,
    estimate_half: f64,
    ratio: f64,
    expected: f64,
    passed: bool,
}

#[derive(Serialize)]
struct VerifyResult {
    passed: bool,
    suites: Vec<PropertyReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ball_scaling: Option<BallScaling>,
}

pub fn verify(cfg: VerifyConfig, ctx: &Ctx) -> Result<Artifacts, CliError> {
    let mut suites = Vec::new();
    for (i, &(n, k)) in cfg.shapes.iter().enumerate() {
        let seed = |j: u64| child_seed(ctx.seed, 16 * i as u64 + j);
        suites.push(translation_lemma(n, k, cfg.samples, cfg.max_offset, seed(0))?);
        suites.push(rotation_lemma(n, k, cfg.samples, cfg.rotation_constant, seed(1))?);
        suites.push(min_rotation_norm(n, k, cfg.samples, seed(2))?);
        suites.push(metric_axioms(n, k, cfg.metric_triples, seed(3))?);
        if k >= 2 {
            suites.push(rotated_subflat_lemma(
                n,
                k,
                cfg.subflat_samples,
                cfg.subflat_constant,
                cfg.max_offset,
                cfg.max_radius,
                seed(4),
            )?);
        }
    }
    let ball = match &cfg.ball {
        None => None,
        Some(b) => {
            let base = child_seed(ctx.seed, u64::MAX);
            let u = haar_sample(b.n, b.k, base)?;
            let estimate = ball_measure_estimate(&u, b.delta, b.samples, child_seed(base, 1))?;
            let estimate_half = ball_measure_estimate(&u, b.delta / 2.0, b.samples, child_seed(base, 2))?;
            let ratio = estimate / estimate_half;
            let expected = 2f64.powi((b.k * (b.n - b.k)) as i32);
            Some(BallScaling {
                n: b.n,
                k: b.k,
                delta: b.delta,
                samples: b.samples,
                estimate,
                estimate_half,
                ratio,
                expected,
                passed: (ratio - expected).abs() <= b.rel_tol * expected,
            })
        }
    };
    let failed: Vec<String> = suites
        .iter()
        .filter(|r| !r.passed())
        .map(|r| format!("{} (n={}, k={})", r.name, r.n, r.k))
        .chain(ball.iter().filter(|b| !b.passed).map(|_| "ball_scaling".to_string()))
        .collect();
    let summary = suites
        .iter()
        .map(|r| {
            format!(
                "{:<20} n={} k={} samples={:<6} violations={:<3} max_ratio={:.4} constant={}\n",
                r.name, r.n, r.k, r.samples, r.violations, r.max_ratio, r.constant
            )
        })
        .collect::<String>();
    let result = VerifyResult {
        passed: failed.is_empty(),
        suites,
        ball_scaling: ball,
    };
    let mut art = Artifacts::new("grassmann verify", ctx.seed, &cfg, &result)?;
    art.summary = Some(summary);
    if !failed.is_empty() {
        art.failure = Some(format!("property suites failed: {}", failed.join(", ")));
    }
    Ok(art)
}
