//! Closed-form lower bounds for (spread) Furstenberg sets.
//!
//! Every formula is evaluated in [`Exact`] arithmetic and refuses to evaluate
//! outside its hypotheses: an out-of-range tuple yields
//! [`Bound::Inapplicable`] with the violated condition, never a number.

use serde::{Deserialize, Serialize};

use crate::exact::Exact;
use crate::{LabError, Result};

/// Parameters `(n, k, s, t)` of an `(s, t; k)`-Furstenberg problem in `ℝⁿ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundParams {
    pub n: i64,
    pub k: i64,
    pub s: Exact,
    pub t: Exact,
}

impl BoundParams {
    /// Validates `n ≥ 2`, `1 ≤ k ≤ n−1`, `0 < s ≤ k`, `0 ≤ t ≤ (k+1)(n−k)`.
    pub fn new(n: i64, k: i64, s: Exact, t: Exact) -> Result<Self> {
        if n < 2 {
            return Err(LabError::param(format!("n = {n} must be at least 2")));
        }
        if k < 1 || k > n - 1 {
            return Err(LabError::param(format!("k = {k} must lie in 1..={}", n - 1)));
        }
        if s <= Exact::zero() || s > Exact::int(k) {
            return Err(LabError::param(format!("s = {s} must lie in (0, {k}]")));
        }
        let t_max = (k + 1) * (n - k);
        if t < Exact::zero() || t > Exact::int(t_max) {
            return Err(LabError::param(format!("t = {t} must lie in [0, {t_max}]")));
        }
        Ok(BoundParams { n, k, s, t })
    }

    /// `k(n−k)`, the dimension of `G(n,k)`.
    pub fn grassmannian_dim(&self) -> i64 {
        self.k * (self.n - self.k)
    }
}

/// Result of evaluating one formula.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Bound {
    Value { value: Exact },
    PositiveMeasure,
    Inapplicable { reason: String },
}

impl Bound {
    fn value(v: Exact) -> Self {
        Bound::Value { value: v }
    }

    fn inapplicable(reason: impl Into<String>) -> Self {
        Bound::Inapplicable { reason: reason.into() }
    }

    pub fn as_value(&self) -> Option<&Exact> {
        match self {
            Bound::Value { value } => Some(value),
            _ => None,
        }
    }

    pub fn is_applicable(&self) -> bool {
        !matches!(self, Bound::Inapplicable { .. })
    }
}

/// Smallest positive integer `k₀` with `(7/3)·2^{k₀−2} + k₀ ≥ n`.
///
/// Multiplying by 12 gives the integer test `7·2^{k₀} + 12·k₀ ≥ 12·n`.
pub fn compute_k0(n: i64) -> i64 {
    let target = 12 * i128::from(n);
    (1i64..)
        .find(|&k0| 7 * (1i128 << k0) + 12 * i128::from(k0) >= target)
        .expect("the left side is unbounded")
}

/// `n − k + s − (k(n−k) − t) / (⌈s⌉ − k₀ + 1)` for `k ≥ k₀+1`, `k₀ < s ≤ k`,
/// `0 < t ≤ k(n−k)`.
pub fn bound_spread_general(p: &BoundParams, k0: i64) -> Bound {
    if k0 < 1 {
        return Bound::inapplicable(format!("k0 = {k0} must be positive"));
    }
    if p.k < k0 + 1 {
        return Bound::inapplicable(format!("needs k >= k0 + 1 = {}", k0 + 1));
    }
    if p.s <= Exact::int(k0) {
        return Bound::inapplicable(format!("needs s > k0 = {k0}"));
    }
    let g = p.grassmannian_dim();
    if p.t <= Exact::zero() || p.t > Exact::int(g) {
        return Bound::inapplicable(format!("needs 0 < t <= k(n-k) = {g}"));
    }
    let deficit = (Exact::int(g) - &p.t).div_int(p.s.ceil() - k0 + 1);
    Bound::value(Exact::int(p.n - p.k) + &p.s - deficit)
}

/// The spread bound with `k₀ = compute_k0(n)`.
pub fn bound_spread_main(p: &BoundParams) -> Bound {
    bound_spread_general(p, compute_k0(p.n))
}

/// Spread hyperplane bound `1 + s − (n−1−t)/⌈s⌉` for `n ≥ 3`,
/// `s ∈ (1, n−1]`, `t ∈ (0, n−1]`.
pub fn bound_spread_hyperplane(n: i64, s: &Exact, t: &Exact) -> Bound {
    if n < 3 {
        return Bound::inapplicable("needs n >= 3");
    }
    if *s <= Exact::int(1) || *s > Exact::int(n - 1) {
        return Bound::inapplicable(format!("needs 1 < s <= {}", n - 1));
    }
    if *t <= Exact::zero() || *t > Exact::int(n - 1) {
        return Bound::inapplicable(format!("needs 0 < t <= {}", n - 1));
    }
    let deficit = (Exact::int(n - 1) - t).div_int(s.ceil());
    Bound::value(Exact::int(1) + s - deficit)
}

/// Héra's bound `s + (t − (k − ⌈s⌉)(n−k)) / (⌈s⌉ + 1)`.
pub fn bound_hera(p: &BoundParams) -> Bound {
    let c = p.s.ceil();
    let numer = &p.t - Exact::int((p.k - c) * (p.n - p.k));
    Bound::value(&p.s + numer.div_int(c + 1))
}

/// Oberlin / Falconer-Mattila: `2k − k(n−k) + t` for `t ≤ (k+1)(n−k) − k`,
/// positive Lebesgue measure above that. Requires whole flats in the set
/// (`s = k`).
pub fn bound_oberlin(p: &BoundParams) -> Bound {
    if p.s != Exact::int(p.k) {
        return Bound::inapplicable("needs whole flats in the set (s = k)");
    }
    let threshold = (p.k + 1) * (p.n - p.k) - p.k;
    if p.t > Exact::int(threshold) {
        Bound::PositiveMeasure
    } else {
        Bound::value(Exact::int(2 * p.k - p.grassmannian_dim()) + &p.t)
    }
}

/// Héra-Keleti-Máthé: `2s + min{t, 1} − k`.
pub fn bound_hkm(p: &BoundParams) -> Bound {
    let t1 = p.t.clone().min(Exact::int(1));
    Bound::value(&p.s * 2 + t1 - p.k)
}

/// Dąbrowski-Orponen-Villa for hyperplanes: `2s + 2 − n − (t−1)(n−1−s)/(n−1)`
/// with `t ∈ (1, n]`. The endpoint `t = 1` is treated as outside the range.
pub fn bound_dov(p: &BoundParams) -> Bound {
    if p.k != p.n - 1 {
        return Bound::inapplicable("needs k = n - 1");
    }
    if p.t <= Exact::int(1) || p.t > Exact::int(p.n) {
        return Bound::inapplicable(format!("needs 1 < t <= {}", p.n));
    }
    let correction = ((&p.t - 1) * (Exact::int(p.n - 1) - &p.s)).div_int(p.n - 1);
    Bound::value(&p.s * 2 + (2 - p.n) - correction)
}

/// Planar Furstenberg bound `min{s + t, (3s + t)/2, s + 1}` (`n = 2`, `k = 1`).
pub fn bound_ren_wang(p: &BoundParams) -> Bound {
    if p.n != 2 || p.k != 1 {
        return Bound::inapplicable("needs n = 2, k = 1");
    }
    let a = &p.s + &p.t;
    let b = (&p.s * 3 + &p.t).div_int(2);
    let c = &p.s + 1;
    Bound::value(a.min(b).min(c))
}

/// Hyperplane corollary `1 + s − (n−1−min{t, n−1})/⌈s⌉` for `n ≥ 3`, `s > 1`, `t > 0`.
pub fn bound_hyperplane_corollary(p: &BoundParams) -> Bound {
    if p.k != p.n - 1 {
        return Bound::inapplicable("needs k = n - 1");
    }
    if p.t <= Exact::zero() {
        return Bound::inapplicable("needs t > 0");
    }
    let t = p.t.clone().min(Exact::int(p.n - 1));
    bound_spread_hyperplane(p.n, &p.s, &t)
}

/// Whether a report should include bounds that only hold for spread families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SetClass {
    /// `F` is an `(s, t; k)`-spread Furstenberg set; every formula applies.
    Spread,
    /// `F` is an arbitrary `(s, t; k)`-Furstenberg set; spread-only bounds are flagged.
    General,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundEntry {
    pub name: String,
    pub spread_only: bool,
    pub applicable: bool,
    pub bound: Bound,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BestBound {
    pub name: String,
    pub value: Exact,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub params: BoundParams,
    pub class: SetClass,
    pub entries: Vec<BoundEntry>,
    /// Largest applicable numeric entry; `None` if none applies.
    pub best: Option<BestBound>,
    /// Some applicable entry certifies positive Lebesgue measure.
    pub positive_measure: bool,
}

impl BoundReport {
    pub fn entry(&self, name: &str) -> Option<&BoundEntry> {
        self.entries.iter().find(|e| e.name == name)
    }
}

/// Evaluate every formula for a spread Furstenberg set with parameters `p`.
/// General-set bounds are included, since a spread set is also a Furstenberg
/// set with at least the same `t` and every bound is nondecreasing in `t`.
pub fn bound_survey(p: &BoundParams) -> BoundReport {
    bound_survey_for(p, SetClass::Spread)
}

pub fn bound_survey_for(p: &BoundParams, class: SetClass) -> BoundReport {
    let spread_gate = |b: Bound| match class {
        SetClass::Spread => b,
        SetClass::General => Bound::inapplicable("holds only for spread families"),
    };
    let rows: Vec<(&str, bool, Bound)> = vec![
        ("oberlin_falconer_mattila", false, bound_oberlin(p)),
        ("hera_keleti_mathe", false, bound_hkm(p)),
        ("hera", false, bound_hera(p)),
        ("dabrowski_orponen_villa", false, bound_dov(p)),
        ("ren_wang", false, bound_ren_wang(p)),
        ("hyperplane_corollary", false, bound_hyperplane_corollary(p)),
        ("spread_main", true, spread_gate(bound_spread_main(p))),
        (
            "spread_hyperplane",
            true,
            spread_gate(if p.k == p.n - 1 {
                bound_spread_hyperplane(p.n, &p.s, &p.t)
            } else {
                Bound::inapplicable("needs k = n - 1")
            }),
        ),
    ];
    let entries: Vec<BoundEntry> = rows
        .into_iter()
        .map(|(name, spread_only, bound)| BoundEntry {
            name: name.to_string(),
            spread_only,
            applicable: bound.is_applicable(),
            bound,
        })
        .collect();
    let mut best: Option<BestBound> = None;
    for e in &entries {
        if let Some(v) = e.bound.as_value() {
            if best.as_ref().is_none_or(|b| *v > b.value) {
                best = Some(BestBound {
                    name: e.name.clone(),
                    value: v.clone(),
                });
            }
        }
    }
    let positive_measure = entries.iter().any(|e| e.bound == Bound::PositiveMeasure);
    BoundReport {
        params: p.clone(),
        class,
        entries,
        best,
        positive_measure,
    }
}

/// Finite-field exponents of `q` for `(s, ·; k)`-spread Furstenberg sets in `F_qⁿ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FFBoundReport {
    pub n: i64,
    pub k: i64,
    pub s: Exact,
    /// `n·s`
    pub polynomial_method: Exact,
    /// `s + (n−1)/2`
    pub pair_counting: Exact,
    /// `(n+1)s/2 + (n−1)/2`, the size of the known constructions
    pub zhang_upper: Exact,
    /// `n − k + s`
    pub ddl_lower: Exact,
}

pub fn ff_bound_exponents(n: i64, k: i64, s: &Exact) -> Result<FFBoundReport> {
    if k < 1 || k > n - 1 {
        return Err(LabError::param(format!("k = {k} must lie in 1..={}", n - 1)));
    }
    if *s <= Exact::zero() || *s > Exact::int(k) {
        return Err(LabError::param(format!("s = {s} must lie in (0, {k}]")));
    }
    let half_n1 = Exact::ratio(n - 1, 2);
    Ok(FFBoundReport {
        n,
        k,
        s: s.clone(),
        polynomial_method: s * n,
        pair_counting: s + &half_n1,
        zhang_upper: (s * (n + 1)).div_int(2) + &half_n1,
        ddl_lower: s + (n - k),
    })
}

/// `α = (k − k₀ + 1)(n − k + k₀) − k(n − k) + t`, the exponent produced by the
/// affine Furstenberg step.
pub fn alpha_affine_step(n: i64, k: i64, k0: i64, t: &Exact) -> Result<Exact> {
    if k0 < 1 || k <= k0 {
        return Err(LabError::param(format!("needs k > k0 >= 1, got k={k}, k0={k0}")));
    }
    Ok(Exact::int((k - k0 + 1) * (n - k + k0) - k * (n - k)) + t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(num: i64, den: i64) -> Exact {
        Exact::ratio(num, den)
    }

    fn params(n: i64, k: i64, s: Exact, t: Exact) -> BoundParams {
        BoundParams::new(n, k, s, t).unwrap()
    }

    fn val(b: Bound) -> Exact {
        b.as_value().cloned().unwrap_or_else(|| panic!("expected a value, got {b:?}"))
    }

    #[test]
    fn k0_scan() {
        let table = [(2, 1), (3, 2), (4, 2), (7, 3), (8, 4), (13, 4), (14, 5)];
        for (n, k0) in table {
            assert_eq!(compute_k0(n), k0, "n = {n}");
        }
    }

    #[test]
    fn spread_general_examples() {
        let p = params(7, 4, q(7, 2), Exact::int(12));
        assert_eq!(val(bound_spread_general(&p, 3)), q(13, 2));
        let p = params(7, 4, q(7, 2), Exact::int(10));
        assert_eq!(val(bound_spread_general(&p, 3)), q(11, 2));
        let p = params(7, 4, q(7, 2), Exact::zero());
        assert!(!bound_spread_general(&p, 3).is_applicable());
    }

    #[test]
    fn spread_main_examples() {
        assert_eq!(val(bound_spread_main(&params(7, 4, q(7, 2), Exact::int(12)))), q(13, 2));
        assert_eq!(val(bound_spread_main(&params(8, 5, q(9, 2), Exact::int(15)))), q(15, 2));
        assert!(!bound_spread_main(&params(7, 3, q(5, 2), Exact::int(12))).is_applicable());
    }

    #[test]
    fn spread_hyperplane_examples() {
        assert_eq!(val(bound_spread_hyperplane(3, &q(3, 2), &Exact::int(2))), q(5, 2));
        assert_eq!(val(bound_spread_hyperplane(4, &q(3, 2), &Exact::int(1))), q(3, 2));
        assert_eq!(val(bound_spread_hyperplane(5, &q(7, 3), &Exact::int(4))), q(10, 3));
        assert!(!bound_spread_hyperplane(3, &Exact::int(1), &Exact::int(2)).is_applicable());
        assert!(!bound_spread_hyperplane(2, &q(3, 2), &Exact::int(1)).is_applicable());
        assert!(!bound_spread_hyperplane(4, &q(3, 2), &Exact::zero()).is_applicable());
    }

    #[test]
    fn hera_examples() {
        assert_eq!(val(bound_hera(&params(4, 2, q(3, 2), Exact::int(4)))), q(17, 6));
        assert_eq!(val(bound_hera(&params(4, 2, Exact::int(2), Exact::int(6)))), Exact::int(4));
        // numerator vanishes at t = (k − ⌈s⌉)(n − k)
        let p = params(6, 4, q(3, 2), Exact::int(4));
        assert_eq!(val(bound_hera(&p)), q(3, 2));
    }

    #[test]
    fn survey_examples() {
        let r = bound_survey(&params(2, 1, q(1, 2), Exact::int(1)));
        assert_eq!(val(r.entry("ren_wang").unwrap().bound.clone()), q(5, 4));

        let r = bound_survey(&params(3, 2, q(3, 2), Exact::int(2)));
        assert_eq!(val(r.entry("dabrowski_orponen_villa").unwrap().bound.clone()), q(7, 4));

        // (k+1)(n−k) − k = 4 < t = 5 ≤ (k+1)(n−k) = 6
        let r = bound_survey(&params(4, 2, Exact::int(2), Exact::int(5)));
        assert_eq!(r.entry("oberlin_falconer_mattila").unwrap().bound, Bound::PositiveMeasure);
        assert!(r.positive_measure);
        assert!(BoundParams::new(4, 2, Exact::int(2), Exact::int(7)).is_err());

        let r = bound_survey(&params(7, 4, q(7, 2), Exact::int(12)));
        let best = r.best.unwrap();
        assert_eq!(best.name, "spread_main");
        assert_eq!(best.value, q(13, 2));
        let general = bound_survey_for(&params(7, 4, q(7, 2), Exact::int(12)), SetClass::General);
        assert!(!general.entry("spread_main").unwrap().applicable);
        assert!(general.best.unwrap().value < q(13, 2));
    }

    #[test]
    fn dov_boundary_is_inapplicable() {
        let p = params(3, 2, q(3, 2), Exact::int(1));
        assert!(!bound_dov(&p).is_applicable());
    }

    #[test]
    fn oberlin_needs_whole_flats() {
        let p = params(4, 2, q(3, 2), Exact::int(3));
        assert!(!bound_oberlin(&p).is_applicable());
        let p = params(4, 2, Exact::int(2), Exact::int(3));
        assert_eq!(val(bound_oberlin(&p)), Exact::int(3));
    }

    #[test]
    fn ff_exponent_examples() {
        let r = ff_bound_exponents(3, 1, &q(1, 2)).unwrap();
        assert_eq!(r.zhang_upper, Exact::int(2));
        assert_eq!(r.polynomial_method, q(3, 2));
        assert_eq!(r.pair_counting, q(3, 2));
        assert_eq!(r.ddl_lower, q(5, 2));
        assert!(ff_bound_exponents(3, 3, &q(1, 2)).is_err());
        assert!(ff_bound_exponents(3, 1, &Exact::int(2)).is_err());
    }

    #[test]
    fn alpha_examples() {
        assert_eq!(alpha_affine_step(7, 4, 3, &Exact::int(12)).unwrap(), Exact::int(12));
        assert_eq!(alpha_affine_step(4, 3, 1, &Exact::int(3)).unwrap(), Exact::int(6));
        assert_eq!(alpha_affine_step(7, 4, 3, &Exact::int(12)).unwrap(), Exact::int(12));
        assert!(alpha_affine_step(4, 1, 1, &Exact::int(3)).is_err());
    }

    #[test]
    fn report_serializes_with_stable_names() {
        let r = bound_survey(&params(7, 4, q(7, 2), Exact::int(12)));
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["best"]["name"], "spread_main");
        assert_eq!(json["best"]["value"]["exact"], "13/2");
        assert_eq!(json["entries"][0]["name"], "oberlin_falconer_mattila");
        assert_eq!(json["entries"][0]["bound"]["kind"], "inapplicable");
    }
}
