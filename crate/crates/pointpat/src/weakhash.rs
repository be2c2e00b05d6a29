//! The weak-hash distance `d#` via exact piecewise-constant profiles.
//!
//! Because both measures are atomic with finitely many atoms, the
//! restricted distance `r ↦ d(μ^(r), ν^(r))` only changes when the open
//! ball `B_r` crosses an atom, i.e. at the finitely many distinct
//! atom-to-origin distances. On each interval `(ρ_k, ρ_{k+1}]` between
//! consecutive such radii the restrictions — and hence the distance — are
//! constant, so
//!
//! `d#(μ, ν) = ∫_0^∞ e^{−r} · d(μ^(r), ν^(r)) / (1 + d(μ^(r), ν^(r))) dr`
//!
//! reduces to the finite sum `Σ_k [c_k/(1+c_k)] · (e^{−ρ_k} − e^{−ρ_{k+1}})`,
//! evaluated in ascending interval order. One Prohorov solve per interval
//! suffices.
//!
//! Right-closed intervals match the open-ball restriction convention: at
//! `r = ρ_k` the ball does not yet contain the sphere, so the value at a
//! breakpoint is the value of the interval to its left.

use crate::measure::CountingMeasure;
use crate::prohorov::prohorov_distance;
use crate::{Error, Result};

/// A piecewise-constant profile of `r ≥ 0`: value `values[k]` on
/// `(breakpoints[k-1], breakpoints[k]]`, with sentinels `0` and `+∞`.
///
/// Minimal representation: adjacent values always differ.
#[derive(Debug, Clone, PartialEq)]
pub struct StepProfile {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

impl StepProfile {
    /// Builds a profile, merging adjacent intervals with equal values.
    fn from_raw(breakpoints: Vec<f64>, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), breakpoints.len() + 1);
        let mut merged_bp = Vec::with_capacity(breakpoints.len());
        let mut merged_val = vec![values[0]];
        for (bp, val) in breakpoints.iter().zip(&values[1..]) {
            if *val != *merged_val.last().expect("nonempty") {
                merged_bp.push(*bp);
                merged_val.push(*val);
            }
        }
        Self { breakpoints: merged_bp, values: merged_val }
    }

    /// Positive radii where the value changes, ascending.
    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    /// Interval values `c_0 … c_K` (one more than the breakpoints).
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// The value at `r > 0` (the interval `(ρ_k, ρ_{k+1}]` containing it).
    pub fn value_at(&self, r: f64) -> f64 {
        let idx = self.breakpoints.partition_point(|bp| *bp < r);
        self.values[idx]
    }

    /// Iterates `(lo, hi, value)` with `hi = ∞` on the last interval.
    pub fn intervals(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.values.iter().enumerate().map(move |(k, &value)| {
            let lo = if k == 0 { 0.0 } else { self.breakpoints[k - 1] };
            let hi = self.breakpoints.get(k).copied().unwrap_or(f64::INFINITY);
            (lo, hi, value)
        })
    }

    /// CSV rows `r_lo,r_hi,prohorov,transformed` with an `inf` sentinel in
    /// the final `r_hi`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("r_lo,r_hi,prohorov,transformed\n");
        for (lo, hi, value) in self.intervals() {
            let hi_text = if hi.is_finite() { hi.to_string() } else { "inf".to_string() };
            out.push_str(&format!(
                "{},{},{},{}\n",
                lo,
                hi_text,
                value,
                value / (1.0 + value)
            ));
        }
        out
    }
}

fn assert_shared_context(mu: &CountingMeasure, nu: &CountingMeasure) {
    assert!(
        mu.ctx() == nu.ctx(),
        "measures must share a metric context (same dimension and origin)"
    );
}

/// Distinct origin distances of the atoms of both measures, ascending.
/// Distance zero yields no breakpoint: an atom at the origin lies in every
/// open ball with positive radius.
pub fn profile_breakpoints(mu: &CountingMeasure, nu: &CountingMeasure) -> Vec<f64> {
    assert_shared_context(mu, nu);
    let mut radii: Vec<f64> = mu
        .origin_distances()
        .into_iter()
        .chain(nu.origin_distances())
        .filter(|d| *d > 0.0)
        .collect();
    radii.sort_by(f64::total_cmp);
    radii.dedup();
    radii
}

/// Atoms at origin distance `≤ bound`: the common restriction of every
/// open ball `B_r` with `r` in the interval just above `bound`.
fn closed_restriction(m: &CountingMeasure, bound: f64) -> CountingMeasure {
    let atoms = m
        .atoms()
        .iter()
        .filter(|(p, _)| m.ctx().origin_distance(p).expect("validated at construction") <= bound)
        .cloned()
        .collect();
    CountingMeasure::new(m.ctx().clone(), atoms).expect("filtered atoms stay valid")
}

/// The full profile `r ↦ d(μ^(r), ν^(r))`, one Prohorov solve per
/// interval between consecutive breakpoints.
pub fn prohorov_profile(mu: &CountingMeasure, nu: &CountingMeasure) -> StepProfile {
    let breakpoints = profile_breakpoints(mu, nu);
    let mut values = Vec::with_capacity(breakpoints.len() + 1);
    for k in 0..=breakpoints.len() {
        let bound = if k == 0 { 0.0 } else { breakpoints[k - 1] };
        let mu_k = closed_restriction(mu, bound);
        let nu_k = closed_restriction(nu, bound);
        values.push(prohorov_distance(&mu_k, &nu_k));
    }
    StepProfile::from_raw(breakpoints, values)
}

fn integral_over(profile: &StepProfile, upper: f64) -> f64 {
    let mut total = 0.0;
    for (lo, hi, value) in profile.intervals() {
        if lo >= upper {
            break;
        }
        let hi = hi.min(upper);
        let weight = (-lo).exp() - (-hi).exp();
        total += value / (1.0 + value) * weight;
    }
    total
}

/// The weak-hash distance `d#(μ, ν) ∈ [0, 1)` in closed form.
pub fn weak_hash_distance(mu: &CountingMeasure, nu: &CountingMeasure) -> f64 {
    integral_over(&prohorov_profile(mu, nu), f64::INFINITY)
}

/// The same integral truncated to `[0, R]`, splitting the interval that
/// contains `R`.
pub fn truncated_weak_hash(mu: &CountingMeasure, nu: &CountingMeasure, upper: f64) -> Result<f64> {
    if !(upper > 0.0) {
        return Err(Error::NonPositiveRadius { value: upper });
    }
    Ok(integral_over(&prohorov_profile(mu, nu), upper))
}

/// Total variation of the profile over `[0, R]`: the sum of jump sizes at
/// breakpoints strictly below `R`. Bounded by `μ(B_R) + ν(B_R)`.
pub fn profile_total_variation(
    mu: &CountingMeasure,
    nu: &CountingMeasure,
    upper: f64,
) -> Result<f64> {
    if !(upper > 0.0) {
        return Err(Error::NonPositiveRadius { value: upper });
    }
    let profile = prohorov_profile(mu, nu);
    let mut variation = 0.0;
    for (k, bp) in profile.breakpoints().iter().enumerate() {
        if *bp >= upper {
            break;
        }
        variation += (profile.values()[k + 1] - profile.values()[k]).abs();
    }
    Ok(variation)
}
