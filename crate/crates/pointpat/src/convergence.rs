//! Finite-sample checkers for the four equivalent convergence criteria.
//!
//! For a sequence `(μ_k)` and target `μ`, the following are equivalent in
//! the limit: (i) `d#(μ_k, μ) → 0`; (ii) integrals of bounded continuous
//! functions with bounded support converge; (iii) restricted Prohorov
//! distances converge along a sequence of continuity radii; (iv) masses of
//! bounded sets with `μ(∂A) = 0` converge.
//!
//! A finite sequence cannot witness a limit, so each checker evaluates a
//! finite-sample surrogate: the final term must be within tolerance, and
//! for the `d#` criterion the tail of the sequence must not be increasing
//! beyond the tolerance slack. The verdicts are diagnostics, not proofs;
//! on honestly convergent or divergent inputs the four checkers agree,
//! and a disagreement flags a scenario worth inspecting.

use std::fmt;

use crate::measure::{CountingMeasure, PointSet};
use crate::prohorov::prohorov_distance;
use crate::space::{euclidean, Point};
use crate::weakhash::weak_hash_distance;
use crate::{Error, Result};

/// A finite sequence of measures with its claimed limit.
#[derive(Debug, Clone)]
pub struct MeasureSequence {
    target: CountingMeasure,
    terms: Vec<CountingMeasure>,
}

impl MeasureSequence {
    pub fn new(target: CountingMeasure, terms: Vec<CountingMeasure>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::EmptySequence);
        }
        for term in &terms {
            if term.ctx() != target.ctx() {
                return Err(Error::DimensionMismatch {
                    expected: target.ctx().dimension(),
                    found: term.ctx().dimension(),
                });
            }
        }
        Ok(Self { target, terms })
    }

    pub fn target(&self) -> &CountingMeasure {
        &self.target
    }

    pub fn terms(&self) -> &[CountingMeasure] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Which of the four criteria a verdict refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Criterion {
    WeakHash,
    Integrals,
    Restrictions,
    Sets,
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Criterion::WeakHash => "weak-hash",
            Criterion::Integrals => "integrals",
            Criterion::Restrictions => "restrictions",
            Criterion::Sets => "sets",
        };
        f.write_str(name)
    }
}

/// Outcome of one checker: the boolean verdict plus one diagnostic value
/// per sequence term (distance, worst integral gap, or worst mass gap).
#[derive(Debug, Clone)]
pub struct ConvergenceVerdict {
    pub criterion: Criterion,
    pub pass: bool,
    pub trace: Vec<f64>,
}

/// A bounded continuous test function with compact support: a piecewise
/// linear tent or a smooth bump, centred anywhere, scaled to `height`.
#[derive(Debug, Clone)]
pub struct TestFunction {
    kind: TestFunctionKind,
    center: Point,
    radius: f64,
    height: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum TestFunctionKind {
    Tent,
    Bump,
}

impl TestFunction {
    pub fn tent(center: Point, radius: f64, height: f64) -> Result<Self> {
        Self::build(TestFunctionKind::Tent, center, radius, height)
    }

    pub fn bump(center: Point, radius: f64, height: f64) -> Result<Self> {
        Self::build(TestFunctionKind::Bump, center, radius, height)
    }

    fn build(kind: TestFunctionKind, center: Point, radius: f64, height: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::InvalidSupport { value: radius });
        }
        if !height.is_finite() {
            return Err(Error::InvalidSupport { value: height });
        }
        Ok(Self { kind, center, radius, height })
    }

    pub fn support_center(&self) -> &Point {
        &self.center
    }

    pub fn support_radius(&self) -> f64 {
        self.radius
    }

    pub fn evaluate(&self, p: &Point) -> f64 {
        let t = euclidean(&self.center, p) / self.radius;
        if t >= 1.0 {
            return 0.0;
        }
        match self.kind {
            TestFunctionKind::Tent => self.height * (1.0 - t),
            TestFunctionKind::Bump => self.height * (1.0 - 1.0 / (1.0 - t * t)).exp(),
        }
    }
}

fn validate_tolerance(tol: f64) -> Result<()> {
    if !(tol > 0.0) {
        return Err(Error::InvalidTolerance { value: tol });
    }
    Ok(())
}

/// Final value below `tol`, and the last quarter of the trace does not
/// increase by more than `tol` between consecutive terms.
fn final_and_tail_pass(trace: &[f64], tol: f64) -> bool {
    let last = *trace.last().expect("nonempty sequence");
    if last >= tol {
        return false;
    }
    let n = trace.len();
    let tail_len = (n.div_ceil(4)).max(2).min(n);
    let tail = &trace[n - tail_len..];
    tail.windows(2).all(|w| w[1] <= w[0] + tol)
}

/// Criterion (i): the weak-hash distances to the target shrink.
pub fn check_criterion_weakhash(seq: &MeasureSequence, tol: f64) -> Result<ConvergenceVerdict> {
    validate_tolerance(tol)?;
    let trace: Vec<f64> = seq
        .terms()
        .iter()
        .map(|term| weak_hash_distance(term, seq.target()))
        .collect();
    let pass = final_and_tail_pass(&trace, tol);
    Ok(ConvergenceVerdict { criterion: Criterion::WeakHash, pass, trace })
}

/// Criterion (ii): integrals of every test function converge. The trace
/// holds, per term, the worst absolute integral gap over the battery.
pub fn check_criterion_integrals(
    seq: &MeasureSequence,
    funcs: &[TestFunction],
    tol: f64,
) -> Result<ConvergenceVerdict> {
    validate_tolerance(tol)?;
    let target_integrals: Vec<f64> = funcs
        .iter()
        .map(|f| seq.target().integrate(|p| f.evaluate(p)))
        .collect::<Result<_>>()?;
    let mut trace = Vec::with_capacity(seq.len());
    for term in seq.terms() {
        let mut worst = 0.0f64;
        for (f, target_value) in funcs.iter().zip(&target_integrals) {
            let value = term.integrate(|p| f.evaluate(p))?;
            worst = worst.max((value - target_value).abs());
        }
        trace.push(worst);
    }
    let pass = *trace.last().expect("nonempty sequence") < tol;
    Ok(ConvergenceVerdict { criterion: Criterion::Integrals, pass, trace })
}

/// Picks `count` strictly increasing radii in `(0, r_max]`, each with zero
/// boundary mass for `mu`: one per equal-width slot, at the midpoint of
/// the widest atom-free distance gap inside that slot.
pub fn select_continuity_radii(
    mu: &CountingMeasure,
    count: usize,
    r_max: f64,
) -> Result<Vec<f64>> {
    assert!(count >= 1, "count must be at least 1");
    if !(r_max > 0.0) {
        return Err(Error::NonPositiveRadius { value: r_max });
    }
    let mut distances = mu.origin_distances();
    distances.sort_by(f64::total_cmp);
    distances.dedup();

    let width = r_max / count as f64;
    let mut radii = Vec::with_capacity(count);
    for slot in 0..count {
        let lo = slot as f64 * width;
        let hi = lo + width;
        // Gap endpoints: the slot bounds plus any atom distances inside.
        let mut cuts = vec![lo];
        cuts.extend(distances.iter().copied().filter(|d| lo < *d && *d < hi));
        cuts.push(hi);
        let mut gaps: Vec<(f64, f64)> = cuts.windows(2).map(|w| (w[0], w[1])).collect();
        gaps.sort_by(|a, b| (b.1 - b.0).total_cmp(&(a.1 - a.0)));
        let mut chosen = None;
        for (a, b) in gaps {
            let mid = (a + b) / 2.0;
            if mid > lo && mid < hi && mu.boundary_mass(mid)? == 0 {
                chosen = Some(mid);
                break;
            }
        }
        radii.push(chosen.expect("a finite atom set always leaves a gap"));
    }
    Ok(radii)
}

/// Criterion (iii): restricted Prohorov distances at continuity radii.
/// The trace holds, per term, the worst distance over the radii.
pub fn check_criterion_restrictions(
    seq: &MeasureSequence,
    radii: &[f64],
    tol: f64,
) -> Result<ConvergenceVerdict> {
    validate_tolerance(tol)?;
    for &r in radii {
        if !(r > 0.0) {
            return Err(Error::NonPositiveRadius { value: r });
        }
        if seq.target().boundary_mass(r)? != 0 {
            return Err(Error::RadiusOnAtomSphere { radius: r });
        }
    }
    let mut trace = Vec::with_capacity(seq.len());
    for term in seq.terms() {
        let mut worst = 0.0f64;
        for &r in radii {
            let d = prohorov_distance(
                &term.restriction(r)?,
                &seq.target().restriction(r)?,
            );
            worst = worst.max(d);
        }
        trace.push(worst);
    }
    let pass = *trace.last().expect("nonempty sequence") < tol;
    Ok(ConvergenceVerdict { criterion: Criterion::Restrictions, pass, trace })
}

/// Criterion (iv): masses of bounded continuity sets. Masses are
/// integers, so convergence means eventual equality; the effective
/// threshold is `min(tol, 1)`.
pub fn check_criterion_sets(
    seq: &MeasureSequence,
    sets: &[PointSet],
    tol: f64,
) -> Result<ConvergenceVerdict> {
    validate_tolerance(tol)?;
    for (index, set) in sets.iter().enumerate() {
        if !set.is_bounded() {
            return Err(Error::UnboundedSet);
        }
        if seq.target().boundary_set_mass(set) != 0 {
            return Err(Error::AtomOnSetBoundary { index });
        }
    }
    let target_masses: Vec<u64> = sets.iter().map(|s| seq.target().set_mass(s)).collect();
    let mut trace = Vec::with_capacity(seq.len());
    for term in seq.terms() {
        let worst = sets
            .iter()
            .zip(&target_masses)
            .map(|(s, tm)| term.set_mass(s).abs_diff(*tm))
            .max()
            .unwrap_or(0);
        trace.push(worst as f64);
    }
    let pass = *trace.last().expect("nonempty sequence") < tol.min(1.0);
    Ok(ConvergenceVerdict { criterion: Criterion::Sets, pass, trace })
}

/// The data of one basis neighbourhood of the weak-hash topology: a
/// centre pattern, a slack `ε`, finitely many bounded closed sets, and
/// finitely many ball radii at which the centre has no boundary mass.
#[derive(Debug, Clone)]
pub struct NeighborhoodSpec {
    center: CountingMeasure,
    epsilon: f64,
    closed_sets: Vec<PointSet>,
    radii: Vec<f64>,
}

impl NeighborhoodSpec {
    pub fn new(
        center: CountingMeasure,
        epsilon: f64,
        closed_sets: Vec<PointSet>,
        radii: Vec<f64>,
    ) -> Result<Self> {
        if !(epsilon > 0.0) {
            return Err(Error::InvalidEpsilon { value: epsilon });
        }
        for set in &closed_sets {
            if !set.is_bounded() {
                return Err(Error::UnboundedSet);
            }
        }
        for &r in &radii {
            if !(r > 0.0) {
                return Err(Error::NonPositiveRadius { value: r });
            }
            if center.boundary_mass(r)? != 0 {
                return Err(Error::RadiusOnAtomSphere { radius: r });
            }
        }
        Ok(Self { center, epsilon, closed_sets, radii })
    }

    pub fn center(&self) -> &CountingMeasure {
        &self.center
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
}

/// Membership of `ξ` in the basis neighbourhood: `ξ(F_i) < μ(F_i) + ε`
/// for every closed set, and for every radius both
/// `|ξ(B̄_r) − μ(B̄_r)| < ε` and `ξ(∂B_r) = 0`.
pub fn basis_neighborhood_contains(xi: &CountingMeasure, spec: &NeighborhoodSpec) -> Result<bool> {
    assert!(
        xi.ctx() == spec.center.ctx(),
        "measures must share a metric context (same dimension and origin)"
    );
    for set in &spec.closed_sets {
        let xi_mass = xi.set_mass(set) as f64;
        let center_mass = spec.center.set_mass(set) as f64;
        if !(xi_mass < center_mass + spec.epsilon) {
            return Ok(false);
        }
    }
    for &r in &spec.radii {
        let xi_closed = (xi.ball_mass(r)? + xi.boundary_mass(r)?) as f64;
        let center_closed = (spec.center.ball_mass(r)? + spec.center.boundary_mass(r)?) as f64;
        if !((xi_closed - center_closed).abs() < spec.epsilon) {
            return Ok(false);
        }
        if xi.boundary_mass(r)? != 0 {
            return Ok(false);
        }
    }
    Ok(true)
}
