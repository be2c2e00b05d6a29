//! Exact Prohorov distance between counting measures.
//!
//! For finite atomic measures the worst-case closed set in the Prohorov
//! condition `μ(A) ≤ ν(A^ε) + ε` is always a subset of atoms, and for a
//! subset `S` the deficiency `μ(S) − ν(S^ε)` is governed by a Hall-type
//! bound: its maximum over all `S` equals `μ(X) − maxflow(ε)`, where
//! `maxflow(ε)` is the max flow of the bipartite network joining μ-atoms
//! to ν-atoms through edges with pairwise distance strictly below `ε`
//! (matching the openness of `A^ε`). Feasibility of a given `ε` is then
//! `max(μ(X), ν(X)) − maxflow(ε) ≤ ε`.
//!
//! The feasible set of `ε` is up-closed, and the max flow only changes at
//! the finitely many pairwise distances, so the infimum is found exactly
//! by sweeping the distance-sorted intervals: on `(d_k, d_{k+1}]` the
//! infimum candidate is `max(d_k, m − G_k)`, clamped to the interval,
//! with `G_k` the flow admitting edges of distance `≤ d_k`. The returned
//! value is the true infimum even when it is not attained.
//!
//! [`prohorov_oracle`] recomputes the same infimum by brute force —
//! subset enumeration instead of flows — and is the reference the solver
//! is tested against.
//!
//! All pair operations require both measures to share a metric context
//! and panic otherwise; the fallible preconditions are reported as
//! [`Error`](crate::Error) values.

use crate::flow::bipartite_max_flow;
use crate::measure::CountingMeasure;
use crate::space::euclidean;
use crate::{Error, Result};

/// Largest combined atom count accepted by the subset-enumeration oracle.
pub const MAX_ORACLE_ATOMS: usize = 12;

fn assert_shared_context(mu: &CountingMeasure, nu: &CountingMeasure) {
    assert!(
        mu.ctx() == nu.ctx(),
        "measures must share a metric context (same dimension and origin)"
    );
}

/// Atom weights and the pairwise distance matrix of a measure pair.
struct PairData {
    left: Vec<u64>,
    right: Vec<u64>,
    /// Row-major `left.len() × right.len()`.
    dist: Vec<f64>,
}

impl PairData {
    fn new(mu: &CountingMeasure, nu: &CountingMeasure) -> Self {
        let left: Vec<u64> = mu.atoms().iter().map(|(_, m)| *m).collect();
        let right: Vec<u64> = nu.atoms().iter().map(|(_, m)| *m).collect();
        let mut dist = Vec::with_capacity(left.len() * right.len());
        for (p, _) in mu.atoms() {
            for (q, _) in nu.atoms() {
                dist.push(euclidean(p, q));
            }
        }
        Self { left, right, dist }
    }

    fn d(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.right.len() + j]
    }

    /// Distinct positive pairwise distances, ascending. These are the only
    /// thresholds at which the admissible edge set changes.
    fn thresholds(&self) -> Vec<f64> {
        let mut t: Vec<f64> = self.dist.iter().copied().filter(|d| *d > 0.0).collect();
        t.sort_by(f64::total_cmp);
        t.dedup();
        t
    }

    /// Max flow admitting edges of distance `≤ bound`.
    fn max_flow_leq(&self, bound: f64) -> u64 {
        bipartite_max_flow(&self.left, &self.right, |i, j| self.d(i, j) <= bound)
    }

    /// Max flow admitting edges of distance `< bound` (open neighbourhoods).
    fn max_flow_strict(&self, bound: f64) -> u64 {
        bipartite_max_flow(&self.left, &self.right, |i, j| self.d(i, j) < bound)
    }
}

/// The bipartite feasibility network for one threshold: μ-atom weights,
/// ν-atom weights, their distance matrix, and the strict admission
/// threshold `ε` (an edge is admissible iff its distance is `< ε`).
pub struct FlowInstance {
    data: PairData,
    threshold: f64,
}

impl FlowInstance {
    pub fn new(mu: &CountingMeasure, nu: &CountingMeasure, threshold: f64) -> Result<Self> {
        assert_shared_context(mu, nu);
        if !(threshold > 0.0) {
            return Err(Error::InvalidEpsilon { value: threshold });
        }
        Ok(Self { data: PairData::new(mu, nu), threshold })
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn left_mass(&self) -> u64 {
        self.data.left.iter().sum()
    }

    pub fn right_mass(&self) -> u64 {
        self.data.right.iter().sum()
    }

    /// Whether the edge `(i, j)` is admissible at this threshold.
    pub fn admissible(&self, i: usize, j: usize) -> bool {
        self.data.d(i, j) < self.threshold
    }

    /// Exact integral max-flow value through the admissible edges.
    pub fn max_flow(&self) -> u64 {
        self.data.max_flow_strict(self.threshold)
    }
}

/// Whether `ε` satisfies both Prohorov inequalities for all closed sets.
pub fn prohorov_feasible(mu: &CountingMeasure, nu: &CountingMeasure, eps: f64) -> Result<bool> {
    let instance = FlowInstance::new(mu, nu, eps)?;
    let mass = instance.left_mass().max(instance.right_mass());
    let deficiency = mass - instance.max_flow();
    Ok(deficiency as f64 <= eps)
}

/// Exact Prohorov distance (infimum semantics: the value is returned even
/// when no `ε` attains it).
pub fn prohorov_distance(mu: &CountingMeasure, nu: &CountingMeasure) -> f64 {
    assert_shared_context(mu, nu);
    let data = PairData::new(mu, nu);
    if data.left.is_empty() && data.right.is_empty() {
        return 0.0;
    }
    let mass = mu.total_mass().max(nu.total_mass());
    let thresholds = data.thresholds();
    let mut best = f64::INFINITY;
    for k in 0..=thresholds.len() {
        let lo = if k == 0 { 0.0 } else { thresholds[k - 1] };
        if lo >= best {
            break;
        }
        let hi = thresholds.get(k).copied().unwrap_or(f64::INFINITY);
        let flow = data.max_flow_leq(lo);
        let candidate = lo.max((mass - flow) as f64);
        if candidate <= hi && candidate < best {
            best = candidate;
        }
    }
    best
}

/// The finite set of values the Prohorov infimum can take for a pair:
/// zero, the pairwise atom distances, and the per-interval deficiencies.
///
/// Deficiencies are computed here by subset enumeration, independently of
/// the flow solver, so the set doubles as oracle scaffolding.
pub struct CandidateSet {
    values: Vec<f64>,
}

impl CandidateSet {
    pub fn for_pair(mu: &CountingMeasure, nu: &CountingMeasure) -> Result<Self> {
        assert_shared_context(mu, nu);
        let data = PairData::new(mu, nu);
        check_oracle_size(&data)?;
        let thresholds = data.thresholds();
        let mut values = vec![0.0];
        values.extend_from_slice(&thresholds);
        for k in 0..=thresholds.len() {
            let lo = if k == 0 { 0.0 } else { thresholds[k - 1] };
            values.push(subset_deficiency_leq(&data, lo) as f64);
        }
        values.sort_by(f64::total_cmp);
        values.dedup();
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

fn check_oracle_size(data: &PairData) -> Result<()> {
    let atoms = data.left.len() + data.right.len();
    if atoms > MAX_ORACLE_ATOMS {
        return Err(Error::InstanceTooLarge { atoms, max: MAX_ORACLE_ATOMS });
    }
    Ok(())
}

/// Max of `a(S) − b(S-neighbourhood)` over all subsets `S` of the `a`
/// side, with the neighbourhood taken through `admit` edges.
fn one_sided_deficiency<F>(a: &[u64], b: &[u64], admit: F) -> u64
where
    F: Fn(usize, usize) -> bool,
{
    let n = a.len();
    let coverage: Vec<u32> = (0..n)
        .map(|i| {
            (0..b.len())
                .filter(|&j| admit(i, j))
                .fold(0u32, |acc, j| acc | (1 << j))
        })
        .collect();
    let mut best = 0i64;
    for mask in 0u32..(1u32 << n) {
        let mut a_mass = 0i64;
        let mut covered = 0u32;
        for (i, cov) in coverage.iter().enumerate() {
            if mask & (1 << i) != 0 {
                a_mass += a[i] as i64;
                covered |= cov;
            }
        }
        let b_mass: i64 = b
            .iter()
            .enumerate()
            .filter(|(j, _)| covered & (1 << j) != 0)
            .map(|(_, w)| *w as i64)
            .sum();
        best = best.max(a_mass - b_mass);
    }
    best as u64
}

/// Worst subset deficiency (either direction) when neighbourhoods admit
/// distances `≤ bound`.
fn subset_deficiency_leq(data: &PairData, bound: f64) -> u64 {
    let forward = one_sided_deficiency(&data.left, &data.right, |i, j| data.d(i, j) <= bound);
    let backward = one_sided_deficiency(&data.right, &data.left, |j, i| data.d(i, j) <= bound);
    forward.max(backward)
}

/// Brute-force Prohorov distance by subset enumeration over the candidate
/// set. Only for small instances; exact reference for
/// [`prohorov_distance`].
///
/// A candidate `c` is accepted when both inequalities hold for every atom
/// subset at all `ε` just above `c` — i.e. with closed `≤ c`
/// neighbourhoods and budget `c` — which is exactly the right-limit test
/// an infimum requires, whether or not it is attained.
pub fn prohorov_oracle(mu: &CountingMeasure, nu: &CountingMeasure) -> Result<f64> {
    let candidates = CandidateSet::for_pair(mu, nu)?;
    let data = PairData::new(mu, nu);
    for &c in candidates.values() {
        if subset_deficiency_leq(&data, c) as f64 <= c {
            return Ok(c);
        }
    }
    unreachable!("the candidate set always contains a feasible value");
}

/// Mass of the open annulus `B_r ∖ B_p`, which bounds
/// `d(μ^(p), μ^(r))` from above.
pub fn restriction_distance_bound(mu: &CountingMeasure, p: f64, r: f64) -> Result<u64> {
    if p > r {
        return Err(Error::InvalidInterval { lo: p, hi: r });
    }
    Ok(mu.ball_mass(r)? - mu.ball_mass(p)?)
}

/// Gap test giving a lower bound on the full-measure distance: if `μ` has
/// no atom in the annulus `B_{r_hi} ∖ B_{r_lo}` while `ν` has one in the
/// `ε`-shrunken annulus, then `d(μ, ν) ≥ ε`.
///
/// Returns whether the hypotheses hold; `true` certifies the bound.
pub fn atom_gap_lower_bound(
    mu: &CountingMeasure,
    nu: &CountingMeasure,
    r_lo: f64,
    r_hi: f64,
    eps: f64,
) -> Result<bool> {
    assert_shared_context(mu, nu);
    if !(r_lo > 0.0) {
        return Err(Error::NonPositiveRadius { value: r_lo });
    }
    if !(r_lo < r_hi) {
        return Err(Error::InvalidInterval { lo: r_lo, hi: r_hi });
    }
    if !(eps > 0.0) {
        return Err(Error::InvalidEpsilon { value: eps });
    }
    let half_gap = (r_hi - r_lo) / 2.0;
    if !(eps < half_gap && half_gap < 1.0) {
        return Err(Error::GapHypothesis { eps, half_gap });
    }
    let mu_annulus = mu.ball_mass(r_hi)? - mu.ball_mass(r_lo)?;
    let nu_shrunken = nu.ball_mass(r_hi - eps)? - nu.ball_mass(r_lo + eps)?;
    Ok(mu_annulus == 0 && nu_shrunken > 0)
}

/// `|μ(B_r) − ν(B_r)|`, a lower bound on `d(μ^(r), ν^(r))`.
pub fn count_difference_bound(mu: &CountingMeasure, nu: &CountingMeasure, r: f64) -> Result<u64> {
    assert_shared_context(mu, nu);
    Ok(mu.ball_mass(r)?.abs_diff(nu.ball_mass(r)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{MetricContext, Point};
    use proptest::prelude::*;

    fn ctx(dim: usize) -> MetricContext {
        MetricContext::euclidean(dim).unwrap()
    }

    fn line_measure(atoms: &[(f64, u64)]) -> CountingMeasure {
        CountingMeasure::new(
            ctx(1),
            atoms
                .iter()
                .map(|&(x, m)| (Point::new(vec![x]).unwrap(), m))
                .collect(),
        )
        .unwrap()
    }

    fn dirac(x: f64) -> CountingMeasure {
        line_measure(&[(x, 1)])
    }

    fn empty() -> CountingMeasure {
        CountingMeasure::empty(ctx(1))
    }

    #[test]
    fn feasibility_at_sample_thresholds() {
        let mu = dirac(0.0);
        let nu = dirac(0.5);
        assert!(prohorov_feasible(&mu, &nu, 0.6).unwrap());
        assert!(!prohorov_feasible(&mu, &nu, 0.4).unwrap());
        let same = line_measure(&[(0.0, 2), (1.5, 1)]);
        assert!(prohorov_feasible(&same, &same, 1e-9).unwrap());
        assert!(prohorov_feasible(&same, &same, 7.0).unwrap());
        assert!(matches!(
            prohorov_feasible(&mu, &nu, 0.0),
            Err(Error::InvalidEpsilon { .. })
        ));
    }

    #[test]
    fn distance_between_offset_diracs() {
        assert_eq!(prohorov_distance(&dirac(0.0), &dirac(0.5)), 0.5);
    }

    #[test]
    fn distance_of_identical_measures_is_zero() {
        let mu = line_measure(&[(0.0, 2), (0.5, 1), (-1.25, 3)]);
        assert_eq!(prohorov_distance(&mu, &mu), 0.0);
    }

    #[test]
    fn distance_to_empty_is_total_mass_driven() {
        assert_eq!(prohorov_distance(&dirac(0.0), &empty()), 1.0);
        assert_eq!(prohorov_distance(&empty(), &empty()), 0.0);
    }

    #[test]
    fn mass_deficiency_dominates_at_zero_separation() {
        assert_eq!(prohorov_distance(&line_measure(&[(0.0, 2)]), &dirac(0.0)), 1.0);
    }

    #[test]
    fn oracle_matches_on_spec_examples() {
        assert_eq!(prohorov_oracle(&dirac(0.0), &dirac(0.5)).unwrap(), 0.5);
        let mu = line_measure(&[(0.0, 1), (2.0, 2)]);
        assert_eq!(prohorov_oracle(&mu, &mu).unwrap(), 0.0);
        assert_eq!(prohorov_oracle(&dirac(0.0), &empty()).unwrap(), 1.0);
    }

    #[test]
    fn oracle_rejects_large_instances() {
        let atoms: Vec<(f64, u64)> = (0..13).map(|i| (i as f64, 1)).collect();
        let big = line_measure(&atoms);
        assert!(matches!(
            prohorov_oracle(&big, &empty()),
            Err(Error::InstanceTooLarge { .. })
        ));
    }

    #[test]
    fn bottleneck_matching_with_equal_masses() {
        // Two well-separated clusters, each matched within 0.2.
        let mu = line_measure(&[(0.0, 1), (10.0, 1)]);
        let nu = line_measure(&[(0.2, 1), (10.1, 1)]);
        assert_eq!(prohorov_distance(&mu, &nu), 0.2);
        assert_eq!(prohorov_oracle(&mu, &nu).unwrap(), 0.2);
    }

    #[test]
    fn restriction_bound_examples() {
        let mu = line_measure(&[(0.0, 1), (1.0, 1)]);
        let bound = restriction_distance_bound(&mu, 0.5, 2.0).unwrap();
        assert_eq!(bound, 1);
        let d = prohorov_distance(
            &mu.restriction(0.5).unwrap(),
            &mu.restriction(2.0).unwrap(),
        );
        assert!(d <= bound as f64);
        assert_eq!(d, 1.0);

        assert_eq!(restriction_distance_bound(&mu, 0.7, 0.7).unwrap(), 0);
        assert_eq!(
            prohorov_distance(
                &mu.restriction(0.7).unwrap(),
                &mu.restriction(0.7).unwrap()
            ),
            0.0
        );
        assert_eq!(restriction_distance_bound(&empty(), 0.0, 5.0).unwrap(), 0);
        assert!(restriction_distance_bound(&mu, 2.0, 1.0).is_err());
    }

    #[test]
    fn atom_gap_bound_example() {
        let mu = dirac(0.0);
        let nu = dirac(0.5);
        let holds = atom_gap_lower_bound(&mu, &nu, 0.1, 0.9, 0.3).unwrap();
        assert!(holds);
        assert!(prohorov_distance(&mu, &nu) >= 0.3);
    }

    #[test]
    fn atom_gap_bound_hypothesis_failures() {
        // ν has no atom in the shrunken annulus: no claim.
        let mu = dirac(0.0);
        assert!(!atom_gap_lower_bound(&mu, &dirac(2.5), 0.1, 0.9, 0.3).unwrap());
        // μ itself has an atom in the annulus: hypothesis fails.
        let mu2 = line_measure(&[(0.0, 1), (0.5, 1)]);
        assert!(!atom_gap_lower_bound(&mu2, &dirac(0.5), 0.1, 0.9, 0.3).unwrap());
        // Malformed parameters are errors, not `false`.
        assert!(atom_gap_lower_bound(&mu, &dirac(0.5), 0.9, 0.1, 0.3).is_err());
        assert!(atom_gap_lower_bound(&mu, &dirac(0.5), 0.1, 0.9, 0.5).is_err());
        assert!(atom_gap_lower_bound(&mu, &dirac(0.5), 0.1, 3.0, 0.3).is_err());
    }

    #[test]
    fn count_difference_examples() {
        assert_eq!(count_difference_bound(&dirac(0.0), &empty(), 1.0).unwrap(), 1);
        let r1 = prohorov_distance(
            &dirac(0.0).restriction(1.0).unwrap(),
            &empty().restriction(1.0).unwrap(),
        );
        assert!(r1 >= 1.0);
        let mu = line_measure(&[(0.0, 3), (0.5, 1)]);
        assert_eq!(count_difference_bound(&mu, &mu, 2.0).unwrap(), 0);
        assert_eq!(
            count_difference_bound(&line_measure(&[(0.0, 1), (0.5, 1)]), &dirac(0.5), 0.2)
                .unwrap(),
            1
        );
    }

    #[test]
    fn flow_instance_strictness() {
        let instance = FlowInstance::new(&dirac(0.0), &dirac(0.5), 0.5).unwrap();
        assert!(!instance.admissible(0, 0));
        assert_eq!(instance.max_flow(), 0);
        let open = FlowInstance::new(&dirac(0.0), &dirac(0.5), 0.5000001).unwrap();
        assert!(open.admissible(0, 0));
        assert_eq!(open.max_flow(), 1);
    }

    prop_compose! {
        fn arb_line_measure(max_atoms: usize)(
            atoms in prop::collection::vec(
                (
                    prop_oneof![(-12i32..=12).prop_map(|i| i as f64 * 0.25), -3.0..3.0f64],
                    1u64..=3,
                ),
                0..=max_atoms,
            )
        ) -> CountingMeasure {
            line_measure(&atoms)
        }
    }

    proptest! {
        #[test]
        fn solver_agrees_with_oracle(
            mu in arb_line_measure(4),
            nu in arb_line_measure(4),
        ) {
            let fast = prohorov_distance(&mu, &nu);
            let slow = prohorov_oracle(&mu, &nu).unwrap();
            prop_assert!((fast - slow).abs() <= 1e-9, "fast={fast} slow={slow}");
        }

        #[test]
        fn symmetry_is_exact(mu in arb_line_measure(5), nu in arb_line_measure(5)) {
            prop_assert_eq!(prohorov_distance(&mu, &nu), prohorov_distance(&nu, &mu));
        }

        #[test]
        fn zero_iff_identical(mu in arb_line_measure(5), nu in arb_line_measure(5)) {
            let d = prohorov_distance(&mu, &nu);
            prop_assert_eq!(d == 0.0, mu == nu);
        }

        #[test]
        fn triangle_inequality(
            a in arb_line_measure(4),
            b in arb_line_measure(4),
            c in arb_line_measure(4),
        ) {
            let ac = prohorov_distance(&a, &c);
            let ab = prohorov_distance(&a, &b);
            let bc = prohorov_distance(&b, &c);
            prop_assert!(ac <= ab + bc + 1e-12);
        }

        #[test]
        fn feasibility_is_up_closed(
            mu in arb_line_measure(4),
            nu in arb_line_measure(4),
            eps in 0.01..2.0f64,
            bump in 0.001..2.0f64,
        ) {
            if prohorov_feasible(&mu, &nu, eps).unwrap() {
                prop_assert!(prohorov_feasible(&mu, &nu, eps + bump).unwrap());
            }
        }

        #[test]
        fn distance_is_a_candidate(mu in arb_line_measure(4), nu in arb_line_measure(4)) {
            let d = prohorov_distance(&mu, &nu);
            let candidates = CandidateSet::for_pair(&mu, &nu).unwrap();
            prop_assert!(candidates.values().contains(&d));
        }

        #[test]
        fn flow_bounded_by_either_mass(
            mu in arb_line_measure(5),
            nu in arb_line_measure(5),
            eps in 0.01..4.0f64,
        ) {
            let instance = FlowInstance::new(&mu, &nu, eps).unwrap();
            let flow = instance.max_flow();
            prop_assert!(flow <= instance.left_mass().min(instance.right_mass()));
        }

        #[test]
        fn deficiency_duality_against_flow(
            mu in arb_line_measure(4),
            nu in arb_line_measure(4),
            bound in 0.0..3.0f64,
        ) {
            // max_S [μ(S) − ν(S-nbhd)] computed by enumeration must equal
            // μ(X) − maxflow through the same edge set.
            let data = PairData::new(&mu, &nu);
            let brute = one_sided_deficiency(&data.left, &data.right, |i, j| data.d(i, j) <= bound);
            let flow = data.max_flow_leq(bound);
            prop_assert_eq!(brute, mu.total_mass() - flow);
        }

        #[test]
        fn reflection_invariance_is_exact(
            mu in arb_line_measure(4),
            nu in arb_line_measure(4),
        ) {
            let reflect = |m: &CountingMeasure| {
                CountingMeasure::new(
                    m.ctx().clone(),
                    m.atoms()
                        .iter()
                        .map(|(p, mult)| (Point::new(vec![-p.coords()[0]]).unwrap(), *mult))
                        .collect(),
                )
                .unwrap()
            };
            prop_assert_eq!(
                prohorov_distance(&mu, &nu),
                prohorov_distance(&reflect(&mu), &reflect(&nu))
            );
        }

        #[test]
        fn translation_invariance(
            mu in arb_line_measure(4),
            nu in arb_line_measure(4),
            shift in -2.0..2.0f64,
        ) {
            // Shift atoms and origin together: distances are preserved up
            // to floating-point rounding of the shifted coordinates.
            let shifted_ctx = MetricContext::new(Point::new(vec![shift]).unwrap());
            let translate = |m: &CountingMeasure| {
                CountingMeasure::new(
                    shifted_ctx.clone(),
                    m.atoms()
                        .iter()
                        .map(|(p, mult)| {
                            (Point::new(vec![p.coords()[0] + shift]).unwrap(), *mult)
                        })
                        .collect(),
                )
                .unwrap()
            };
            let base = prohorov_distance(&mu, &nu);
            let moved = prohorov_distance(&translate(&mu), &translate(&nu));
            prop_assert!((base - moved).abs() <= 1e-12);
        }
    }
}
