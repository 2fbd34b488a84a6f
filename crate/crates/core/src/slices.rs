//! Slices of the unit ball and the strong/weak slice-continuity relations.
//!
//! A strong slice `S(p, ε)` collects the ball points with `Re ω·p(x) ≥ 1-ε`;
//! a weak slice `S'(p, ε)` uses `|p(x)| ≥ 1-ε` and ignores the rotation.
//! The universally quantified relations between natural slice families are
//! checked over finite declared families and a rotation grid, so every
//! positive verdict is explicitly grid-relative (`HoldsOnGrid`), while a
//! violation carries a re-verifiable witness.

use crate::maps::{adjoint_functional, BoundedMap, MapError, ScalarMap};
use crate::optim::{self, OptimError, Region};
use crate::scalar::{modulus, UnitScalarGrid};
use crate::spaces::{DualFunctional, Space, SpaceError, Vector};
use num_complex::Complex64;
use serde::Serialize;

#[derive(Debug, Clone, thiserror::Error, PartialEq)]
pub enum SliceError {
    #[error("epsilon must lie in (0, 1], got {0}")]
    BadEpsilon(f64),
    #[error("omega must have modulus one, got |omega| = {0}")]
    BadOmega(f64),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Optim(#[from] OptimError),
    #[error("slice families live on different domains")]
    DomainMismatch,
    #[error("rotation check requires a bilinear map, got {0}")]
    NotBilinear(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SliceKind {
    Strong,
    Weak,
}

/// A (functional, ε, ω) slice of the unit ball.
#[derive(Debug, Clone)]
pub struct SliceSpec {
    pub functional: ScalarMap,
    pub epsilon: f64,
    pub omega: Complex64,
    pub kind: SliceKind,
}

impl SliceSpec {
    pub fn strong(functional: &ScalarMap, epsilon: f64, omega: Complex64) -> Result<Self, SliceError> {
        if !(epsilon > 0.0 && epsilon <= 1.0) {
            return Err(SliceError::BadEpsilon(epsilon));
        }
        if (modulus(omega) - 1.0).abs() > 1e-12 {
            return Err(SliceError::BadOmega(modulus(omega)));
        }
        Ok(SliceSpec {
            functional: functional.clone(),
            epsilon,
            omega,
            kind: SliceKind::Strong,
        })
    }

    pub fn weak(functional: &ScalarMap, epsilon: f64) -> Result<Self, SliceError> {
        if !(epsilon > 0.0 && epsilon <= 1.0) {
            return Err(SliceError::BadEpsilon(epsilon));
        }
        Ok(SliceSpec {
            functional: functional.clone(),
            epsilon,
            omega: Complex64::new(1.0, 0.0),
            kind: SliceKind::Weak,
        })
    }

    pub fn domain(&self) -> &Space {
        self.functional.domain()
    }

    /// ε = 1 is the whole-ball sentinel used by the engines.
    pub fn is_vacuous(&self) -> bool {
        self.epsilon >= 1.0
    }

    /// Signed feasibility margin: nonnegative iff `x` lies in the slice.
    pub fn margin(&self, x: &Vector) -> f64 {
        if self.is_vacuous() {
            return 0.0;
        }
        let p = self.functional.eval(x);
        match self.kind {
            SliceKind::Strong => (self.omega * p).re - (1.0 - self.epsilon),
            SliceKind::Weak => modulus(p) - (1.0 - self.epsilon),
        }
    }

    /// Same slice rotated to `ω`.
    pub fn with_omega(&self, omega: Complex64) -> SliceSpec {
        let mut s = self.clone();
        if s.kind == SliceKind::Strong {
            s.omega = omega;
        }
        s
    }
}

/// Exact membership predicate; errors on points outside the ball.
pub fn membership(slice: &SliceSpec, x: &Vector) -> Result<bool, SliceError> {
    let n = x.norm();
    if n > 1.0 + 1e-9 {
        return Err(SliceError::Space(SpaceError::OutsideBall(n)));
    }
    if slice.is_vacuous() {
        return Ok(true);
    }
    Ok(slice.margin(x) >= 0.0)
}

/// Finite stand-in for the natural slice family of a map: the normalized
/// functionals that passed the nondegeneracy check, each usable at any of
/// the declared ε values and rotations.
#[derive(Debug, Clone)]
pub struct SliceFamily {
    pub base_map: BoundedMap,
    pub functionals: Vec<(DualFunctional, ScalarMap)>,
    /// Functionals rejected as degenerate (estimated `‖y*Φ‖` under tolerance).
    pub skipped: Vec<DualFunctional>,
    pub epsilons: Vec<f64>,
    pub omega_grid: UnitScalarGrid,
    pub kind: SliceKind,
}

impl SliceFamily {
    /// Normalizes every functional through the base map, skipping the
    /// degenerate ones with a note.
    pub fn build(
        base_map: &BoundedMap,
        functionals: &[DualFunctional],
        epsilons: &[f64],
        omega_grid: UnitScalarGrid,
        kind: SliceKind,
        budget: u64,
        seed: u64,
    ) -> Result<Self, SliceError> {
        let mut kept = Vec::new();
        let mut skipped = Vec::new();
        for f in functionals {
            match optim::normalized_functional(base_map, f, budget, seed) {
                Ok(s) => kept.push((f.clone(), s)),
                Err(OptimError::Map(MapError::DegenerateFunctional(_))) => skipped.push(f.clone()),
                Err(e) => return Err(e.into()),
            }
        }
        for eps in epsilons {
            if !(*eps > 0.0 && *eps <= 1.0) {
                return Err(SliceError::BadEpsilon(*eps));
            }
        }
        Ok(SliceFamily {
            base_map: base_map.clone(),
            functionals: kept,
            skipped,
            epsilons: epsilons.to_vec(),
            omega_grid,
            kind,
        })
    }

    pub fn domain(&self) -> &Space {
        self.base_map.domain()
    }
}

#[derive(Debug, Clone, Serialize)]
pub enum InclusionStatus {
    HoldsOnGrid,
    /// The inner slice was never entered; inclusion is vacuous.
    VacuouslyHolds,
    Violated { witness: Vector, omega: Complex64 },
    Inconclusive,
}

/// Outcome of an inclusion search `inner ⊂ outer`.
#[derive(Debug, Clone, Serialize)]
pub struct InclusionVerdict {
    pub status: InclusionStatus,
    /// Largest observed outer deficiency over the inner slice.
    pub max_violation: f64,
    pub evaluations: u64,
}

const VIOLATION_TOL: f64 = 1e-9;

/// Searches for a point of `inner ∩ Γ` that fails `outer`, by maximizing
/// the outer deficiency over the inner slice.
pub fn check_inclusion(
    inner: &SliceSpec,
    outer: &SliceSpec,
    region: Option<Region>,
    budget: u64,
    seed: u64,
) -> Result<InclusionVerdict, SliceError> {
    if inner.domain() != outer.domain() {
        return Err(SliceError::DomainMismatch);
    }
    let deficiency = |x: &Vector| -outer.margin(x);
    match optim::sup_on_slice(deficiency, inner, region, budget, seed) {
        Ok(opt) => {
            let status = if opt.value > VIOLATION_TOL {
                // Witness re-verification: inside inner, outside outer.
                debug_assert!(inner.margin(&opt.witness) >= 0.0);
                debug_assert!(outer.margin(&opt.witness) < 0.0);
                InclusionStatus::Violated {
                    witness: opt.witness.clone(),
                    omega: inner.omega,
                }
            } else if opt.value <= 0.0 {
                InclusionStatus::HoldsOnGrid
            } else {
                InclusionStatus::Inconclusive
            };
            Ok(InclusionVerdict {
                status,
                max_violation: opt.value,
                evaluations: opt.evaluations,
            })
        }
        Err(OptimError::InfeasibleOnBudget { .. }) => Ok(InclusionVerdict {
            status: InclusionStatus::VacuouslyHolds,
            max_violation: f64::NEG_INFINITY,
            evaluations: budget,
        }),
        Err(e) => Err(e.into()),
    }
}

/// One row of a slice-continuity table: the verdict for a single target
/// slice of the left-hand family.
#[derive(Debug, Clone, Serialize)]
pub struct ContinuityRow {
    pub target_functional: usize,
    pub target_epsilon: f64,
    pub verdict: ContinuityVerdict,
}

#[derive(Debug, Clone, Serialize)]
pub enum ContinuityVerdict {
    /// Some candidate slice of the right-hand family is contained in the
    /// target for every grid rotation simultaneously.
    HoldsOnGrid {
        candidate: String,
        mu: f64,
        vacuous: bool,
    },
    /// Every candidate failed with a certified witness.
    Violated {
        witness: Vector,
        omega: Complex64,
        candidate: String,
    },
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct ContinuityTable {
    pub kind: SliceKind,
    pub rows: Vec<ContinuityRow>,
}

impl ContinuityTable {
    pub fn all_hold(&self) -> bool {
        self.rows
            .iter()
            .all(|r| matches!(r.verdict, ContinuityVerdict::HoldsOnGrid { .. }))
    }

    pub fn any_violated(&self) -> bool {
        self.rows
            .iter()
            .any(|r| matches!(r.verdict, ContinuityVerdict::Violated { .. }))
    }
}

/// A candidate inner functional with a label for the report.
struct Candidate {
    label: String,
    scalar: ScalarMap,
}

/// Candidate inner functionals, in the order the source constructions
/// suggest: the pull-back `y*P` when the target map factors as `P ∘ Φ`
/// through the candidate map, then the target functional itself, then the
/// declared family.
fn candidate_list(
    psi: &BoundedMap,
    phi: &BoundedMap,
    target_functional: &DualFunctional,
    candidate_family: &SliceFamily,
    budget: u64,
    seed: u64,
) -> Vec<Candidate> {
    let mut out: Vec<Candidate> = Vec::new();
    if let Some((p, inner)) = psi.as_composition() {
        if inner.name() == phi.name() && inner.domain() == phi.domain() {
            if let Some(pulled) = adjoint_functional(p, target_functional) {
                if let Ok(s) = optim::normalized_functional(phi, &pulled, budget, seed) {
                    out.push(Candidate {
                        label: "pullback(y*P)".into(),
                        scalar: s,
                    });
                }
            }
        }
    }
    if target_functional.space() == phi.codomain() {
        if let Ok(s) = optim::normalized_functional(phi, target_functional, budget, seed) {
            out.push(Candidate {
                label: "target functional".into(),
                scalar: s,
            });
        }
    }
    for (i, (_, s)) in candidate_family.functionals.iter().enumerate() {
        out.push(Candidate {
            label: format!("family[{i}]"),
            scalar: s.clone(),
        });
    }
    out
}

fn continuity_check(
    psi: &BoundedMap,
    phi: &BoundedMap,
    target_family: &SliceFamily,
    candidate_family: &SliceFamily,
    kind: SliceKind,
    budget: u64,
    seed: u64,
) -> Result<ContinuityTable, SliceError> {
    if target_family.domain() != candidate_family.domain() {
        return Err(SliceError::DomainMismatch);
    }
    let omegas = match kind {
        SliceKind::Strong => target_family.omega_grid.points(),
        SliceKind::Weak => vec![Complex64::new(1.0, 0.0)],
    };
    let mut rows = Vec::new();
    for (ti, (t_dual, t_scalar)) in target_family.functionals.iter().enumerate() {
        for eps in &target_family.epsilons {
            let candidates =
                candidate_list(psi, phi, t_dual, candidate_family, budget, optim::mix_seed(seed, ti as u64));
            // Candidate μ values, smallest first.
            let mut mus: Vec<f64> = candidate_family
                .epsilons
                .iter()
                .copied()
                .chain([eps / 2.0, *eps])
                .filter(|m| *m > 0.0 && *m <= 1.0)
                .collect();
            mus.sort_by(|a, b| a.partial_cmp(b).unwrap());
            mus.dedup();

            let mut verdict = ContinuityVerdict::Inconclusive;
            let mut found = false;
            let mut last_violation: Option<(Vector, Complex64, String)> = None;
            let mut all_certified = !candidates.is_empty();
            for cand in &candidates {
                let mut cand_violated = None;
                for mu in &mus {
                    let mut holds_all = true;
                    let mut vacuous_all = true;
                    let mut violated = None;
                    for omega in &omegas {
                        let (inner, outer) = match kind {
                            SliceKind::Strong => (
                                SliceSpec::strong(&cand.scalar, *mu, *omega)?,
                                SliceSpec::strong(t_scalar, *eps, *omega)?,
                            ),
                            SliceKind::Weak => (
                                SliceSpec::weak(&cand.scalar, *mu)?,
                                SliceSpec::weak(t_scalar, *eps)?,
                            ),
                        };
                        let v = check_inclusion(&inner, &outer, None, budget, seed)?;
                        match v.status {
                            InclusionStatus::HoldsOnGrid => {
                                vacuous_all = false;
                            }
                            InclusionStatus::VacuouslyHolds => {}
                            InclusionStatus::Violated { witness, omega } => {
                                violated = Some((witness, omega));
                                holds_all = false;
                                break;
                            }
                            InclusionStatus::Inconclusive => {
                                holds_all = false;
                                all_certified = false;
                                break;
                            }
                        }
                    }
                    if holds_all {
                        verdict = ContinuityVerdict::HoldsOnGrid {
                            candidate: cand.label.clone(),
                            mu: *mu,
                            vacuous: vacuous_all,
                        };
                        found = true;
                        break;
                    }
                    if let Some((w, om)) = violated {
                        cand_violated = Some((w, om, cand.label.clone()));
                    }
                }
                if found {
                    break;
                }
                match cand_violated {
                    Some(v) => last_violation = Some(v),
                    None => all_certified = false,
                }
            }
            if !found {
                verdict = match (&last_violation, all_certified) {
                    (Some((w, om, label)), true) => ContinuityVerdict::Violated {
                        witness: w.clone(),
                        omega: *om,
                        candidate: label.clone(),
                    },
                    _ => ContinuityVerdict::Inconclusive,
                };
            }
            rows.push(ContinuityRow {
                target_functional: ti,
                target_epsilon: *eps,
                verdict,
            });
        }
    }
    Ok(ContinuityTable { kind, rows })
}

/// Per-target-slice search for candidate slices witnessing strong slice
/// continuity of `Ψ` with respect to `Φ`: a candidate succeeds only when
/// the rotated inclusion holds for every grid ω simultaneously.
pub fn check_strong_slice_continuity(
    psi: &BoundedMap,
    phi: &BoundedMap,
    target_family: &SliceFamily,
    candidate_family: &SliceFamily,
    budget: u64,
    seed: u64,
) -> Result<ContinuityTable, SliceError> {
    continuity_check(
        psi,
        phi,
        target_family,
        candidate_family,
        SliceKind::Strong,
        budget,
        seed,
    )
}

/// Weak-slice analogue (no rotation quantifier).
pub fn check_weak_slice_continuity(
    psi: &BoundedMap,
    phi: &BoundedMap,
    target_family: &SliceFamily,
    candidate_family: &SliceFamily,
    budget: u64,
    seed: u64,
) -> Result<ContinuityTable, SliceError> {
    continuity_check(
        psi,
        phi,
        target_family,
        candidate_family,
        SliceKind::Weak,
        budget,
        seed,
    )
}

/// Verdict of the rotation-identity check for bilinear maps:
/// `x ∈ S(ωA_{x*}, ε)` iff `(ωx₁, x₂) ∈ S(A_{x*}, ε)`.
#[derive(Debug, Clone, Serialize)]
pub enum RotationVerdict {
    HoldsOnGrid { samples: usize },
    Violated { witness: Vector, omega: Complex64 },
}

/// Samples the rotation identity that collapses slice continuity and
/// strong slice continuity for multilinear maps.
pub fn multilinear_rotation_check(
    a: &BoundedMap,
    functionals: &[DualFunctional],
    epsilons: &[f64],
    omega_grid: &UnitScalarGrid,
    budget: u64,
    seed: u64,
) -> Result<RotationVerdict, SliceError> {
    if !a.is_bilinear() {
        return Err(SliceError::NotBilinear(a.name().to_string()));
    }
    let domain = a.domain().clone();
    let (left, _) = domain.summands().expect("bilinear domain is a pair");
    let samples = crate::spaces::sample_sphere(&domain, seed, (budget as usize).min(2000));
    let mut checked = 0usize;
    for y_star in functionals {
        let scalar = optim::normalized_functional(a, y_star, 2000, optim::mix_seed(seed, 77))?;
        for eps in epsilons {
            for omega in omega_grid.points() {
                for x in &samples {
                    let direct = SliceSpec::strong(&scalar, *eps, omega)?;
                    let m1 = direct.margin(x);
                    // Rotate the first block of coordinates.
                    let mut rotated = x.clone();
                    for c in rotated.coords_mut()[..left.dim()].iter_mut() {
                        *c *= omega;
                    }
                    let unrotated = SliceSpec::strong(&scalar, *eps, Complex64::new(1.0, 0.0))?;
                    let m2 = unrotated.margin(&rotated);
                    // Only decisive samples count; knife-edge values within
                    // roundoff of the threshold are skipped.
                    if m1.abs() <= 1e-9 || m2.abs() <= 1e-9 {
                        continue;
                    }
                    if (m1 >= 0.0) != (m2 >= 0.0) {
                        return Ok(RotationVerdict::Violated {
                            witness: x.clone(),
                            omega,
                        });
                    }
                    checked += 1;
                }
            }
        }
    }
    Ok(RotationVerdict::HoldsOnGrid { samples: checked })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps;
    use crate::scalar::ScalarField;
    use crate::spaces::sample_sphere;

    fn sup(n: usize) -> Space {
        Space::sup(n, ScalarField::Real)
    }

    fn e1_slice(s: &Space, eps: f64) -> SliceSpec {
        let f = ScalarMap::functional(&DualFunctional::basis(s, 0));
        SliceSpec::strong(&f, eps, Complex64::new(1.0, 0.0)).unwrap()
    }

    #[test]
    fn membership_examples() {
        let s = sup(2);
        let slice = e1_slice(&s, 0.2);
        let x = Vector::from_reals(&s, &[0.9, 0.0]).unwrap();
        assert!(membership(&slice, &x).unwrap());

        let outside = Vector::from_reals(&s, &[2.0, 0.0]).unwrap();
        assert!(matches!(
            membership(&slice, &outside),
            Err(SliceError::Space(SpaceError::OutsideBall(_)))
        ));

        // The discontinuous 1-d map: Re Ψ(0.9) = -0.9 < 1/2.
        let line = sup(1);
        let psi = maps::step_down(&line).unwrap();
        let psi_scalar = optim::normalized_functional(&psi, &DualFunctional::basis(&line, 0), 500, 3).unwrap();
        let strong = SliceSpec::strong(&psi_scalar, 0.5, Complex64::new(1.0, 0.0)).unwrap();
        let x09 = Vector::from_reals(&line, &[0.9]).unwrap();
        assert!(!membership(&strong, &x09).unwrap());

        // Weak slices ignore sign.
        let id_scalar = ScalarMap::functional(&DualFunctional::basis(&line, 0));
        let weak = SliceSpec::weak(&id_scalar, 0.1).unwrap();
        let neg = Vector::from_reals(&line, &[-0.95]).unwrap();
        assert!(membership(&weak, &neg).unwrap());
    }

    #[test]
    fn epsilon_monotonicity_of_membership() {
        let s = sup(3);
        let slice_tight = e1_slice(&s, 0.1);
        let slice_loose = e1_slice(&s, 0.3);
        for x in sample_sphere(&s, 5, 500) {
            if membership(&slice_tight, &x).unwrap() {
                assert!(membership(&slice_loose, &x).unwrap());
            }
        }
    }

    #[test]
    fn inclusion_monotone_in_epsilon() {
        let s = sup(2);
        let inner = e1_slice(&s, 0.1);
        let outer = e1_slice(&s, 0.3);
        let v = check_inclusion(&inner, &outer, None, 3000, 1).unwrap();
        assert!(matches!(v.status, InclusionStatus::HoldsOnGrid));

        // Reversed inclusion is violated with a re-checkable witness.
        let v = check_inclusion(&outer, &inner, None, 3000, 1).unwrap();
        match v.status {
            InclusionStatus::Violated { witness, .. } => {
                assert!(inner.margin(&witness) < 0.0);
                assert!(outer.margin(&witness) >= 0.0);
            }
            other => panic!("expected violation, got {other:?}"),
        }
    }

    #[test]
    fn vacuous_inner_slice_is_flagged() {
        // Pairing a square image against -𝟏 can never reach 1-δ.
        let s = sup(3);
        let phi = maps::square(&s);
        let minus_ones = DualFunctional::from_reals(&s, &[-1.0 / 3.0; 3]).unwrap();
        let scalar = ScalarMap::normalized_with_estimate(&phi, &minus_ones, 1.0, 1e-9).unwrap();
        let inner = SliceSpec::strong(&scalar, 0.2, Complex64::new(1.0, 0.0)).unwrap();
        let outer = e1_slice(&s, 0.5);
        let v = check_inclusion(&inner, &outer, None, 2000, 2).unwrap();
        assert!(matches!(v.status, InclusionStatus::VacuouslyHolds));
    }

    #[test]
    fn vacuous_epsilon_one_reduces_to_plain_sup() {
        let s = sup(2);
        let slice = e1_slice(&s, 1.0);
        assert!(slice.is_vacuous());
        let opt = optim::sup_on_slice(
            |x| {
                let e1 = Vector::basis(&s, 0);
                x.add(&e1).norm()
            },
            &slice,
            None,
            2000,
            3,
        )
        .unwrap();
        assert!((opt.value - 2.0).abs() <= 1e-9);
    }

    #[test]
    fn sup_on_slice_matches_grid_oracle() {
        // Oracle: brute force over a fine grid of the square confined to
        // x₁ ≥ 0.9 gives max ‖x + e₁‖∞ = 2 at x₁ = 1.
        let s = sup(2);
        let slice = e1_slice(&s, 0.1);
        let e1 = Vector::basis(&s, 0);
        let opt = optim::sup_on_slice(|x| x.add(&e1).norm(), &slice, None, 4000, 9).unwrap();
        assert!((opt.value - 2.0).abs() <= 1e-9);
        assert!(opt.witness.coords()[0].re >= 0.9);
    }

    #[test]
    fn strong_continuity_of_identity_with_itself() {
        let s = sup(2);
        let id = maps::identity(&s);
        let funs = vec![DualFunctional::basis(&s, 0)];
        let fam = SliceFamily::build(
            &id,
            &funs,
            &[0.25],
            UnitScalarGrid::real(),
            SliceKind::Strong,
            2000,
            5,
        )
        .unwrap();
        let table = check_strong_slice_continuity(&id, &id, &fam, &fam, 2000, 5).unwrap();
        assert!(table.all_hold());
    }

    #[test]
    fn rotation_identity_for_random_tensor() {
        let s = sup(2);
        let t = vec![
            vec![
                vec![Complex64::new(0.6, 0.0), Complex64::new(-0.2, 0.0)],
                vec![Complex64::new(0.1, 0.0), Complex64::new(0.4, 0.0)],
            ],
            vec![
                vec![Complex64::new(-0.3, 0.0), Complex64::new(0.5, 0.0)],
                vec![Complex64::new(0.2, 0.0), Complex64::new(0.1, 0.0)],
            ],
        ];
        let a = maps::bilinear_from_tensor(&s, &s, &s, t).unwrap();
        let funs = vec![DualFunctional::basis(&s, 0), DualFunctional::basis(&s, 1)];
        let verdict = multilinear_rotation_check(
            &a,
            &funs,
            &[0.2, 0.5],
            &UnitScalarGrid::real(),
            1000,
            13,
        )
        .unwrap();
        assert!(matches!(verdict, RotationVerdict::HoldsOnGrid { .. }));
    }

    #[test]
    fn rotation_check_rejects_nonbilinear() {
        let s = sup(2);
        let phi = maps::cube(&s);
        assert!(matches!(
            multilinear_rotation_check(
                &phi,
                &[DualFunctional::basis(&s, 0)],
                &[0.2],
                &UnitScalarGrid::real(),
                100,
                1,
            ),
            Err(SliceError::NotBilinear(_))
        ));
    }

    #[test]
    fn lemma_bound_on_slice_scalars() {
        // |c| ≤ 1 and Re c ≥ 1-ε force |1-c| ≤ √(2ε); the boundary scalar
        // (1-ε) + i√(2ε-ε²) attains it.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
        for eps in [0.01, 0.1, 0.5] {
            for _ in 0..10_000 {
                let re = 1.0 - eps * rng.gen::<f64>();
                let im_max = (1.0 - re * re).max(0.0).sqrt();
                let im = im_max * (2.0 * rng.gen::<f64>() - 1.0);
                let c = Complex64::new(re, im);
                assert!((Complex64::new(1.0, 0.0) - c).norm() <= (2.0 * eps).sqrt() + 1e-12);
            }
            let boundary = Complex64::new(1.0 - eps, (2.0 * eps - eps * eps).sqrt());
            let lhs = (Complex64::new(1.0, 0.0) - boundary).norm();
            assert!((lhs - (2.0 * eps).sqrt()).abs() <= 1e-12);
        }
    }

    #[test]
    fn phase_helper_consistency() {
        // ω = |c|/c rotates c onto the nonnegative axis, the step used by
        // weak-to-strong membership arguments.
        let c = Complex64::new(-0.8, 0.0);
        let om = crate::scalar::unimodular_phase(c);
        assert_eq!((om * c).re, 0.8);
    }
}
