//! Local Daugavet tests over a norm-determining set: the `(Γ, 𝒲, Δ)`
//! property, the small-slice-image hypothesis, and the pipeline that
//! assembles the `2 - 3ε` lower bound from them.

use super::DaugavetError;
use crate::maps::{rank_one, sum_map, BoundedMap, ScalarMap};
use crate::optim::{self, mix_seed, NormEstimate, OptimError, Region};
use crate::scalar::UnitScalarGrid;
use crate::slices::SliceSpec;
use crate::spaces::Vector;
use num_complex::Complex64;
use serde::Serialize;

/// The triple `(Γ, 𝒲, Δ)`: a subset of the ball that determines the norms
/// under test, a family of scalar functions, and a set of unit vectors.
#[derive(Debug, Clone)]
pub struct LocalContext {
    pub gamma: Region,
    pub w: Vec<ScalarMap>,
    pub delta: Vec<Vector>,
}

/// Evidence that `Γ` determines the norm of a map: the restricted and
/// unrestricted sup estimates agree within tolerance.
#[derive(Debug, Clone, Serialize)]
pub struct NormDetermination {
    pub gamma_sup: f64,
    pub ball_sup: f64,
    pub determined: bool,
}

pub fn check_norm_determining(
    phi: &BoundedMap,
    gamma: Region,
    budget: u64,
    seed: u64,
    tol: f64,
) -> Result<NormDetermination, DaugavetError> {
    let restricted = optim::sup_norm(phi, budget, mix_seed(seed, 1), Some(gamma))?;
    let full = optim::sup_norm(phi, budget, mix_seed(seed, 2), None)?;
    Ok(NormDetermination {
        gamma_sup: restricted.lower_bound,
        ball_sup: full.lower_bound,
        determined: (full.lower_bound - restricted.lower_bound).abs() <= tol,
    })
}

#[derive(Debug, Clone, Serialize)]
pub enum LocalVerdict {
    Holds,
    Fails { upper_bound: f64 },
    Inconclusive,
}

/// The slice-witness form of the local property for one `(x', y)` pair:
/// `x ∈ S(ωx', ε) ∩ Γ` with `‖ωΦ(x) + y‖ ≥ 2 - 2ε`.
#[derive(Debug, Clone, Serialize)]
pub struct SliceWitnessForm {
    pub omega: Complex64,
    pub x: Vector,
    pub value: f64,
    pub epsilon: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct LocalCell {
    pub w_index: usize,
    pub delta_index: usize,
    pub estimate: NormEstimate,
    pub verdict: LocalVerdict,
    pub witness_form: Option<SliceWitnessForm>,
}

#[derive(Debug, Clone, Serialize)]
pub struct LocalTable {
    pub phi_gamma_norm: f64,
    pub norm_determination: NormDetermination,
    pub cells: Vec<LocalCell>,
}

impl LocalTable {
    pub fn all_hold(&self) -> bool {
        self.cells
            .iter()
            .all(|c| matches!(c.verdict, LocalVerdict::Holds))
    }

    pub fn cell(&self, w: usize, d: usize) -> Option<&LocalCell> {
        self.cells
            .iter()
            .find(|c| c.w_index == w && c.delta_index == d)
    }
}

/// Per-pair table of `sup_{x∈Γ} ‖Φ(x) + x'(x)y‖` against the target 2.
///
/// Each estimate also hunts the slice-witness form at `ε = witness_eps`,
/// scanning the real rotations.
pub fn local_daugavet_check(
    phi: &BoundedMap,
    ctx: &LocalContext,
    witness_eps: f64,
    budget: u64,
    seed: u64,
) -> Result<LocalTable, DaugavetError> {
    let tol = optim::default_tol(phi.domain());
    let phi_gamma = optim::sup_norm(phi, budget, mix_seed(seed, 3), Some(ctx.gamma))?;
    if (phi_gamma.lower_bound - 1.0).abs() > tol.max(1e-6) {
        return Err(DaugavetError::HypothesisFailed(format!(
            "‖Φ‖_Γ estimates to {}, expected 1",
            phi_gamma.lower_bound
        )));
    }
    let norm_determination = check_norm_determining(phi, ctx.gamma, budget, seed, tol.max(1e-6))?;

    let mut cells = Vec::new();
    for (wi, x_prime) in ctx.w.iter().enumerate() {
        for (di, y) in ctx.delta.iter().enumerate() {
            let perturbed = sum_map(phi, &rank_one(x_prime, y), None)?;
            let estimate = optim::sup_norm(
                &perturbed,
                budget,
                mix_seed(seed, (17 + wi * 31 + di) as u64),
                Some(ctx.gamma),
            )?;
            let verdict = if estimate.lower_bound >= 2.0 - tol {
                LocalVerdict::Holds
            } else if let Some(up) = estimate.upper_bound {
                if up < 2.0 - tol {
                    LocalVerdict::Fails { upper_bound: up }
                } else {
                    LocalVerdict::Inconclusive
                }
            } else {
                LocalVerdict::Inconclusive
            };

            let witness_form = slice_witness_form(
                phi,
                x_prime,
                y,
                witness_eps,
                ctx.gamma,
                budget,
                mix_seed(seed, (1000 + wi * 31 + di) as u64),
            )?;
            cells.push(LocalCell {
                w_index: wi,
                delta_index: di,
                estimate,
                verdict,
                witness_form,
            });
        }
    }
    Ok(LocalTable {
        phi_gamma_norm: phi_gamma.lower_bound,
        norm_determination,
        cells,
    })
}

/// Searches `ω ∈ {±1}` (or the grid in complex mode) and
/// `x ∈ S(ωx', ε) ∩ Γ` with `‖ωΦ(x) + y‖ ≥ 2 - 2ε`.
fn slice_witness_form(
    phi: &BoundedMap,
    x_prime: &ScalarMap,
    y: &Vector,
    epsilon: f64,
    gamma: Region,
    budget: u64,
    seed: u64,
) -> Result<Option<SliceWitnessForm>, DaugavetError> {
    let grid = UnitScalarGrid::default_for(phi.domain().field());
    for (i, omega) in grid.points().into_iter().enumerate() {
        let slice = SliceSpec::strong(x_prime, epsilon, omega)?;
        let objective = |x: &Vector| phi.eval(x).scale(omega).add(y).norm();
        match optim::sup_on_slice(objective, &slice, Some(gamma), budget, mix_seed(seed, i as u64)) {
            Ok(opt) => {
                if opt.value >= 2.0 - 2.0 * epsilon - 1e-12 {
                    return Ok(Some(SliceWitnessForm {
                        omega,
                        x: opt.witness,
                        value: opt.value,
                        epsilon,
                    }));
                }
            }
            Err(OptimError::InfeasibleOnBudget { .. }) => continue,
            Err(e) => return Err(e.into()),
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, Serialize)]
pub enum SmallImageVerdict {
    /// For every grid ω with a nonempty slice, the image of
    /// `S(ωx', δ) ∩ Γ` stayed within `ε` of `ω̄y`.
    HoldsOnGrid {
        max_distance: f64,
        vacuous_omegas: usize,
        checked_omegas: usize,
    },
    Violated {
        omega: Complex64,
        witness: Vector,
        distance: f64,
    },
    /// Every slice in the rotation grid was empty.
    Vacuous,
}

impl SmallImageVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, SmallImageVerdict::HoldsOnGrid { .. })
    }
}

/// Checks the hypothesis `Ψ(S(ωx', δ) ∩ Γ) ⊂ B_ε(ω̄y)` for every grid ω,
/// by maximizing `‖Ψ(x) - ω̄y‖` over each slice.
pub fn small_image_check(
    psi: &BoundedMap,
    x_prime: &ScalarMap,
    delta: f64,
    y: &Vector,
    epsilon: f64,
    gamma: Region,
    grid: &UnitScalarGrid,
    budget: u64,
    seed: u64,
) -> Result<SmallImageVerdict, DaugavetError> {
    let mut max_distance: f64 = 0.0;
    let mut vacuous = 0usize;
    let mut checked = 0usize;
    for (i, omega) in grid.points().into_iter().enumerate() {
        let slice = SliceSpec::strong(x_prime, delta, omega)?;
        let target = y.scale(omega.conj());
        let objective = |x: &Vector| psi.eval(x).sub(&target).norm();
        match optim::sup_on_slice(objective, &slice, Some(gamma), budget, mix_seed(seed, i as u64)) {
            Ok(opt) => {
                checked += 1;
                if opt.value >= epsilon {
                    debug_assert!(slice.margin(&opt.witness) >= 0.0);
                    return Ok(SmallImageVerdict::Violated {
                        omega,
                        witness: opt.witness,
                        distance: opt.value,
                    });
                }
                max_distance = max_distance.max(opt.value);
            }
            Err(OptimError::InfeasibleOnBudget { .. }) => vacuous += 1,
            Err(e) => return Err(e.into()),
        }
    }
    if checked == 0 {
        return Ok(SmallImageVerdict::Vacuous);
    }
    Ok(SmallImageVerdict::HoldsOnGrid {
        max_distance,
        vacuous_omegas: vacuous,
        checked_omegas: checked,
    })
}

#[derive(Debug, Clone, Copy)]
pub struct T1Params {
    pub epsilon: f64,
    /// Slice widths tried for the small-image hypothesis, ascending.
    pub delta_grid: [f64; 3],
}

impl Default for T1Params {
    fn default() -> Self {
        T1Params {
            epsilon: 0.05,
            delta_grid: [0.0125, 0.025, 0.05],
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub enum T1Outcome {
    CertifiedLower {
        bound: f64,
        threshold: f64,
        witness: Vector,
        omega: Complex64,
        w_index: usize,
        delta_index: usize,
        slice_delta: f64,
    },
    Inconclusive {
        stage: String,
        detail: String,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct T1Report {
    pub outcome: T1Outcome,
    pub defect: Option<crate::optim::DefectReport>,
}

/// Replays the local lower-bound argument: find `(x', y, δ)` passing the
/// small-image check, pull a slice witness for `(x', y)`, and assemble
/// `‖Φ + Ψ‖_Γ ≥ ‖ωΦ(x) + y‖ - ‖Ψ(x) - ω̄y‖ ≥ 2 - 3ε`.
pub fn theorem_t1_pipeline(
    phi: &BoundedMap,
    psi: &BoundedMap,
    ctx: &LocalContext,
    params: T1Params,
    budget: u64,
    seed: u64,
) -> Result<T1Report, DaugavetError> {
    let epsilon = params.epsilon;
    let grid = UnitScalarGrid::default_for(phi.domain().field());
    let mut hypothesis: Option<(usize, usize, f64)> = None;
    'outer: for (wi, x_prime) in ctx.w.iter().enumerate() {
        for (di, y) in ctx.delta.iter().enumerate() {
            for delta in params.delta_grid {
                if delta > epsilon {
                    continue;
                }
                let verdict = small_image_check(
                    psi,
                    x_prime,
                    delta,
                    y,
                    epsilon,
                    ctx.gamma,
                    &grid,
                    budget,
                    mix_seed(seed, (wi * 101 + di * 13) as u64),
                )?;
                if verdict.holds() {
                    hypothesis = Some((wi, di, delta));
                    break 'outer;
                }
            }
        }
    }
    let (wi, di, delta) = match hypothesis {
        Some(h) => h,
        None => {
            return Ok(T1Report {
                outcome: T1Outcome::Inconclusive {
                    stage: "small-image".into(),
                    detail: "no (x', y, δ) satisfied the small-image hypothesis".into(),
                },
                defect: None,
            })
        }
    };
    let x_prime = &ctx.w[wi];
    let y = &ctx.delta[di];

    // Slice-witness form of the local property at the hypothesis δ.
    let witness = slice_witness_form(phi, x_prime, y, delta, ctx.gamma, budget, mix_seed(seed, 7))?;
    let w = match witness {
        Some(w) => w,
        None => {
            return Ok(T1Report {
                outcome: T1Outcome::Inconclusive {
                    stage: "local-witness".into(),
                    detail: format!("no slice witness at δ = {delta}"),
                },
                defect: None,
            })
        }
    };

    // The small-image hypothesis must actually hold at the witness.
    let image_dist = psi.eval(&w.x).sub(&y.scale(w.omega.conj())).norm();
    if image_dist >= epsilon {
        return Ok(T1Report {
            outcome: T1Outcome::Inconclusive {
                stage: "image-transfer".into(),
                detail: format!("witness image misses by {image_dist}"),
            },
            defect: None,
        });
    }

    let bound = phi.eval(&w.x).add(&psi.eval(&w.x)).norm();
    let threshold = 2.0 - 3.0 * epsilon;
    let outcome = if bound >= threshold - 1e-9 {
        T1Outcome::CertifiedLower {
            bound,
            threshold,
            witness: w.x.clone(),
            omega: w.omega,
            w_index: wi,
            delta_index: di,
            slice_delta: delta,
        }
    } else {
        T1Outcome::Inconclusive {
            stage: "assembled-bound".into(),
            detail: format!("direct evaluation gives {bound} < {threshold}"),
        }
    };
    let defect = optim::defect(
        phi,
        psi,
        budget,
        mix_seed(seed, 9),
        optim::DefectOptions {
            region: Some(ctx.gamma),
            ..Default::default()
        },
    )?;
    Ok(T1Report {
        outcome,
        defect: Some(defect),
    })
}
