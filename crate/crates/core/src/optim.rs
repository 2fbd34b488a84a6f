//! Derivative-free sup-norm estimation over unit balls and constrained
//! maximization over slices.
//!
//! Searches only ever certify lower bounds: the returned value is the
//! objective re-evaluated at the witness, so every estimate can be checked
//! by direct evaluation. Upper bounds enter a report only when an analytic
//! source supplies them (a declared map bound or an interval evaluation),
//! never from the search itself.

use crate::interval;
use crate::maps::{self, BoundedMap, MapError, ScalarMap};
use crate::scalar::{lex_less, modulus, UnitScalarGrid};
use crate::slices::SliceSpec;
use crate::spaces::{
    dual_pair, extreme_points, project_to_ball, sample_sphere, DualFunctional, Space, Vector,
};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, thiserror::Error, PartialEq)]
pub enum OptimError {
    #[error("budget {budget} is too small for dimension {dim}")]
    BudgetTooSmall { budget: u64, dim: usize },
    #[error("the restriction rejects every candidate")]
    EmptyRestriction,
    #[error("no feasible slice point found within budget (best margin {best_margin:.3e})")]
    InfeasibleOnBudget { best_margin: f64 },
    #[error("observed value {observed} exceeds the declared upper bound {declared}")]
    BoundViolated { observed: f64, declared: f64 },
    #[error(transparent)]
    Map(#[from] MapError),
}

/// Subset of the unit ball a search may be restricted to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Region {
    FullBall,
    /// Coordinatewise nonnegative part of the ball (real mode).
    PositiveCone,
}

impl Region {
    pub fn contains(&self, v: &Vector) -> bool {
        match self {
            Region::FullBall => true,
            Region::PositiveCone => v.coords().iter().all(|c| c.re >= 0.0 && c.im == 0.0),
        }
    }

    /// Move a ball sample into the region (generator of feasible samples).
    pub fn adapt(&self, v: &Vector) -> Vector {
        match self {
            Region::FullBall => v.clone(),
            Region::PositiveCone => {
                let mut out = v.clone();
                for c in out.coords_mut() {
                    *c = Complex64::new(modulus(*c), 0.0);
                }
                out
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    ExtremePoints,
    Multistart,
    Hybrid,
}

/// Certified-lower-bound estimate of a sup norm.
#[derive(Debug, Clone, Serialize)]
pub struct NormEstimate {
    pub lower_bound: f64,
    pub upper_bound: Option<f64>,
    pub witness: Vector,
    pub evaluations: u64,
    pub method: Method,
    pub seed: u64,
}

pub(crate) fn mix_seed(seed: u64, salt: u64) -> u64 {
    let mut z = seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

const STEP_LEVELS: u32 = 20;
const INITIAL_STEP: f64 = 0.5;

struct Search<'a, F: Fn(&Vector) -> f64> {
    objective: F,
    domain: &'a Space,
    region: Region,
    budget: u64,
    evals: u64,
    best: Option<(f64, Vector)>,
    any_feasible: bool,
}

impl<'a, F: Fn(&Vector) -> f64> Search<'a, F> {
    fn new(objective: F, domain: &'a Space, region: Region, budget: u64) -> Self {
        Search {
            objective,
            domain,
            region,
            budget,
            evals: 0,
            best: None,
            any_feasible: false,
        }
    }

    fn exhausted(&self) -> bool {
        self.evals >= self.budget
    }

    /// Evaluate a candidate already inside ball ∩ region.
    fn probe(&mut self, cand: &Vector) -> f64 {
        self.evals += 1;
        self.any_feasible = true;
        let val = (self.objective)(cand);
        match &self.best {
            None => self.best = Some((val, cand.clone())),
            Some((bv, bw)) => {
                if val > *bv || (val == *bv && lex_less(cand.coords(), bw.coords())) {
                    self.best = Some((val, cand.clone()));
                }
            }
        }
        val
    }

    fn try_point(&mut self, raw: &Vector) -> Option<f64> {
        let cand = project_to_ball(&self.region.adapt(raw));
        if !self.region.contains(&cand) {
            return None;
        }
        Some(self.probe(&cand))
    }

    /// Coordinatewise pattern ascent with geometric step decay.
    fn pattern_search(&mut self, start: &Vector) {
        let start = project_to_ball(&self.region.adapt(start));
        if !self.region.contains(&start) {
            return;
        }
        let mut x = start;
        let mut fx = self.probe(&x);
        let complex = !self.domain.field().is_real();
        for level in 0..STEP_LEVELS {
            if self.exhausted() {
                return;
            }
            let step = INITIAL_STEP * 0.5f64.powi(level as i32);
            loop {
                let mut improved = false;
                'coords: for i in 0..self.domain.dim() {
                    let deltas: &[Complex64] = if complex {
                        &[
                            Complex64::new(step, 0.0),
                            Complex64::new(-step, 0.0),
                            Complex64::new(0.0, step),
                            Complex64::new(0.0, -step),
                        ]
                    } else {
                        &[Complex64::new(step, 0.0), Complex64::new(-step, 0.0)]
                    };
                    for d in deltas {
                        if self.exhausted() {
                            return;
                        }
                        let mut cand = x.clone();
                        cand.coords_mut()[i] += d;
                        let cand = project_to_ball(&cand);
                        if !self.region.contains(&cand) {
                            continue;
                        }
                        let fc = self.probe(&cand);
                        if fc > fx {
                            x = cand;
                            fx = fc;
                            improved = true;
                            continue 'coords;
                        }
                    }
                }
                if !improved {
                    break;
                }
            }
        }
    }
}

/// Starting points: canonical landmarks, then extreme points, then seeded
/// sphere samples. Generated in a fixed order so that enlarging the budget
/// only extends the schedule.
fn start_points(domain: &Space, budget: u64, seed: u64) -> (Vec<Vector>, usize, Method) {
    let mut starts = Vec::new();
    // Landmarks: ±𝟏 normalized and the basis directions. These carry the
    // exact witnesses of most closed-form scenarios.
    let ones = Vector::ones(domain);
    let n1 = ones.norm();
    if n1 > 0.0 {
        let u = ones.scale(Complex64::new(1.0 / n1, 0.0));
        starts.push(u.scale(Complex64::new(-1.0, 0.0)));
        starts.push(u);
    }
    for i in 0..domain.dim() {
        let e = Vector::basis(domain, i);
        let ne = e.norm();
        starts.push(e.scale(Complex64::new(1.0 / ne, 0.0)));
    }
    let extreme_cap = ((budget / 4).min(4096) as usize).max(1);
    let extremes = extreme_points(domain, extreme_cap);
    let n_fixed = starts.len() + extremes.len();
    starts.extend(extremes);
    let multistart = (budget / (2 * domain.dim() as u64 * STEP_LEVELS as u64)).max(1) as usize;
    let method = if multistart <= 1 {
        Method::ExtremePoints
    } else {
        Method::Hybrid
    };
    starts.extend(sample_sphere(domain, mix_seed(seed, 0xA11CE), multistart));
    (starts, n_fixed, method)
}

pub(crate) struct SearchOutcome {
    pub value: f64,
    pub witness: Vector,
    pub evaluations: u64,
    pub method: Method,
}

/// Maximize an arbitrary objective over ball ∩ region.
pub(crate) fn maximize<F: Fn(&Vector) -> f64>(
    objective: F,
    domain: &Space,
    region: Region,
    budget: u64,
    seed: u64,
) -> Result<SearchOutcome, OptimError> {
    if budget < domain.dim() as u64 {
        return Err(OptimError::BudgetTooSmall {
            budget,
            dim: domain.dim(),
        });
    }
    let (starts, _, method) = start_points(domain, budget, seed);
    let mut search = Search::new(objective, domain, region, budget);
    for s in &starts {
        if search.exhausted() {
            break;
        }
        search.try_point(s);
    }
    for s in &starts {
        if search.exhausted() {
            break;
        }
        search.pattern_search(s);
    }
    if !search.any_feasible {
        return Err(OptimError::EmptyRestriction);
    }
    let (_, witness) = search.best.clone().expect("feasible search has a best");
    // Recompute at the witness: the reported value is re-evaluable exactly.
    let value = (search.objective)(&witness);
    Ok(SearchOutcome {
        value,
        witness,
        evaluations: search.evals,
        method,
    })
}

/// `sup_{x ∈ B_X ∩ Γ} ‖Φ(x)‖` with a certified-lower-bound estimate.
///
/// The upper bound, when present, is the tighter of the map's declared
/// bound and an interval evaluation of the image box; both are validated
/// against the observed lower bound.
pub fn sup_norm(
    map: &BoundedMap,
    budget: u64,
    seed: u64,
    region: Option<Region>,
) -> Result<NormEstimate, OptimError> {
    let region = region.unwrap_or(Region::FullBall);
    let outcome = maximize(
        |x| map.eval(x).norm(),
        map.domain(),
        region,
        budget,
        seed,
    )?;
    let mut upper: Option<f64> = map.norm_bound;
    if let Some(ib) = interval::sup_norm_upper_bound(map) {
        upper = Some(match upper {
            Some(u) => u.min(ib),
            None => ib,
        });
    }
    if let Some(u) = upper {
        if outcome.value > u + 1e-9 {
            return Err(OptimError::BoundViolated {
                observed: outcome.value,
                declared: u,
            });
        }
    }
    Ok(NormEstimate {
        lower_bound: outcome.value,
        upper_bound: upper,
        witness: outcome.witness,
        evaluations: outcome.evaluations,
        method: outcome.method,
        seed,
    })
}

/// Result of a slice-constrained maximization.
#[derive(Debug, Clone, Serialize)]
pub struct SliceOptimum {
    pub value: f64,
    pub witness: Vector,
    pub evaluations: u64,
    /// Slice margin of the witness (nonnegative: the witness is feasible).
    pub margin: f64,
}

/// Maximize `objective` over `S(slice) ∩ Γ` by penalty search with
/// escalating multipliers, then feasibility filtering.
pub fn sup_on_slice<F: Fn(&Vector) -> f64>(
    objective: F,
    slice: &SliceSpec,
    region: Option<Region>,
    budget: u64,
    seed: u64,
) -> Result<SliceOptimum, OptimError> {
    let domain = slice.domain().clone();
    let region = region.unwrap_or(Region::FullBall);
    if budget < domain.dim() as u64 {
        return Err(OptimError::BudgetTooSmall {
            budget,
            dim: domain.dim(),
        });
    }
    if slice.is_vacuous() {
        let out = maximize(&objective, &domain, region, budget, seed)?;
        let margin = slice.margin(&out.witness);
        return Ok(SliceOptimum {
            value: out.value,
            witness: out.witness,
            evaluations: out.evaluations,
            margin,
        });
    }

    let mut evals: u64 = 0;
    let mut feasible_best: Option<(f64, Vector)> = None;
    let mut best_margin = f64::NEG_INFINITY;

    // Phase 1: chase feasibility by maximizing the slice margin.
    let phase1 = (budget / 4).max(domain.dim() as u64);
    {
        let out = maximize(|x| slice.margin(x), &domain, region, phase1, mix_seed(seed, 1))?;
        evals += out.evaluations;
        let m = slice.margin(&out.witness);
        best_margin = best_margin.max(m);
        if m >= 0.0 {
            let v = objective(&out.witness);
            evals += 1;
            feasible_best = Some((v, out.witness));
        }
    }

    // Phase 2: penalty ascent with escalating multipliers; every probe that
    // lands in the slice updates the feasible best.
    let lambdas = [8.0, 64.0, 512.0];
    let share = (budget.saturating_sub(evals) / lambdas.len() as u64).max(domain.dim() as u64);
    for (i, lambda) in lambdas.iter().enumerate() {
        let fb = std::cell::RefCell::new(feasible_best.take());
        let margin_floor = std::cell::RefCell::new(best_margin);
        let out = maximize(
            |x| {
                let m = slice.margin(x);
                let v = objective(x);
                {
                    let mut mf = margin_floor.borrow_mut();
                    if m > *mf {
                        *mf = m;
                    }
                }
                if m >= 0.0 {
                    let mut fb = fb.borrow_mut();
                    match &*fb {
                        None => *fb = Some((v, x.clone())),
                        Some((bv, bw)) => {
                            if v > *bv || (v == *bv && lex_less(x.coords(), bw.coords())) {
                                *fb = Some((v, x.clone()));
                            }
                        }
                    }
                }
                v - lambda * (-m).max(0.0)
            },
            &domain,
            region,
            share,
            mix_seed(seed, 2 + i as u64),
        )?;
        evals += out.evaluations;
        feasible_best = fb.into_inner();
        best_margin = margin_floor.into_inner();
    }

    match feasible_best {
        Some((_, witness)) => {
            let value = objective(&witness);
            let margin = slice.margin(&witness);
            Ok(SliceOptimum {
                value,
                witness,
                evaluations: evals,
                margin,
            })
        }
        None => Err(OptimError::InfeasibleOnBudget { best_margin }),
    }
}

/// Daugavet-defect verdict.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum DefectVerdict {
    DaugavetHolds { tol: f64 },
    DaugavetFails { gap: f64 },
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct DefectInterval {
    pub lo: f64,
    pub hi: Option<f64>,
}

/// Report on `‖Φ‖ + ‖Ψ‖ - ‖Φ+Ψ‖`.
#[derive(Debug, Clone, Serialize)]
pub struct DefectReport {
    pub norm_phi: NormEstimate,
    pub norm_psi: NormEstimate,
    pub norm_sum: NormEstimate,
    /// `est‖Φ‖ + est‖Ψ‖ - est‖Φ+Ψ‖` from the lower bounds.
    pub defect_estimate: f64,
    pub defect_interval: DefectInterval,
    pub witness: Vector,
    pub verdict: DefectVerdict,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct DefectOptions {
    pub region: Option<Region>,
    /// Declared analytic bound on `‖Φ+Ψ‖`, validated against observations.
    pub sum_bound: Option<f64>,
    /// Verdict tolerance; defaults per domain kind (1e-6 where extreme
    /// points attain suprema exactly, 1e-3 for search-only domains).
    pub tol: Option<f64>,
}

/// Default verdict tolerance: tight for polyhedral balls, loose otherwise.
pub fn default_tol(space: &Space) -> f64 {
    fn polyhedral(space: &Space) -> bool {
        match space.kind() {
            crate::spaces::SpaceKind::SupNorm { .. } => true,
            crate::spaces::SpaceKind::WeightedL1 { .. } => true,
            crate::spaces::SpaceKind::LpNorm { p, .. } => *p == 1.0,
            crate::spaces::SpaceKind::DirectSumL1 { left, right } => {
                polyhedral(left) && polyhedral(right)
            }
        }
    }
    if polyhedral(space) {
        1e-6
    } else {
        1e-3
    }
}

/// Three sup-norm runs sharing a seed schedule, then the verdict.
pub fn defect(
    phi: &BoundedMap,
    psi: &BoundedMap,
    budget: u64,
    seed: u64,
    opts: DefectOptions,
) -> Result<DefectReport, OptimError> {
    let sum = maps::sum_map(phi, psi, opts.sum_bound)?;
    let norm_phi = sup_norm(phi, budget, mix_seed(seed, 11), opts.region)?;
    let norm_psi = sup_norm(psi, budget, mix_seed(seed, 12), opts.region)?;
    let norm_sum = sup_norm(&sum, budget, mix_seed(seed, 13), opts.region)?;
    let tol = opts.tol.unwrap_or_else(|| default_tol(phi.domain()));

    let lo_sum = norm_phi.lower_bound + norm_psi.lower_bound;
    let defect_estimate = lo_sum - norm_sum.lower_bound;
    let interval_lo = match norm_sum.upper_bound {
        Some(up) => (lo_sum - up).max(0.0),
        None => 0.0,
    };
    let interval_hi = match (norm_phi.upper_bound, norm_psi.upper_bound) {
        (Some(a), Some(b)) => Some(a + b - norm_sum.lower_bound),
        _ => None,
    };
    let verdict = if norm_sum.lower_bound >= lo_sum - tol {
        DefectVerdict::DaugavetHolds { tol }
    } else if let Some(up) = norm_sum.upper_bound {
        if up < lo_sum - tol {
            DefectVerdict::DaugavetFails { gap: lo_sum - up }
        } else {
            DefectVerdict::Inconclusive
        }
    } else {
        DefectVerdict::Inconclusive
    };
    let witness = norm_sum.witness.clone();
    Ok(DefectReport {
        norm_phi,
        norm_psi,
        norm_sum,
        defect_estimate,
        defect_interval: DefectInterval {
            lo: interval_lo,
            hi: interval_hi,
        },
        witness,
        verdict,
    })
}

/// One grid rotation of the alternative Daugavet scan.
#[derive(Debug, Clone, Serialize)]
pub struct OmegaDefect {
    pub omega: Complex64,
    pub defect_estimate: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct AltDefectReport {
    pub best_omega: Complex64,
    pub best: DefectReport,
    pub scanned: Vec<OmegaDefect>,
}

/// `max_{|ω|=1} ‖Φ + ωΨ‖` versus `‖Φ‖ + ‖Ψ‖`: runs the defect at each
/// grid rotation and keeps the minimum-defect ω.
pub fn alt_defect(
    phi: &BoundedMap,
    psi: &BoundedMap,
    grid: &UnitScalarGrid,
    budget: u64,
    seed: u64,
    opts: DefectOptions,
) -> Result<AltDefectReport, OptimError> {
    let mut best: Option<(Complex64, DefectReport)> = None;
    let mut scanned = Vec::new();
    for omega in grid.points() {
        let rotated = maps::scale_map(omega, psi);
        // A declared bound for Φ+Ψ does not transfer to Φ+ωΨ.
        let omega_opts = DefectOptions {
            sum_bound: if omega == Complex64::new(1.0, 0.0) {
                opts.sum_bound
            } else {
                None
            },
            ..opts
        };
        let report = defect(phi, &rotated, budget, seed, omega_opts)?;
        scanned.push(OmegaDefect {
            omega,
            defect_estimate: report.defect_estimate,
        });
        let better = match &best {
            None => true,
            Some((_, b)) => report.defect_estimate < b.defect_estimate,
        };
        if better {
            best = Some((omega, report));
        }
    }
    let (best_omega, best) = best.expect("grid is nonempty");
    Ok(AltDefectReport {
        best_omega,
        best,
        scanned,
    })
}

/// Estimate `‖y*∘Φ‖` and build the normalized functional `Φ_{y*}`.
pub fn normalized_functional(
    phi: &BoundedMap,
    y_star: &DualFunctional,
    budget: u64,
    seed: u64,
) -> Result<ScalarMap, OptimError> {
    let outcome = maximize(
        |x| modulus(dual_pair(y_star, &phi.eval(x)).expect("functional on codomain")),
        phi.domain(),
        Region::FullBall,
        budget,
        seed,
    )?;
    Ok(ScalarMap::normalized_with_estimate(
        phi,
        y_star,
        outcome.value,
        1e-9,
    )?)
}
