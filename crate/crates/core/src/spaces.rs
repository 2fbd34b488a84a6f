//! Finite-dimensional normed spaces, their duals, and unit-ball sampling.
//!
//! Four norm kinds cover the spaces the scenarios need: coordinatewise sup
//! norms (discretized `C(K)`), `ℓp` norms, weighted `ℓ1` norms (discretized
//! `L¹(μ)` with one atom per cell), and the 1-direct-sum of two spaces.

use crate::scalar::{modulus, ScalarField};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;

#[derive(Debug, Clone, thiserror::Error, PartialEq)]
pub enum SpaceError {
    #[error("dimension mismatch: space has dimension {expected}, vector has {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("vector belongs to a different space (expected {expected}, got {got})")]
    SpaceMismatch { expected: String, got: String },
    #[error("invalid space: {0}")]
    InvalidSpace(String),
    #[error("real-mode vector has a nonzero imaginary part at coordinate {0}")]
    NotReal(usize),
    #[error("point lies outside the unit ball (norm {0})")]
    OutsideBall(f64),
}

/// Norm kind of a space.
#[derive(Debug, Clone, PartialEq)]
pub enum SpaceKind {
    /// `‖v‖ = max |v_i|` — a discretized `C(K)` / `ℓ∞`.
    SupNorm { dim: usize },
    /// `‖v‖ = (Σ |v_i|^p)^(1/p)` for `p ∈ [1, ∞)`.
    LpNorm { dim: usize, p: f64 },
    /// `‖v‖ = Σ w_i |v_i|` with strictly positive atom masses `w_i` —
    /// a discretized `L¹(μ)`.
    WeightedL1 { weights: Vec<f64> },
    /// `‖(u, v)‖ = ‖u‖ + ‖v‖`.
    DirectSumL1 { left: Space, right: Space },
}

#[derive(Debug, PartialEq)]
struct SpaceInner {
    kind: SpaceKind,
    field: ScalarField,
}

/// Descriptor of a finite-dimensional normed space. Cheap to clone.
#[derive(Clone)]
pub struct Space(Arc<SpaceInner>);

impl PartialEq for Space {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }
}

impl fmt::Debug for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}[{:?}]", self.0.kind, self.0.field)
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.kind {
            SpaceKind::SupNorm { dim } => write!(f, "sup({dim})"),
            SpaceKind::LpNorm { dim, p } => write!(f, "lp({dim},{p})"),
            SpaceKind::WeightedL1 { weights } => write!(f, "wl1({})", weights.len()),
            SpaceKind::DirectSumL1 { left, right } => write!(f, "({left} (+)1 {right})"),
        }
    }
}

impl Space {
    pub fn new(kind: SpaceKind, field: ScalarField) -> Result<Self, SpaceError> {
        match &kind {
            SpaceKind::SupNorm { dim } | SpaceKind::LpNorm { dim, .. } if *dim == 0 => {
                return Err(SpaceError::InvalidSpace("dimension must be positive".into()));
            }
            SpaceKind::LpNorm { p, .. } if !(*p >= 1.0 && p.is_finite()) => {
                return Err(SpaceError::InvalidSpace(format!("p must be in [1, inf), got {p}")));
            }
            SpaceKind::WeightedL1 { weights } => {
                if weights.is_empty() {
                    return Err(SpaceError::InvalidSpace("weights must be nonempty".into()));
                }
                if weights.iter().any(|w| !(*w > 0.0)) {
                    return Err(SpaceError::InvalidSpace(
                        "weights must be strictly positive".into(),
                    ));
                }
            }
            SpaceKind::DirectSumL1 { left, right } => {
                if left.field() != field || right.field() != field {
                    return Err(SpaceError::InvalidSpace(
                        "direct-sum components must share the scalar field".into(),
                    ));
                }
            }
            _ => {}
        }
        Ok(Space(Arc::new(SpaceInner { kind, field })))
    }

    pub fn sup(dim: usize, field: ScalarField) -> Self {
        Space::new(SpaceKind::SupNorm { dim }, field).expect("valid sup space")
    }

    pub fn lp(dim: usize, p: f64, field: ScalarField) -> Self {
        Space::new(SpaceKind::LpNorm { dim, p }, field).expect("valid lp space")
    }

    pub fn weighted_l1(weights: Vec<f64>, field: ScalarField) -> Self {
        Space::new(SpaceKind::WeightedL1 { weights }, field).expect("valid weighted-l1 space")
    }

    /// `n` equal atoms of total mass 1 — the stand-in for a non-atomic `L¹`.
    pub fn uniform_l1(n: usize, field: ScalarField) -> Self {
        Space::weighted_l1(vec![1.0 / n as f64; n], field)
    }

    pub fn direct_sum_l1(left: Space, right: Space) -> Self {
        let field = left.field();
        Space::new(SpaceKind::DirectSumL1 { left, right }, field).expect("valid direct sum")
    }

    pub fn kind(&self) -> &SpaceKind {
        &self.0.kind
    }

    pub fn field(&self) -> ScalarField {
        self.0.field
    }

    pub fn dim(&self) -> usize {
        match &self.0.kind {
            SpaceKind::SupNorm { dim } | SpaceKind::LpNorm { dim, .. } => *dim,
            SpaceKind::WeightedL1 { weights } => weights.len(),
            SpaceKind::DirectSumL1 { left, right } => left.dim() + right.dim(),
        }
    }

    /// Direct-sum components, if this is a direct sum.
    pub fn summands(&self) -> Option<(&Space, &Space)> {
        match &self.0.kind {
            SpaceKind::DirectSumL1 { left, right } => Some((left, right)),
            _ => None,
        }
    }

    fn check_len(&self, len: usize) -> Result<(), SpaceError> {
        if len != self.dim() {
            return Err(SpaceError::DimensionMismatch {
                expected: self.dim(),
                got: len,
            });
        }
        Ok(())
    }

    fn norm_coords(&self, coords: &[Complex64]) -> f64 {
        match &self.0.kind {
            SpaceKind::SupNorm { .. } => coords.iter().map(|c| modulus(*c)).fold(0.0, f64::max),
            SpaceKind::LpNorm { p, .. } => {
                if *p == 1.0 {
                    coords.iter().map(|c| modulus(*c)).sum()
                } else if *p == 2.0 {
                    coords.iter().map(|c| modulus(*c).powi(2)).sum::<f64>().sqrt()
                } else {
                    coords
                        .iter()
                        .map(|c| modulus(*c).powf(*p))
                        .sum::<f64>()
                        .powf(1.0 / *p)
                }
            }
            SpaceKind::WeightedL1 { weights } => coords
                .iter()
                .zip(weights.iter())
                .map(|(c, w)| w * modulus(*c))
                .sum(),
            SpaceKind::DirectSumL1 { left, right } => {
                let (a, b) = coords.split_at(left.dim());
                left.norm_coords(a) + right.norm_coords(b)
            }
        }
    }

    fn dual_norm_coords(&self, coords: &[Complex64]) -> f64 {
        match &self.0.kind {
            // Dual of sup is ℓ1.
            SpaceKind::SupNorm { .. } => coords.iter().map(|c| modulus(*c)).sum(),
            SpaceKind::LpNorm { p, .. } => {
                if *p == 1.0 {
                    coords.iter().map(|c| modulus(*c)).fold(0.0, f64::max)
                } else {
                    let q = *p / (*p - 1.0);
                    coords
                        .iter()
                        .map(|c| modulus(*c).powf(q))
                        .sum::<f64>()
                        .powf(1.0 / q)
                }
            }
            // Functionals on weighted ℓ1 are L∞ densities: ⟨g, v⟩ = Σ w_i g_i v_i.
            SpaceKind::WeightedL1 { .. } => {
                coords.iter().map(|c| modulus(*c)).fold(0.0, f64::max)
            }
            SpaceKind::DirectSumL1 { left, right } => {
                let (a, b) = coords.split_at(left.dim());
                left.dual_norm_coords(a).max(right.dual_norm_coords(b))
            }
        }
    }

    fn pair_coords(&self, functional: &[Complex64], v: &[Complex64]) -> Complex64 {
        match &self.0.kind {
            SpaceKind::SupNorm { .. } | SpaceKind::LpNorm { .. } => functional
                .iter()
                .zip(v.iter())
                .map(|(f, x)| f.conj() * x)
                .sum(),
            SpaceKind::WeightedL1 { weights } => functional
                .iter()
                .zip(v.iter())
                .zip(weights.iter())
                .map(|((f, x), w)| f.conj() * x * *w)
                .sum(),
            SpaceKind::DirectSumL1 { left, right } => {
                let (fa, fb) = functional.split_at(left.dim());
                let (va, vb) = v.split_at(left.dim());
                left.pair_coords(fa, va) + right.pair_coords(fb, vb)
            }
        }
    }
}

/// A point of a space (not necessarily in the unit ball).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Vector {
    coords: Vec<Complex64>,
    #[serde(skip)]
    space: Option<Space>,
}

impl Vector {
    pub fn new(space: &Space, coords: Vec<Complex64>) -> Result<Self, SpaceError> {
        space.check_len(coords.len())?;
        if space.field().is_real() {
            if let Some(i) = coords.iter().position(|c| c.im != 0.0) {
                return Err(SpaceError::NotReal(i));
            }
        }
        Ok(Vector {
            coords,
            space: Some(space.clone()),
        })
    }

    pub fn from_reals(space: &Space, coords: &[f64]) -> Result<Self, SpaceError> {
        Vector::new(
            space,
            coords.iter().map(|x| Complex64::new(*x, 0.0)).collect(),
        )
    }

    pub fn zero(space: &Space) -> Self {
        Vector {
            coords: vec![Complex64::new(0.0, 0.0); space.dim()],
            space: Some(space.clone()),
        }
    }

    /// Constant-one vector (the discrete `𝟏` function).
    pub fn ones(space: &Space) -> Self {
        Vector {
            coords: vec![Complex64::new(1.0, 0.0); space.dim()],
            space: Some(space.clone()),
        }
    }

    pub fn basis(space: &Space, i: usize) -> Self {
        let mut v = Vector::zero(space);
        v.coords[i] = Complex64::new(1.0, 0.0);
        v
    }

    pub fn space(&self) -> &Space {
        self.space.as_ref().expect("vector carries its space")
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.coords
    }

    pub fn coords_mut(&mut self) -> &mut [Complex64] {
        &mut self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn norm(&self) -> f64 {
        self.space().norm_coords(&self.coords)
    }

    pub fn scale(&self, c: Complex64) -> Vector {
        Vector {
            coords: self.coords.iter().map(|x| c * x).collect(),
            space: self.space.clone(),
        }
    }

    pub fn add(&self, other: &Vector) -> Vector {
        debug_assert_eq!(self.dim(), other.dim());
        Vector {
            coords: self
                .coords
                .iter()
                .zip(other.coords.iter())
                .map(|(a, b)| a + b)
                .collect(),
            space: self.space.clone(),
        }
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        debug_assert_eq!(self.dim(), other.dim());
        Vector {
            coords: self
                .coords
                .iter()
                .zip(other.coords.iter())
                .map(|(a, b)| a - b)
                .collect(),
            space: self.space.clone(),
        }
    }

    /// Re-tags a deserialized vector with its owning space.
    pub fn attach(mut self, space: &Space) -> Result<Self, SpaceError> {
        space.check_len(self.coords.len())?;
        self.space = Some(space.clone());
        Ok(self)
    }
}

/// A dual functional in the coordinate representation matching the
/// space kind (ℓ1 coefficients against sup spaces, L∞ densities against
/// weighted ℓ1, componentwise for direct sums).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualFunctional {
    coords: Vec<Complex64>,
    #[serde(skip)]
    space: Option<Space>,
}

impl DualFunctional {
    pub fn new(space: &Space, coords: Vec<Complex64>) -> Result<Self, SpaceError> {
        space.check_len(coords.len())?;
        if space.field().is_real() {
            if let Some(i) = coords.iter().position(|c| c.im != 0.0) {
                return Err(SpaceError::NotReal(i));
            }
        }
        Ok(DualFunctional {
            coords,
            space: Some(space.clone()),
        })
    }

    pub fn from_reals(space: &Space, coords: &[f64]) -> Result<Self, SpaceError> {
        DualFunctional::new(
            space,
            coords.iter().map(|x| Complex64::new(*x, 0.0)).collect(),
        )
    }

    /// Coordinate functional `e_i*`.
    pub fn basis(space: &Space, i: usize) -> Self {
        let mut coords = vec![Complex64::new(0.0, 0.0); space.dim()];
        coords[i] = Complex64::new(1.0, 0.0);
        DualFunctional {
            coords,
            space: Some(space.clone()),
        }
    }

    /// The integration functional `v ↦ ∫ v dμ` on a weighted-ℓ1 space
    /// (constant density one), or plain coordinate sum elsewhere.
    pub fn integration(space: &Space) -> Self {
        DualFunctional {
            coords: vec![Complex64::new(1.0, 0.0); space.dim()],
            space: Some(space.clone()),
        }
    }

    pub fn space(&self) -> &Space {
        self.space.as_ref().expect("functional carries its space")
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.coords
    }

    pub fn dual_norm(&self) -> f64 {
        self.space().dual_norm_coords(&self.coords)
    }

    pub fn scale(&self, c: Complex64) -> DualFunctional {
        DualFunctional {
            coords: self.coords.iter().map(|x| c * x).collect(),
            space: self.space.clone(),
        }
    }

    pub fn attach(mut self, space: &Space) -> Result<Self, SpaceError> {
        space.check_len(self.coords.len())?;
        self.space = Some(space.clone());
        Ok(self)
    }
}

/// Dual pairing `⟨f, v⟩`, sesquilinear in complex mode with the conjugation
/// on the functional side.
pub fn dual_pair(f: &DualFunctional, v: &Vector) -> Result<Complex64, SpaceError> {
    if f.space() != v.space() {
        return Err(SpaceError::SpaceMismatch {
            expected: f.space().to_string(),
            got: v.space().to_string(),
        });
    }
    Ok(f.space().pair_coords(&f.coords, &v.coords))
}

/// Norm of `v` checked against `space`.
pub fn norm(space: &Space, v: &Vector) -> Result<f64, SpaceError> {
    if space != v.space() {
        return Err(SpaceError::SpaceMismatch {
            expected: space.to_string(),
            got: v.space().to_string(),
        });
    }
    Ok(v.norm())
}

/// Radial projection onto the closed unit ball. Points already inside
/// (including the zero vector) are returned unchanged.
pub fn project_to_ball(v: &Vector) -> Vector {
    let n = v.norm();
    if n <= 1.0 {
        v.clone()
    } else {
        v.scale(Complex64::new(1.0 / n, 0.0))
    }
}

/// Deterministic unit-sphere sample: seeded Gaussian directions, radially
/// normalized. Real-mode spaces draw real Gaussians only, so sign
/// orthants are covered symmetrically.
pub fn sample_sphere(space: &Space, seed: u64, count: usize) -> Vec<Vector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let coords: Vec<Complex64> = (0..space.dim())
            .map(|_| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = if space.field().is_real() {
                    0.0
                } else {
                    rng.sample(StandardNormal)
                };
                Complex64::new(re, im)
            })
            .collect();
        let v = Vector {
            coords,
            space: Some(space.clone()),
        };
        let n = v.norm();
        if n < 1e-12 {
            continue;
        }
        out.push(v.scale(Complex64::new(1.0 / n, 0.0)));
    }
    out
}

/// Norming points of the unit ball.
///
/// For polyhedral balls (sup and weighted-ℓ1 norms) these are genuine
/// extreme points, so evaluating a linear functional over them attains its
/// sup over the whole ball exactly; `ℓp` balls with `p > 1` have no finite
/// extreme set and fall back to sphere samples.
pub fn extreme_points(space: &Space, budget: usize) -> Vec<Vector> {
    let budget = budget.max(1);
    match space.kind() {
        SpaceKind::SupNorm { dim } => {
            let n = *dim;
            if n < 63 && (1usize << n) <= budget {
                (0..(1usize << n))
                    .map(|mask| {
                        let coords = (0..n)
                            .map(|i| {
                                Complex64::new(if mask >> i & 1 == 1 { 1.0 } else { -1.0 }, 0.0)
                            })
                            .collect();
                        Vector {
                            coords,
                            space: Some(space.clone()),
                        }
                    })
                    .collect()
            } else {
                // Seeded sample of sign vectors; generated sequentially so a
                // larger budget extends (never reshuffles) a smaller one.
                let mut rng = ChaCha8Rng::seed_from_u64(0x5157_u64);
                (0..budget)
                    .map(|_| {
                        let coords = (0..n)
                            .map(|_| Complex64::new(if rng.gen::<bool>() { 1.0 } else { -1.0 }, 0.0))
                            .collect();
                        Vector {
                            coords,
                            space: Some(space.clone()),
                        }
                    })
                    .collect()
            }
        }
        SpaceKind::WeightedL1 { weights } => {
            let mut out = Vec::with_capacity(2 * weights.len());
            for (i, w) in weights.iter().enumerate() {
                for sign in [1.0, -1.0] {
                    let mut v = Vector::zero(space);
                    v.coords[i] = Complex64::new(sign / w, 0.0);
                    out.push(v);
                }
            }
            out.truncate(budget.max(2));
            out
        }
        SpaceKind::LpNorm { dim, p } => {
            if *p == 1.0 {
                let mut out = Vec::with_capacity(2 * dim);
                for i in 0..*dim {
                    for sign in [1.0, -1.0] {
                        let mut v = Vector::zero(space);
                        v.coords[i] = Complex64::new(sign, 0.0);
                        out.push(v);
                    }
                }
                out
            } else {
                sample_sphere(space, 0x5157, budget.min(256))
            }
        }
        SpaceKind::DirectSumL1 { left, right } => {
            let half = (budget / 2).max(1);
            let mut out = Vec::new();
            for e in extreme_points(left, half) {
                let mut coords = e.coords;
                coords.extend(vec![Complex64::new(0.0, 0.0); right.dim()]);
                out.push(Vector {
                    coords,
                    space: Some(space.clone()),
                });
            }
            for e in extreme_points(right, half) {
                let mut coords = vec![Complex64::new(0.0, 0.0); left.dim()];
                coords.extend(e.coords);
                out.push(Vector {
                    coords,
                    space: Some(space.clone()),
                });
            }
            out
        }
    }
}

/// A dual functional of norm at most one with `⟨f, v⟩ = ‖v‖` (a norming
/// functional). Returns the zero functional for `v = 0`.
pub fn norming_functional(v: &Vector) -> DualFunctional {
    fn phase_or_zero(c: Complex64) -> Complex64 {
        let m = modulus(c);
        if m == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            c / m
        }
    }
    let space = v.space();
    let coords = match space.kind() {
        SpaceKind::SupNorm { .. } => {
            // Point mass at a coordinate of maximal modulus.
            let mut best = 0usize;
            let mut best_m = -1.0;
            for (i, c) in v.coords().iter().enumerate() {
                let m = modulus(*c);
                if m > best_m {
                    best_m = m;
                    best = i;
                }
            }
            let mut f = vec![Complex64::new(0.0, 0.0); space.dim()];
            if best_m > 0.0 {
                f[best] = phase_or_zero(v.coords()[best]);
            }
            f
        }
        SpaceKind::WeightedL1 { .. } => v.coords().iter().map(|c| phase_or_zero(*c)).collect(),
        SpaceKind::LpNorm { p, .. } => {
            let n = v.norm();
            if n == 0.0 {
                vec![Complex64::new(0.0, 0.0); space.dim()]
            } else if *p == 1.0 {
                v.coords().iter().map(|c| phase_or_zero(*c)).collect()
            } else {
                v.coords()
                    .iter()
                    .map(|c| {
                        let m = modulus(*c);
                        phase_or_zero(*c) * Complex64::new((m / n).powf(*p - 1.0), 0.0)
                    })
                    .collect()
            }
        }
        SpaceKind::DirectSumL1 { .. } => {
            let (a, b) = split_sum(v);
            let mut f = norming_functional(&a).coords().to_vec();
            f.extend(norming_functional(&b).coords().to_vec());
            f
        }
    };
    DualFunctional {
        coords,
        space: Some(space.clone()),
    }
}

/// Total atom mass of the support of `v` in a weighted-ℓ1 space
/// (coordinates with modulus above `tol` count).
pub fn support_mass(v: &Vector, tol: f64) -> f64 {
    match v.space().kind() {
        SpaceKind::WeightedL1 { weights } => v
            .coords()
            .iter()
            .zip(weights.iter())
            .filter(|(c, _)| modulus(**c) > tol)
            .map(|(_, w)| *w)
            .sum(),
        _ => v
            .coords()
            .iter()
            .filter(|c| modulus(**c) > tol)
            .count() as f64,
    }
}

/// Embed a vector of the left summand as `(u, 0)` in a direct sum.
pub fn embed_left(sum_space: &Space, u: &Vector) -> Vector {
    let (left, right) = sum_space.summands().expect("direct sum expected");
    assert_eq!(left.dim(), u.dim());
    let mut coords = u.coords().to_vec();
    coords.extend(vec![Complex64::new(0.0, 0.0); right.dim()]);
    Vector {
        coords,
        space: Some(sum_space.clone()),
    }
}

/// Split a direct-sum point into its components.
pub fn split_sum(v: &Vector) -> (Vector, Vector) {
    let (left, right) = v.space().summands().expect("direct sum expected");
    let (a, b) = v.coords().split_at(left.dim());
    (
        Vector {
            coords: a.to_vec(),
            space: Some(left.clone()),
        },
        Vector {
            coords: b.to_vec(),
            space: Some(right.clone()),
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sup(n: usize) -> Space {
        Space::sup(n, ScalarField::Real)
    }

    #[test]
    fn sup_norm_example() {
        let s = sup(3);
        let v = Vector::from_reals(&s, &[1.0, -2.0, 0.5]).unwrap();
        assert_eq!(v.norm(), 2.0);
    }

    #[test]
    fn weighted_l1_norm_example() {
        let s = Space::weighted_l1(vec![0.5, 0.5], ScalarField::Real);
        let v = Vector::from_reals(&s, &[1.0, 1.0]).unwrap();
        assert_eq!(v.norm(), 1.0);
    }

    #[test]
    fn direct_sum_norm_example() {
        let s = Space::direct_sum_l1(
            Space::lp(2, 1.0, ScalarField::Real),
            Space::lp(2, 2.0, ScalarField::Real),
        );
        let v = Vector::from_reals(&s, &[1.0, 0.0, 0.0, 1.0]).unwrap();
        assert_eq!(v.norm(), 2.0);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let s = sup(3);
        assert!(matches!(
            Vector::from_reals(&s, &[1.0, 2.0]),
            Err(SpaceError::DimensionMismatch { expected: 3, got: 2 })
        ));
    }

    #[test]
    fn dual_pair_examples() {
        let s = sup(2);
        let f = DualFunctional::basis(&s, 0);
        let v = Vector::from_reals(&s, &[1.0, 0.0]).unwrap();
        assert_eq!(dual_pair(&f, &v).unwrap().re, 1.0);

        // Uniform probability measure pairs the constant-one function to 1.
        let mu = DualFunctional::from_reals(&s, &[0.5, 0.5]).unwrap();
        assert_eq!(mu.dual_norm(), 1.0);
        assert_eq!(dual_pair(&mu, &Vector::ones(&s)).unwrap().re, 1.0);

        let g = DualFunctional::from_reals(&s, &[1.0, -1.0]).unwrap();
        let w = Vector::from_reals(&s, &[0.3, 0.3]).unwrap();
        assert_eq!(dual_pair(&g, &w).unwrap().re, 0.0);
    }

    #[test]
    fn weighted_l1_pairing_uses_atom_masses() {
        let s = Space::uniform_l1(4, ScalarField::Real);
        let integ = DualFunctional::integration(&s);
        assert_eq!(integ.dual_norm(), 1.0);
        let v = Vector::from_reals(&s, &[4.0, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(v.norm(), 1.0);
        assert_eq!(dual_pair(&integ, &v).unwrap().re, 1.0);
    }

    #[test]
    fn projection_examples() {
        let s = sup(2);
        let v = Vector::from_reals(&s, &[2.0, 0.0]).unwrap();
        assert_eq!(
            project_to_ball(&v),
            Vector::from_reals(&s, &[1.0, 0.0]).unwrap()
        );

        let inside = Vector::from_reals(&s, &[0.4, -0.2]).unwrap();
        assert_eq!(project_to_ball(&inside), inside);

        let w1 = Space::weighted_l1(vec![1.0, 1.0], ScalarField::Real);
        let u = Vector::from_reals(&w1, &[1.0, 1.0]).unwrap();
        assert_eq!(
            project_to_ball(&u),
            Vector::from_reals(&w1, &[0.5, 0.5]).unwrap()
        );

        let z = Vector::zero(&s);
        assert_eq!(project_to_ball(&z), z);
    }

    #[test]
    fn sphere_samples_are_unit_and_deterministic() {
        for space in [
            sup(4),
            Space::uniform_l1(6, ScalarField::Real),
            Space::lp(3, 2.0, ScalarField::Real),
            Space::sup(3, ScalarField::Complex),
        ] {
            let a = sample_sphere(&space, 7, 3);
            let b = sample_sphere(&space, 7, 3);
            assert_eq!(a, b);
            for v in &a {
                assert!((v.norm() - 1.0).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn sphere_samples_cover_sign_quadrants() {
        // Empirical coverage oracle: with 10^4 samples every sign quadrant
        // of the plane must be hit.
        let s = sup(2);
        let samples = sample_sphere(&s, 1, 10_000);
        let mut seen = [false; 4];
        for v in &samples {
            let a = v.coords()[0].re > 0.0;
            let b = v.coords()[1].re > 0.0;
            seen[(a as usize) * 2 + b as usize] = true;
        }
        assert!(seen.iter().all(|s| *s));
    }

    #[test]
    fn extreme_points_sup2() {
        let pts = extreme_points(&sup(2), 8);
        assert_eq!(pts.len(), 4);
        for v in &pts {
            assert_eq!(v.norm(), 1.0);
            assert!(v.coords().iter().all(|c| c.re.abs() == 1.0));
        }
    }

    #[test]
    fn extreme_points_weighted_l1_scaling() {
        let s = Space::weighted_l1(vec![0.25, 0.75], ScalarField::Real);
        let pts = extreme_points(&s, 16);
        assert_eq!(pts.len(), 4);
        assert_eq!(pts[0].coords()[0].re, 4.0);
        assert_eq!(pts[2].coords()[1].re, 4.0 / 3.0);
        for v in &pts {
            assert_eq!(v.norm(), 1.0);
        }
    }

    #[test]
    fn extreme_points_direct_sum_are_embedded() {
        let s = Space::direct_sum_l1(
            Space::uniform_l1(2, ScalarField::Real),
            Space::uniform_l1(2, ScalarField::Real),
        );
        let pts = extreme_points(&s, 32);
        assert_eq!(pts.len(), 8);
        for v in &pts {
            assert_eq!(v.norm(), 1.0);
            let (a, b) = split_sum(v);
            assert!(a.norm() == 0.0 || b.norm() == 0.0);
        }
    }

    #[test]
    fn extreme_points_attain_linear_functionals() {
        // Sup of a linear functional over the ball equals its dual norm and
        // is attained on the extreme set for polyhedral balls.
        for space in [sup(3), Space::weighted_l1(vec![0.5, 0.25, 0.25], ScalarField::Real)] {
            let f = DualFunctional::from_reals(&space, &[0.3, -0.7, 0.2]).unwrap();
            let best = extreme_points(&space, 64)
                .iter()
                .map(|v| dual_pair(&f, v).unwrap().re)
                .fold(f64::NEG_INFINITY, f64::max);
            assert!((best - f.dual_norm()).abs() <= 1e-12);
        }
    }

    #[test]
    fn real_mode_rejects_complex_coords() {
        let s = sup(2);
        let c = vec![Complex64::new(0.0, 1.0), Complex64::new(0.0, 0.0)];
        assert!(matches!(Vector::new(&s, c), Err(SpaceError::NotReal(0))));
    }
}
