//! Bounded (generally nonlinear) maps on unit balls, scalar maps, and the
//! constructors for every concrete map the scenarios exercise.
//!
//! Maps are immutable descriptors evaluated through a closed enum of kinds
//! rather than boxed closures; that keeps evaluation deterministic,
//! serializable by constructor name, and amenable to interval bounding.

use crate::scalar::modulus;
use crate::spaces::{dual_pair, split_sum, DualFunctional, Space, SpaceKind, Vector};
use num_complex::Complex64;
use std::fmt;
use std::sync::Arc;

#[derive(Debug, Clone, thiserror::Error, PartialEq)]
pub enum MapError {
    #[error("invalid map parameters: {0}")]
    InvalidParams(String),
    #[error("expected a linear map for composition, got {0}")]
    NotLinear(String),
    #[error("domain/codomain mismatch: {0}")]
    DomainMismatch(String),
    #[error("functional is degenerate: estimated norm {0:.3e} below tolerance")]
    DegenerateFunctional(f64),
}

/// Right inverse on the codomain ball, available for the maps where the
/// paobjects admit one in closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InverseOracle {
    /// The map is its own inverse carrier (identity).
    Identity,
    /// Componentwise signed cube root, inverting the cube map.
    SignedCubeRoot,
    /// `f ↦ (f, 0)`, inverting the left summand projection.
    EmbedLeft,
}

impl InverseOracle {
    pub fn apply(&self, map: &BoundedMap, y: &Vector) -> Vector {
        match self {
            InverseOracle::Identity => y.clone(),
            InverseOracle::SignedCubeRoot => {
                let coords = y
                    .coords()
                    .iter()
                    .map(|c| {
                        if c.im == 0.0 {
                            Complex64::new(c.re.signum() * c.re.abs().cbrt(), 0.0)
                        } else {
                            c.powf(1.0 / 3.0)
                        }
                    })
                    .collect();
                Vector::new(&map.domain, coords).expect("cube root stays in the domain")
            }
            InverseOracle::EmbedLeft => crate::spaces::embed_left(&map.domain, y),
        }
    }
}

/// Admissibility witness: a bound `δ ↦ δ'` on how fast support mass can grow
/// under the map.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SupportGrowth {
    /// Support mass is preserved.
    Identity,
    /// Support mass at most doubles (convolution of two copies of the input).
    Double,
}

impl SupportGrowth {
    pub fn bound(&self, delta: f64) -> f64 {
        match self {
            SupportGrowth::Identity => delta,
            SupportGrowth::Double => 2.0 * delta,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct MapTraits {
    pub is_linear: bool,
    pub inverse_oracle: Option<InverseOracle>,
    pub support_growth: Option<SupportGrowth>,
    /// `Φ(-x) = -Φ(x)`.
    pub odd_symmetry: bool,
    /// `Φ(S_X) = S_Y`.
    pub sphere_onto: bool,
}

#[derive(Debug)]
pub(crate) enum MapKind {
    Identity,
    Zero,
    Cube,
    Square,
    FourthRoot,
    Abs,
    /// `f ↦ |f| ∗ |f|` on a circle of equal atoms.
    Convolution,
    /// `f ↦ (∫|f| dμ) · f`.
    MassScale,
    /// `(f, g) ↦ f`.
    LeftProjection,
    /// `(f, α) ↦ f + α²·𝟏`.
    AugmentedProjection,
    /// `(f, g) ↦ (∫g dμ) · 𝟏`.
    AveragingToOnes,
    /// `(f, g) ↦ scale · g`, re-reading the ℓ2 summand as an L¹ density.
    RightShift { scale: f64 },
    /// The 1-d map `x ↦ 1 if x = 0, -|x| otherwise`.
    StepDown,
    /// Row-major matrix action.
    Linear { matrix: Vec<Vec<Complex64>> },
    /// `A(u, v)_k = Σ t[k][i][j] u_i v_j` on a flattened pair domain.
    Bilinear {
        tensor: Vec<Vec<Vec<Complex64>>>,
        left_dim: usize,
    },
    RankOne { functional: ScalarMap, y: Vector },
    Compose { outer: BoundedMap, inner: BoundedMap },
    Constant { y: Vector },
    Scaled { c: Complex64, inner: BoundedMap },
    Sum { a: BoundedMap, b: BoundedMap },
}

/// A bounded map `B_X → Y` with optional analytic traits.
#[derive(Clone)]
pub struct BoundedMap {
    pub(crate) domain: Space,
    pub(crate) codomain: Space,
    pub(crate) kind: Arc<MapKind>,
    pub traits: MapTraits,
    name: String,
    /// Declared analytic bound on `sup_{x ∈ B_X} ‖Φ(x)‖`, when known.
    pub norm_bound: Option<f64>,
}

impl fmt::Debug for BoundedMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BoundedMap({}: {} -> {})", self.name, self.domain, self.codomain)
    }
}

impl BoundedMap {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> &Space {
        &self.domain
    }

    pub fn codomain(&self) -> &Space {
        &self.codomain
    }

    /// Composition parts if this map is `P ∘ Φ`.
    pub fn as_composition(&self) -> Option<(&BoundedMap, &BoundedMap)> {
        match &*self.kind {
            MapKind::Compose { outer, inner } => Some((outer, inner)),
            _ => None,
        }
    }

    pub fn is_bilinear(&self) -> bool {
        matches!(&*self.kind, MapKind::Bilinear { .. })
    }

    pub fn eval(&self, x: &Vector) -> Vector {
        debug_assert_eq!(x.dim(), self.domain.dim(), "map evaluated off its domain");
        match &*self.kind {
            MapKind::Identity => x.clone(),
            MapKind::Zero => Vector::zero(&self.codomain),
            MapKind::Cube => self.lift(x, |c| c * c * c),
            MapKind::Square => self.lift(x, |c| c * c),
            MapKind::FourthRoot => self.lift(x, |c| Complex64::new(modulus(c).powf(0.25), 0.0)),
            MapKind::Abs => self.lift(x, |c| Complex64::new(modulus(c), 0.0)),
            MapKind::Convolution => {
                let w = match self.domain.kind() {
                    SpaceKind::WeightedL1 { weights } => weights[0],
                    _ => unreachable!("convolution requires a weighted-l1 domain"),
                };
                let n = x.dim();
                let a: Vec<f64> = x.coords().iter().map(|c| modulus(*c)).collect();
                let coords = (0..n)
                    .map(|k| {
                        let s: f64 = (0..n).map(|j| a[j] * a[(n + k - j) % n]).sum();
                        Complex64::new(w * s, 0.0)
                    })
                    .collect();
                Vector::new(&self.codomain, coords).expect("convolution output dims")
            }
            MapKind::MassScale => {
                let m = x.norm();
                x.scale(Complex64::new(m, 0.0))
            }
            MapKind::LeftProjection => split_sum(x).0,
            MapKind::AugmentedProjection => {
                let (f, alpha) = split_sum(x);
                let a = alpha.coords()[0];
                let shift = a * a;
                let coords = f.coords().iter().map(|c| c + shift).collect();
                Vector::new(&self.codomain, coords).expect("augmented projection dims")
            }
            MapKind::AveragingToOnes => {
                let (_, g) = split_sum(x);
                let mass = integral(&g);
                Vector::ones(&self.codomain).scale(mass)
            }
            MapKind::RightShift { scale } => {
                let (_, g) = split_sum(x);
                let coords = g
                    .coords()
                    .iter()
                    .map(|c| c * Complex64::new(*scale, 0.0))
                    .collect();
                Vector::new(&self.codomain, coords).expect("shift output dims")
            }
            MapKind::StepDown => {
                let c = x.coords()[0];
                // Exact zero only; the jump at 0 is the point of this map.
                let out = if modulus(c) < 1e-300 {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(-modulus(c), 0.0)
                };
                Vector::new(&self.codomain, vec![out]).expect("1-d output")
            }
            MapKind::Linear { matrix } => {
                let coords = matrix
                    .iter()
                    .map(|row| {
                        row.iter()
                            .zip(x.coords().iter())
                            .map(|(m, v)| m * v)
                            .sum()
                    })
                    .collect();
                Vector::new(&self.codomain, coords).expect("matrix output dims")
            }
            MapKind::Bilinear { tensor, left_dim } => {
                let (u, v) = x.coords().split_at(*left_dim);
                let coords = tensor
                    .iter()
                    .map(|slab| {
                        slab.iter()
                            .zip(u.iter())
                            .map(|(row, ui)| {
                                row.iter().zip(v.iter()).map(|(t, vj)| t * ui * vj).sum::<Complex64>()
                            })
                            .sum()
                    })
                    .collect();
                Vector::new(&self.codomain, coords).expect("tensor output dims")
            }
            MapKind::RankOne { functional, y } => y.scale(functional.eval(x)),
            MapKind::Compose { outer, inner } => outer.eval(&inner.eval(x)),
            MapKind::Constant { y } => y.clone(),
            MapKind::Scaled { c, inner } => inner.eval(x).scale(*c),
            MapKind::Sum { a, b } => a.eval(x).add(&b.eval(x)),
        }
    }

    fn lift(&self, x: &Vector, f: impl Fn(Complex64) -> Complex64) -> Vector {
        let coords = x.coords().iter().map(|c| f(*c)).collect();
        Vector::new(&self.codomain, coords).expect("componentwise output dims")
    }
}

/// `∫ v dμ` on a weighted-ℓ1 space (pairing with the constant density one).
pub fn integral(v: &Vector) -> Complex64 {
    match v.space().kind() {
        SpaceKind::WeightedL1 { weights } => v
            .coords()
            .iter()
            .zip(weights.iter())
            .map(|(c, w)| c * *w)
            .sum(),
        _ => v.coords().iter().sum(),
    }
}

fn endo(name: &str, space: &Space, kind: MapKind, traits: MapTraits, bound: Option<f64>) -> BoundedMap {
    BoundedMap {
        domain: space.clone(),
        codomain: space.clone(),
        kind: Arc::new(kind),
        traits,
        name: name.to_string(),
        norm_bound: bound,
    }
}

pub fn identity(space: &Space) -> BoundedMap {
    endo(
        "identity",
        space,
        MapKind::Identity,
        MapTraits {
            is_linear: true,
            inverse_oracle: Some(InverseOracle::Identity),
            odd_symmetry: true,
            sphere_onto: true,
            ..Default::default()
        },
        Some(1.0),
    )
}

pub fn zero(domain: &Space, codomain: &Space) -> BoundedMap {
    BoundedMap {
        domain: domain.clone(),
        codomain: codomain.clone(),
        kind: Arc::new(MapKind::Zero),
        traits: MapTraits {
            is_linear: true,
            ..Default::default()
        },
        name: "zero".into(),
        norm_bound: Some(0.0),
    }
}

/// Componentwise cube. A quotient of the sup ball onto itself.
pub fn cube(space: &Space) -> BoundedMap {
    endo(
        "cube",
        space,
        MapKind::Cube,
        MapTraits {
            inverse_oracle: Some(InverseOracle::SignedCubeRoot),
            odd_symmetry: true,
            sphere_onto: true,
            ..Default::default()
        },
        Some(1.0),
    )
}

/// Componentwise square; its image sits in the positive cone.
pub fn square(space: &Space) -> BoundedMap {
    endo("square", space, MapKind::Square, MapTraits::default(), Some(1.0))
}

/// Componentwise `|x|^{1/4}`.
pub fn fourth_root(space: &Space) -> BoundedMap {
    endo(
        "fourth-root",
        space,
        MapKind::FourthRoot,
        MapTraits::default(),
        Some(1.0),
    )
}

/// `f ↦ |f|` on a weighted-ℓ1 space; preserves support and sphere.
pub fn abs_map(space: &Space) -> Result<BoundedMap, MapError> {
    require_weighted_l1(space, "abs")?;
    Ok(endo(
        "abs",
        space,
        MapKind::Abs,
        MapTraits {
            support_growth: Some(SupportGrowth::Identity),
            sphere_onto: false,
            ..Default::default()
        },
        Some(1.0),
    ))
}

/// `f ↦ |f| ∗ |f|`, cyclic convolution against equal atoms on a circle.
/// Total mass multiplies: `∫ Φ(f) = (∫|f|)²`, so the sphere maps into the
/// sphere; supports add, so support mass at most doubles.
pub fn convolution(space: &Space) -> Result<BoundedMap, MapError> {
    let weights = require_weighted_l1(space, "convolution")?;
    let w0 = weights[0];
    if weights.iter().any(|w| (*w - w0).abs() > 1e-15) {
        return Err(MapError::InvalidParams(
            "convolution requires equal atom masses (a circle discretization)".into(),
        ));
    }
    Ok(endo(
        "convolution-abs",
        space,
        MapKind::Convolution,
        MapTraits {
            support_growth: Some(SupportGrowth::Double),
            ..Default::default()
        },
        Some(1.0),
    ))
}

/// `f ↦ (∫|f| dμ) · f`.
pub fn mass_scale(space: &Space) -> Result<BoundedMap, MapError> {
    require_weighted_l1(space, "mass-scale")?;
    Ok(endo(
        "mass-scale",
        space,
        MapKind::MassScale,
        MapTraits {
            support_growth: Some(SupportGrowth::Identity),
            odd_symmetry: true,
            ..Default::default()
        },
        Some(1.0),
    ))
}

/// `(f, g) ↦ f` on a 1-direct sum; a quotient map onto the left summand.
pub fn left_projection(sum_space: &Space) -> Result<BoundedMap, MapError> {
    let (left, _) = sum_space
        .summands()
        .ok_or_else(|| MapError::InvalidParams("left projection needs a direct-sum domain".into()))?;
    Ok(BoundedMap {
        domain: sum_space.clone(),
        codomain: left.clone(),
        kind: Arc::new(MapKind::LeftProjection),
        traits: MapTraits {
            is_linear: true,
            inverse_oracle: Some(InverseOracle::EmbedLeft),
            odd_symmetry: true,
            sphere_onto: false,
            ..Default::default()
        },
        name: "left-projection".into(),
        norm_bound: Some(1.0),
    })
}

/// `(f, α) ↦ f + α²·𝟏` with a scalar second summand.
pub fn augmented_projection(sum_space: &Space) -> Result<BoundedMap, MapError> {
    let (left, right) = sum_space
        .summands()
        .ok_or_else(|| MapError::InvalidParams("augmented projection needs a direct sum".into()))?;
    if right.dim() != 1 {
        return Err(MapError::InvalidParams(
            "augmented projection needs a scalar second summand".into(),
        ));
    }
    Ok(BoundedMap {
        domain: sum_space.clone(),
        codomain: left.clone(),
        kind: Arc::new(MapKind::AugmentedProjection),
        traits: MapTraits::default(),
        name: "augmented-projection".into(),
        // ‖f + α²𝟏‖∞ ≤ ‖f‖ + α² ≤ ‖f‖ + |α| ≤ 1 on the ⊕₁ ball.
        norm_bound: Some(1.0),
    })
}

/// `(f, g) ↦ (∫ g dμ) · 𝟏` into the left summand.
pub fn averaging_to_ones(sum_space: &Space) -> Result<BoundedMap, MapError> {
    let (left, right) = sum_space
        .summands()
        .ok_or_else(|| MapError::InvalidParams("averaging map needs a direct sum".into()))?;
    let left_mass = match left.kind() {
        SpaceKind::WeightedL1 { weights } => weights.iter().sum::<f64>(),
        _ => {
            return Err(MapError::InvalidParams(
                "averaging map targets a weighted-l1 left summand".into(),
            ))
        }
    };
    require_weighted_l1(right, "averaging right summand")?;
    Ok(BoundedMap {
        domain: sum_space.clone(),
        codomain: left.clone(),
        kind: Arc::new(MapKind::AveragingToOnes),
        traits: MapTraits {
            is_linear: true,
            odd_symmetry: true,
            ..Default::default()
        },
        name: "averaging-to-ones".into(),
        // |∫g| ≤ ‖g‖₁ ≤ 1 and ‖𝟏‖ equals the left total mass.
        norm_bound: Some(left_mass),
    })
}

/// `(f, g) ↦ √n · g` from an `ℓ2(n)` right summand into a uniform
/// weighted-ℓ1 left codomain: by Cauchy–Schwarz `‖√n g‖₁ ≤ ‖g‖₂`, with
/// equality at constant `g`, so the map has norm one.
pub fn right_shift(sum_space: &Space) -> Result<BoundedMap, MapError> {
    let (left, right) = sum_space
        .summands()
        .ok_or_else(|| MapError::InvalidParams("shift map needs a direct sum".into()))?;
    let n = left.dim();
    match right.kind() {
        SpaceKind::LpNorm { dim, p } if *dim == n && *p == 2.0 => {}
        _ => {
            return Err(MapError::InvalidParams(
                "shift map needs an l2 right summand matching the left dimension".into(),
            ))
        }
    }
    let weights = require_weighted_l1(left, "shift codomain")?;
    let w0 = 1.0 / n as f64;
    if weights.iter().any(|w| (*w - w0).abs() > 1e-15) {
        return Err(MapError::InvalidParams(
            "shift codomain must have n equal atoms of mass 1/n".into(),
        ));
    }
    Ok(BoundedMap {
        domain: sum_space.clone(),
        codomain: left.clone(),
        kind: Arc::new(MapKind::RightShift {
            scale: (n as f64).sqrt(),
        }),
        traits: MapTraits {
            is_linear: true,
            odd_symmetry: true,
            ..Default::default()
        },
        name: "right-shift".into(),
        norm_bound: Some(1.0),
    })
}

/// The discontinuous 1-d map `x ↦ 1 if x = 0, -|x| otherwise`.
pub fn step_down(space: &Space) -> Result<BoundedMap, MapError> {
    if space.dim() != 1 || !space.field().is_real() {
        return Err(MapError::InvalidParams(
            "the step-down map lives on the 1-d real line".into(),
        ));
    }
    Ok(endo(
        "step-down",
        space,
        MapKind::StepDown,
        MapTraits::default(),
        Some(1.0),
    ))
}

pub fn linear_from_matrix(
    domain: &Space,
    codomain: &Space,
    rows: Vec<Vec<Complex64>>,
) -> Result<BoundedMap, MapError> {
    if rows.len() != codomain.dim() || rows.iter().any(|r| r.len() != domain.dim()) {
        return Err(MapError::InvalidParams(format!(
            "matrix must be {}x{}",
            codomain.dim(),
            domain.dim()
        )));
    }
    Ok(BoundedMap {
        domain: domain.clone(),
        codomain: codomain.clone(),
        kind: Arc::new(MapKind::Linear { matrix: rows }),
        traits: MapTraits {
            is_linear: true,
            odd_symmetry: true,
            ..Default::default()
        },
        name: "linear".into(),
        norm_bound: None,
    })
}

pub fn bilinear_from_tensor(
    left: &Space,
    right: &Space,
    codomain: &Space,
    tensor: Vec<Vec<Vec<Complex64>>>,
) -> Result<BoundedMap, MapError> {
    if tensor.len() != codomain.dim()
        || tensor
            .iter()
            .any(|s| s.len() != left.dim() || s.iter().any(|r| r.len() != right.dim()))
    {
        return Err(MapError::InvalidParams("tensor shape mismatch".into()));
    }
    let domain = Space::direct_sum_l1(left.clone(), right.clone());
    Ok(BoundedMap {
        domain,
        codomain: codomain.clone(),
        kind: Arc::new(MapKind::Bilinear {
            tensor,
            left_dim: left.dim(),
        }),
        traits: MapTraits::default(),
        name: "bilinear".into(),
        norm_bound: None,
    })
}

/// `x' ⊗ y : x ↦ x'(x) · y`.
pub fn rank_one(functional: &ScalarMap, y: &Vector) -> BoundedMap {
    let bound = if functional.declared_norm_le_one {
        Some(y.norm())
    } else {
        None
    };
    BoundedMap {
        domain: functional.domain().clone(),
        codomain: y.space().clone(),
        kind: Arc::new(MapKind::RankOne {
            functional: functional.clone(),
            y: y.clone(),
        }),
        traits: MapTraits::default(),
        name: format!("({})(x)*y", functional.name()),
        norm_bound: bound,
    }
}

/// `P ∘ Φ` for a linear `P`.
pub fn compose_linear(p: &BoundedMap, inner: &BoundedMap) -> Result<BoundedMap, MapError> {
    if !p.traits.is_linear {
        return Err(MapError::NotLinear(p.name.clone()));
    }
    if p.domain != inner.codomain {
        return Err(MapError::DomainMismatch(format!(
            "{} expects domain {}, inner map produces {}",
            p.name, p.domain, inner.codomain
        )));
    }
    Ok(BoundedMap {
        domain: inner.domain.clone(),
        codomain: p.codomain.clone(),
        kind: Arc::new(MapKind::Compose {
            outer: p.clone(),
            inner: inner.clone(),
        }),
        traits: MapTraits::default(),
        name: format!("{}∘{}", p.name, inner.name),
        norm_bound: match (p.norm_bound, inner.norm_bound) {
            (Some(a), Some(b)) => Some(a * b),
            _ => None,
        },
    })
}

pub fn constant_map(domain: &Space, y: &Vector) -> BoundedMap {
    BoundedMap {
        domain: domain.clone(),
        codomain: y.space().clone(),
        kind: Arc::new(MapKind::Constant { y: y.clone() }),
        traits: MapTraits::default(),
        name: "constant".into(),
        norm_bound: Some(y.norm()),
    }
}

pub fn scale_map(c: Complex64, inner: &BoundedMap) -> BoundedMap {
    BoundedMap {
        domain: inner.domain.clone(),
        codomain: inner.codomain.clone(),
        kind: Arc::new(MapKind::Scaled {
            c,
            inner: inner.clone(),
        }),
        traits: MapTraits {
            is_linear: inner.traits.is_linear,
            odd_symmetry: inner.traits.odd_symmetry,
            ..Default::default()
        },
        name: format!("{c}*{}", inner.name),
        norm_bound: inner.norm_bound.map(|b| b * modulus(c)),
    }
}

/// Pointwise sum `x ↦ a(x) + b(x)`, with an optional declared analytic
/// bound on its sup norm (validated against every observation downstream).
pub fn sum_map(a: &BoundedMap, b: &BoundedMap, declared_bound: Option<f64>) -> Result<BoundedMap, MapError> {
    if a.domain != b.domain || a.codomain != b.codomain {
        return Err(MapError::DomainMismatch(format!(
            "cannot add {} and {}",
            a.name, b.name
        )));
    }
    Ok(BoundedMap {
        domain: a.domain.clone(),
        codomain: a.codomain.clone(),
        kind: Arc::new(MapKind::Sum {
            a: a.clone(),
            b: b.clone(),
        }),
        traits: MapTraits::default(),
        name: format!("{}+{}", a.name, b.name),
        norm_bound: declared_bound,
    })
}

/// Pull a functional back through a linear map: the `y*P` construction.
/// Returns `None` when the adjoint is not available in closed form.
pub fn adjoint_functional(p: &BoundedMap, z_star: &DualFunctional) -> Option<DualFunctional> {
    if !p.traits.is_linear {
        return None;
    }
    match &*p.kind {
        MapKind::Identity => Some(z_star.clone()),
        MapKind::Scaled { c, inner } => {
            adjoint_functional(inner, z_star).map(|f| f.scale(c.conj()))
        }
        MapKind::Linear { matrix } => {
            // ⟨g, v⟩_dom = ⟨z*, Pv⟩_cod with the pairing conventions of
            // each space kind (weights included on weighted-ℓ1 sides).
            let dom_w = pairing_weights(&p.domain);
            let cod_w = pairing_weights(&p.codomain);
            let n = p.domain.dim();
            let m = p.codomain.dim();
            let mut g = vec![Complex64::new(0.0, 0.0); n];
            for (j, gj) in g.iter_mut().enumerate() {
                let mut acc = Complex64::new(0.0, 0.0);
                for i in 0..m {
                    acc += z_star.coords()[i].conj() * matrix[i][j] * cod_w[i];
                }
                *gj = (acc / dom_w[j]).conj();
            }
            DualFunctional::new(&p.domain, g).ok()
        }
        _ => None,
    }
}

fn pairing_weights(space: &Space) -> Vec<f64> {
    match space.kind() {
        SpaceKind::WeightedL1 { weights } => weights.clone(),
        SpaceKind::DirectSumL1 { left, right } => {
            let mut w = pairing_weights(left);
            w.extend(pairing_weights(right));
            w
        }
        _ => vec![1.0; space.dim()],
    }
}

fn require_weighted_l1<'a>(space: &'a Space, what: &str) -> Result<&'a [f64], MapError> {
    match space.kind() {
        SpaceKind::WeightedL1 { weights } => Ok(weights),
        _ => Err(MapError::InvalidParams(format!(
            "{what} requires a weighted-l1 space, got {space}"
        ))),
    }
}

// ---------------------------------------------------------------------------
// Scalar maps
// ---------------------------------------------------------------------------

#[derive(Debug)]
pub(crate) enum ScalarKind {
    /// `x ↦ ⟨f, x⟩`.
    Functional(DualFunctional),
    /// `x ↦ ⟨y*, Φ(x)⟩ / scale` where `scale` estimates `‖y*Φ‖`.
    Normalized {
        map: BoundedMap,
        functional: DualFunctional,
        scale: f64,
    },
    Constant(Complex64),
}

/// A scalar function on the ball, `x' ∈ ℓ∞(B_X)`.
#[derive(Clone)]
pub struct ScalarMap {
    domain: Space,
    pub(crate) kind: Arc<ScalarKind>,
    pub declared_norm_le_one: bool,
    name: String,
}

impl fmt::Debug for ScalarMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ScalarMap({} on {})", self.name, self.domain)
    }
}

impl ScalarMap {
    pub fn functional(f: &DualFunctional) -> ScalarMap {
        let norm = f.dual_norm();
        ScalarMap {
            domain: f.space().clone(),
            kind: Arc::new(ScalarKind::Functional(f.clone())),
            declared_norm_le_one: norm <= 1.0 + 1e-12,
            name: "functional".into(),
        }
    }

    pub fn constant(domain: &Space, c: Complex64) -> ScalarMap {
        ScalarMap {
            domain: domain.clone(),
            kind: Arc::new(ScalarKind::Constant(c)),
            declared_norm_le_one: modulus(c) <= 1.0 + 1e-12,
            name: format!("const({c})"),
        }
    }

    /// `Φ_{y*} = (y*Φ) / scale` for a caller-supplied norm estimate.
    ///
    /// `optim::normalized_functional` is the estimating front end; tests
    /// may pass an exact extreme-point enumeration instead.
    pub fn normalized_with_estimate(
        map: &BoundedMap,
        y_star: &DualFunctional,
        scale: f64,
        tol: f64,
    ) -> Result<ScalarMap, MapError> {
        if y_star.space() != map.codomain() {
            return Err(MapError::DomainMismatch(
                "functional must act on the map codomain".into(),
            ));
        }
        if !(scale > tol) {
            return Err(MapError::DegenerateFunctional(scale));
        }
        Ok(ScalarMap {
            domain: map.domain.clone(),
            kind: Arc::new(ScalarKind::Normalized {
                map: map.clone(),
                functional: y_star.clone(),
                scale,
            }),
            declared_norm_le_one: true,
            name: format!("normalized(y*∘{})", map.name),
        })
    }

    pub fn domain(&self) -> &Space {
        &self.domain
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// The estimate recorded at normalization time, if any.
    pub fn normalization_scale(&self) -> Option<f64> {
        match &*self.kind {
            ScalarKind::Normalized { scale, .. } => Some(*scale),
            _ => None,
        }
    }

    pub fn eval(&self, x: &Vector) -> Complex64 {
        match &*self.kind {
            ScalarKind::Functional(f) => dual_pair(f, x).expect("functional matches domain"),
            ScalarKind::Normalized {
                map,
                functional,
                scale,
            } => {
                let y = map.eval(x);
                dual_pair(functional, &y).expect("functional matches codomain") / *scale
            }
            ScalarKind::Constant(c) => *c,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ScalarField;
    use crate::spaces::{extreme_points, sample_sphere};

    fn sup(n: usize) -> Space {
        Space::sup(n, ScalarField::Real)
    }

    #[test]
    fn cube_is_componentwise() {
        let s = sup(4);
        let phi = cube(&s);
        let x = Vector::from_reals(&s, &[1.0, -1.0, 0.5, 0.0]).unwrap();
        let y = phi.eval(&x);
        assert_eq!(
            y,
            Vector::from_reals(&s, &[1.0, -1.0, 0.125, 0.0]).unwrap()
        );
        // Determinism: repeated evaluation is bit-identical.
        assert_eq!(phi.eval(&x), y);
    }

    #[test]
    fn augmented_projection_adds_alpha_squared_ones() {
        let sum = Space::direct_sum_l1(sup(3), sup(1));
        let psi = augmented_projection(&sum).unwrap();
        let x = Vector::from_reals(&sum, &[0.5, -0.5, 0.0, 0.4]).unwrap();
        let y = psi.eval(&x);
        let expect = Vector::from_reals(&psi.codomain, &[0.66, -0.34, 0.16]).unwrap();
        for (a, b) in y.coords().iter().zip(expect.coords()) {
            assert!((a.re - b.re).abs() < 1e-15);
        }
    }

    #[test]
    fn step_down_jumps_at_zero() {
        let line = sup(1);
        let psi = step_down(&line).unwrap();
        let at_zero = psi.eval(&Vector::from_reals(&line, &[0.0]).unwrap());
        assert_eq!(at_zero.coords()[0].re, 1.0);
        let at_09 = psi.eval(&Vector::from_reals(&line, &[0.9]).unwrap());
        assert_eq!(at_09.coords()[0].re, -0.9);
        let at_neg = psi.eval(&Vector::from_reals(&line, &[-0.3]).unwrap());
        assert_eq!(at_neg.coords()[0].re, -0.3);
    }

    #[test]
    fn rank_one_evaluates_and_attains() {
        let s = sup(2);
        let x1 = ScalarMap::functional(&DualFunctional::basis(&s, 0));
        let y = Vector::basis(&s, 0);
        let r = rank_one(&x1, &y);
        let x = Vector::from_reals(&s, &[1.0, 0.3]).unwrap();
        assert_eq!(r.eval(&x), Vector::from_reals(&s, &[1.0, 0.0]).unwrap());

        // Attained norm over the extreme points equals ‖y‖ for a norm-one
        // attained functional.
        let best = extreme_points(&s, 8)
            .iter()
            .map(|e| r.eval(e).norm())
            .fold(0.0, f64::max);
        assert!((best - y.norm()).abs() <= 1e-9);

        let zero_fun = ScalarMap::constant(&s, Complex64::new(0.0, 0.0));
        let z = rank_one(&zero_fun, &y);
        assert_eq!(z.eval(&x).norm(), 0.0);
    }

    #[test]
    fn averaging_composite_matches_formula() {
        // (f, g) ↦ f + (∫g)·𝟏 assembled from a projection plus a rank-one.
        let l1 = Space::uniform_l1(4, ScalarField::Real);
        let sum = Space::direct_sum_l1(l1.clone(), l1.clone());
        let phi = left_projection(&sum).unwrap();
        let psi = averaging_to_ones(&sum).unwrap();
        let y_star = DualFunctional::integration(&l1);
        let x_prime = ScalarMap::normalized_with_estimate(&psi, &y_star, 1.0, 1e-9).unwrap();
        let composite = sum_map(&phi, &rank_one(&x_prime, &Vector::ones(&l1)), Some(1.0)).unwrap();

        let x = Vector::from_reals(&sum, &[0.8, 0.0, 0.0, 0.0, 2.0, 2.0, 0.0, 0.0]).unwrap();
        // ∫g = (2 + 2)/4 = 1, so the image is f + 𝟏.
        let out = composite.eval(&x);
        let expect = Vector::from_reals(&l1, &[1.8, 1.0, 1.0, 1.0]).unwrap();
        assert_eq!(out, expect);
    }

    #[test]
    fn compose_linear_rejects_nonlinear_and_checks_shape() {
        let s = sup(2);
        let phi = cube(&s);
        assert!(matches!(
            compose_linear(&phi, &identity(&s)),
            Err(MapError::NotLinear(_))
        ));

        let p = identity(&s);
        let composed = compose_linear(&p, &phi).unwrap();
        let x = Vector::from_reals(&s, &[0.2, -1.0]).unwrap();
        assert_eq!(composed.eval(&x), phi.eval(&x));

        let z = zero(&s, &s);
        let zc = compose_linear(&z, &phi).unwrap();
        assert_eq!(zc.eval(&x).norm(), 0.0);
    }

    #[test]
    fn compose_with_rank_one_matrix_matches_direct_arithmetic() {
        // Oracle: P = y·y*ᵀ applied to cube(x), computed by direct matrix
        // arithmetic.
        let s = sup(2);
        let y = Vector::from_reals(&s, &[1.0, -0.5]).unwrap();
        let y_star = [0.25, 0.75];
        let rows = vec![
            vec![
                Complex64::new(y.coords()[0].re * y_star[0], 0.0),
                Complex64::new(y.coords()[0].re * y_star[1], 0.0),
            ],
            vec![
                Complex64::new(y.coords()[1].re * y_star[0], 0.0),
                Complex64::new(y.coords()[1].re * y_star[1], 0.0),
            ],
        ];
        let p = linear_from_matrix(&s, &s, rows).unwrap();
        let psi = compose_linear(&p, &cube(&s)).unwrap();
        let x = Vector::from_reals(&s, &[1.0, 1.0]).unwrap();
        // ⟨y*, cube(x)⟩ = 0.25 + 0.75 = 1, so the image is y itself.
        assert_eq!(psi.eval(&x), y);
    }

    #[test]
    fn inverse_oracles_round_trip() {
        let s = sup(3);
        let phi = cube(&s);
        let oracle = phi.traits.inverse_oracle.unwrap();
        for y in sample_sphere(&s, 11, 1000) {
            let x = oracle.apply(&phi, &y);
            assert!(x.norm() <= y.norm() + 1e-9);
            let back = phi.eval(&x);
            assert!(back.sub(&y).norm() <= 1e-9);
        }

        let sum = Space::direct_sum_l1(Space::uniform_l1(3, ScalarField::Real), sup(2));
        let proj = left_projection(&sum).unwrap();
        let oracle = proj.traits.inverse_oracle.unwrap();
        for y in sample_sphere(proj.codomain(), 12, 1000) {
            let x = oracle.apply(&proj, &y);
            assert!(x.norm() <= y.norm() + 1e-9);
            assert!(proj.eval(&x).sub(&y).norm() <= 1e-12);
        }
    }

    #[test]
    fn odd_symmetry_holds_where_declared() {
        let s = sup(3);
        for map in [cube(&s), identity(&s)] {
            assert!(map.traits.odd_symmetry);
            for x in sample_sphere(&s, 3, 200) {
                let minus = x.scale(Complex64::new(-1.0, 0.0));
                assert!(map.eval(&minus).add(&map.eval(&x)).norm() <= 1e-12);
            }
        }
    }

    #[test]
    fn composition_norm_bound_on_samples() {
        let s = sup(2);
        let rows = vec![
            vec![Complex64::new(0.5, 0.0), Complex64::new(0.1, 0.0)],
            vec![Complex64::new(-0.2, 0.0), Complex64::new(0.3, 0.0)],
        ];
        let p = linear_from_matrix(&s, &s, rows).unwrap();
        // ‖P‖ on sup-norm: max row ℓ1 sum = 0.6.
        let p_norm = 0.6;
        let phi = cube(&s);
        let psi = compose_linear(&p, &phi).unwrap();
        for x in sample_sphere(&s, 5, 500) {
            assert!(psi.eval(&x).norm() <= p_norm * 1.0 + 1e-12);
        }
    }

    #[test]
    fn normalized_functional_through_cube() {
        // ‖e₁*∘cube‖ = 1 by extreme-point enumeration, so the normalized
        // functional is x ↦ x₁³ exactly.
        let s = sup(3);
        let phi = cube(&s);
        let e1 = DualFunctional::basis(&s, 0);
        let est = extreme_points(&s, 16)
            .iter()
            .map(|v| modulus(dual_pair(&e1, &phi.eval(v)).unwrap()))
            .fold(0.0, f64::max);
        assert_eq!(est, 1.0);
        let f = ScalarMap::normalized_with_estimate(&phi, &e1, est, 1e-9).unwrap();
        let x = Vector::from_reals(&s, &[0.5, 0.9, -1.0]).unwrap();
        assert_eq!(f.eval(&x).re, 0.125);
    }

    #[test]
    fn degenerate_functional_is_rejected() {
        let s = sup(2);
        let z = zero(&s, &s);
        let e1 = DualFunctional::basis(&s, 0);
        assert!(matches!(
            ScalarMap::normalized_with_estimate(&z, &e1, 0.0, 1e-9),
            Err(MapError::DegenerateFunctional(_))
        ));
    }

    #[test]
    fn adjoint_matches_pairing() {
        let dom = Space::uniform_l1(3, ScalarField::Real);
        let cod = sup(2);
        let rows = vec![
            vec![
                Complex64::new(0.3, 0.0),
                Complex64::new(-0.1, 0.0),
                Complex64::new(0.7, 0.0),
            ],
            vec![
                Complex64::new(0.0, 0.0),
                Complex64::new(0.4, 0.0),
                Complex64::new(0.2, 0.0),
            ],
        ];
        let p = linear_from_matrix(&dom, &cod, rows).unwrap();
        let z_star = DualFunctional::from_reals(&cod, &[0.5, -0.25]).unwrap();
        let g = adjoint_functional(&p, &z_star).unwrap();
        for v in sample_sphere(&dom, 9, 100) {
            let lhs = dual_pair(&z_star, &p.eval(&v)).unwrap();
            let rhs = dual_pair(&g, &v).unwrap();
            assert!((lhs - rhs).norm() <= 1e-12);
        }
    }

    #[test]
    fn convolution_multiplies_mass_and_bounds_support() {
        let s = Space::uniform_l1(8, ScalarField::Real);
        let phi = convolution(&s).unwrap();
        let mut z = Vector::zero(&s);
        z.coords_mut()[2] = Complex64::new(8.0, 0.0);
        assert_eq!(z.norm(), 1.0);
        let img = phi.eval(&z);
        // Mass identity oracle: ∫(|z|∗|z|) = (∫|z|)².
        assert!((integral(&img).re - 1.0).abs() <= 1e-12);
        let support: Vec<usize> = img
            .coords()
            .iter()
            .enumerate()
            .filter(|(_, c)| modulus(**c) > 1e-12)
            .map(|(i, _)| i)
            .collect();
        assert_eq!(support, vec![4]); // 2 + 2 mod 8
    }
}
