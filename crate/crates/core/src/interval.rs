//! Interval evaluation of map images over the box hull of the unit ball.
//!
//! This is the certification side of the optimizer: searches only produce
//! lower bounds on sup norms, while the boxes computed here give sound
//! upper bounds for the coordinatewise and rank-one maps where the hull is
//! tight enough to matter. Only real-mode spaces are bounded; anything the
//! engine cannot bound soundly returns `None`.

use crate::maps::{BoundedMap, MapKind, ScalarKind, ScalarMap};
use crate::spaces::{Space, SpaceKind};
use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    fn point(x: f64) -> Interval {
        Interval { lo: x, hi: x }
    }

    fn sym(r: f64) -> Interval {
        Interval { lo: -r, hi: r }
    }

    fn add(self, other: Interval) -> Interval {
        Interval {
            lo: self.lo + other.lo,
            hi: self.hi + other.hi,
        }
    }

    fn mul(self, other: Interval) -> Interval {
        let c = [
            self.lo * other.lo,
            self.lo * other.hi,
            self.hi * other.lo,
            self.hi * other.hi,
        ];
        Interval {
            lo: c.iter().copied().fold(f64::INFINITY, f64::min),
            hi: c.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        }
    }

    fn scale(self, c: f64) -> Interval {
        if c >= 0.0 {
            Interval {
                lo: self.lo * c,
                hi: self.hi * c,
            }
        } else {
            Interval {
                lo: self.hi * c,
                hi: self.lo * c,
            }
        }
    }

    fn cube(self) -> Interval {
        Interval {
            lo: self.lo.powi(3),
            hi: self.hi.powi(3),
        }
    }

    fn square(self) -> Interval {
        let lo = if self.lo <= 0.0 && self.hi >= 0.0 {
            0.0
        } else {
            self.lo.powi(2).min(self.hi.powi(2))
        };
        Interval {
            lo,
            hi: self.lo.powi(2).max(self.hi.powi(2)),
        }
    }

    fn abs(self) -> Interval {
        let lo = if self.lo <= 0.0 && self.hi >= 0.0 {
            0.0
        } else {
            self.lo.abs().min(self.hi.abs())
        };
        Interval {
            lo,
            hi: self.lo.abs().max(self.hi.abs()),
        }
    }

    fn fourth_root(self) -> Interval {
        let a = self.abs();
        Interval {
            lo: a.lo.powf(0.25),
            hi: a.hi.powf(0.25),
        }
    }

    pub fn magnitude(self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }
}

/// Box hull of the unit ball, coordinatewise.
fn domain_box(space: &Space) -> Vec<Interval> {
    match space.kind() {
        SpaceKind::SupNorm { dim } | SpaceKind::LpNorm { dim, .. } => {
            vec![Interval::sym(1.0); *dim]
        }
        SpaceKind::WeightedL1 { weights } => {
            weights.iter().map(|w| Interval::sym(1.0 / w)).collect()
        }
        SpaceKind::DirectSumL1 { left, right } => {
            let mut b = domain_box(left);
            b.extend(domain_box(right));
            b
        }
    }
}

fn real_coords(v: &[Complex64]) -> Option<Vec<f64>> {
    if v.iter().any(|c| c.im != 0.0) {
        return None;
    }
    Some(v.iter().map(|c| c.re).collect())
}

/// Interval dot product matching the dual pairing convention of `space`
/// (weights on weighted-ℓ1 coordinates), over a coordinate box.
fn pair_range(space: &Space, functional: &[f64], x: &[Interval]) -> Interval {
    match space.kind() {
        SpaceKind::WeightedL1 { weights } => functional
            .iter()
            .zip(x.iter())
            .zip(weights.iter())
            .map(|((f, xi), w)| xi.scale(f * w))
            .fold(Interval::point(0.0), Interval::add),
        SpaceKind::DirectSumL1 { left, right } => {
            let (fa, fb) = functional.split_at(left.dim());
            let (xa, xb) = x.split_at(left.dim());
            pair_range(left, fa, xa).add(pair_range(right, fb, xb))
        }
        _ => functional
            .iter()
            .zip(x.iter())
            .map(|(f, xi)| xi.scale(*f))
            .fold(Interval::point(0.0), Interval::add),
    }
}

/// Range of `∫ v dμ` over the unit ball of a weighted-ℓ1 space: `[-1, 1]`
/// scaled by nothing, since `|∫v| ≤ ‖v‖₁ ≤ 1`. Used instead of the (much
/// looser) boxwise dot product.
fn ball_integral_range() -> Interval {
    Interval::sym(1.0)
}

/// Coordinatewise bounding box of `Φ(B_X)`, when the kind supports it.
pub(crate) fn image_box(map: &BoundedMap) -> Option<Vec<Interval>> {
    if !map.domain().field().is_real() {
        return None;
    }
    image_box_over(map, &domain_box(map.domain()))
}

fn image_box_over(map: &BoundedMap, x: &[Interval]) -> Option<Vec<Interval>> {
    match &*map.kind {
        MapKind::Identity => Some(x.to_vec()),
        MapKind::Zero => Some(vec![Interval::point(0.0); map.codomain().dim()]),
        MapKind::Cube => Some(x.iter().map(|i| i.cube()).collect()),
        MapKind::Square => Some(x.iter().map(|i| i.square()).collect()),
        MapKind::FourthRoot => Some(x.iter().map(|i| i.fourth_root()).collect()),
        MapKind::Abs => Some(x.iter().map(|i| i.abs()).collect()),
        // ∫Φ∗(f) = (∫|f|)² ≤ 1 and coordinates are nonnegative, bounded by
        // the largest coordinate of the input box times the input mass.
        MapKind::Convolution => {
            let hi = x.iter().map(|i| i.abs().hi).fold(0.0, f64::max);
            Some(vec![Interval { lo: 0.0, hi }; map.codomain().dim()])
        }
        MapKind::MassScale => {
            let mass = Interval { lo: 0.0, hi: 1.0 };
            Some(x.iter().map(|i| i.mul(mass)).collect())
        }
        MapKind::LeftProjection => {
            let (left, _) = map.domain().summands()?;
            Some(x[..left.dim()].to_vec())
        }
        MapKind::AugmentedProjection => {
            let (left, _) = map.domain().summands()?;
            let alpha_sq = x[left.dim()].square();
            Some(x[..left.dim()].iter().map(|i| i.add(alpha_sq)).collect())
        }
        MapKind::AveragingToOnes => {
            Some(vec![ball_integral_range(); map.codomain().dim()])
        }
        MapKind::RightShift { scale } => {
            let (left, _) = map.domain().summands()?;
            Some(
                x[left.dim()..]
                    .iter()
                    .map(|i| i.scale(*scale))
                    .collect(),
            )
        }
        MapKind::StepDown => Some(vec![Interval::sym(1.0)]),
        MapKind::Linear { matrix } => {
            let rows = matrix
                .iter()
                .map(|row| {
                    let r = real_coords(row)?;
                    Some(
                        r.iter()
                            .zip(x.iter())
                            .map(|(m, xi)| xi.scale(*m))
                            .fold(Interval::point(0.0), Interval::add),
                    )
                })
                .collect::<Option<Vec<_>>>()?;
            Some(rows)
        }
        MapKind::Bilinear { .. } => None,
        MapKind::RankOne { functional, y } => {
            let yr = real_coords(y.coords())?;
            let s = scalar_range(functional)?;
            Some(yr.iter().map(|c| s.scale(*c)).collect())
        }
        MapKind::Compose { outer, inner } => {
            let mid = image_box_over(inner, x)?;
            image_box_over(outer, &mid)
        }
        MapKind::Constant { y } => {
            let yr = real_coords(y.coords())?;
            Some(yr.iter().map(|c| Interval::point(*c)).collect())
        }
        MapKind::Scaled { c, inner } => {
            if c.im != 0.0 {
                return None;
            }
            let b = image_box_over(inner, x)?;
            Some(b.iter().map(|i| i.scale(c.re)).collect())
        }
        MapKind::Sum { a, b } => {
            let ba = image_box_over(a, x)?;
            let bb = image_box_over(b, x)?;
            Some(ba.iter().zip(bb.iter()).map(|(p, q)| p.add(*q)).collect())
        }
    }
}

/// Range of a scalar map over the unit ball (through the box hull).
pub(crate) fn scalar_range(s: &ScalarMap) -> Option<Interval> {
    if !s.domain().field().is_real() {
        return None;
    }
    match &*s.kind {
        ScalarKind::Functional(f) => {
            let fr = real_coords(f.coords())?;
            Some(pair_range(s.domain(), &fr, &domain_box(s.domain())))
        }
        ScalarKind::Normalized {
            map,
            functional,
            scale,
        } => {
            let fr = real_coords(functional.coords())?;
            let img = image_box(map)?;
            let raw = pair_range(map.codomain(), &fr, &img);
            Some(raw.scale(1.0 / *scale))
        }
        ScalarKind::Constant(c) => {
            if c.im != 0.0 {
                None
            } else {
                Some(Interval::point(c.re))
            }
        }
    }
}

/// Sound upper bound on `sup_{x ∈ B_X} ‖Φ(x)‖` from the image box.
pub fn sup_norm_upper_bound(map: &BoundedMap) -> Option<f64> {
    let bx = image_box(map)?;
    match map.codomain().kind() {
        SpaceKind::SupNorm { .. } => Some(bx.iter().map(|i| i.magnitude()).fold(0.0, f64::max)),
        SpaceKind::WeightedL1 { weights } => Some(
            bx.iter()
                .zip(weights.iter())
                .map(|(i, w)| w * i.magnitude())
                .sum(),
        ),
        SpaceKind::LpNorm { p, .. } => Some(
            bx.iter()
                .map(|i| i.magnitude().powf(*p))
                .sum::<f64>()
                .powf(1.0 / *p),
        ),
        SpaceKind::DirectSumL1 { .. } => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps;
    use crate::scalar::ScalarField;
    use crate::spaces::{DualFunctional, Vector};

    #[test]
    fn square_plus_negative_average_is_bounded_by_one() {
        // x ↦ x² + ⟨x², μ⟩·(-𝟏) has sup norm at most 1: coordinates of the
        // sum range over [-1, 1].
        let s = Space::sup(8, ScalarField::Real);
        let phi = maps::square(&s);
        let mu = DualFunctional::from_reals(&s, &[0.125; 8]).unwrap();
        let x_prime = ScalarMap::normalized_with_estimate(&phi, &mu, 1.0, 1e-9).unwrap();
        let minus_ones = Vector::ones(&s).scale(Complex64::new(-1.0, 0.0));
        let psi = maps::rank_one(&x_prime, &minus_ones);
        let sum = maps::sum_map(&phi, &psi, None).unwrap();
        let bound = sup_norm_upper_bound(&sum).unwrap();
        assert!((bound - 1.0).abs() <= 1e-12, "bound = {bound}");
    }

    #[test]
    fn square_image_stays_in_positive_cone() {
        let s = Space::sup(4, ScalarField::Real);
        let phi = maps::square(&s);
        let bx = image_box(&phi).unwrap();
        for i in bx {
            assert_eq!(i.lo, 0.0);
            assert_eq!(i.hi, 1.0);
        }
    }

    #[test]
    fn no_bound_for_bilinear() {
        let s = Space::sup(2, ScalarField::Real);
        let t = vec![vec![vec![Complex64::new(1.0, 0.0); 2]; 2]; 2];
        let a = maps::bilinear_from_tensor(&s, &s, &s, t).unwrap();
        assert!(sup_norm_upper_bound(&a).is_none());
    }
}
