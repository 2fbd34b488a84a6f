//! Selection of a near-maximal-norm exposed vertex of a sampled balanced
//! hull, with a supporting functional whose slice has certified small
//! diameter over the samples.

use super::DaugavetError;
use crate::scalar::lex_less;
use crate::spaces::{dual_pair, norming_functional, sample_sphere, DualFunctional, Vector};
use num_complex::Complex64;
use serde::Serialize;

/// A slice of the sampled hull exposing `y0`:
/// every sample `y` with `Re⟨y0*, y⟩ ≥ 1 - δ` satisfies
/// `‖y - y0‖ < diameter_bound < ε`.
#[derive(Debug, Clone, Serialize)]
pub struct ExposedSlice {
    pub y0: Vector,
    pub y0_star: DualFunctional,
    pub delta: f64,
    pub diameter_bound: f64,
    pub y0_norm: f64,
    /// Largest distance from `y0` actually observed inside the slice.
    pub observed_max_distance: f64,
}

/// Picks the max-norm hull sample `y0` (norm must exceed `1 - ε`), then a
/// supporting direction whose threshold excludes every sample farther than
/// `ε/2` from `y0`; `δ = min(ε/2, η / Re⟨z*, y0⟩)` with `η` the exposure
/// gap of the chosen direction.
pub fn exposed_slice(
    hull: &[Vector],
    epsilon: f64,
    budget: u64,
    seed: u64,
) -> Result<ExposedSlice, DaugavetError> {
    if hull.is_empty() {
        return Err(DaugavetError::EmptyHull);
    }
    let mut y0 = &hull[0];
    let mut y0_norm = y0.norm();
    for p in hull.iter().skip(1) {
        let n = p.norm();
        if n > y0_norm || (n == y0_norm && lex_less(p.coords(), y0.coords())) {
            y0 = p;
            y0_norm = n;
        }
    }
    if y0_norm <= 1.0 - epsilon {
        return Err(DaugavetError::NoExposedPoint(y0_norm));
    }

    let space = y0.space().clone();
    let radius = epsilon / 2.0;
    let far: Vec<&Vector> = hull
        .iter()
        .filter(|p| p.sub(y0).norm() >= radius)
        .collect();

    // Candidate supporting directions: the norming functional of y0 first,
    // then seeded dual-sphere directions.
    let mut candidates = vec![norming_functional(y0)];
    let dir_count = (budget as usize / hull.len().max(1)).clamp(8, 256);
    for v in sample_sphere(&space, seed, dir_count) {
        let f = norming_functional(&v);
        candidates.push(f);
    }

    let mut best: Option<(f64, DualFunctional, f64)> = None; // (η, z*, r)
    for z_star in candidates {
        if z_star.dual_norm() > 1.0 + 1e-9 {
            continue;
        }
        let r = dual_pair(&z_star, y0)?.re;
        if r <= 1e-12 {
            continue;
        }
        let far_max = far
            .iter()
            .map(|p| dual_pair(&z_star, p).map(|c| c.re))
            .collect::<Result<Vec<_>, _>>()?
            .into_iter()
            .fold(f64::NEG_INFINITY, f64::max);
        let eta = if far.is_empty() { r } else { r - far_max };
        if eta <= 1e-12 {
            continue;
        }
        if best.as_ref().map(|(b, _, _)| eta > *b).unwrap_or(true) {
            best = Some((eta, z_star, r));
        }
    }
    let (eta, z_star, r) = best.ok_or(DaugavetError::HypothesisFailed(
        "no supporting direction exposes the vertex".into(),
    ))?;

    let delta = (epsilon / 2.0).min(eta / r);
    let y0_star = z_star.scale(Complex64::new(1.0 / r, 0.0));

    // Certify over the samples: every hull point inside the slice must be
    // within the radius (guaranteed by the η gap; measured anyway).
    let mut observed: f64 = 0.0;
    for p in hull {
        let val = dual_pair(&y0_star, p)?.re;
        if val >= 1.0 - delta {
            let d = p.sub(y0).norm();
            if d >= radius {
                return Err(DaugavetError::HypothesisFailed(format!(
                    "slice sample at distance {d} escaped the {radius} radius"
                )));
            }
            observed = observed.max(d);
        }
    }
    Ok(ExposedSlice {
        y0: y0.clone(),
        y0_star,
        delta,
        diameter_bound: radius,
        y0_norm,
        observed_max_distance: observed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ScalarField;
    use crate::spaces::Space;

    #[test]
    fn cross_polytope_vertices() {
        // Polygon brute force: vertices (±1,0),(0,±1) in the Euclidean
        // plane. The exposed slice isolates one max-norm vertex.
        let s = Space::lp(2, 2.0, ScalarField::Real);
        let hull = vec![
            Vector::from_reals(&s, &[1.0, 0.0]).unwrap(),
            Vector::from_reals(&s, &[-1.0, 0.0]).unwrap(),
            Vector::from_reals(&s, &[0.0, 1.0]).unwrap(),
            Vector::from_reals(&s, &[0.0, -1.0]).unwrap(),
        ];
        let ex = exposed_slice(&hull, 0.5, 500, 3).unwrap();
        assert_eq!(ex.y0_norm, 1.0);
        assert_eq!(ex.observed_max_distance, 0.0); // only y0 in the slice
        assert!(ex.diameter_bound < 0.5);
        // The slice threshold keeps the other vertices out.
        for p in &hull {
            if p != &ex.y0 {
                assert!(dual_pair(&ex.y0_star, p).unwrap().re < 1.0 - ex.delta);
            }
        }
    }

    #[test]
    fn segment_hull_degenerates_to_the_endpoint() {
        let s = Space::sup(3, ScalarField::Real);
        let y = Vector::from_reals(&s, &[1.0, 0.5, -0.25]).unwrap();
        let hull = vec![y.clone(), y.scale(Complex64::new(-1.0, 0.0))];
        let ex = exposed_slice(&hull, 0.3, 500, 5).unwrap();
        assert_eq!(ex.y0_norm, 1.0);
        assert_eq!(ex.observed_max_distance, 0.0);
    }

    #[test]
    fn collinear_rank_one_samples() {
        // 1-d hull oracle: all points are multiples of y; the exposed
        // point is the longest one.
        let s = Space::sup(2, ScalarField::Real);
        let y = Vector::from_reals(&s, &[1.0, -1.0]).unwrap();
        let hull: Vec<Vector> = [-1.0, -0.6, -0.2, 0.3, 0.95, 1.0]
            .iter()
            .map(|t| y.scale(Complex64::new(*t, 0.0)))
            .collect();
        let ex = exposed_slice(&hull, 0.4, 500, 7).unwrap();
        assert!((ex.y0_norm - 1.0).abs() <= 1e-12);
        // Slice contains only points within ε/2 = 0.2 of y0.
        assert!(ex.observed_max_distance < 0.2);
    }

    #[test]
    fn tiny_hull_has_no_exposed_point() {
        let s = Space::sup(2, ScalarField::Real);
        let hull = vec![Vector::from_reals(&s, &[0.3, 0.1]).unwrap()];
        assert!(matches!(
            exposed_slice(&hull, 0.5, 100, 1),
            Err(DaugavetError::NoExposedPoint(_))
        ));
    }
}
