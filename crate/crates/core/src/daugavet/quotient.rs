//! Sampling/oracle verdict on whether a map sends the open unit ball of
//! its domain onto that of its codomain.

use super::DaugavetError;
use crate::interval;
use crate::maps::BoundedMap;
use crate::optim::mix_seed;
use crate::spaces::{extreme_points, sample_sphere, SpaceKind, Vector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub enum QuotientVerdict {
    Surjective {
        via_oracle: bool,
        max_roundtrip_error: f64,
        covering_radius: f64,
    },
    NotSurjective {
        /// Sphere point certified outside the image closure.
        witness: Vector,
        distance_lower_bound: f64,
    },
    Inconclusive {
        covering_radius: f64,
    },
}

/// Distance from a point to a coordinate box, measured in the norm of the
/// point's space. A positive value certifies the point is outside any set
/// contained in the box.
fn box_distance(y: &Vector, bx: &[interval::Interval]) -> Option<f64> {
    if y.coords().iter().any(|c| c.im != 0.0) {
        return None;
    }
    let gaps: Vec<f64> = y
        .coords()
        .iter()
        .zip(bx.iter())
        .map(|(c, i)| (i.lo - c.re).max(c.re - i.hi).max(0.0))
        .collect();
    let d = match y.space().kind() {
        SpaceKind::SupNorm { .. } => gaps.iter().copied().fold(0.0, f64::max),
        SpaceKind::WeightedL1 { weights } => gaps.iter().zip(weights).map(|(g, w)| g * w).sum(),
        SpaceKind::LpNorm { p, .. } => gaps.iter().map(|g| g.powf(*p)).sum::<f64>().powf(1.0 / p),
        SpaceKind::DirectSumL1 { .. } => return None,
    };
    Some(d)
}

const COVERING_TOL: f64 = 0.1;

/// Checks `Φ(U_X) = U_Y`: by inverse-oracle round trips when the trait is
/// available, otherwise by image sampling plus interval exclusion.
pub fn quotient_check(
    phi: &BoundedMap,
    budget: u64,
    seed: u64,
) -> Result<QuotientVerdict, DaugavetError> {
    let cod = phi.codomain();
    let probe_count = (budget as usize / 4).clamp(32, 1000);
    let mut probes = sample_sphere(cod, mix_seed(seed, 1), probe_count);
    probes.extend(extreme_points(cod, 64));

    if let Some(oracle) = phi.traits.inverse_oracle {
        // Round-trip on sphere and interior points of B_Y.
        let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(seed, 2));
        let mut max_err: f64 = 0.0;
        for p in &probes {
            let r: f64 = rng.gen();
            for y in [p.clone(), p.scale(Complex64::new(r, 0.0))] {
                let x = oracle.apply(phi, &y);
                if x.norm() > y.norm() + 1e-9 {
                    return Err(DaugavetError::OracleViolation(format!(
                        "inverse expands norm: {} > {}",
                        x.norm(),
                        y.norm()
                    )));
                }
                let err = phi.eval(&x).sub(&y).norm();
                if err > 1e-9 {
                    return Err(DaugavetError::OracleViolation(format!(
                        "round trip misses by {err}"
                    )));
                }
                max_err = max_err.max(err);
            }
        }
        return Ok(QuotientVerdict::Surjective {
            via_oracle: true,
            max_roundtrip_error: max_err,
            covering_radius: 0.0,
        });
    }

    // Interval exclusion: a sphere point strictly outside the image box is
    // a certificate of non-surjectivity.
    if let Some(bx) = interval::image_box(phi) {
        let mut worst: Option<(f64, Vector)> = None;
        for p in &probes {
            if let Some(d) = box_distance(p, &bx) {
                if d > 1e-9 && worst.as_ref().map(|(w, _)| d > *w).unwrap_or(true) {
                    worst = Some((d, p.clone()));
                }
            }
        }
        if let Some((d, witness)) = worst {
            return Ok(QuotientVerdict::NotSurjective {
                witness,
                distance_lower_bound: d,
            });
        }
    }

    // Covering radius of the sampled image over the sphere probes.
    let image: Vec<Vector> = sample_sphere(phi.domain(), mix_seed(seed, 3), probe_count)
        .iter()
        .chain(extreme_points(phi.domain(), 256).iter())
        .map(|x| phi.eval(x))
        .collect();
    let covering_radius = probes
        .iter()
        .map(|p| {
            image
                .iter()
                .map(|im| im.sub(p).norm())
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max);
    if covering_radius <= COVERING_TOL {
        Ok(QuotientVerdict::Surjective {
            via_oracle: false,
            max_roundtrip_error: f64::NAN,
            covering_radius,
        })
    } else {
        Ok(QuotientVerdict::Inconclusive { covering_radius })
    }
}
