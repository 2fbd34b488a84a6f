//! Scalar fields and the unit-modulus scalars used to rotate slices.
//!
//! Everything in the crate computes with [`Complex64`]. Real-mode spaces
//! simply pin the imaginary parts to zero, which keeps real arithmetic
//! bit-exact (additions and multiplications with zero imaginary parts
//! never pollute the real part).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Scalar field of a space: real or complex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ScalarField {
    Real,
    Complex,
}

impl ScalarField {
    pub fn is_real(self) -> bool {
        matches!(self, ScalarField::Real)
    }
}

/// Finite grid standing in for the unit-modulus scalars.
///
/// In real mode the grid is exactly `{+1, -1}` regardless of the requested
/// resolution. In complex mode it holds `resolution` equally spaced points
/// on the circle; `1` and `-1` are always inserted exactly (the resolution
/// is rounded up to the next even number so that both lie on the grid).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitScalarGrid {
    pub field: ScalarField,
    pub resolution: usize,
}

impl UnitScalarGrid {
    pub fn real() -> Self {
        UnitScalarGrid {
            field: ScalarField::Real,
            resolution: 2,
        }
    }

    pub fn complex(resolution: usize) -> Self {
        assert!(resolution >= 2, "grid resolution must be at least 2");
        UnitScalarGrid {
            field: ScalarField::Complex,
            resolution,
        }
    }

    /// Default grid for a field: `{±1}` real, 64 points complex.
    pub fn default_for(field: ScalarField) -> Self {
        match field {
            ScalarField::Real => Self::real(),
            ScalarField::Complex => Self::complex(64),
        }
    }

    /// Grid points, with `+1` first and `-1` present exactly.
    pub fn points(&self) -> Vec<Complex64> {
        match self.field {
            ScalarField::Real => vec![Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)],
            ScalarField::Complex => {
                let n = if self.resolution % 2 == 0 {
                    self.resolution
                } else {
                    self.resolution + 1
                };
                (0..n)
                    .map(|k| {
                        if k == 0 {
                            Complex64::new(1.0, 0.0)
                        } else if 2 * k == n {
                            Complex64::new(-1.0, 0.0)
                        } else {
                            let theta = 2.0 * std::f64::consts::PI * (k as f64) / (n as f64);
                            Complex64::new(theta.cos(), theta.sin())
                        }
                    })
                    .collect()
            }
        }
    }
}

/// `|c|`, exact for real-mode scalars since `hypot(x, 0) = |x|`.
pub fn modulus(c: Complex64) -> f64 {
    if c.im == 0.0 {
        c.re.abs()
    } else {
        c.norm()
    }
}

/// The phase `|c|/c` that rotates `c` onto the nonnegative reals.
///
/// Returns `1` for `c = 0`. For real `c` this is exactly `±1`.
pub fn unimodular_phase(c: Complex64) -> Complex64 {
    let m = modulus(c);
    if m == 0.0 {
        return Complex64::new(1.0, 0.0);
    }
    if c.im == 0.0 {
        Complex64::new(if c.re >= 0.0 { 1.0 } else { -1.0 }, 0.0)
    } else {
        c.conj() / m
    }
}

/// Ordering key used for deterministic tie-breaking of witnesses.
pub fn lex_less(a: &[Complex64], b: &[Complex64]) -> bool {
    for (x, y) in a.iter().zip(b.iter()) {
        match x.re.partial_cmp(&y.re) {
            Some(std::cmp::Ordering::Less) => return true,
            Some(std::cmp::Ordering::Greater) => return false,
            _ => {}
        }
        match x.im.partial_cmp(&y.im) {
            Some(std::cmp::Ordering::Less) => return true,
            Some(std::cmp::Ordering::Greater) => return false,
            _ => {}
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_grid_is_plus_minus_one() {
        let g = UnitScalarGrid::real();
        assert_eq!(
            g.points(),
            vec![Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)]
        );
    }

    #[test]
    fn complex_grid_has_unit_modulus_and_exact_poles() {
        let g = UnitScalarGrid::complex(64);
        let pts = g.points();
        assert_eq!(pts.len(), 64);
        assert_eq!(pts[0], Complex64::new(1.0, 0.0));
        assert!(pts.contains(&Complex64::new(-1.0, 0.0)));
        for p in &pts {
            assert!((p.norm() - 1.0).abs() <= 1e-15);
        }
    }

    #[test]
    fn odd_resolution_rounds_up_to_include_minus_one() {
        let g = UnitScalarGrid::complex(7);
        assert!(g.points().contains(&Complex64::new(-1.0, 0.0)));
    }

    #[test]
    fn phase_rotation_is_exact_for_reals() {
        let c = Complex64::new(-0.9, 0.0);
        let w = unimodular_phase(c);
        assert_eq!(w, Complex64::new(-1.0, 0.0));
        assert_eq!((w * c).re, 0.9);
    }

    #[test]
    fn phase_rotation_normalizes_complex() {
        let c = Complex64::new(0.3, -0.4);
        let w = unimodular_phase(c);
        let r = w * c;
        assert!((r.re - 0.5).abs() < 1e-15);
        assert!(r.im.abs() < 1e-15);
    }
}
