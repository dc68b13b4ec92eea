//! Dimension-generic vector arithmetic, unit-sphere surface areas, the
//! free-space fundamental solutions, and the sphere-inversion (image) point.
//!
//! Vectors are plain `&[f64]` slices; the dimension is the slice length and is
//! validated at the public call boundaries.

use crate::error::{invalid, Result};

/// Dimension and radius of the domain ball.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BallSpec {
    pub dim: usize,
    pub radius: f64,
}

impl BallSpec {
    pub fn new(dim: usize, radius: f64) -> Result<Self> {
        if dim == 0 {
            return Err(invalid("ball dimension must be at least 1"));
        }
        if radius <= 0.0 || !radius.is_finite() {
            return Err(invalid(format!("ball radius must be positive, got {radius}")));
        }
        Ok(BallSpec { dim, radius })
    }

    /// Unit ball.
    pub fn unit(dim: usize) -> Result<Self> {
        BallSpec::new(dim, 1.0)
    }

    /// Whether `x` lies in the closed ball (with a tiny slack so that points
    /// normalized onto the boundary in floating point still count).
    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim && norm(x) <= self.radius * (1.0 + 1e-12)
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(a: &[f64], s: f64) -> Vec<f64> {
    a.iter().map(|x| x * s).collect()
}

/// a + s*b
pub fn axpy(a: &[f64], s: f64, b: &[f64]) -> Vec<f64> {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x + s * y).collect()
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Component of `x` orthogonal to the unit vector `e`.
pub fn perp_component(x: &[f64], e: &[f64]) -> Vec<f64> {
    axpy(x, -dot(x, e), e)
}

pub(crate) fn check_finite(x: &[f64], name: &str) -> Result<()> {
    if x.is_empty() {
        return Err(invalid(format!("{name} must have at least one component")));
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(invalid(format!("{name} has a non-finite component")));
    }
    Ok(())
}

pub(crate) fn check_unit(e: &[f64], name: &str) -> Result<()> {
    check_finite(e, name)?;
    if (norm(e) - 1.0).abs() > 1e-12 {
        return Err(invalid(format!("{name} must be a unit vector")));
    }
    Ok(())
}

/// Γ(n/2) for integer n >= 1, by the exact recurrence Γ(x+1) = xΓ(x) seeded
/// with Γ(1) = 1 and Γ(1/2) = √π.
fn gamma_half_integer(n: usize) -> f64 {
    let mut g;
    let mut x;
    if n.is_multiple_of(2) {
        g = 1.0; // Γ(1)
        x = 1.0;
    } else {
        g = std::f64::consts::PI.sqrt(); // Γ(1/2)
        x = 0.5;
    }
    while x + 0.5 < n as f64 / 2.0 {
        g *= x;
        x += 1.0;
    }
    g
}

/// π^(n/2) without `powf`: integer power times √π for odd n.
fn pi_pow_half(n: usize) -> f64 {
    let p = std::f64::consts::PI.powi((n / 2) as i32);
    if n.is_multiple_of(2) {
        p
    } else {
        p * std::f64::consts::PI.sqrt()
    }
}

/// Surface area ω_n of the unit sphere in R^n: ω_n = 2 π^{n/2} / Γ(n/2).
///
/// ω_1 = 2 (two boundary points, consistent with the n = 1 fundamental
/// solution |x|/2), ω_2 = 2π, ω_3 = 4π, ω_4 = 2π².
pub fn surface_area(n: usize) -> Result<f64> {
    if n == 0 {
        return Err(invalid("surface_area requires n >= 1"));
    }
    Ok(2.0 * pi_pow_half(n) / gamma_half_integer(n))
}

/// Fundamental solution Φ of the Laplacian, ΔΦ = δ_0:
///
/// Φ(x) = |x|/ω_1 (n = 1), log|x|/ω_2 (n = 2), −1/((n−2) ω_n |x|^{n−2}) (n > 2).
pub fn fundamental_phi(x: &[f64]) -> Result<f64> {
    check_finite(x, "x")?;
    let n = x.len();
    let r = norm(x);
    if r == 0.0 {
        return Err(invalid("fundamental_phi is singular at x = 0"));
    }
    let w = surface_area(n)?;
    let value = match n {
        1 => r / w,
        2 => r.ln() / w,
        _ => -1.0 / ((n as f64 - 2.0) * w * r.powi(n as i32 - 2)),
    };
    if !value.is_finite() {
        return Err(invalid(format!("fundamental_phi overflowed at |x| = {r:e}")));
    }
    Ok(value)
}

/// Free-space dipole kernel Ψ = ∇Φ: Ψ(x) = x / (ω_n |x|^n).
pub fn fundamental_psi(x: &[f64]) -> Result<Vec<f64>> {
    check_finite(x, "x")?;
    let n = x.len();
    let r = norm(x);
    if r == 0.0 {
        return Err(invalid("fundamental_psi is singular at x = 0"));
    }
    let w = surface_area(n)?;
    let s = 1.0 / (w * r.powi(n as i32));
    if !s.is_finite() {
        return Err(invalid(format!("fundamental_psi overflowed at |x| = {r:e}")));
    }
    Ok(scale(x, s))
}

/// Inversion of `z` with respect to the unit sphere: z* = z/|z|².
///
/// For every |x| = 1 the reflection identity |x − z| = |z| |x − z*| holds;
/// it is what makes the image construction cancel boundary contributions.
pub fn invert_point(z: &[f64]) -> Result<Vec<f64>> {
    check_finite(z, "z")?;
    let r2 = dot(z, z);
    if r2 == 0.0 {
        return Err(invalid("invert_point: z = 0 has its image at infinity"));
    }
    Ok(scale(z, 1.0 / r2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn surface_area_small_dims() {
        assert!((surface_area(2).unwrap() - 2.0 * PI).abs() < 1e-15);
        assert!((surface_area(3).unwrap() - 4.0 * PI).abs() < 1e-14);
        assert!((surface_area(4).unwrap() - 2.0 * PI * PI).abs() < 1e-14);
        assert!((surface_area(1).unwrap() - 2.0).abs() < 1e-15);
        assert!(surface_area(0).is_err());
    }

    #[test]
    fn surface_area_gamma_identity() {
        // ω_n · Γ(n/2) / (2 π^{n/2}) = 1, with Γ by its own recurrence here.
        for n in 1..=20 {
            let mut g;
            let mut x;
            if n % 2 == 0 {
                g = 1.0;
                x = 1.0;
            } else {
                g = PI.sqrt();
                x = 0.5;
            }
            while x + 0.5 < n as f64 / 2.0 {
                g *= x;
                x += 1.0;
            }
            let lhs = surface_area(n).unwrap() * g / (2.0 * pi_pow_half(n));
            assert!((lhs - 1.0).abs() <= 1e-14, "n = {n}: {lhs}");
        }
    }

    #[test]
    fn phi_reference_values() {
        assert!((fundamental_phi(&[1.0, 0.0, 0.0]).unwrap() + 1.0 / (4.0 * PI)).abs() < 1e-16);
        assert_eq!(fundamental_phi(&[1.0, 0.0]).unwrap(), 0.0); // log 1
        assert!((fundamental_phi(&[0.5]).unwrap() - 0.25).abs() < 1e-16);
        assert!(fundamental_phi(&[0.0, 0.0]).is_err());
    }

    #[test]
    fn psi_reference_values() {
        let p = fundamental_psi(&[1.0, 0.0, 0.0]).unwrap();
        assert!((p[0] - 1.0 / (4.0 * PI)).abs() < 1e-16);
        assert_eq!(p[1], 0.0);
        let q = fundamental_psi(&[0.0, 2.0]).unwrap();
        assert_eq!(q[0], 0.0);
        assert!((q[1] - 1.0 / (4.0 * PI)).abs() < 1e-16);
    }

    #[test]
    fn psi_is_gradient_of_phi() {
        // Central finite difference of Φ reproduces Ψ.
        let x = [0.7, -0.4, 0.3, 0.9];
        let h = 1e-6;
        let psi = fundamental_psi(&x).unwrap();
        for i in 0..x.len() {
            let mut xp = x.to_vec();
            let mut xm = x.to_vec();
            xp[i] += h;
            xm[i] -= h;
            let fd =
                (fundamental_phi(&xp).unwrap() - fundamental_phi(&xm).unwrap()) / (2.0 * h);
            assert!((fd - psi[i]).abs() <= 1e-7, "component {i}");
        }
    }

    #[test]
    fn inversion_examples() {
        assert_eq!(invert_point(&[0.5, 0.0]).unwrap(), vec![2.0, 0.0]);
        let p = invert_point(&[0.3, 0.4]).unwrap();
        assert!((p[0] - 1.2).abs() < 1e-15 && (p[1] - 1.6).abs() < 1e-15);
        assert!(invert_point(&[0.0, 0.0]).is_err());
    }

    #[test]
    fn reflection_identity_example() {
        let z = [0.5, 0.0];
        let x = [0.0, 1.0];
        let zs = invert_point(&z).unwrap();
        let lhs = dist(&x, &z);
        let rhs = norm(&z) * dist(&x, &zs);
        assert!((lhs - 1.25f64.sqrt()).abs() < 1e-15);
        assert!((rhs - 0.5 * 5.0f64.sqrt()).abs() < 1e-15);
        assert!((lhs - rhs).abs() <= 1e-14 * lhs);
    }

    #[test]
    fn ball_spec_validation() {
        assert!(BallSpec::new(0, 1.0).is_err());
        assert!(BallSpec::new(3, 0.0).is_err());
        assert!(BallSpec::new(3, -2.0).is_err());
        let b = BallSpec::new(2, 2.0).unwrap();
        assert!(b.contains(&[2.0, 0.0]));
        assert!(!b.contains(&[2.0, 0.1]));
    }
}
