//! Closed-form evaluation of the kernel integrals behind the ball Green's
//! functions:
//!
//! - `primitive_j(j, a)`  = ∫₀ᵃ (1 + t²)^{−j/2} dt,
//! - `z_integral(j, x, e, c)` = ∫₀ᶜ |s·x − e|^{−j} ds,
//! - `gamma_integral(k, x, e, c)` = ∫₀ᶜ (e·x − 1/s)/|s·x − e|^k + 1/s ds,
//!
//! for a unit vector `e`, 0 ≤ c < 1 and |x| ≤ 1. The two 1/s pieces of the
//! Γ integrand diverge separately but their sum is bounded (it tends to
//! (1−k)(e·x) as s → 0⁺), so everything here works with the combined form.
//!
//! The change of variables t = (s|x| − (e·x)/|x|)/A with A² = 1 − ((e·x)/|x|)²
//! reduces Z_j to a difference of `primitive_j` values. That difference is
//! evaluated through dedicated stable forms (see `primitive_between`):
//! the naive J(t₂) − J(t₁) loses all precision once both limits sit far out
//! on the same tail, which happens for nearly collinear x and e.

use crate::error::{invalid, Error, Result};
use crate::geometry::{check_finite, check_unit, dot, norm, perp_component, sub};

/// Below this value of A = |x_⊥|/|x| the general change of variables is
/// abandoned for the exact one-dimensional antiderivatives.
pub(crate) const COLLINEAR_EPS: f64 = 1e-7;

/// Below this |x| the Z integrand is expanded in powers of |x| instead.
const TINY_RADIUS: f64 = 1e-6;

fn check_kernel_args(x: &[f64], e: &[f64], c: f64) -> Result<()> {
    check_finite(x, "x")?;
    check_unit(e, "e")?;
    if x.len() != e.len() {
        return Err(invalid("x and e must have the same dimension"));
    }
    if !c.is_finite() || !(0.0..1.0).contains(&c) {
        return Err(invalid(format!("c must lie in [0, 1), got {c}")));
    }
    if norm(x) > 1.0 + 1e-9 {
        return Err(invalid("evaluation points must satisfy |x| <= 1"));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// primitive_j
// ---------------------------------------------------------------------------

/// ∫₀ᵃ (1 + t²)^{−j/2} dt for j ≥ 1; odd in `a`.
///
/// Even j resolve to the double-factorial form
///
/// ```text
/// (j−3)!!/(j−2)!! · ( arctan a + Σ_{i = j−2, j−4, …, 2} i!!/(i−1)!! · a / (i (1+a²)^{i/2}) )
/// ```
///
/// with j = 2 reducing to arctan a. For j = 1 the antiderivative is
/// asinh a = log(a + √(1+a²)). For odd j ≥ 3, substituting t = 1/√(z²−1)
/// turns the integral into ∫_b^∞ z^{1−j} (z²−1)^{(j−3)/2} dz with lower limit
/// b = √(1 + 1/a²), and expanding the binomial gives
///
/// ```text
/// Σ_{i=0}^{(j−3)/2} (−1)^i C((j−3)/2, i) w^{2i+1} / (2i+1),   w = a/√(1+a²) = 1/b,
/// ```
///
/// equivalently ∫₀^w (1−v²)^{(j−3)/2} dv. (A published variant of this
/// resolution states the lower limit as 1 + 1/a² and the coefficient as
/// 1/(2i+2−j); neither survives a quadrature check — already at j = 3 it
/// returns −a/√(1+a²) instead of +a/√(1+a²) — so the form above, which does
/// match quadrature, is the one implemented.)
pub fn primitive_j(j: u32, a: f64) -> Result<f64> {
    if j == 0 {
        return Err(invalid("primitive_j requires j >= 1"));
    }
    if !a.is_finite() {
        return Err(invalid("primitive_j requires finite a"));
    }
    Ok(primitive_point(j, a))
}

/// Unchecked single-point evaluation.
fn primitive_point(j: u32, a: f64) -> f64 {
    if j == 1 {
        return a.asinh();
    }
    if j.is_multiple_of(2) {
        even_primitive(j, a)
    } else {
        odd_primitive_series(j, a / (1.0 + a * a).sqrt())
    }
}

fn even_primitive(j: u32, a: f64) -> f64 {
    // (j−3)!!/(j−2)!!; equals 1 for j = 2 since (−1)!! = 0!! = 1.
    let mut lead = 1.0;
    let mut i = j as i64 - 3;
    while i > 0 {
        lead *= i as f64 / (i + 1) as f64;
        i -= 2;
    }
    let q = 1.0 + a * a;
    let mut sum = a.atan();
    // i!!/(i−1)!! ascending from i = 2.
    let mut ratio = 2.0;
    let mut i = 2u32;
    while i <= j - 2 {
        sum += ratio * a / (i as f64 * q.powi(i as i32 / 2));
        i += 2;
        ratio *= i as f64 / (i as f64 - 1.0);
    }
    lead * sum
}

/// Σ (−1)^i C(m,i) w^{2i+1}/(2i+1) = ∫₀^w (1−v²)^m dv, with m = (j−3)/2.
fn odd_primitive_series(j: u32, w: f64) -> f64 {
    let m = (j - 3) / 2;
    let w2 = w * w;
    let mut binom = 1.0;
    let mut pw = w;
    let mut sum = 0.0;
    for i in 0..=m {
        sum += binom * pw / (2 * i + 1) as f64;
        binom *= -((m - i) as f64) / (i + 1) as f64;
        pw *= w2;
    }
    sum
}

// ---------------------------------------------------------------------------
// Stable differences of primitive_j
// ---------------------------------------------------------------------------

/// Tail remainder R_j(t) = ∫_t^∞ (1+u²)^{−j/2} du for t ≥ √(max(4, j)), j ≥ 2,
/// by the binomial series in 1/t²: Σ_i β_i t^{1−j−2i}/(j−1+2i).
fn tail_remainder(j: u32, t: f64) -> f64 {
    let jf = j as f64;
    let inv2 = 1.0 / (t * t);
    let mut beta = 1.0;
    let mut power = t.powi(1 - j as i32);
    let mut sum = 0.0;
    for i in 0..80u32 {
        let term = beta * power / (jf - 1.0 + 2.0 * i as f64);
        sum += term;
        if term.abs() <= f64::EPSILON * sum.abs() {
            break;
        }
        beta *= -(jf / 2.0 + i as f64) / (i as f64 + 1.0);
        power *= inv2;
    }
    sum
}

fn tail_switch(j: u32) -> f64 {
    (j as f64).sqrt().max(2.0)
}

/// asinh b − asinh a for 0 ≤ a ≤ b, without cancellation.
fn asinh_diff(a: f64, b: f64) -> f64 {
    let sa = (1.0 + a * a).sqrt();
    let sb = (1.0 + b * b).sqrt();
    let delta = (b - a) * (1.0 + (b + a) / (sb + sa));
    (delta / (a + sa)).ln_1p()
}

/// w(b) − w(a) for w(t) = t/√(1+t²), 0 ≤ a ≤ b, without cancellation.
fn w_diff(a: f64, b: f64) -> f64 {
    let sa = (1.0 + a * a).sqrt();
    let sb = (1.0 + b * b).sqrt();
    (b - a) * (b + a) / ((b * sa + a * sb) * sa * sb)
}

/// ∫_a^b (1+t²)^{−j/2} dt for 0 ≤ a ≤ b in the "middle" range (b bounded by
/// the tail switch), as a stable difference of the closed forms.
fn mid_segment(j: u32, a: f64, b: f64) -> f64 {
    if j == 1 {
        return asinh_diff(a, b);
    }
    if j.is_multiple_of(2) {
        // In θ = arctan t the integral is ∫ cos^{2r}θ dθ with r = (j−2)/2;
        // the power-reduction form keeps every term proportional to Δθ.
        let r = (j as usize - 2) / 2;
        let dt = ((b - a) / (1.0 + a * b)).atan();
        let ta = a.atan();
        let tb = ta + dt;
        // C(2r, r−i) by downward recurrence from C(2r, r).
        let mut central = 1.0;
        for i in 0..r {
            central *= (2 * r - i) as f64 / (i + 1) as f64;
        }
        let mut sum = central * dt;
        let mut binom = central;
        for i in 1..=r {
            // C(2r, r−i) = C(2r, r−i+1) · (r−i+1)/(r+i)
            binom *= (r - i + 1) as f64 / (r + i) as f64;
            sum += 2.0 * binom / i as f64 * (i as f64 * (ta + tb)).cos()
                * (i as f64 * dt).sin();
        }
        sum / 4.0f64.powi(r as i32)
    } else {
        // Difference of the odd-j polynomial in w, with w^p − w^p expanded
        // around the stable Δw.
        let m = (j - 3) / 2;
        let wa = a / (1.0 + a * a).sqrt();
        let wb = b / (1.0 + b * b).sqrt();
        let dw = w_diff(a, b);
        let mut binom = 1.0;
        let mut sum = 0.0;
        for i in 0..=m {
            let p = (2 * i + 1) as i32;
            // wb^p − wa^p = Δw · Σ_l wb^l wa^{p−1−l}
            let mut geom = 0.0;
            for l in 0..p {
                geom += wb.powi(l) * wa.powi(p - 1 - l);
            }
            sum += binom * dw * geom / p as f64;
            binom *= -((m - i) as f64) / (i + 1) as f64;
        }
        sum
    }
}

/// ∫_a^b (1+t²)^{−j/2} dt for 0 ≤ a ≤ b, splitting between the middle range
/// and the tail range at `tail_switch(j)`.
fn positive_segment(j: u32, a: f64, b: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    if j == 1 {
        return asinh_diff(a, b);
    }
    let ts = tail_switch(j);
    if a >= ts {
        return tail_remainder(j, a) - tail_remainder(j, b);
    }
    if b <= ts {
        return mid_segment(j, a, b);
    }
    mid_segment(j, a, ts) + tail_remainder(j, ts) - tail_remainder(j, b)
}

/// ∫_{t1}^{t2} (1+t²)^{−j/2} dt, stable for all placements of the limits.
pub(crate) fn primitive_between(j: u32, t1: f64, t2: f64) -> f64 {
    if t1 == t2 {
        return 0.0;
    }
    if t1 > t2 {
        return -primitive_between(j, t2, t1);
    }
    if t1 < 0.0 && t2 > 0.0 {
        // Straddles the origin: the two closed-form values add, no
        // cancellation.
        return primitive_point(j, t2) - primitive_point(j, t1);
    }
    if t2 <= 0.0 {
        positive_segment(j, -t2, -t1)
    } else {
        positive_segment(j, t1, t2)
    }
}

// ---------------------------------------------------------------------------
// Z_j
// ---------------------------------------------------------------------------

/// Z_j = ∫₀ᶜ |s·x − e|^{−j} ds.
pub fn z_integral(j: u32, x: &[f64], e: &[f64], c: f64) -> Result<f64> {
    Ok(z_integral_flagged(j, x, e, c)?.0)
}

/// As [`z_integral`], additionally reporting whether the collinear fallback
/// was taken.
pub(crate) fn z_integral_flagged(j: u32, x: &[f64], e: &[f64], c: f64) -> Result<(f64, bool)> {
    if j == 0 {
        return Err(invalid("z_integral requires j >= 1"));
    }
    check_kernel_args(x, e, c)?;
    if c == 0.0 {
        return Ok((0.0, false));
    }
    let r = norm(x);
    let mu = dot(e, x);
    if r <= TINY_RADIUS {
        // |s·x − e|^{−j} = 1 + j·s·(e·x) + s²(j(j+2)(e·x)²/2 − j|x|²/2) + O(|x|³)
        let jf = j as f64;
        let quad = jf * (jf + 2.0) * mu * mu / 2.0 - jf * r * r / 2.0;
        return Ok((c + jf * mu * c * c / 2.0 + quad * c * c * c / 3.0, false));
    }
    let a_perp = norm(&perp_component(x, e)) / r;
    if a_perp < COLLINEAR_EPS {
        return Ok((collinear_z(j, r, c, mu >= 0.0), true));
    }
    let t1 = -mu / (a_perp * r);
    let t2 = t1 + c * r / a_perp;
    let dj = primitive_between(j, t1, t2);
    Ok((dj / (r * a_perp.powi(j as i32 - 1)), false))
}

/// Exact antiderivatives of |1 ∓ s·r|^{−j} used when x is (nearly) parallel
/// to e; `positive` is the sign of e·x.
fn collinear_z(j: u32, r: f64, c: f64, positive: bool) -> f64 {
    if positive {
        // ∫₀ᶜ (1 − s r)^{−j} ds;  s r ≤ c r < 1.
        if j == 1 {
            -(1.0 - c * r).ln() / r
        } else {
            ((1.0 - c * r).powi(1 - j as i32) - 1.0) / ((j as f64 - 1.0) * r)
        }
    } else if j == 1 {
        (c * r).ln_1p() / r
    } else {
        (1.0 - (1.0 + c * r).powi(1 - j as i32)) / ((j as f64 - 1.0) * r)
    }
}

// ---------------------------------------------------------------------------
// Γ_k
// ---------------------------------------------------------------------------

/// Γ_k(x, e, c) = ∫₀ᶜ (e·x − 1/s)/|s·x − e|^k + 1/s ds.
///
/// Γ_2 = log|c·x − e| exactly. Γ_1 is the log / directional-log / artanh
/// expression (see [`gamma_one`]); for collinear x (always the case in one
/// dimension) the combined integrand vanishes identically and Γ_1 = 0.
/// For k > 2 the integration-by-parts recursion resolves to
///
/// ```text
/// Γ_k = Σ_{j = k−2, k−4, …, j > 0} ( 1/j − 1/(j|cx−e|^j) − (e·x) Z_j ) + Γ_{2 or 1},
/// ```
///
/// accumulated in descending j so the largest terms enter first.
pub fn gamma_integral(k: u32, x: &[f64], e: &[f64], c: f64) -> Result<f64> {
    Ok(gamma_integral_flagged(k, x, e, c)?.0)
}

pub(crate) fn gamma_integral_flagged(
    k: u32,
    x: &[f64],
    e: &[f64],
    c: f64,
) -> Result<(f64, bool)> {
    if k == 0 {
        return Err(invalid("gamma_integral requires k >= 1"));
    }
    check_kernel_args(x, e, c)?;
    if c == 0.0 {
        return Ok((0.0, false));
    }
    let r = norm(x);
    if r == 0.0 {
        // The combined integrand vanishes identically at x = 0, so even-k
        // values are exactly zero; odd k route through Γ_1, which needs the
        // direction x/|x|.
        if k % 2 == 1 {
            return Err(Error::DirectionUndefined);
        }
        return Ok((0.0, false));
    }

    let rho = norm(&sub(&crate::geometry::scale(x, c), e));
    let ln_rho = rho.ln();
    let (tail, mut collinear) = if k.is_multiple_of(2) {
        (ln_rho, false)
    } else {
        gamma_one_inner(x, e, c, r, rho)
    };

    let mu = dot(e, x);
    let mut acc = 0.0;
    let mut j = k as i64 - 2;
    while j > 0 {
        let (zj, zc) = z_integral_flagged(j as u32, x, e, c)?;
        collinear |= zc;
        // 1/j − ρ^{−j}/j, as −expm1(−j log ρ)/j to keep accuracy when ρ ≈ 1.
        acc += -(-(j as f64) * ln_rho).exp_m1() / j as f64 - mu * zj;
        j -= 2;
    }
    Ok((acc + tail, collinear))
}

/// Γ_1 in its well-conditioned form.
///
/// The direct expression is
///
/// ```text
/// Γ_1 = log( (c/2) √(|x|²−(e·x)²) )
///     + (e·x)/|x| · log( (c|x|² − e·x + |x||cx−e|) / (|x| − e·x) )
///     − artanh( (c e·x − 1)/|cx−e| ),
/// ```
///
/// whose three terms all blow up as x approaches the axis through e even
/// though their sum stays finite. The identity
/// |cx−e|² − (c e·x − 1)² = c²(|x|² − (e·x)²) lets the artanh absorb the
/// first logarithm, leaving the equivalent
///
/// ```text
/// Γ_1 = log( (|cx−e| + 1 − c e·x) / 2 ) + w · log Q,    w = (e·x)/|x|,
/// Q = (|cx−e| + c|x| − w)/(1 − w) = (1 + w)/(|cx−e| + w − c|x|),
/// ```
///
/// where whichever branch of Q avoids cancellation is used. For collinear x
/// the combined integrand is identically zero and 0.0 is returned exactly.
pub fn gamma_one(x: &[f64], e: &[f64], c: f64) -> Result<(f64, bool)> {
    check_kernel_args(x, e, c)?;
    if c == 0.0 {
        return Ok((0.0, false));
    }
    let r = norm(x);
    if r == 0.0 {
        return Err(Error::DirectionUndefined);
    }
    let rho = norm(&sub(&crate::geometry::scale(x, c), e));
    Ok(gamma_one_inner(x, e, c, r, rho))
}

fn gamma_one_inner(x: &[f64], e: &[f64], c: f64, r: f64, rho: f64) -> (f64, bool) {
    let a_perp = norm(&perp_component(x, e)) / r;
    if a_perp < COLLINEAR_EPS {
        return (0.0, true);
    }
    let mu = dot(e, x);
    let w = mu / r;
    let q = if w >= c * r {
        (1.0 + w) / (rho + w - c * r)
    } else {
        (rho + c * r - w) / (1.0 - w)
    };
    (((rho + 1.0 - c * mu) / 2.0).ln() + w * q.ln(), false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::quadrature::{quad_integral, QuadratureConfig};
    use std::f64::consts::PI;

    fn quad_j(j: u32, a: f64) -> f64 {
        let cfg = QuadratureConfig::default();
        let (lo, hi, sign) = if a >= 0.0 { (0.0, a, 1.0) } else { (a, 0.0, -1.0) };
        sign * quad_integral(|t| (1.0 + t * t).powf(-(j as f64) / 2.0), lo, hi, &cfg).unwrap()
    }

    fn quad_z(j: u32, x: &[f64], e: &[f64], c: f64) -> f64 {
        let cfg = QuadratureConfig::default();
        let r2 = dot(x, x);
        let mu = dot(e, x);
        quad_integral(
            |s| (-(j as f64) / 2.0 * (s * (s * r2 - 2.0 * mu)).ln_1p()).exp(),
            0.0,
            c,
            &cfg,
        )
        .unwrap()
    }

    fn quad_gamma(k: u32, x: &[f64], e: &[f64], c: f64) -> f64 {
        let cfg = QuadratureConfig::default();
        let r2 = dot(x, x);
        let mu = dot(e, x);
        let kf = k as f64;
        quad_integral(
            |s| {
                if s == 0.0 {
                    return (1.0 - kf) * mu;
                }
                let t = -kf / 2.0 * (s * (s * r2 - 2.0 * mu)).ln_1p();
                mu * t.exp() - t.exp_m1() / s
            },
            0.0,
            c,
            &cfg,
        )
        .unwrap()
    }

    #[test]
    fn primitive_reference_values() {
        assert!((primitive_j(2, 1.0).unwrap() - PI / 4.0).abs() < 1e-15);
        // j = 1: asinh(1) = log(1 + √2), frozen from the quadrature oracle.
        let v = primitive_j(1, 1.0).unwrap();
        assert!((v - (1.0 + 2.0f64.sqrt()).ln()).abs() < 1e-15);
        assert!((v - 0.881373587019543).abs() < 1e-15);
        assert!((v - quad_j(1, 1.0)).abs() < 1e-12);
        // j = 4: one step of the even recursion.
        let v = primitive_j(4, 1.0).unwrap();
        assert!((v - (0.25 + PI / 8.0)).abs() < 1e-15);
        assert!((v - quad_j(4, 1.0)).abs() < 1e-12);
        // Empty interval.
        for j in 1..=9 {
            assert_eq!(primitive_j(j, 0.0).unwrap(), 0.0);
        }
        assert!(primitive_j(0, 1.0).is_err());
    }

    #[test]
    fn primitive_matches_quadrature() {
        for j in 1..=12u32 {
            for &a in &[-6.0, -2.3, -0.7, 0.31, 1.9, 4.7, 9.5] {
                let v = primitive_j(j, a).unwrap();
                let q = quad_j(j, a);
                assert!(
                    (v - q).abs() <= 1e-9f64.max(1e-9 * q.abs()),
                    "j = {j}, a = {a}: closed {v} vs quad {q}"
                );
            }
        }
    }

    #[test]
    fn primitive_is_odd() {
        for j in 1..=10u32 {
            for &a in &[0.17, 1.0, 3.5, 22.0] {
                let plus = primitive_j(j, a).unwrap();
                let minus = primitive_j(j, -a).unwrap();
                assert_eq!(plus.to_bits(), (-minus).to_bits(), "j = {j}, a = {a}");
            }
        }
    }

    #[test]
    fn primitive_between_is_stable_on_far_tails() {
        // Both limits deep on the same tail: the direct difference of
        // closed forms would lose ~8 digits here.
        for j in 2..=11u32 {
            let (t1, t2) = (14.972, 19.973);
            let v = primitive_between(j, t1, t2);
            let cfg = QuadratureConfig::default();
            let q = quad_integral(
                |t| (1.0 + t * t).powf(-(j as f64) / 2.0),
                t1,
                t2,
                &cfg,
            )
            .unwrap();
            assert!(
                (v - q).abs() <= 1e-12f64.max(1e-10 * q.abs()),
                "j = {j}: {v} vs {q}"
            );
            let vneg = primitive_between(j, -t2, -t1);
            assert!((vneg - q).abs() <= 1e-12f64.max(1e-10 * q.abs()));
        }
    }

    #[test]
    fn z_reference_values() {
        // c = 0.
        assert_eq!(
            z_integral(3, &[0.5, 0.0], &[1.0, 0.0], 0.0).unwrap(),
            0.0
        );
        // x = 0: the integrand is identically 1.
        let v = z_integral(3, &[0.0, 0.0, 0.0], &[1.0, 0.0, 0.0], 0.7).unwrap();
        assert!((v - 0.7).abs() < 1e-15);
        // Collinear: ∫₀^{1/2} (1 − s/2)^{−3} ds = 7/9 by the exact
        // antiderivative (1−s/2)^{−2}, confirmed by quadrature.
        let x = [0.5, 0.0, 0.0];
        let e = [1.0, 0.0, 0.0];
        let v = z_integral(3, &x, &e, 0.5).unwrap();
        assert!((v - 7.0 / 9.0).abs() < 1e-14, "{v}");
        assert!((v - quad_z(3, &x, &e, 0.5)).abs() < 1e-11);
    }

    #[test]
    fn z_matches_quadrature_generic() {
        let cases: [(&[f64], &[f64], f64); 4] = [
            (&[0.3, -0.6, 0.2], &[0.0, 1.0, 0.0], 0.85),
            (&[0.9, 0.1], &[-1.0, 0.0], 0.5),
            (&[0.05, 0.02, -0.01, 0.03], &[0.5, 0.5, 0.5, 0.5], 0.92),
            (&[-0.4], &[1.0], 0.7),
        ];
        for (x, e, c) in cases {
            for j in 1..=9u32 {
                let v = z_integral(j, x, e, c).unwrap();
                let q = quad_z(j, x, e, c);
                assert!(
                    (v - q).abs() <= 1e-9f64.max(1e-9 * q.abs()),
                    "j = {j}, x = {x:?}: {v} vs {q}"
                );
            }
        }
    }

    #[test]
    fn z_near_collinear_is_accurate() {
        // A ranging across the fallback threshold; compare to quadrature.
        let e = [1.0, 0.0];
        for &eps in &[1e-3, 1e-5, 3e-7, 1e-8] {
            let x = [0.6, 0.6 * eps];
            for j in [1u32, 3, 4, 7, 9] {
                let v = z_integral(j, &x, &e, 0.9).unwrap();
                let q = quad_z(j, &x, &e, 0.9);
                assert!(
                    (v - q).abs() <= 1e-9f64.max(1e-9 * q.abs()),
                    "j = {j}, eps = {eps}: {v} vs {q}"
                );
            }
        }
    }

    #[test]
    fn gamma_reference_values() {
        // Empty interval for every k.
        for k in 1..=6 {
            assert_eq!(
                gamma_integral(k, &[0.2, 0.1], &[0.0, 1.0], 0.0).unwrap(),
                0.0
            );
        }
        // Γ_2 = log|cx − e|.
        let v = gamma_integral(2, &[0.5, 0.0], &[1.0, 0.0], 0.5).unwrap();
        assert!((v - 0.75f64.ln()).abs() < 1e-15);
        assert!((v + 0.2876820724517809).abs() < 1e-13);
        // Γ_3 against the quadrature oracle.
        let x = [0.0, 0.8, 0.0];
        let e = [1.0, 0.0, 0.0];
        let v = gamma_integral(3, &x, &e, 0.6).unwrap();
        let q = quad_gamma(3, &x, &e, 0.6);
        assert!((v - q).abs() <= 1e-10, "{v} vs {q}");
        // One dimension: identically zero.
        assert_eq!(gamma_integral(1, &[0.4], &[1.0], 0.5).unwrap(), 0.0);
        assert_eq!(gamma_integral(1, &[-0.4], &[1.0], 0.5).unwrap(), 0.0);
    }

    #[test]
    fn gamma_matches_quadrature_generic() {
        let cases: [(&[f64], &[f64], f64); 5] = [
            (&[0.3, -0.6, 0.2], &[0.0, 1.0, 0.0], 0.85),
            (&[0.9, 0.1], &[-1.0, 0.0], 0.5),
            (&[0.6, 0.3], &[1.0, 0.0], 0.5),
            (&[0.05, 0.02, -0.01, 0.03], &[0.5, 0.5, 0.5, 0.5], 0.92),
            (&[0.2, 0.0, 0.5, 0.1, -0.3], &[0.0, 0.0, 0.0, 0.0, 1.0], 0.75),
        ];
        for (x, e, c) in cases {
            for k in 1..=10u32 {
                let v = gamma_integral(k, x, e, c).unwrap();
                let q = quad_gamma(k, x, e, c);
                assert!(
                    (v - q).abs() <= 1e-9f64.max(1e-9 * q.abs()),
                    "k = {k}, x = {x:?}: {v} vs {q}"
                );
            }
        }
    }

    #[test]
    fn gamma_one_matches_direct_expression() {
        // The rearranged Γ_1 equals the direct log/log/artanh form where the
        // latter is well conditioned.
        let cases: [(&[f64], &[f64], f64); 3] = [
            (&[0.6, 0.3], &[1.0, 0.0], 0.5),
            (&[0.3, -0.6, 0.2], &[0.0, 1.0, 0.0], 0.85),
            (&[-0.2, 0.7], &[1.0, 0.0], 0.3),
        ];
        for (x, e, c) in cases {
            let r = norm(x);
            let mu = dot(e, x);
            let rho = norm(&sub(&crate::geometry::scale(x, c), e));
            let perp2 = r * r - mu * mu;
            let direct = (c / 2.0 * perp2.sqrt()).ln()
                + mu / r * ((c * r * r - mu + r * rho) / (r - mu)).ln()
                - ((c * mu - 1.0) / rho).atanh();
            let (v, fallback) = gamma_one(x, e, c).unwrap();
            assert!(!fallback);
            assert!((v - direct).abs() <= 1e-12, "{v} vs {direct}");
        }
    }

    #[test]
    fn gamma_at_origin() {
        // Even k: all terms vanish identically. Odd k: needs a direction.
        assert_eq!(
            gamma_integral(4, &[0.0, 0.0], &[1.0, 0.0], 0.6).unwrap(),
            0.0
        );
        assert!(matches!(
            gamma_integral(3, &[0.0, 0.0], &[1.0, 0.0], 0.6),
            Err(Error::DirectionUndefined)
        ));
    }

    #[test]
    fn gamma_recursion_consistency() {
        let x = [0.3, -0.5, 0.4];
        let e = [0.0, 0.0, 1.0];
        let c = 0.8;
        let rho = norm(&sub(&crate::geometry::scale(&x, c), &e));
        let mu = dot(&e, &x);
        for k in 3..=10u32 {
            let jj = (k - 2) as f64;
            let gk = gamma_integral(k, &x, &e, c).unwrap();
            let gk2 = gamma_integral(k - 2, &x, &e, c).unwrap();
            let step = 1.0 / jj - rho.powi(-(jj as i32)) / jj
                - mu * z_integral(k - 2, &x, &e, c).unwrap();
            assert!(
                (gk - gk2 - step).abs() <= 1e-11 * gk.abs().max(1.0),
                "k = {k}"
            );
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(z_integral(1, &[0.5, 0.0], &[0.5, 0.0], 0.5).is_err()); // |e| != 1
        assert!(z_integral(1, &[0.5, 0.0], &[1.0, 0.0], 1.0).is_err()); // c = 1
        assert!(z_integral(1, &[1.5, 0.0], &[1.0, 0.0], 0.5).is_err()); // |x| > 1
        assert!(gamma_integral(2, &[0.5, 0.0], &[1.0, 0.0], -0.1).is_err());
        assert!(gamma_integral(2, &[0.5, f64::NAN], &[1.0, 0.0], 0.1).is_err());
    }
}
