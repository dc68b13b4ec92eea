//! Finite-difference differential operators used to test the evaluators
//! against their defining PDE and boundary condition.
//!
//! Fields are plain closures `Fn(&[f64]) -> f64`; callers are responsible for
//! keeping every stencil point inside the field's domain (a closure may
//! return NaN to signal a violation, which propagates into the result).

/// Central gradient, second order: (g(x+h e_i) − g(x−h e_i)) / 2h.
pub fn fd_gradient<F: Fn(&[f64]) -> f64>(g: F, x: &[f64], h: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(x.len());
    let mut p = x.to_vec();
    for i in 0..x.len() {
        p[i] = x[i] + h;
        let fp = g(&p);
        p[i] = x[i] - h;
        let fm = g(&p);
        p[i] = x[i];
        out.push((fp - fm) / (2.0 * h));
    }
    out
}

/// Laplacian as the sum of 1-D central second differences, second order.
pub fn fd_laplacian<F: Fn(&[f64]) -> f64>(g: F, x: &[f64], h: f64) -> f64 {
    let center = g(x);
    let mut acc = 0.0;
    let mut p = x.to_vec();
    for i in 0..x.len() {
        p[i] = x[i] + h;
        let fp = g(&p);
        p[i] = x[i] - h;
        let fm = g(&p);
        p[i] = x[i];
        acc += (fp - 2.0 * center + fm) / (h * h);
    }
    acc
}

/// Laplacian with two Richardson extrapolation levels over the second-order
/// stencil (steps h, h/2, h/4), leaving an O(h⁶) truncation error.
///
/// Needed by the PDE-residual checks: near the sampling limits the image
/// singularity makes fourth derivatives so large that the plain stencil's
/// truncation dwarfs a 1e-4 relative tolerance at any usable step.
pub fn fd_laplacian_richardson<F: Fn(&[f64]) -> f64 + Copy>(g: F, x: &[f64], h: f64) -> f64 {
    let l1 = fd_laplacian(g, x, h);
    let l2 = fd_laplacian(g, x, h / 2.0);
    let l4 = fd_laplacian(g, x, h / 4.0);
    let r1 = (4.0 * l2 - l1) / 3.0;
    let r2 = (4.0 * l4 - l2) / 3.0;
    (16.0 * r2 - r1) / 15.0
}

/// Normal derivative ∇g·ν at a boundary point `u` (ν = u/|u|), by one-sided
/// inward differences at steps h and h/2 with Richardson extrapolation.
pub fn boundary_normal_derivative<F: Fn(&[f64]) -> f64>(g: F, u: &[f64], h: f64) -> f64 {
    let r = crate::geometry::norm(u);
    let nu: Vec<f64> = u.iter().map(|v| v / r).collect();
    let at = |step: f64| -> f64 {
        let p: Vec<f64> = u.iter().zip(&nu).map(|(v, n)| v - step * n).collect();
        (g(u) - g(&p)) / step
    };
    let d1 = at(h);
    let d2 = at(h / 2.0);
    2.0 * d2 - d1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{fundamental_phi, norm};

    #[test]
    fn laplacian_of_square_norm() {
        let g = |x: &[f64]| x.iter().map(|v| v * v).sum::<f64>();
        let v = fd_laplacian(g, &[0.3, -0.2, 0.5], 1e-3);
        assert!((v - 6.0).abs() < 1e-9);
        let v = fd_laplacian_richardson(g, &[0.3, -0.2, 0.5], 1e-3);
        assert!((v - 6.0).abs() < 1e-8);
    }

    #[test]
    fn fundamental_solution_is_harmonic() {
        let g = |x: &[f64]| fundamental_phi(x).unwrap();
        for x in [[0.5, 0.2, -0.4], [1.2, 0.1, 0.3]] {
            let v = fd_laplacian_richardson(g, &x, 1e-3);
            assert!(v.abs() < 1e-8, "{v}");
        }
    }

    #[test]
    fn gradient_of_square_norm() {
        let g = |x: &[f64]| x.iter().map(|v| v * v).sum::<f64>();
        let grad = fd_gradient(g, &[0.25, -0.75], 1e-6);
        assert!((grad[0] - 0.5).abs() < 1e-9);
        assert!((grad[1] + 1.5).abs() < 1e-9);
    }

    #[test]
    fn boundary_derivative_of_square_norm() {
        // ∂_r r² = 2r: exactly 2 on the unit sphere (Richardson is exact for
        // quadratics), 0 for constants.
        let g = |x: &[f64]| x.iter().map(|v| v * v).sum::<f64>();
        let u = [0.6, 0.8];
        let v = boundary_normal_derivative(g, &u, 1e-6);
        assert!((v - 2.0).abs() < 1e-8);
        assert_eq!(boundary_normal_derivative(|_| 4.2, &u, 1e-6), 0.0);
        assert!((norm(&u) - 1.0).abs() < 1e-15);
    }
}
