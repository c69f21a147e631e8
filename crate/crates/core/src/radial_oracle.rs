//! Closed-form first eigenpair of the Steklov-Robin problem on spherical
//! shells `A(r, R) = { x in R^n : r < |x| < R }` with constant Robin weight.
//!
//! The radial profile solves `(s^(n-1) v')' = 0`, so
//! `v(s) = c1 log s + c2` for `n = 2` and `v(s) = c1 s^(2-n) + c2` for
//! `n >= 3`. Imposing `-v'(r) + beta v(r) = 0` and `v'(R) = sigma v(R)` gives
//! a 2x2 homogeneous system whose determinant fixes `sigma`.
//!
//! For `n >= 3` the determinant yields `(R/r)^(n-1)` on the `1/beta` term and
//! the eigenfunction constant `(n-2) / (beta r^(n-1))`. A widely reproduced
//! variant uses `(R/r)^(n-2)` and `(n-2) / (beta R r^(n-2))` instead; it does
//! not satisfy the inner boundary condition. That variant is kept in
//! [`printed`] only so the discrepancy stays pinned by tests.

use crate::error::{param, Result};

/// Spherical shell of dimension `n` with inner radius `r` and outer radius `outer`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShellSpec {
    pub n: u32,
    pub r: f64,
    pub outer: f64,
}

impl ShellSpec {
    pub fn new(n: u32, r: f64, outer: f64) -> Result<Self> {
        let spec = ShellSpec { n, r, outer };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(param(format!("dimension must be >= 2, got {}", self.n)));
        }
        if !(self.r.is_finite() && self.r > 0.0) {
            return Err(param(format!("inner radius must be positive, got {}", self.r)));
        }
        if !(self.outer.is_finite() && self.outer > self.r) {
            return Err(param(format!(
                "outer radius must exceed inner radius ({} <= {})",
                self.outer, self.r
            )));
        }
        Ok(())
    }

    /// `R / r`.
    fn ratio(&self) -> f64 {
        self.outer / self.r
    }

    fn k(&self) -> f64 {
        f64::from(self.n) - 2.0
    }
}

/// Exact eigenpair data for a shell: eigenvalue plus the radial profile
/// `v(s) = c1 log s + c2` (n = 2) or `v(s) = c1 s^(2-n) + c2` (n >= 3).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShellEigen {
    pub sigma: f64,
    pub c1: f64,
    pub c2: f64,
}

fn check_beta(beta: f64) -> Result<()> {
    if beta.is_finite() && beta > 0.0 {
        Ok(())
    } else {
        Err(param(format!("Robin weight must be positive and finite, got {beta}")))
    }
}

/// First Steklov-Robin eigenvalue of the shell with constant weight `beta`.
pub fn sigma_beta_shell(spec: &ShellSpec, beta: f64) -> Result<f64> {
    spec.validate()?;
    check_beta(beta)?;
    let (r, big_r, q) = (spec.r, spec.outer, spec.ratio());
    let sigma = if spec.n == 2 {
        1.0 / (big_r / (beta * r) + big_r * q.ln())
    } else {
        let k = spec.k();
        k / ((k / beta) * q.powf(k + 1.0) + big_r * (q.powf(k) - 1.0))
    };
    Ok(sigma)
}

/// First Steklov-Dirichlet eigenvalue of the shell, the `beta -> infinity`
/// limit of [`sigma_beta_shell`].
pub fn sigma_dirichlet_shell(spec: &ShellSpec) -> Result<f64> {
    spec.validate()?;
    let (big_r, q) = (spec.outer, spec.ratio());
    let sigma = if spec.n == 2 {
        1.0 / (big_r * q.ln())
    } else {
        let k = spec.k();
        k / (big_r * (q.powf(k) - 1.0))
    };
    Ok(sigma)
}

/// Radial profile coefficients of the first eigenfunction, scaled as
/// `log(s/r) + 1/(beta r)` (n = 2) or `r^(2-n) - s^(2-n) + (n-2)/(beta r^(n-1))`.
pub fn shell_eigen(spec: &ShellSpec, beta: f64) -> Result<ShellEigen> {
    let sigma = sigma_beta_shell(spec, beta)?;
    let r = spec.r;
    let (c1, c2) = if spec.n == 2 {
        (1.0, 1.0 / (beta * r) - r.ln())
    } else {
        let k = spec.k();
        (-1.0, r.powf(-k) + k / (beta * r.powf(k + 1.0)))
    };
    Ok(ShellEigen { sigma, c1, c2 })
}

fn profile(spec: &ShellSpec, e: &ShellEigen, s: f64) -> (f64, f64) {
    if spec.n == 2 {
        (e.c1 * s.ln() + e.c2, e.c1 / s)
    } else {
        let k = spec.k();
        (e.c1 * s.powf(-k) + e.c2, -k * e.c1 * s.powf(-k - 1.0))
    }
}

fn check_radius(spec: &ShellSpec, s: f64) -> Result<()> {
    // a little slack so mesh nodes placed on the circles are accepted
    let slack = 1e-12 * spec.outer;
    if s.is_finite() && s >= spec.r - slack && s <= spec.outer + slack {
        Ok(())
    } else {
        Err(param(format!(
            "radius {s} outside the shell [{}, {}]",
            spec.r, spec.outer
        )))
    }
}

/// Value of the first eigenfunction at radius `s`.
pub fn shell_eigenfunction(spec: &ShellSpec, beta: f64, s: f64) -> Result<f64> {
    let e = shell_eigen(spec, beta)?;
    check_radius(spec, s)?;
    Ok(profile(spec, &e, s).0)
}

/// Radial derivative of the first eigenfunction at radius `s`.
pub fn shell_eigenfunction_derivative(spec: &ShellSpec, beta: f64, s: f64) -> Result<f64> {
    let e = shell_eigen(spec, beta)?;
    check_radius(spec, s)?;
    Ok(profile(spec, &e, s).1)
}

/// Boundary-condition residuals `(|-v'(r) + beta v(r)|, |v'(R) - sigma v(R)|)`
/// of the implemented eigenpair, with the profile scaled to `v(R) = 1`.
pub fn shell_bc_residuals(spec: &ShellSpec, beta: f64) -> Result<(f64, f64)> {
    let e = shell_eigen(spec, beta)?;
    let (v_in, dv_in) = profile(spec, &e, spec.r);
    let (v_out, dv_out) = profile(spec, &e, spec.outer);
    let robin = (-dv_in + beta * v_in).abs() / v_out;
    let steklov = (dv_out - e.sigma * v_out).abs() / v_out;
    Ok((robin, steklov))
}

/// Infimum of `int_{dB_r} w^2 / int_{dB_R} w^2` over harmonic `w` with zero
/// Neumann data on the outer sphere. Attained by constants: `(r/R)^(n-1)`.
pub fn q_shell(spec: &ShellSpec) -> Result<f64> {
    spec.validate()?;
    Ok((spec.r / spec.outer).powi(spec.n as i32 - 1))
}

/// `lim_{beta -> 0} sigma_beta / beta = P(B_r) / P(B_R) = (r/R)^(n-1)`.
pub fn small_beta_slope(spec: &ShellSpec) -> Result<f64> {
    q_shell(spec)
}

/// Relative residual of `1/sigma_beta = 1/sigma_D + 1/(beta q)`, which holds
/// with equality on shells.
pub fn shell_reciprocal_defect(spec: &ShellSpec, beta: f64) -> Result<f64> {
    let inv_sigma = 1.0 / sigma_beta_shell(spec, beta)?;
    let inv_dir = 1.0 / sigma_dirichlet_shell(spec)?;
    let inv_q = 1.0 / (beta * q_shell(spec)?);
    Ok((inv_sigma - inv_dir - inv_q) / inv_sigma)
}

/// The commonly reproduced `n >= 3` constants, which fail the Robin condition.
/// Only for regression tests and documentation; never used by the solvers.
pub mod printed {
    use super::*;

    fn require_higher_dim(spec: &ShellSpec) -> Result<()> {
        spec.validate()?;
        if spec.n < 3 {
            return Err(param("printed variant only differs for n >= 3"));
        }
        Ok(())
    }

    /// `(n-2) / [((n-2)/beta)(R/r)^(n-2) + R((R/r)^(n-2) - 1)]`.
    pub fn sigma(spec: &ShellSpec, beta: f64) -> Result<f64> {
        require_higher_dim(spec)?;
        check_beta(beta)?;
        let k = spec.k();
        let q = spec.ratio();
        Ok(k / ((k / beta) * q.powf(k) + spec.outer * (q.powf(k) - 1.0)))
    }

    /// Profile `r^(2-n) - s^(2-n) + (n-2)/(beta R r^(n-2))`, coefficient `c1 = -1`.
    pub fn eigenfunction(spec: &ShellSpec, beta: f64, s: f64) -> Result<f64> {
        require_higher_dim(spec)?;
        check_beta(beta)?;
        let k = spec.k();
        Ok(spec.r.powf(-k) - s.powf(-k) + k / (beta * spec.outer * spec.r.powf(k)))
    }

    /// Unscaled `|-v'(r) + beta v(r)|` for the printed profile; equals
    /// `(n-2)(1/r^(n-1) - 1/(R r^(n-2)))` independently of `beta`.
    pub fn robin_residual(spec: &ShellSpec, beta: f64) -> Result<f64> {
        let v = eigenfunction(spec, beta, spec.r)?;
        let k = spec.k();
        let dv = k * spec.r.powf(-k - 1.0);
        Ok((-dv + beta * v).abs())
    }

    /// `lim_{beta -> 0} sigma / beta` of the printed formula: `(r/R)^(n-2)`.
    pub fn small_beta_slope(spec: &ShellSpec) -> Result<f64> {
        require_higher_dim(spec)?;
        Ok((spec.r / spec.outer).powf(spec.k()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn a12(n: u32) -> ShellSpec {
        ShellSpec::new(n, 1.0, 2.0).unwrap()
    }

    #[test]
    fn planar_values() {
        let s = a12(2);
        let sigma = sigma_beta_shell(&s, 1.0).unwrap();
        assert_relative_eq!(sigma, 1.0 / (2.0 + 2.0 * 2f64.ln()), max_relative = 1e-15);
        assert!((sigma - 0.29530805).abs() < 1e-8);
        let dir = sigma_dirichlet_shell(&s).unwrap();
        assert!((dir - 0.7213475).abs() < 1e-7);
        let v = shell_eigenfunction(&s, 1.0, 2.0).unwrap();
        assert_relative_eq!(v, 2f64.ln() + 1.0, max_relative = 1e-15);
    }

    #[test]
    fn three_dim_values() {
        let s = a12(3);
        assert_relative_eq!(sigma_beta_shell(&s, 1.0).unwrap(), 1.0 / 6.0, max_relative = 1e-15);
        assert_relative_eq!(sigma_dirichlet_shell(&s).unwrap(), 0.5, max_relative = 1e-15);
        assert_relative_eq!(shell_eigenfunction(&s, 1.0, 1.0).unwrap(), 1.0, max_relative = 1e-15);
        // u(s) = 2 - 1/s
        assert_relative_eq!(shell_eigenfunction(&s, 1.0, 2.0).unwrap(), 1.5, max_relative = 1e-15);
        assert_relative_eq!(shell_eigenfunction_derivative(&s, 1.0, 2.0).unwrap(), 0.25);
    }

    #[test]
    fn residuals_vanish() {
        for n in [2, 3] {
            let (a, b) = shell_bc_residuals(&a12(n), 1.0).unwrap();
            assert!(a < 1e-15 && b < 1e-15, "n={n}: {a} {b}");
        }
    }

    #[test]
    fn small_beta_slope_matches_perimeter_ratio() {
        let s = a12(2);
        let slope = sigma_beta_shell(&s, 1e-9).unwrap() / 1e-9;
        assert_relative_eq!(slope, 0.5, max_relative = 1e-8);
        let s3 = a12(3);
        let slope = sigma_beta_shell(&s3, 1e-9).unwrap() / 1e-9;
        assert_relative_eq!(slope, 0.25, max_relative = 1e-8);
    }

    #[test]
    fn dirichlet_is_large_beta_limit() {
        for n in 2..=5 {
            let s = a12(n);
            let lim = sigma_beta_shell(&s, 1e12).unwrap();
            let dir = sigma_dirichlet_shell(&s).unwrap();
            assert!((lim - dir).abs() / dir < 1e-10, "n={n}");
        }
    }

    #[test]
    fn dirichlet_blows_up_as_shell_thins() {
        let mut prev = 0.0;
        for r in [1.5, 1.9, 1.99, 1.999] {
            let d = sigma_dirichlet_shell(&ShellSpec::new(2, r, 2.0).unwrap()).unwrap();
            assert!(d > prev);
            prev = d;
        }
        assert!(prev > 500.0);
    }

    #[test]
    fn eigenfunction_recovers_dirichlet_trace() {
        let s = a12(2);
        assert!(shell_eigenfunction(&s, 1e12, 1.0).unwrap() < 1e-11);
    }

    #[test]
    fn identity_on_shells() {
        assert!(shell_reciprocal_defect(&a12(2), 1.0).unwrap().abs() < 1e-14);
        assert!(shell_reciprocal_defect(&a12(3), 1.0).unwrap().abs() < 1e-14);
        let s = a12(2);
        let beta = 1e6;
        assert!(shell_reciprocal_defect(&s, beta).unwrap().abs() < 1e-12);
        assert!(1.0 / (beta * q_shell(&s).unwrap()) <= 1e-5 * 2.0);
    }

    #[test]
    fn q_values() {
        assert_eq!(q_shell(&a12(2)).unwrap(), 0.5);
        assert_eq!(q_shell(&a12(3)).unwrap(), 0.25);
        let thin = ShellSpec::new(2, 2.0 - 1e-9, 2.0).unwrap();
        assert!((q_shell(&thin).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn parameter_errors() {
        assert!(ShellSpec::new(1, 1.0, 2.0).is_err());
        assert!(ShellSpec::new(2, 2.0, 2.0).is_err());
        assert!(ShellSpec::new(2, -1.0, 2.0).is_err());
        assert!(sigma_beta_shell(&a12(2), 0.0).is_err());
        assert!(sigma_beta_shell(&a12(2), -1.0).is_err());
        assert!(shell_eigenfunction(&a12(2), 1.0, 2.5).is_err());
        assert!(shell_eigenfunction(&a12(2), 1.0, 0.5).is_err());
    }

    #[test]
    fn printed_variant_fails_robin_condition() {
        let s = a12(3);
        let res = printed::robin_residual(&s, 1.0).unwrap();
        // (n-2)(1/r^(n-1) - 1/(R r^(n-2))) = 1 - 1/2
        assert_relative_eq!(res, 0.5, max_relative = 1e-14);
        assert_relative_eq!(printed::robin_residual(&s, 7.0).unwrap(), 0.5, max_relative = 1e-13);
        assert_relative_eq!(printed::small_beta_slope(&s).unwrap(), 0.5);
        assert!((printed::small_beta_slope(&s).unwrap() - small_beta_slope(&s).unwrap()).abs() > 0.2);
        assert!(printed::sigma(&a12(2), 1.0).is_err());
    }
}
