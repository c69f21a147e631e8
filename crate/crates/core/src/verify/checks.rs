use std::f64::consts::PI;

use serde::Serialize;

use super::{CheckRecord, Provenance, Study};
use crate::assembly::{boundary_l2, h1_distance, interpolate};
use crate::error::{param, Error, Result};
use crate::geometry::{AnnularDomain, BetaSpec, Dumbbell, Outline, RadialOutline};
use crate::mesh::{dumbbell_mesh, polar_mesh};
use crate::radial_oracle::{q_shell, sigma_beta_shell, sigma_dirichlet_shell, ShellSpec};

/// Slack for inequalities that hold exactly in the discrete space.
const SAME_MESH_TOL: f64 = 1e-6;

/// The four upper bounds, all from one mesh: `sigma_beta <= sigma_D`, the
/// constant test function, and the two reciprocal estimates through `mu_1`
/// and `q_beta`. Non-constant weights add the `mu_1` estimate with the
/// beta-weighted mean constraint, the form the splitting argument controls;
/// the unweighted one can fail there.
pub fn check_upper_bounds(study: &Study, beta: &BetaSpec) -> Result<Vec<CheckRecord>> {
    let d = &study.disc;
    let s = d.robin(beta)?.value;
    let sd = study.dirichlet()?.value;
    let mu = study.mu1()?.value;
    let q = study.q_beta(beta)?;
    let m = d.weight_norm(beta)?;
    let p = d.outer_perimeter();
    let prov = || study.provenance(beta);
    let mut records = vec![
        CheckRecord::inequality("upper.sigma_le_dirichlet", s, sd, SAME_MESH_TOL, prov()),
        CheckRecord::inequality("upper.constant_test_function", s, m / p, SAME_MESH_TOL, prov()),
        CheckRecord::inequality("upper.reciprocal_mu1", 1.0 / s, 1.0 / mu + p / m, SAME_MESH_TOL, prov()),
        CheckRecord::inequality(
            "upper.reciprocal_dirichlet_q",
            1.0 / s,
            1.0 / sd + 1.0 / q,
            SAME_MESH_TOL,
            prov(),
        ),
    ];
    if beta.as_constant().is_none() {
        let mw = d.mu1_weighted(beta)?.value;
        records.push(CheckRecord::inequality(
            "upper.reciprocal_mu1_weighted",
            1.0 / s,
            1.0 / mw + p / m,
            SAME_MESH_TOL,
            prov(),
        ));
    }
    Ok(records)
}

/// On shells `1/sigma_beta = 1/sigma_D + 1/(beta q)`; relative defect within 1%.
pub fn shell_identity(study: &Study, beta: f64) -> Result<CheckRecord> {
    let b = BetaSpec::constant(beta)?;
    let s = study.disc.robin(&b)?.value;
    let sd = study.dirichlet()?.value;
    let q = study.q_unit()?.value;
    let target = 1.0 / sd + 1.0 / (beta * q);
    let observed = 1.0 / s;
    Ok(CheckRecord::limit(
        "shell.reciprocal_identity",
        observed,
        target,
        (observed - target) / observed,
        0.01,
        study.provenance(&b),
    ))
}

/// Lower bound for star-shaped radial outlines: `sigma_beta` is at least the
/// shell eigenvalue of `A_{r, R_m}` with weight `inf beta`, divided by the
/// star-shape factor. For a circle the shell value itself is matched to 1%.
pub fn check_lower_bound(study: &Study, domain: &AnnularDomain, beta: &BetaSpec) -> Result<Vec<CheckRecord>> {
    let outline = domain.radial()?;
    let (r_min, _) = domain.radial_extremes()?;
    let factor = domain.starshape_factor()?;
    let shell = ShellSpec::new(2, domain.hole_radius, r_min)?;
    let oracle = sigma_beta_shell(&shell, beta.infimum())?;
    let s = study.disc.robin(beta)?.value;
    let mut out = vec![CheckRecord::inequality(
        "lower.starshaped",
        oracle / factor,
        s,
        SAME_MESH_TOL,
        study.provenance(beta),
    )];
    if outline.is_circle() && beta.as_constant().is_some() {
        out.push(CheckRecord::limit(
            "lower.ball_matches_shell",
            s,
            oracle,
            (s - oracle) / oracle,
            0.01,
            study.provenance(beta),
        ));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub beta: f64,
    pub sigma: f64,
    /// `sigma P_h(Omega0) / (beta P_h(B_r))`, which tends to 1 as `beta -> 0`.
    pub slope_ratio: f64,
    /// `(sigma_D - sigma) / sigma_D`.
    pub dirichlet_gap: f64,
}

fn ascending(xs: &[f64], what: &str) -> Result<()> {
    if xs.is_empty() || xs.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(param(format!("{what} must be non-empty and strictly increasing")));
    }
    Ok(())
}

fn max_ratio(xs: &[f64]) -> f64 {
    xs.windows(2).map(|w| w[1] / w[0]).fold(0.0, f64::max)
}

fn sweep_label(xs: &[f64]) -> String {
    format!("sweep[{:e}..{:e}]", xs[0], xs[xs.len() - 1])
}

/// Constant-weight sweep: monotonicity, the small-`beta` slope and the
/// large-`beta` Dirichlet limit with the rate `1/(beta q)`.
pub fn sweep_beta(study: &Study, betas: &[f64]) -> Result<(Vec<SweepRow>, Vec<CheckRecord>)> {
    ascending(betas, "beta grid")?;
    let d = &study.disc;
    let sd = study.dirichlet()?.value;
    let q = study.q_unit()?.value;
    let ratio = d.outer_perimeter() / d.inner_perimeter();
    let mut rows = Vec::with_capacity(betas.len());
    for &b in betas {
        let sigma = d.robin(&BetaSpec::constant(b)?)?.value;
        rows.push(SweepRow {
            beta: b,
            sigma,
            slope_ratio: sigma * ratio / b,
            dirichlet_gap: (sd - sigma) / sd,
        });
    }
    let prov = |beta: String| Provenance::new(&study.label, beta, d.h());
    let sigmas: Vec<f64> = rows.iter().map(|r| r.sigma).collect();
    let first = &rows[0];
    let last = &rows[rows.len() - 1];
    let rate_tol = (1.1 / (last.beta * q * sd)).max(0.02);
    let mut out = vec![CheckRecord::limit(
        "sweep.small_beta_slope",
        first.slope_ratio,
        1.0,
        first.slope_ratio - 1.0,
        0.05,
        prov(format!("{}", first.beta)),
    )];
    out.push(CheckRecord::limit(
        "sweep.large_beta_dirichlet",
        last.sigma,
        sd,
        last.dirichlet_gap,
        rate_tol,
        prov(format!("{}", last.beta)),
    ));
    if rows.len() > 1 {
        // strictly increasing sigma <=> every ratio of predecessor to successor < 1
        let lhs = sigmas.windows(2).map(|w| w[0] / w[1]).fold(0.0, f64::max);
        let mut rec = CheckRecord::inequality("sweep.monotone", lhs, 1.0, 0.0, prov(sweep_label(betas)));
        if lhs >= 1.0 {
            rec.verdict = super::Verdict::Fail;
        }
        out.push(rec);
    }
    Ok((rows, out))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistanceRow {
    pub beta: f64,
    /// `|u_beta - u_D|` in `H^1(Omega)`.
    pub distance: f64,
    /// `|u_beta|` in `L^2` of the hole boundary.
    pub inner_trace: f64,
}

/// Convergence of the normalized Robin eigenvectors to the Dirichlet one as
/// `beta` grows.
pub fn eigenfunction_convergence(study: &Study, betas: &[f64]) -> Result<(Vec<DistanceRow>, Vec<CheckRecord>)> {
    ascending(betas, "beta grid")?;
    let d = &study.disc;
    let v = &study.dirichlet()?.vector;
    let mut rows = Vec::with_capacity(betas.len());
    for &b in betas {
        let u = d.robin(&BetaSpec::constant(b)?)?.vector;
        rows.push(DistanceRow {
            beta: b,
            distance: h1_distance(&d.stiffness, &d.volume_mass, &u, v)?,
            inner_trace: boundary_l2(&d.inner_mass, &u)?,
        });
    }
    let dist: Vec<f64> = rows.iter().map(|r| r.distance).collect();
    let trace: Vec<f64> = rows.iter().map(|r| r.inner_trace).collect();
    let prov = || Provenance::new(&study.label, sweep_label(betas), d.h());
    let (b0, b1) = (betas[0], betas[betas.len() - 1]);
    let mut out = vec![
        CheckRecord::inequality("h1conv.final_distance", dist[dist.len() - 1], 0.05, 0.0, prov()),
        // trace decays like C/beta; allow a factor 10 over that rate
        CheckRecord::inequality(
            "h1conv.inner_trace_vanishing",
            trace[trace.len() - 1] / trace[0],
            10.0 * b0 / b1,
            0.0,
            prov(),
        ),
    ];
    if rows.len() > 1 {
        out.push(CheckRecord::inequality(
            "h1conv.decreasing",
            max_ratio(&dist),
            1.0,
            0.01,
            prov(),
        ));
        out.push(CheckRecord::inequality(
            "h1conv.inner_trace_decreasing",
            max_ratio(&trace),
            1.0,
            0.01,
            prov(),
        ));
    }
    Ok((rows, out))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DumbbellRow {
    pub eps: f64,
    pub h: f64,
    pub sigma: f64,
    /// `2 pi^2 eps`.
    pub bound: f64,
    /// Discrete quotient of `sin(2 pi x / eps)` on the neck, zero elsewhere.
    pub test_quotient: f64,
}

/// Dumbbells with a thin neck: `sigma_beta <= 2 pi^2 eps`, decreasing in
/// `eps`, and the neck test function reproducing `2 pi^2 eps` within 10%.
/// The neck height `eps^3` is resolved by `neck_layers` element rows.
pub fn dumbbell_check(
    eps_list: &[f64],
    hole_radius: f64,
    neck_layers: usize,
    beta: &BetaSpec,
) -> Result<(Vec<DumbbellRow>, Vec<CheckRecord>)> {
    if eps_list.is_empty() || eps_list.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(param("eps list must be non-empty and strictly decreasing"));
    }
    if neck_layers < 2 {
        return Err(param("at least two element layers across the neck"));
    }
    let mut rows = Vec::new();
    let mut out = Vec::new();
    for &eps in eps_list {
        let geo = Dumbbell::new(eps)?;
        let mesh = dumbbell_mesh(eps, hole_radius, eps.powi(3) / neck_layers as f64)?;
        let study = Study::new(format!("dumbbell(eps={eps})"), mesh)?;
        let d = &study.disc;
        let sigma = d.robin(beta)?.value;
        let (half_len, half_w) = (geo.neck_half_length(), geo.neck_half_width());
        let test = interpolate(&d.mesh, |p| {
            if p[0].abs() < half_len * (1.0 - 1e-12) && p[1].abs() <= half_w * (1.0 + 1e-12) {
                (2.0 * PI * p[0] / eps).sin()
            } else {
                0.0
            }
        });
        let j = d.rayleigh(beta, &test)?;
        let bound = 2.0 * PI * PI * eps;
        let prov = || study.provenance(beta);
        out.push(CheckRecord::inequality(
            "dumbbell.upper_bound",
            sigma,
            bound,
            SAME_MESH_TOL,
            prov(),
        ));
        out.push(CheckRecord::inequality(
            "dumbbell.test_function_admissible",
            sigma,
            j,
            SAME_MESH_TOL,
            prov(),
        ));
        out.push(CheckRecord::limit(
            "dumbbell.test_quotient",
            j,
            bound,
            (j - bound) / bound,
            0.1,
            prov(),
        ));
        rows.push(DumbbellRow {
            eps,
            h: d.h(),
            sigma,
            bound,
            test_quotient: j,
        });
    }
    if rows.len() > 1 {
        let lhs = rows.windows(2).map(|w| w[1].sigma / w[0].sigma).fold(0.0, f64::max);
        let eps_label = format!("dumbbell(eps={:?})", eps_list);
        out.push(CheckRecord::inequality(
            "dumbbell.decreasing_in_eps",
            lhs,
            1.0,
            0.0,
            Provenance::new(eps_label, beta.label(), rows.last().expect("rows").h),
        ));
    }
    Ok((rows, out))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadiusRow {
    pub r: f64,
    pub sigma: f64,
    /// `sigma_beta(A_{r, R_m})`.
    pub shell_sigma: f64,
}

/// Shrinking holes in a fixed outline: `sigma_beta(r)` decreases, stays below
/// the shell value `sigma_beta(A_{r,R_m})` (1% slack for the discretization
/// error, which the circle saturates), and drops below half its first value.
pub fn radius_sweep(
    outline: &RadialOutline,
    label: &str,
    beta: f64,
    r_list: &[f64],
    n_radial: usize,
    n_angular: usize,
) -> Result<(Vec<RadiusRow>, Vec<CheckRecord>)> {
    if r_list.is_empty() || r_list.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(param("radius list must be non-empty and strictly decreasing"));
    }
    let (r_min, _) = outline.extremes();
    let b = BetaSpec::constant(beta)?;
    let mut rows = Vec::new();
    let mut out = Vec::new();
    let mut h = 0.0;
    for &r in r_list {
        if r >= r_min {
            return Err(Error::Geometry(format!("hole radius {r} not below R_m = {r_min}")));
        }
        let domain = AnnularDomain::new(Outline::Radial(outline.clone()), r)?;
        let study = Study::new(format!("{label}(r={r})"), polar_mesh(&domain, n_radial, n_angular)?)?;
        let sigma = study.disc.robin(&b)?.value;
        let shell_sigma = sigma_beta_shell(&ShellSpec::new(2, r, r_min)?, beta)?;
        out.push(CheckRecord::inequality(
            "radius.shell_comparison",
            sigma,
            shell_sigma,
            0.01,
            study.provenance(&b),
        ));
        h = study.disc.h();
        rows.push(RadiusRow { r, sigma, shell_sigma });
    }
    let prov = || Provenance::new(format!("{label}(r={r_list:?})"), b.label(), h);
    if rows.len() > 1 {
        let sig: Vec<f64> = rows.iter().map(|r| r.sigma).collect();
        out.push(CheckRecord::inequality(
            "radius.decreasing",
            max_ratio(&sig),
            1.0,
            0.0,
            prov(),
        ));
        let ratio = sig[sig.len() - 1] / sig[0];
        out.push(CheckRecord::inequality(
            "radius.small_hole_ratio",
            ratio,
            0.5,
            0.0,
            prov(),
        ));
    }
    Ok((rows, out))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub level: usize,
    pub h: f64,
    pub dofs: usize,
    pub sigma: f64,
    pub sigma_err: f64,
    pub sigma_d: f64,
    pub sigma_d_err: f64,
    pub q: f64,
    pub q_err: f64,
    pub mu1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceTable {
    pub beta: f64,
    pub rows: Vec<ConvergenceRow>,
}

/// `log2(e_h / e_{h/2})` for consecutive levels.
pub fn orders(errors: &[f64]) -> Vec<f64> {
    errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect()
}

impl ConvergenceTable {
    pub fn sigma_orders(&self) -> Vec<f64> {
        orders(&self.rows.iter().map(|r| r.sigma_err.abs()).collect::<Vec<_>>())
    }

    pub fn sigma_d_orders(&self) -> Vec<f64> {
        orders(&self.rows.iter().map(|r| r.sigma_d_err.abs()).collect::<Vec<_>>())
    }

    pub fn q_orders(&self) -> Vec<f64> {
        orders(&self.rows.iter().map(|r| r.q_err.abs()).collect::<Vec<_>>())
    }
}

/// Errors below this are round-off; no order is fitted to them.
pub const EXACT_FLOOR: f64 = 1e-10;

fn order_record(name: &str, errors: &[f64], prov: Provenance) -> CheckRecord {
    let worst = errors.iter().copied().fold(0.0, f64::max);
    if worst < EXACT_FLOOR {
        return CheckRecord::inequality(format!("{name}_exact"), worst, EXACT_FLOOR, 0.0, prov);
    }
    let min_order = orders(errors).into_iter().fold(f64::INFINITY, f64::min);
    CheckRecord::inequality(format!("{name}_order"), 1.5, min_order, 0.0, prov)
}

/// Refinement study on the shell `A_{r,R}` against the closed forms. Level
/// `l` uses a polar grid with `base * 2^l` cells in each direction.
pub fn shell_validation(
    r: f64,
    outer: f64,
    levels: usize,
    beta: f64,
    base: (usize, usize),
) -> Result<(ConvergenceTable, Vec<CheckRecord>)> {
    if levels < 2 {
        return Err(param("a convergence study needs at least two levels"));
    }
    let spec = ShellSpec::new(2, r, outer)?;
    let label = format!("A({r},{outer})");
    let exact_s = sigma_beta_shell(&spec, beta)?;
    let exact_d = sigma_dirichlet_shell(&spec)?;
    let exact_q = q_shell(&spec)?;
    let domain = AnnularDomain::shell(r, outer)?;
    let b = BetaSpec::constant(beta)?;
    let mut rows = Vec::with_capacity(levels);
    for level in 0..levels {
        let scale = 1usize << level;
        let study = Study::new(label.clone(), polar_mesh(&domain, base.0 * scale, base.1 * scale)?)?;
        let d = &study.disc;
        let sigma = d.robin(&b)?.value;
        let sigma_d = study.dirichlet()?.value;
        let q = study.q_unit()?.value;
        rows.push(ConvergenceRow {
            level,
            h: d.h(),
            dofs: d.num_dofs(),
            sigma,
            sigma_err: (sigma - exact_s) / exact_s,
            sigma_d,
            sigma_d_err: (sigma_d - exact_d) / exact_d,
            q,
            q_err: (q - exact_q) / exact_q,
            mu1: study.mu1()?.value,
        });
    }
    let table = ConvergenceTable { beta, rows };
    let last = table.rows.last().expect("levels >= 2");
    let prov = || Provenance::new(label.clone(), b.label(), last.h);
    let errs = |f: fn(&ConvergenceRow) -> f64| table.rows.iter().map(|r| f(r).abs()).collect::<Vec<_>>();
    let mu_min = table.rows.iter().map(|r| r.mu1).fold(f64::INFINITY, f64::min);
    let out = vec![
        order_record("convergence.sigma", &errs(|r| r.sigma_err), prov()),
        order_record("convergence.sigma_d", &errs(|r| r.sigma_d_err), prov()),
        order_record("convergence.q", &errs(|r| r.q_err), prov()),
        CheckRecord::inequality(
            "convergence.sigma_error_monotone",
            max_ratio(&errs(|r| r.sigma_err)),
            1.0,
            0.0,
            prov(),
        ),
        CheckRecord::inequality(
            "convergence.sigma_error_finest",
            last.sigma_err.abs(),
            0.0025,
            0.0,
            prov(),
        ),
        CheckRecord::inequality(
            "convergence.sigma_d_error_finest",
            last.sigma_d_err.abs(),
            0.0025,
            0.0,
            prov(),
        ),
        CheckRecord::inequality("convergence.q_error_finest", last.q_err.abs(), 0.005, 0.0, prov()),
        CheckRecord::inequality("convergence.mu1_positive", 0.0, mu_min, 0.0, prov()),
    ];
    Ok((table, out))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shell_study(nr: usize, na: usize) -> Study {
        Study::new(
            "A(1,2)",
            polar_mesh(&AnnularDomain::shell(1.0, 2.0).unwrap(), nr, na).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn upper_bounds_pass_on_coarse_shell() {
        let s = shell_study(6, 48);
        let recs = check_upper_bounds(&s, &BetaSpec::constant(1.0).unwrap()).unwrap();
        assert_eq!(recs.len(), 4);
        assert!(recs.iter().all(|r| r.passed()), "{recs:?}");
    }

    #[test]
    fn unweighted_mu1_estimate_can_fail_for_nonconstant_weight() {
        let s = Study::new(
            "A(0.5,2)",
            polar_mesh(&AnnularDomain::shell(0.5, 2.0).unwrap(), 8, 64).unwrap(),
        )
        .unwrap();
        let beta = BetaSpec::piecewise(vec![0.0, PI], vec![2.0, 4.0]).unwrap();
        let recs = check_upper_bounds(&s, &beta).unwrap();
        let get = |n: &str| recs.iter().find(|r| r.name == n).unwrap();
        assert!(!get("upper.reciprocal_mu1").passed());
        assert!(get("upper.reciprocal_mu1_weighted").passed());
    }

    #[test]
    fn lower_bound_needs_radial_outline() {
        let s = shell_study(4, 32);
        let square = AnnularDomain::new(
            Outline::Polygon(vec![[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]]),
            0.5,
        )
        .unwrap();
        assert!(check_lower_bound(&s, &square, &BetaSpec::Constant(1.0)).is_err());
    }

    #[test]
    fn input_orders_are_validated() {
        let s = shell_study(4, 32);
        assert!(sweep_beta(&s, &[1.0, 0.5]).is_err());
        assert!(dumbbell_check(&[0.1, 0.2], 0.5, 2, &BetaSpec::Constant(1.0)).is_err());
        assert!(radius_sweep(&RadialOutline::circle(2.0), "c", 1.0, &[2.5], 4, 32).is_err());
        assert!(shell_validation(1.0, 2.0, 1, 1.0, (4, 32)).is_err());
    }

    #[test]
    fn order_of_exact_sequence() {
        assert_eq!(orders(&[4e-2, 1e-2]), vec![2.0]);
        let r = order_record("x", &[1e-15, 2e-15], Provenance::new("d", "b", 0.1));
        assert_eq!(r.name, "x_exact");
        assert!(r.passed());
    }
}
