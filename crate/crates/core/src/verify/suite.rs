use super::checks::{
    check_lower_bound, check_upper_bounds, dumbbell_check, eigenfunction_convergence, radius_sweep, shell_identity,
    shell_validation, sweep_beta, ConvergenceTable, DistanceRow, DumbbellRow, RadiusRow, SweepRow,
};
use super::{Report, Study};
use crate::error::{Error, Result};
use crate::geometry::{BetaSpec, DomainConfig, Outline};
use crate::mesh::{build_mesh, MeshParams};

/// Domain configurations shipped with the crate.
pub const FIXTURES: &[(&str, &str)] = &[
    ("shell12.json", include_str!("../../fixtures/shell12.json")),
    ("circle2_r05.json", include_str!("../../fixtures/circle2_r05.json")),
    ("ellipse.json", include_str!("../../fixtures/ellipse.json")),
    (
        "ellipse_piecewise.json",
        include_str!("../../fixtures/ellipse_piecewise.json"),
    ),
    ("dumbbell.json", include_str!("../../fixtures/dumbbell.json")),
];

pub fn fixture(name: &str) -> Result<DomainConfig> {
    let text = FIXTURES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, t)| *t)
        .ok_or_else(|| Error::Config(format!("unknown fixture '{name}'")))?;
    DomainConfig::from_json(text)
}

/// Report plus the tables behind the curve checks.
#[derive(Debug, Clone)]
pub struct SuiteOutput {
    pub report: Report,
    pub sweeps: Vec<(String, Vec<SweepRow>)>,
    pub distances: Vec<(String, Vec<DistanceRow>)>,
    pub radius: Vec<(String, Vec<RadiusRow>)>,
    pub dumbbell: Vec<DumbbellRow>,
    pub convergence: ConvergenceTable,
}

const SHELL_MESH: MeshParams = MeshParams {
    n_radial: 20,
    n_angular: 256,
    neck_layers: 2,
    refine: 0,
};
const MESH: MeshParams = MeshParams {
    n_radial: 16,
    n_angular: 128,
    neck_layers: 2,
    refine: 0,
};

fn study(name: &str, label: &str, params: &MeshParams) -> Result<(Study, crate::geometry::AnnularDomain, BetaSpec)> {
    let (domain, beta) = fixture(name)?.build()?;
    let s = Study::new(label, build_mesh(&domain, params)?)?;
    Ok((s, domain, beta))
}

fn geometric(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.log10(), hi.log10());
    (0..n)
        .map(|i| 10f64.powf(a + (b - a) * i as f64 / (n - 1) as f64))
        .collect()
}

/// The default certification suite over the shipped fixtures.
pub fn default_suite() -> Result<SuiteOutput> {
    let mut records = Vec::new();
    let mut sweeps = Vec::new();
    let mut distances = Vec::new();
    let mut radius = Vec::new();
    let h1_betas = [1.0, 10.0, 100.0, 1e3, 1e4];

    let (shell, shell_domain, beta) = study("shell12.json", "A(1,2)", &SHELL_MESH)?;
    for b in [0.5, 1.0, 5.0, 1e3] {
        records.extend(check_upper_bounds(&shell, &BetaSpec::constant(b)?)?);
    }
    for b in [0.5, 1.0, 5.0] {
        records.push(shell_identity(&shell, b)?);
    }
    records.extend(check_lower_bound(&shell, &shell_domain, &beta)?);
    let (rows, recs) = sweep_beta(&shell, &geometric(1e-4, 1e4, 9))?;
    records.extend(recs);
    sweeps.push((shell.label.clone(), rows));
    let (rows, recs) = eigenfunction_convergence(&shell, &h1_betas)?;
    records.extend(recs);
    distances.push((shell.label.clone(), rows));

    let (circle, circle_domain, beta) = study("circle2_r05.json", "A(0.5,2)", &MESH)?;
    records.extend(check_upper_bounds(&circle, &beta)?);
    records.extend(check_lower_bound(&circle, &circle_domain, &beta)?);

    let (ellipse, ellipse_domain, beta) = study("ellipse.json", "ellipse(r=0.5)", &MESH)?;
    for b in [BetaSpec::constant(0.5)?, beta.clone()] {
        records.extend(check_upper_bounds(&ellipse, &b)?);
        records.extend(check_lower_bound(&ellipse, &ellipse_domain, &b)?);
    }
    let (piecewise_domain, piecewise) = fixture("ellipse_piecewise.json")?.build()?;
    records.extend(check_upper_bounds(&ellipse, &piecewise)?);
    records.extend(check_lower_bound(&ellipse, &piecewise_domain, &piecewise)?);
    let (rows, recs) = sweep_beta(&ellipse, &geometric(1e-3, 1e4, 8))?;
    records.extend(recs);
    sweeps.push((ellipse.label.clone(), rows));
    let (rows, recs) = eigenfunction_convergence(&ellipse, &h1_betas)?;
    records.extend(recs);
    distances.push((ellipse.label.clone(), rows));

    let r_list = [1.0, 0.5, 0.25, 0.1];
    for (label, domain) in [("circle(R=2)", &circle_domain), ("ellipse", &ellipse_domain)] {
        let (rows, recs) = radius_sweep(domain.radial()?, label, 1.0, &r_list, MESH.n_radial, MESH.n_angular)?;
        records.extend(recs);
        radius.push((label.to_string(), rows));
    }

    let (dumbbell_domain, beta) = fixture("dumbbell.json")?.build()?;
    let Outline::Dumbbell(d) = dumbbell_domain.outline else {
        return Err(Error::Config("dumbbell fixture has a different outline".into()));
    };
    let (dumbbell, recs) = dumbbell_check(
        &[d.eps, d.eps / 2.0],
        dumbbell_domain.hole_radius,
        MESH.neck_layers,
        &beta,
    )?;
    records.extend(recs);

    let (convergence, recs) = shell_validation(1.0, 2.0, 3, 1.0, (5, 64))?;
    records.extend(recs);

    Ok(SuiteOutput {
        report: Report::new(records),
        sweeps,
        distances,
        radius,
        dumbbell,
        convergence,
    })
}
