//! Numerical certification of the eigenvalue inequalities and limits.
//!
//! Each check produces a [`CheckRecord`] with both sides of the relation, the
//! margin and the tolerance; a [`Report`] collects them in a deterministic
//! order and writes CSV and JSON.

mod checks;
mod suite;

use std::cell::OnceCell;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

pub use checks::{
    check_lower_bound, check_upper_bounds, dumbbell_check, eigenfunction_convergence, orders, radius_sweep,
    shell_identity, shell_validation, sweep_beta, ConvergenceRow, ConvergenceTable, DistanceRow, DumbbellRow,
    RadiusRow, SweepRow, EXACT_FLOOR,
};
pub use suite::{default_suite, fixture, SuiteOutput, FIXTURES};

use crate::error::Result;
use crate::geometry::BetaSpec;
use crate::mesh::Mesh;
use crate::spectral::{Discretization, SpectralResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckKind {
    /// `lhs <= rhs (1 + tol)`, margin `rhs - lhs`.
    Inequality,
    /// `|margin| <= tol`, margin the residual.
    Limit,
}

/// Where a check was evaluated.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    pub domain: String,
    pub beta: String,
    pub h: f64,
}

impl Provenance {
    pub fn new(domain: impl Into<String>, beta: impl Into<String>, h: f64) -> Self {
        Provenance {
            domain: domain.into(),
            beta: beta.into(),
            h,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub kind: CheckKind,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub tolerance: f64,
    pub verdict: Verdict,
    #[serde(flatten)]
    pub provenance: Provenance,
}

impl CheckRecord {
    pub fn inequality(name: impl Into<String>, lhs: f64, rhs: f64, tolerance: f64, provenance: Provenance) -> Self {
        let ok = lhs <= rhs + tolerance * rhs.abs();
        CheckRecord {
            name: name.into(),
            kind: CheckKind::Inequality,
            lhs,
            rhs,
            margin: rhs - lhs,
            tolerance,
            verdict: if ok { Verdict::Pass } else { Verdict::Fail },
            provenance,
        }
    }

    /// `observed` should approach `target`; `residual` is the measured defect.
    pub fn limit(
        name: impl Into<String>,
        observed: f64,
        target: f64,
        residual: f64,
        tolerance: f64,
        provenance: Provenance,
    ) -> Self {
        let ok = residual.abs() <= tolerance;
        CheckRecord {
            name: name.into(),
            kind: CheckKind::Limit,
            lhs: observed,
            rhs: target,
            margin: residual,
            tolerance,
            verdict: if ok { Verdict::Pass } else { Verdict::Fail },
            provenance,
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

/// Ordered collection of check records.
#[derive(Debug, Clone, Default, Serialize)]
pub struct Report {
    pub records: Vec<CheckRecord>,
}

#[derive(Serialize)]
struct CsvRow<'a> {
    check: &'a str,
    domain: &'a str,
    beta: &'a str,
    h: String,
    lhs: String,
    rhs: String,
    margin: String,
    tol: String,
    verdict: Verdict,
}

fn num(x: f64) -> String {
    format!("{x:.10e}")
}

impl Report {
    pub fn new(mut records: Vec<CheckRecord>) -> Self {
        records.sort_by(|a, b| {
            (&a.name, &a.provenance.domain, &a.provenance.beta)
                .cmp(&(&b.name, &b.provenance.domain, &b.provenance.beta))
                .then(a.provenance.h.total_cmp(&b.provenance.h))
        });
        Report { records }
    }

    pub fn failures(&self) -> usize {
        self.records.iter().filter(|r| !r.passed()).count()
    }

    pub fn write_csv(&self, out: impl Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for r in &self.records {
            w.serialize(CsvRow {
                check: &r.name,
                domain: &r.provenance.domain,
                beta: &r.provenance.beta,
                h: num(r.provenance.h),
                lhs: num(r.lhs),
                rhs: num(r.rhs),
                margin: num(r.margin),
                tol: num(r.tolerance),
                verdict: r.verdict,
            })?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Writes `<stem>.csv` and `<stem>.json` into `dir`.
    pub fn save(&self, dir: &Path, stem: &str) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join(format!("{stem}.csv")), self.to_csv_string()?)?;
        std::fs::write(dir.join(format!("{stem}.json")), self.to_json())?;
        Ok(())
    }
}

/// A discretized domain with the weight-independent eigenvalues cached.
#[derive(Debug)]
pub struct Study {
    pub label: String,
    pub disc: Discretization,
    dirichlet: OnceCell<SpectralResult>,
    mu1: OnceCell<SpectralResult>,
    q_unit: OnceCell<SpectralResult>,
}

impl Study {
    pub fn new(label: impl Into<String>, mesh: Mesh) -> Result<Self> {
        Ok(Study {
            label: label.into(),
            disc: Discretization::new(mesh)?,
            dirichlet: OnceCell::new(),
            mu1: OnceCell::new(),
            q_unit: OnceCell::new(),
        })
    }

    fn cached(cell: &OnceCell<SpectralResult>, f: impl FnOnce() -> Result<SpectralResult>) -> Result<&SpectralResult> {
        if cell.get().is_none() {
            let _ = cell.set(f()?);
        }
        Ok(cell.get().expect("just set"))
    }

    pub fn dirichlet(&self) -> Result<&SpectralResult> {
        Self::cached(&self.dirichlet, || self.disc.dirichlet())
    }

    pub fn mu1(&self) -> Result<&SpectralResult> {
        Self::cached(&self.mu1, || self.disc.mu1())
    }

    /// `q(Omega)`, the unit-weight harmonic quotient.
    pub fn q_unit(&self) -> Result<&SpectralResult> {
        Self::cached(&self.q_unit, || self.disc.q_beta(&BetaSpec::Constant(1.0)))
    }

    /// `q_beta`; constant weights reuse the unit solve.
    pub fn q_beta(&self, beta: &BetaSpec) -> Result<f64> {
        match beta.as_constant() {
            Some(c) => Ok(c * self.q_unit()?.value),
            None => Ok(self.disc.q_beta(beta)?.value),
        }
    }

    pub fn provenance(&self, beta: &BetaSpec) -> Provenance {
        Provenance::new(&self.label, beta.label(), self.disc.h())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prov() -> Provenance {
        Provenance::new("d", "1", 0.1)
    }

    #[test]
    fn verdict_rules() {
        assert!(CheckRecord::inequality("a", 1.0, 1.0, 0.0, prov()).passed());
        assert!(CheckRecord::inequality("a", 1.0 + 1e-7, 1.0, 1e-6, prov()).passed());
        assert!(!CheckRecord::inequality("a", 1.1, 1.0, 1e-6, prov()).passed());
        let l = CheckRecord::limit("b", 0.98, 1.0, -0.02, 0.05, prov());
        assert!(l.passed());
        assert_eq!(l.margin, -0.02);
        assert!(!CheckRecord::limit("b", 0.9, 1.0, -0.1, 0.05, prov()).passed());
    }

    #[test]
    fn csv_is_sorted_with_fixed_columns() {
        let r = Report::new(vec![
            CheckRecord::inequality("z", 1.0, 2.0, 0.0, prov()),
            CheckRecord::inequality("a", 3.0, 2.0, 0.0, prov()),
        ]);
        let csv = r.to_csv_string().unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "check,domain,beta,h,lhs,rhs,margin,tol,verdict");
        assert!(lines.next().unwrap().starts_with("a,d,1,"));
        assert!(lines.next().unwrap().ends_with(",pass"));
        assert_eq!(r.failures(), 1);
        let json: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(json["records"][0]["kind"], "inequality");
    }
}
