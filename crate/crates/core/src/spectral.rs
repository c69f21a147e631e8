//! Discrete eigenvalue problems on the annulus: the Steklov-Robin and
//! Steklov-Dirichlet eigenvalues, the mixed eigenvalue `mu_1` with zero inner
//! mean, and the harmonic quotient `q_beta`.
//!
//! Every solve reduces the sparse pencil to the few boundary unknowns that
//! carry the right-hand mass (a discrete Dirichlet-to-Neumann operator) and
//! finishes with a dense symmetric-definite eigensolve.

use nalgebra::{DMatrix, DVector};

use crate::assembly::{boundary_mass, stiffness, volume_mass, DofVector, SymSparse, Weight};
use crate::error::{Error, Result};
use crate::geometry::BetaSpec;
pub use crate::linalg::dense_sym_geig;
use crate::linalg::{dense_spd_solve, SchurReduction, SparseCholesky};
use crate::mesh::{BoundaryTag, Mesh};

/// Eigenvalue with its normalized, positively oriented eigenvector.
#[derive(Debug, Clone)]
pub struct SpectralResult {
    pub value: f64,
    pub vector: DofVector,
    /// `|A v - lambda B v| / |A v|` of the pencil that was solved.
    pub residual: f64,
    /// Distance to the next eigenvalue of the reduced pencil.
    pub gap: Option<f64>,
}

fn complement(n: usize, exclude: &[&[usize]]) -> Vec<usize> {
    let mut mask = vec![true; n];
    for set in exclude {
        for &i in *set {
            mask[i] = false;
        }
    }
    (0..n).filter(|&i| mask[i]).collect()
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn check_disjoint(n: usize, a: &[usize], b: &[usize]) -> Result<()> {
    let mut mask = vec![false; n];
    for &i in a {
        if i >= n {
            return Err(Error::Dimension {
                expected: n,
                found: i + 1,
            });
        }
        mask[i] = true;
    }
    for &i in b {
        if i >= n {
            return Err(Error::Dimension {
                expected: n,
                found: i + 1,
            });
        }
        if mask[i] {
            return Err(Error::Constraint(format!("dof {i} lies on both boundaries")));
        }
    }
    Ok(())
}

/// Scales `u` to unit `M`-norm with `1'M u > 0`.
fn normalize(u: &mut [f64], m: &SymSparse) -> Result<()> {
    let nrm = m.quad_form(u)?.max(0.0).sqrt();
    if !(nrm > 0.0) {
        return Err(Error::DivisionDomain("eigenvector has zero boundary trace".into()));
    }
    let mean: f64 = m.mul_vec(u)?.iter().sum();
    let s = if mean < 0.0 { -1.0 } else { 1.0 } / nrm;
    u.iter_mut().for_each(|x| *x *= s);
    Ok(())
}

/// `|A u - lambda B u| / |A u|` restricted to `rows` (all rows when `None`).
fn pencil_residual(a: &SymSparse, b: &SymSparse, lambda: f64, u: &[f64], rows: Option<&[usize]>) -> Result<f64> {
    let au = a.mul_vec(u)?;
    let bu = b.mul_vec(u)?;
    let (mut num, mut den) = (0.0, 0.0);
    let mut acc = |i: usize| {
        num += (au[i] - lambda * bu[i]).powi(2);
        den += au[i] * au[i];
    };
    match rows {
        Some(r) => r.iter().for_each(|&i| acc(i)),
        None => (0..u.len()).for_each(acc),
    }
    if !(den > 0.0) {
        return Err(Error::DivisionDomain("A v vanishes".into()));
    }
    Ok((num / den).sqrt())
}

fn first_pair(s: &DMatrix<f64>, m: &DMatrix<f64>) -> Result<(f64, DVector<f64>, Option<f64>)> {
    let eig = dense_sym_geig(s, m)?;
    let value = *eig
        .values
        .first()
        .ok_or_else(|| Error::Singular("empty boundary".into()))?;
    if !(value > 0.0) {
        return Err(Error::Singular(format!("first eigenvalue {value:e} is not positive")));
    }
    let gap = eig.values.get(1).map(|v| v - value);
    let (value, x) = refine(s, m, value, eig.vectors.column(0).into_owned());
    Ok((value, x, gap))
}

/// One step of shifted inverse iteration, kept only if it lowers the residual.
fn refine(s: &DMatrix<f64>, m: &DMatrix<f64>, value: f64, x: DVector<f64>) -> (f64, DVector<f64>) {
    let res = |lam: f64, v: &DVector<f64>| (s * v - m * v * lam).norm() / (s * v).norm();
    let Some(y) = (s - m * value).lu().solve(&(m * &x)) else {
        return (value, x);
    };
    let ny = (y.transpose() * m * &y)[0].sqrt();
    if !(ny.is_finite() && ny > 0.0) {
        return (value, x);
    }
    let sign = y.dot(&(m * &x)).signum();
    let y = y * (sign / ny);
    let lam = (y.transpose() * s * &y)[0];
    if res(lam, &y) < res(value, &x) {
        (lam, y)
    } else {
        (value, x)
    }
}

/// `sigma_beta`: smallest `sigma` with `(K + B_in) u = sigma M_out u`.
pub fn solve_steklov_robin(
    k: &SymSparse,
    b_in: &SymSparse,
    m_out: &SymSparse,
    outer_dofs: &[usize],
) -> Result<SpectralResult> {
    let n = k.dim();
    let a = k.add(b_in)?;
    let interior = complement(n, &[outer_dofs]);
    let red = SchurReduction::new(&a, outer_dofs, &interior)?;
    let mg = m_out.dense_block(outer_dofs, outer_dofs);
    let (value, x, gap) = first_pair(&red.matrix, &mg)?;
    let mut vector = red.prolong(x.as_slice(), n);
    normalize(&mut vector, m_out)?;
    let residual = pencil_residual(&a, m_out, value, &vector, None)?;
    Ok(SpectralResult {
        value,
        vector,
        residual,
        gap,
    })
}

/// `sigma_D`: the Steklov eigenvalue with homogeneous Dirichlet data on the
/// inner boundary. The returned vector vanishes on `inner_dofs`.
pub fn solve_steklov_dirichlet(
    k: &SymSparse,
    m_out: &SymSparse,
    outer_dofs: &[usize],
    inner_dofs: &[usize],
) -> Result<SpectralResult> {
    let n = k.dim();
    if inner_dofs.is_empty() {
        return Err(Error::Constraint("no inner dofs to constrain".into()));
    }
    check_disjoint(n, outer_dofs, inner_dofs)?;
    let interior = complement(n, &[outer_dofs, inner_dofs]);
    let red = SchurReduction::new(k, outer_dofs, &interior)?;
    let mg = m_out.dense_block(outer_dofs, outer_dofs);
    let (value, x, gap) = first_pair(&red.matrix, &mg)?;
    let mut vector = red.prolong(x.as_slice(), n);
    normalize(&mut vector, m_out)?;
    let free = complement(n, &[inner_dofs]);
    let residual = pencil_residual(k, m_out, value, &vector, Some(&free))?;
    Ok(SpectralResult {
        value,
        vector,
        residual,
        gap,
    })
}

/// `mu_1`: smallest `v'Kv / v'M_out v` over `v` with `c . v = 0`, where `c`
/// is the inner-boundary mass row (`c . v` = discrete integral of `v` over the
/// hole boundary).
///
/// One inner dof `p` (largest `|c_p|`) is eliminated through the constraint,
/// the remaining inner and interior dofs are condensed onto the outer boundary.
pub fn solve_mu1(
    k: &SymSparse,
    m_out: &SymSparse,
    inner_mass_row: &[f64],
    outer_dofs: &[usize],
) -> Result<SpectralResult> {
    let n = k.dim();
    let c = inner_mass_row;
    if c.len() != n {
        return Err(Error::Dimension {
            expected: n,
            found: c.len(),
        });
    }
    let delta: Vec<usize> = (0..n).filter(|&i| c[i] != 0.0).collect();
    if delta.is_empty() {
        return Err(Error::Constraint("constraint row is identically zero".into()));
    }
    check_disjoint(n, outer_dofs, &delta)?;
    let g = outer_dofs.len();
    let keep: Vec<usize> = outer_dofs.iter().chain(&delta).copied().collect();
    let interior = complement(n, &[&keep]);
    let red = SchurReduction::new(k, &keep, &interior)?;
    let s1 = &red.matrix;

    // v_p = sum_j t_j w_j over the other kept unknowns
    let pl = (0..delta.len())
        .max_by(|&i, &j| c[delta[i]].abs().total_cmp(&c[delta[j]].abs()).then(j.cmp(&i)))
        .expect("non-empty");
    let p = g + pl;
    let others: Vec<usize> = (0..keep.len()).filter(|&i| i != p).collect();
    let t: Vec<f64> = others
        .iter()
        .map(|&i| if i < g { 0.0 } else { -c[keep[i]] / c[keep[p]] })
        .collect();
    let m = others.len();
    let mut s2 = DMatrix::zeros(m, m);
    for (a, &ia) in others.iter().enumerate() {
        for (b, &ib) in others.iter().enumerate() {
            s2[(a, b)] = s1[(ia, ib)] + t[a] * s1[(p, ib)] + s1[(ia, p)] * t[b] + s1[(p, p)] * t[a] * t[b];
        }
    }
    let d = m - g;
    let s_gg = s2.view((0, 0), (g, g)).into_owned();
    let s_gd = s2.view((0, g), (g, d)).into_owned();
    let s_dd = s2.view((g, g), (d, d)).into_owned();
    let (s3, ext) = if d == 0 {
        (s_gg, None)
    } else {
        let x = dense_spd_solve(&s_dd, &s_gd.transpose())?;
        let s3 = &s_gg - &s_gd * &x;
        ((&s3 + s3.transpose()) * 0.5, Some(x))
    };
    let mg = m_out.dense_block(outer_dofs, outer_dofs);
    let (value, x, gap) = first_pair(&s3, &mg)?;

    let mut w = DVector::zeros(m);
    w.rows_mut(0, g).copy_from(&x);
    if let Some(e) = ext {
        let wd = -(e * &x);
        w.rows_mut(g, d).copy_from(&wd);
    }
    let mut kept = vec![0.0; keep.len()];
    for (a, &ia) in others.iter().enumerate() {
        kept[ia] = w[a];
    }
    kept[p] = t.iter().zip(w.iter()).map(|(ti, wi)| ti * wi).sum();
    let mut vector = red.prolong(&kept, n);
    normalize(&mut vector, m_out)?;

    // residual with the multiplier direction c projected out
    let kv = k.mul_vec(&vector)?;
    let mv = m_out.mul_vec(&vector)?;
    let mut r: Vec<f64> = kv.iter().zip(&mv).map(|(a, b)| a - value * b).collect();
    let cc: f64 = c.iter().map(|x| x * x).sum();
    let cr: f64 = c.iter().zip(&r).map(|(a, b)| a * b).sum();
    r.iter_mut().zip(c).for_each(|(ri, ci)| *ri -= cr / cc * ci);
    let residual = norm(&r) / norm(&kv);
    Ok(SpectralResult {
        value,
        vector,
        residual,
        gap,
    })
}

/// `q_beta`: smallest `w'B_in w / w'M_out w` over discrete harmonic `w` with
/// natural outer condition, parametrized by the inner trace. The vector has
/// unit `B_in`-norm.
pub fn solve_q_beta(
    k: &SymSparse,
    b_in: &SymSparse,
    m_out: &SymSparse,
    inner_dofs: &[usize],
    outer_dofs: &[usize],
) -> Result<SpectralResult> {
    let n = k.dim();
    check_disjoint(n, outer_dofs, inner_dofs)?;
    let nd = inner_dofs.len();
    if nd == 0 {
        return Err(Error::Constraint("no inner dofs".into()));
    }
    let n_mat = b_in.dense_block(inner_dofs, inner_dofs);
    if n_mat.clone().cholesky().is_none() {
        return Err(Error::Weight("inner weight mass is not positive definite".into()));
    }
    let free = complement(n, &[inner_dofs]);
    let mut free_local = vec![usize::MAX; n];
    for (l, &g) in free.iter().enumerate() {
        free_local[g] = l;
    }
    let chol = SparseCholesky::factor(k, &free)?;
    let ext = harmonic_extension_matrix(k, &chol, inner_dofs, &free_local, free.len());
    let gamma: Vec<usize> = outer_dofs.iter().map(|&g| free_local[g]).collect();
    let e = DMatrix::from_fn(gamma.len(), nd, |i, j| ext[(gamma[i], j)]);
    let mg = m_out.dense_block(outer_dofs, outer_dofs);
    let d_mat = e.transpose() * &mg * &e;
    let d_mat = (&d_mat + d_mat.transpose()) * 0.5;
    let eig = dense_sym_geig(&d_mat, &n_mat)?;
    let lmax = *eig.values.last().expect("non-empty");
    if !(lmax > 0.0) {
        return Err(Error::Singular(
            "harmonic quotient pencil has no positive eigenvalue".into(),
        ));
    }
    let x = eig.vectors.column(nd - 1).into_owned();
    let gap = (nd >= 2 && eig.values[nd - 2] > 0.0).then(|| 1.0 / eig.values[nd - 2] - 1.0 / lmax);
    let dx = &d_mat * &x;
    let residual = (&dx - &n_mat * &x * lmax).norm() / dx.norm();

    let mut vector = vec![0.0; n];
    for (j, &g) in inner_dofs.iter().enumerate() {
        vector[g] = x[j];
    }
    let wf = &ext * &x;
    for (l, &g) in free.iter().enumerate() {
        vector[g] = wf[l];
    }
    if b_in.mul_vec(&vector)?.iter().sum::<f64>() < 0.0 {
        vector.iter_mut().for_each(|v| *v = -*v);
    }
    Ok(SpectralResult {
        value: 1.0 / lmax,
        vector,
        residual,
        gap,
    })
}

/// Dense `-K_FF^{-1} K_F,inner` (rows in the local order of the free dofs).
fn harmonic_extension_matrix(
    k: &SymSparse,
    chol: &SparseCholesky,
    inner_dofs: &[usize],
    free_local: &[usize],
    nf: usize,
) -> DMatrix<f64> {
    let mut out = DMatrix::zeros(nf, inner_dofs.len());
    let mut rhs = vec![0.0; nf];
    for (j, &g) in inner_dofs.iter().enumerate() {
        rhs.iter_mut().for_each(|x| *x = 0.0);
        for (col, v) in k.row(g) {
            if free_local[col] != usize::MAX {
                rhs[free_local[col]] = -v;
            }
        }
        chol.solve_in_place(&mut rhs);
        out.column_mut(j).copy_from_slice(&rhs);
    }
    out
}

/// Splits `u = v + h` with `h = u` on the inner dofs and discrete harmonic
/// elsewhere (natural outer condition), so `v` vanishes on the inner dofs and
/// `v'Kh = 0`.
pub fn harmonic_split(k: &SymSparse, u: &[f64], inner_dofs: &[usize]) -> Result<(DofVector, DofVector)> {
    let n = k.dim();
    if u.len() != n {
        return Err(Error::Dimension {
            expected: n,
            found: u.len(),
        });
    }
    let free = complement(n, &[inner_dofs]);
    let mut trace = vec![0.0; n];
    for &i in inner_dofs {
        trace[i] = u[i];
    }
    let kt = k.mul_vec(&trace)?;
    let chol = SparseCholesky::factor(k, &free)?;
    let mut rhs: Vec<f64> = free.iter().map(|&i| -kt[i]).collect();
    chol.solve_in_place(&mut rhs);
    let mut h = trace;
    for (l, &g) in free.iter().enumerate() {
        h[g] = rhs[l];
    }
    let v = u.iter().zip(&h).map(|(a, b)| a - b).collect();
    Ok((v, h))
}

/// Inverse iteration on the full sparse pencil `A u = lambda M u` (A SPD),
/// started from the constant vector. Returns the converged Rayleigh quotient
/// and its `M`-normalized vector.
pub fn inverse_iteration(a: &SymSparse, m: &SymSparse, tol: f64, max_iter: usize) -> Result<(f64, DofVector)> {
    let n = a.dim();
    let all: Vec<usize> = (0..n).collect();
    let chol = SparseCholesky::factor(a, &all)?;
    let mut x = vec![1.0; n];
    normalize(&mut x, m)?;
    let mut lambda = a.quad_form(&x)?;
    for _ in 0..max_iter {
        let mut y = m.mul_vec(&x)?;
        chol.solve_in_place(&mut y);
        normalize(&mut y, m)?;
        let next = a.quad_form(&y)?;
        x = y;
        let done = (next - lambda).abs() <= tol * next.abs();
        lambda = next;
        if done {
            return Ok((lambda, x));
        }
    }
    Err(Error::Singular(format!(
        "inverse iteration did not converge in {max_iter} steps"
    )))
}

/// Assembled operators of one mesh.
#[derive(Debug, Clone)]
pub struct Discretization {
    pub mesh: Mesh,
    pub stiffness: SymSparse,
    pub outer_mass: SymSparse,
    /// Unit-weight inner boundary mass.
    pub inner_mass: SymSparse,
    pub volume_mass: SymSparse,
    pub outer_dofs: Vec<usize>,
    pub inner_dofs: Vec<usize>,
}

impl Discretization {
    pub fn new(mesh: Mesh) -> Result<Self> {
        let stiffness = stiffness(&mesh)?;
        let outer_mass = boundary_mass(&mesh, BoundaryTag::Outer, Weight::Unit)?;
        let inner_mass = boundary_mass(&mesh, BoundaryTag::Inner, Weight::Unit)?;
        let volume_mass = volume_mass(&mesh)?;
        let outer_dofs = mesh.boundary_dofs(BoundaryTag::Outer);
        let inner_dofs = mesh.boundary_dofs(BoundaryTag::Inner);
        Ok(Discretization {
            mesh,
            stiffness,
            outer_mass,
            inner_mass,
            volume_mass,
            outer_dofs,
            inner_dofs,
        })
    }

    pub fn h(&self) -> f64 {
        self.mesh.h()
    }

    pub fn num_dofs(&self) -> usize {
        self.stiffness.dim()
    }

    /// `B_in` for the weight `beta`; constant weights scale the unit mass.
    pub fn robin_mass(&self, beta: &BetaSpec) -> Result<SymSparse> {
        beta.validate()?;
        match beta.as_constant() {
            Some(c) => Ok(self.inner_mass.scaled(c)),
            None => boundary_mass(&self.mesh, BoundaryTag::Inner, Weight::Beta(beta)),
        }
    }

    /// `P_h(Omega0) = 1' M_out 1`.
    pub fn outer_perimeter(&self) -> f64 {
        total(&self.outer_mass)
    }

    /// `P_h(B_r) = 1' M_in 1`.
    pub fn inner_perimeter(&self) -> f64 {
        total(&self.inner_mass)
    }

    /// `m_h = 1' B_in 1`.
    pub fn weight_norm(&self, beta: &BetaSpec) -> Result<f64> {
        Ok(total(&self.robin_mass(beta)?))
    }

    /// `c = M_in 1`, so `c . v` integrates `v` over the hole boundary.
    pub fn inner_mass_row(&self) -> DofVector {
        let ones = vec![1.0; self.num_dofs()];
        self.inner_mass.mul_vec(&ones).expect("matching length")
    }

    pub fn robin(&self, beta: &BetaSpec) -> Result<SpectralResult> {
        let b = self.robin_mass(beta)?;
        solve_steklov_robin(&self.stiffness, &b, &self.outer_mass, &self.outer_dofs)
    }

    pub fn dirichlet(&self) -> Result<SpectralResult> {
        solve_steklov_dirichlet(&self.stiffness, &self.outer_mass, &self.outer_dofs, &self.inner_dofs)
    }

    pub fn mu1(&self) -> Result<SpectralResult> {
        solve_mu1(
            &self.stiffness,
            &self.outer_mass,
            &self.inner_mass_row(),
            &self.outer_dofs,
        )
    }

    /// `mu_1` with the weighted constraint `int beta v = 0` on the hole
    /// boundary; equals [`Discretization::mu1`] for constant weights.
    pub fn mu1_weighted(&self, beta: &BetaSpec) -> Result<SpectralResult> {
        let c = self.robin_mass(beta)?.mul_vec(&vec![1.0; self.num_dofs()])?;
        solve_mu1(&self.stiffness, &self.outer_mass, &c, &self.outer_dofs)
    }

    pub fn q_beta(&self, beta: &BetaSpec) -> Result<SpectralResult> {
        let b = self.robin_mass(beta)?;
        solve_q_beta(
            &self.stiffness,
            &b,
            &self.outer_mass,
            &self.inner_dofs,
            &self.outer_dofs,
        )
    }

    /// Discrete Rayleigh quotient of `v` for the weight `beta`.
    pub fn rayleigh(&self, beta: &BetaSpec, v: &[f64]) -> Result<f64> {
        crate::assembly::rayleigh(&self.stiffness, &self.robin_mass(beta)?, &self.outer_mass, v)
    }
}

fn total(m: &SymSparse) -> f64 {
    (0..m.dim()).map(|i| m.row(i).map(|(_, v)| v).sum::<f64>()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{AnnularDomain, Outline, RadialOutline};
    use crate::mesh::polar_mesh;
    use crate::radial_oracle::{q_shell, sigma_beta_shell, sigma_dirichlet_shell, ShellSpec};

    fn shell(nr: usize, na: usize) -> Discretization {
        Discretization::new(polar_mesh(&AnnularDomain::shell(1.0, 2.0).unwrap(), nr, na).unwrap()).unwrap()
    }

    fn beta(b: f64) -> BetaSpec {
        BetaSpec::constant(b).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn robin_close_to_oracle_and_minimal() {
        let d = shell(8, 64);
        let r = d.robin(&beta(1.0)).unwrap();
        let exact = sigma_beta_shell(&ShellSpec::new(2, 1.0, 2.0).unwrap(), 1.0).unwrap();
        assert!(rel(r.value, exact) < 0.02, "{}", r.value);
        assert!(r.value >= exact);
        assert!(r.residual < 1e-10, "{}", r.residual);
        assert!(r.gap.unwrap() > 0.0);
        let q = d.rayleigh(&beta(1.0), &r.vector).unwrap();
        assert!(rel(q, r.value) < 1e-12);
        assert!(d.outer_dofs.iter().all(|&i| r.vector[i] > 0.0));
        let ones = vec![1.0; d.num_dofs()];
        assert!(d.rayleigh(&beta(1.0), &ones).unwrap() > r.value);
    }

    #[test]
    fn dirichlet_dominates_robin() {
        let d = shell(8, 64);
        let sd = d.dirichlet().unwrap();
        assert!(d.inner_dofs.iter().all(|&i| sd.vector[i] == 0.0));
        assert!(
            rel(
                sd.value,
                sigma_dirichlet_shell(&ShellSpec::new(2, 1.0, 2.0).unwrap()).unwrap()
            ) < 0.02
        );
        for b in [0.5, 5.0, 1e4] {
            assert!(d.robin(&beta(b)).unwrap().value <= sd.value);
        }
        assert!(sd.residual < 1e-10, "{}", sd.residual);
    }

    #[test]
    fn mu1_constraint_holds() {
        let d = shell(6, 48);
        let m = d.mu1().unwrap();
        assert!(m.value > 0.0);
        let c = d.inner_mass_row();
        let cv: f64 = c.iter().zip(&m.vector).map(|(a, b)| a * b).sum();
        assert!(cv.abs() <= 1e-12 * norm(&c) * norm(&m.vector), "{cv}");
        assert!(m.residual < 1e-10, "{}", m.residual);
        assert!(matches!(
            solve_mu1(&d.stiffness, &d.outer_mass, &vec![0.0; d.num_dofs()], &d.outer_dofs),
            Err(Error::Constraint(_))
        ));
    }

    #[test]
    fn q_scales_with_constant_weight() {
        let d = shell(8, 64);
        let q1 = d.q_beta(&beta(1.0)).unwrap();
        let q3 = d.q_beta(&beta(3.0)).unwrap();
        assert!(rel(q3.value, 3.0 * q1.value) < 1e-12);
        assert!(rel(q1.value, q_shell(&ShellSpec::new(2, 1.0, 2.0).unwrap()).unwrap()) < 0.02);
        assert!(q1.residual < 1e-10);
    }

    #[test]
    fn split_is_orthogonal() {
        let d = shell(6, 48);
        let u = d.robin(&beta(1.0)).unwrap().vector;
        let (v, h) = harmonic_split(&d.stiffness, &u, &d.inner_dofs).unwrap();
        let k = &d.stiffness;
        let total = k.quad_form(&u).unwrap();
        assert!(k.bilinear(&v, &h).unwrap().abs() <= 1e-12 * total);
        assert!(rel(k.quad_form(&v).unwrap() + k.quad_form(&h).unwrap(), total) < 1e-12);
        assert!(d.inner_dofs.iter().all(|&i| v[i] == 0.0));
        let ones = vec![1.0; d.num_dofs()];
        let (v1, h1) = harmonic_split(k, &ones, &d.inner_dofs).unwrap();
        assert!(v1.iter().all(|x| x.abs() < 1e-12));
        assert!(h1.iter().all(|x| (x - 1.0).abs() < 1e-12));
    }

    #[test]
    fn schur_and_inverse_iteration_agree() {
        let o = RadialOutline::new(1.5, vec![0.0, 0.3], vec![]).unwrap();
        let dom = AnnularDomain::new(Outline::Radial(o), 0.5).unwrap();
        let d = Discretization::new(polar_mesh(&dom, 5, 32).unwrap()).unwrap();
        let b = d.robin_mass(&beta(2.0)).unwrap();
        let s = solve_steklov_robin(&d.stiffness, &b, &d.outer_mass, &d.outer_dofs).unwrap();
        let a = d.stiffness.add(&b).unwrap();
        let (lam, _) = inverse_iteration(&a, &d.outer_mass, 1e-14, 500).unwrap();
        assert!(rel(lam, s.value) < 1e-8);
    }
}
