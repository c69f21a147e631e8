//! Linear algebra kernels: an envelope (skyline) Cholesky factorization with
//! reverse Cuthill-McKee ordering for the sparse SPD blocks, Schur-complement
//! reduction onto a set of kept unknowns, and the dense symmetric-definite
//! generalized eigenproblem.

use std::collections::VecDeque;

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::sparse::SymSparse;

/// Cholesky factor `P A P' = L L'` of a principal submatrix `A[dofs, dofs]`,
/// stored row-wise from the first structural nonzero of each row.
#[derive(Debug, Clone)]
pub struct SparseCholesky {
    /// `perm[new] = local`
    perm: Vec<usize>,
    first: Vec<usize>,
    start: Vec<usize>,
    data: Vec<f64>,
}

impl SparseCholesky {
    /// Factors `a[dofs, dofs]`; the solve operates in the order of `dofs`.
    pub fn factor(a: &SymSparse, dofs: &[usize]) -> Result<Self> {
        let n = dofs.len();
        let mut local = vec![usize::MAX; a.dim()];
        for (l, &g) in dofs.iter().enumerate() {
            local[g] = l;
        }
        let adjacency: Vec<Vec<usize>> = dofs
            .iter()
            .map(|&g| {
                a.row(g)
                    .filter(|&(j, v)| j != g && v != 0.0 && local[j] != usize::MAX)
                    .map(|(j, _)| local[j])
                    .collect()
            })
            .collect();
        let perm = reverse_cuthill_mckee(&adjacency);
        let mut inv = vec![0usize; n];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        let mut first: Vec<usize> = (0..n).collect();
        for (old, nbrs) in adjacency.iter().enumerate() {
            let i = inv[old];
            for &o in nbrs {
                let j = inv[o];
                if j < i {
                    first[i] = first[i].min(j);
                }
            }
        }
        let mut start = vec![0usize; n + 1];
        for i in 0..n {
            start[i + 1] = start[i] + (i - first[i] + 1);
        }
        let mut data = vec![0.0; start[n]];
        for (old, &g) in dofs.iter().enumerate() {
            let i = inv[old];
            for (j, v) in a.row(g) {
                if local[j] == usize::MAX {
                    continue;
                }
                let jj = inv[local[j]];
                if jj <= i {
                    data[start[i] + jj - first[i]] += v;
                }
            }
        }
        for i in 0..n {
            let (done, row_i) = data.split_at_mut(start[i]);
            let fi = first[i];
            let diag_in = row_i[i - fi];
            for j in fi..i {
                let fj = first[j];
                let k0 = fi.max(fj);
                let row_j = &done[start[j]..start[j + 1]];
                let dot: f64 = row_i[k0 - fi..j - fi]
                    .iter()
                    .zip(&row_j[k0 - fj..j - fj])
                    .map(|(x, y)| x * y)
                    .sum();
                let ljj = row_j[j - fj];
                row_i[j - fi] = (row_i[j - fi] - dot) / ljj;
            }
            let sq: f64 = row_i[..i - fi].iter().map(|x| x * x).sum();
            let d = row_i[i - fi] - sq;
            if !(d > 1e-14 * diag_in.abs()) || !d.is_finite() {
                return Err(Error::Singular(format!(
                    "pivot {d:e} at position {i} of {n} in sparse Cholesky"
                )));
            }
            row_i[i - fi] = d.sqrt();
        }
        Ok(SparseCholesky {
            perm,
            first,
            start,
            data,
        })
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    /// Number of stored factor entries.
    pub fn envelope_size(&self) -> usize {
        self.data.len()
    }

    /// Solves `A x = b` in place (local ordering of the factored dofs).
    pub fn solve_in_place(&self, b: &mut [f64]) {
        let n = self.dim();
        debug_assert_eq!(b.len(), n);
        let mut y: Vec<f64> = self.perm.iter().map(|&old| b[old]).collect();
        for i in 0..n {
            let fi = self.first[i];
            let row = &self.data[self.start[i]..self.start[i + 1]];
            let dot: f64 = row[..i - fi].iter().zip(&y[fi..i]).map(|(l, v)| l * v).sum();
            y[i] = (y[i] - dot) / row[i - fi];
        }
        for i in (0..n).rev() {
            let fi = self.first[i];
            let row = &self.data[self.start[i]..self.start[i + 1]];
            y[i] /= row[i - fi];
            let xi = y[i];
            for (k, l) in row[..i - fi].iter().enumerate() {
                y[fi + k] -= l * xi;
            }
        }
        for (new, &old) in self.perm.iter().enumerate() {
            b[old] = y[new];
        }
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let mut x = b.to_vec();
        self.solve_in_place(&mut x);
        x
    }
}

/// Reverse Cuthill-McKee ordering, component by component, each started from
/// a pseudo-peripheral node. Returns `perm[new] = old`.
pub fn reverse_cuthill_mckee(adjacency: &[Vec<usize>]) -> Vec<usize> {
    let n = adjacency.len();
    let degree: Vec<usize> = adjacency.iter().map(Vec::len).collect();
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut by_degree: Vec<usize> = (0..n).collect();
    by_degree.sort_by_key(|&i| (degree[i], i));
    for &seed in &by_degree {
        if visited[seed] {
            continue;
        }
        let root = pseudo_peripheral(adjacency, &degree, seed);
        let mut queue = VecDeque::from([root]);
        visited[root] = true;
        while let Some(v) = queue.pop_front() {
            order.push(v);
            let mut nbrs: Vec<usize> = adjacency[v].iter().copied().filter(|&w| !visited[w]).collect();
            nbrs.sort_by_key(|&w| (degree[w], w));
            nbrs.dedup();
            for w in nbrs {
                visited[w] = true;
                queue.push_back(w);
            }
        }
    }
    order.reverse();
    order
}

fn bfs_levels(adjacency: &[Vec<usize>], root: usize) -> Vec<Vec<usize>> {
    let mut seen = std::collections::HashSet::from([root]);
    let mut levels = vec![vec![root]];
    loop {
        let mut next = Vec::new();
        for &v in levels.last().expect("non-empty") {
            for &w in &adjacency[v] {
                if seen.insert(w) {
                    next.push(w);
                }
            }
        }
        if next.is_empty() {
            return levels;
        }
        levels.push(next);
    }
}

fn pseudo_peripheral(adjacency: &[Vec<usize>], degree: &[usize], seed: usize) -> usize {
    let mut root = seed;
    let mut levels = bfs_levels(adjacency, root);
    loop {
        let last = levels.last().expect("non-empty");
        let candidate = *last.iter().min_by_key(|&&v| (degree[v], v)).expect("non-empty");
        let cand_levels = bfs_levels(adjacency, candidate);
        if cand_levels.len() > levels.len() {
            root = candidate;
            levels = cand_levels;
        } else {
            return root;
        }
    }
}

/// Schur complement `S = A_KK - A_KE A_EE^{-1} A_EK` of `a` onto the kept
/// unknowns `keep`, eliminating `elim`.
#[derive(Debug, Clone)]
pub struct SchurReduction {
    pub keep: Vec<usize>,
    pub elim: Vec<usize>,
    pub matrix: DMatrix<f64>,
    factor: Option<SparseCholesky>,
    /// `A_EK` as sparse columns: for each kept index, `(local elim, value)`.
    coupling: Vec<Vec<(usize, f64)>>,
}

impl SchurReduction {
    pub fn new(a: &SymSparse, keep: &[usize], elim: &[usize]) -> Result<Self> {
        let mut elim_local = vec![usize::MAX; a.dim()];
        for (l, &g) in elim.iter().enumerate() {
            elim_local[g] = l;
        }
        let mut keep_local = vec![usize::MAX; a.dim()];
        for (l, &g) in keep.iter().enumerate() {
            keep_local[g] = l;
        }
        let coupling: Vec<Vec<(usize, f64)>> = keep
            .iter()
            .map(|&g| {
                a.row(g)
                    .filter(|&(j, v)| v != 0.0 && elim_local[j] != usize::MAX)
                    .map(|(j, v)| (elim_local[j], v))
                    .collect()
            })
            .collect();
        let mut matrix = a.dense_block(keep, keep);
        let factor = if elim.is_empty() {
            None
        } else {
            Some(SparseCholesky::factor(a, elim)?)
        };
        if let Some(f) = &factor {
            // rows of A_KE, as (kept local, value) lists per eliminated unknown
            let mut ke_rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); elim.len()];
            for (c, col) in coupling.iter().enumerate() {
                for &(e, v) in col {
                    ke_rows[e].push((c, v));
                }
            }
            let mut rhs = vec![0.0; elim.len()];
            for (c, col) in coupling.iter().enumerate() {
                if col.is_empty() {
                    continue;
                }
                rhs.iter_mut().for_each(|x| *x = 0.0);
                for &(e, v) in col {
                    rhs[e] = v;
                }
                f.solve_in_place(&mut rhs);
                for (e, entries) in ke_rows.iter().enumerate() {
                    if rhs[e] == 0.0 {
                        continue;
                    }
                    for &(r, v) in entries {
                        matrix[(r, c)] -= v * rhs[e];
                    }
                }
            }
            let sym = (&matrix + matrix.transpose()) * 0.5;
            matrix = sym;
        }
        Ok(SchurReduction {
            keep: keep.to_vec(),
            elim: elim.to_vec(),
            matrix,
            factor,
            coupling,
        })
    }

    /// Values on the eliminated unknowns of the `A`-harmonic extension of
    /// `x` (given on `keep`): `-A_EE^{-1} A_EK x`.
    pub fn extend(&self, x: &[f64]) -> Vec<f64> {
        let Some(f) = &self.factor else { return Vec::new() };
        let mut rhs = vec![0.0; self.elim.len()];
        for (c, col) in self.coupling.iter().enumerate() {
            for &(e, v) in col {
                rhs[e] -= v * x[c];
            }
        }
        f.solve_in_place(&mut rhs);
        rhs
    }

    /// Full-length vector with `x` on `keep`, its extension on `elim`, zero elsewhere.
    pub fn prolong(&self, x: &[f64], n: usize) -> Vec<f64> {
        let mut full = vec![0.0; n];
        for (&g, &v) in self.keep.iter().zip(x) {
            full[g] = v;
        }
        for (&g, v) in self.elim.iter().zip(self.extend(x)) {
            full[g] = v;
        }
        full
    }
}

/// Ascending eigenvalues of `A x = lambda B x` with `B`-orthonormal eigenvectors
/// stored as columns.
#[derive(Debug, Clone)]
pub struct GenEig {
    pub values: Vec<f64>,
    pub vectors: DMatrix<f64>,
}

/// Dense symmetric-definite generalized eigenproblem: `B = L L'`, the standard
/// problem `L^{-1} A L^{-T}` is tridiagonalized and diagonalized by implicit
/// symmetric QR, and eigenvectors are mapped back through `L^{-T}`.
pub fn dense_sym_geig(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<GenEig> {
    let n = a.nrows();
    if a.ncols() != n || b.nrows() != n || b.ncols() != n {
        return Err(Error::Dimension {
            expected: n,
            found: b.nrows(),
        });
    }
    if n == 0 {
        return Ok(GenEig {
            values: vec![],
            vectors: DMatrix::zeros(0, 0),
        });
    }
    let chol = b
        .clone()
        .cholesky()
        .ok_or_else(|| Error::Singular("right-hand matrix of the pencil is not positive definite".into()))?;
    let l = chol.l();
    let x = l
        .solve_lower_triangular(a)
        .ok_or_else(|| Error::Singular("triangular solve failed".into()))?;
    let c = l
        .solve_lower_triangular(&x.transpose())
        .ok_or_else(|| Error::Singular("triangular solve failed".into()))?;
    let c = (&c + c.transpose()) * 0.5;
    let eig = SymmetricEigen::try_new(c, 1e-15, 10_000)
        .ok_or_else(|| Error::Singular("symmetric QR iteration did not converge".into()))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]).then(i.cmp(&j)));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let lt = l.transpose();
    let mut vectors = DMatrix::zeros(n, n);
    for (col, &i) in order.iter().enumerate() {
        let y: DVector<f64> = eig.eigenvectors.column(i).into_owned();
        let v = lt
            .solve_upper_triangular(&y)
            .ok_or_else(|| Error::Singular("triangular solve failed".into()))?;
        vectors.set_column(col, &v);
    }
    Ok(GenEig { values, vectors })
}

/// Dense symmetric positive definite solve via Cholesky.
pub fn dense_spd_solve(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let chol = a
        .clone()
        .cholesky()
        .ok_or_else(|| Error::Singular("dense block is not positive definite".into()))?;
    Ok(chol.solve(b))
}
