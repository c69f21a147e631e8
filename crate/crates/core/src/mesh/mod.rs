//! Conforming triangle meshes of annular domains with tagged boundary edges.

mod dumbbell;
mod io;
mod polar;

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{AnnularDomain, Dumbbell, Outline, RadialOutline};

pub use dumbbell::{dumbbell_mesh, dumbbell_mesh_with, DumbbellMeshParams};
pub use io::{read_mesh, write_mesh};
pub use polar::polar_mesh;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BoundaryTag {
    /// Hole boundary, carrying the Robin weight.
    Inner,
    /// Outer boundary, carrying the Steklov condition.
    Outer,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundaryEdge {
    pub a: usize,
    pub b: usize,
    pub tag: BoundaryTag,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Circle {
    pub center: [f64; 2],
    pub radius: f64,
}

impl Circle {
    pub fn project(&self, p: [f64; 2]) -> [f64; 2] {
        let (dx, dy) = (p[0] - self.center[0], p[1] - self.center[1]);
        let d = dx.hypot(dy);
        [
            self.center[0] + self.radius * dx / d,
            self.center[1] + self.radius * dy / d,
        ]
    }
}

/// Exact outer curve, used to place new boundary nodes on refinement.
#[derive(Debug, Clone, PartialEq)]
pub enum OuterCurve {
    Radial(RadialOutline),
    /// Piecewise straight (polygon outlines): midpoints already lie on it.
    Straight,
    Dumbbell(Dumbbell),
}

impl OuterCurve {
    fn project(&self, p: [f64; 2]) -> [f64; 2] {
        match self {
            OuterCurve::Radial(o) => o.point(p[1].atan2(p[0])),
            OuterCurve::Straight => p,
            OuterCurve::Dumbbell(d) => {
                if p[0].abs() <= d.neck_half_length() * (1.0 + 1e-12) {
                    p
                } else {
                    let center = if p[0] < 0.0 { d.solid_center() } else { d.holed_center() };
                    Circle { center, radius: 1.0 }.project(p)
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryCurves {
    pub inner: Circle,
    pub outer: OuterCurve,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    pub vertices: Vec<[f64; 2]>,
    /// Counterclockwise vertex triples.
    pub triangles: Vec<[usize; 3]>,
    pub boundary_edges: Vec<BoundaryEdge>,
    /// Exact boundary curves when known; meshes read from text have none.
    pub curves: Option<BoundaryCurves>,
}

/// Closed chain of boundary vertices sharing one tag.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryLoop {
    pub tag: BoundaryTag,
    pub vertices: Vec<usize>,
}

pub(crate) fn signed_area(p: [f64; 2], q: [f64; 2], r: [f64; 2]) -> f64 {
    0.5 * ((q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0]))
}

fn edge_key(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

fn dist(p: [f64; 2], q: [f64; 2]) -> f64 {
    (p[0] - q[0]).hypot(p[1] - q[1])
}

impl Mesh {
    /// Builds a mesh and checks its invariants.
    pub fn new(
        vertices: Vec<[f64; 2]>,
        triangles: Vec<[usize; 3]>,
        boundary_edges: Vec<BoundaryEdge>,
        curves: Option<BoundaryCurves>,
    ) -> Result<Self> {
        let mesh = Mesh {
            vertices,
            triangles,
            boundary_edges,
            curves,
        };
        mesh.validate()?;
        Ok(mesh)
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn area(&self) -> f64 {
        self.triangles.iter().map(|t| self.triangle_area(t)).sum()
    }

    pub fn triangle_area(&self, t: &[usize; 3]) -> f64 {
        signed_area(self.vertices[t[0]], self.vertices[t[1]], self.vertices[t[2]])
    }

    /// Positive orientation, conformity, and agreement of the tagged edges
    /// with the topological boundary.
    pub fn validate(&self) -> Result<()> {
        let nv = self.vertices.len();
        let mut counts: HashMap<(usize, usize), usize> = HashMap::new();
        for (ti, t) in self.triangles.iter().enumerate() {
            if t.iter().any(|&i| i >= nv) {
                return Err(Error::Geometry(format!("triangle {ti} references a missing vertex")));
            }
            if t[0] == t[1] || t[1] == t[2] || t[0] == t[2] {
                return Err(Error::Geometry(format!("triangle {ti} repeats a vertex")));
            }
            let area = self.triangle_area(t);
            if !(area > 0.0) {
                return Err(Error::Geometry(format!("triangle {ti} has non-positive area {area}")));
            }
            for k in 0..3 {
                *counts.entry(edge_key(t[k], t[(k + 1) % 3])).or_default() += 1;
            }
        }
        if let Some((e, c)) = counts.iter().find(|(_, &c)| c > 2) {
            return Err(Error::Geometry(format!("edge {e:?} shared by {c} triangles")));
        }
        let mut tagged: HashMap<(usize, usize), BoundaryTag> = HashMap::new();
        for e in &self.boundary_edges {
            let key = edge_key(e.a, e.b);
            if counts.get(&key) != Some(&1) {
                return Err(Error::Geometry(format!(
                    "tagged edge ({}, {}) is not a boundary edge of the triangulation",
                    e.a, e.b
                )));
            }
            if tagged.insert(key, e.tag).is_some() {
                return Err(Error::Geometry(format!("edge ({}, {}) tagged twice", e.a, e.b)));
            }
        }
        let open = counts.values().filter(|&&c| c == 1).count();
        if open != tagged.len() {
            return Err(Error::Geometry(format!(
                "{} boundary edges but {} tagged",
                open,
                tagged.len()
            )));
        }
        Ok(())
    }

    /// Longest triangle edge.
    pub fn h(&self) -> f64 {
        self.triangles
            .iter()
            .flat_map(|t| (0..3).map(move |k| (t[k], t[(k + 1) % 3])))
            .map(|(a, b)| dist(self.vertices[a], self.vertices[b]))
            .fold(0.0, f64::max)
    }

    /// Sorted vertex indices touched by edges with `tag`.
    pub fn boundary_dofs(&self, tag: BoundaryTag) -> Vec<usize> {
        let mut dofs: Vec<usize> = self
            .boundary_edges
            .iter()
            .filter(|e| e.tag == tag)
            .flat_map(|e| [e.a, e.b])
            .collect();
        dofs.sort_unstable();
        dofs.dedup();
        dofs
    }

    /// Sum of lengths of the edges with `tag` (discrete perimeter).
    pub fn boundary_length(&self, tag: BoundaryTag) -> f64 {
        self.boundary_edges
            .iter()
            .filter(|e| e.tag == tag)
            .map(|e| dist(self.vertices[e.a], self.vertices[e.b]))
            .sum()
    }

    /// Decomposes the tagged edges into closed loops.
    pub fn boundary_loops(&self) -> Result<Vec<BoundaryLoop>> {
        let mut adjacency: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
        for (i, e) in self.boundary_edges.iter().enumerate() {
            adjacency.entry(e.a).or_default().push((e.b, i));
            adjacency.entry(e.b).or_default().push((e.a, i));
        }
        if let Some((v, _)) = adjacency.iter().find(|(_, n)| n.len() != 2) {
            return Err(Error::Geometry(format!("boundary vertex {v} does not have degree 2")));
        }
        let mut used = vec![false; self.boundary_edges.len()];
        let mut loops = Vec::new();
        for start in 0..self.boundary_edges.len() {
            if used[start] {
                continue;
            }
            let tag = self.boundary_edges[start].tag;
            let first = self.boundary_edges[start].a;
            let mut vertices = vec![first];
            let mut current = self.boundary_edges[start].b;
            used[start] = true;
            while current != first {
                vertices.push(current);
                let &(next, ei) = adjacency[&current]
                    .iter()
                    .find(|(_, ei)| !used[*ei])
                    .ok_or_else(|| Error::Geometry("open boundary chain".into()))?;
                if self.boundary_edges[ei].tag != tag {
                    return Err(Error::Geometry(format!("boundary loop mixes tags at vertex {current}")));
                }
                used[ei] = true;
                current = next;
            }
            loops.push(BoundaryLoop { tag, vertices });
        }
        Ok(loops)
    }

    /// Red refinement: every triangle is split into four. New boundary nodes
    /// are projected onto the exact curves when they are known.
    pub fn uniform_refine(&self) -> Result<Mesh> {
        let mut vertices = self.vertices.clone();
        let mut midpoints: HashMap<(usize, usize), usize> = HashMap::new();
        let mut midpoint = |a: usize, b: usize, vertices: &mut Vec<[f64; 2]>| -> usize {
            *midpoints.entry(edge_key(a, b)).or_insert_with(|| {
                let (p, q) = (vertices[a], vertices[b]);
                vertices.push([0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1])]);
                vertices.len() - 1
            })
        };
        let mut triangles = Vec::with_capacity(4 * self.triangles.len());
        for &[a, b, c] in &self.triangles {
            let ab = midpoint(a, b, &mut vertices);
            let bc = midpoint(b, c, &mut vertices);
            let ca = midpoint(c, a, &mut vertices);
            triangles.extend_from_slice(&[[a, ab, ca], [ab, b, bc], [ca, bc, c], [ab, bc, ca]]);
        }
        let mut boundary_edges = Vec::with_capacity(2 * self.boundary_edges.len());
        for e in &self.boundary_edges {
            let m = midpoint(e.a, e.b, &mut vertices);
            if let Some(curves) = &self.curves {
                vertices[m] = match e.tag {
                    BoundaryTag::Inner => curves.inner.project(vertices[m]),
                    BoundaryTag::Outer => curves.outer.project(vertices[m]),
                };
            }
            boundary_edges.push(BoundaryEdge {
                a: e.a,
                b: m,
                tag: e.tag,
            });
            boundary_edges.push(BoundaryEdge {
                a: m,
                b: e.b,
                tag: e.tag,
            });
        }
        Mesh::new(vertices, triangles, boundary_edges, self.curves.clone())
    }

    /// Smallest interior angle (degrees) over all triangles.
    pub fn min_angle(&self) -> f64 {
        let mut min = 180.0f64;
        for t in &self.triangles {
            for k in 0..3 {
                let p = self.vertices[t[k]];
                let q = self.vertices[t[(k + 1) % 3]];
                let r = self.vertices[t[(k + 2) % 3]];
                let u = [q[0] - p[0], q[1] - p[1]];
                let v = [r[0] - p[0], r[1] - p[1]];
                let cross = u[0] * v[1] - u[1] * v[0];
                let dot = u[0] * v[0] + u[1] * v[1];
                min = min.min(cross.abs().atan2(dot).to_degrees());
            }
        }
        min
    }

    /// Largest distance of an inner-tagged vertex from the exact hole circle.
    pub fn inner_circle_deviation(&self) -> Option<f64> {
        let circle = self.curves.as_ref()?.inner;
        let dev = self
            .boundary_dofs(BoundaryTag::Inner)
            .into_iter()
            .map(|i| (dist(self.vertices[i], circle.center) - circle.radius).abs())
            .fold(0.0, f64::max);
        Some(dev)
    }

    /// Center of the hole: exact when known, otherwise the mean of the
    /// inner-boundary vertices.
    pub fn hole_center(&self) -> [f64; 2] {
        if let Some(c) = &self.curves {
            return c.inner.center;
        }
        let dofs = self.boundary_dofs(BoundaryTag::Inner);
        if dofs.is_empty() {
            return [0.0, 0.0];
        }
        let n = dofs.len() as f64;
        let sx: f64 = dofs.iter().map(|&i| self.vertices[i][0]).sum();
        let sy: f64 = dofs.iter().map(|&i| self.vertices[i][1]).sum();
        [sx / n, sy / n]
    }
}

/// `(min_angle_degrees, h)`.
pub fn mesh_quality(mesh: &Mesh) -> (f64, f64) {
    (mesh.min_angle(), mesh.h())
}

/// Pushes triangles so that each is counterclockwise.
pub(crate) fn push_oriented(vertices: &[[f64; 2]], triangles: &mut Vec<[usize; 3]>, t: [usize; 3]) {
    if signed_area(vertices[t[0]], vertices[t[1]], vertices[t[2]]) >= 0.0 {
        triangles.push(t);
    } else {
        triangles.push([t[0], t[2], t[1]]);
    }
}

/// Resolution of the generated meshes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeshParams {
    pub n_radial: usize,
    pub n_angular: usize,
    /// Element rows across a dumbbell neck.
    pub neck_layers: usize,
    /// Uniform refinements applied after generation.
    pub refine: usize,
}

impl Default for MeshParams {
    fn default() -> Self {
        MeshParams {
            n_radial: 16,
            n_angular: 128,
            neck_layers: 2,
            refine: 0,
        }
    }
}

/// Polar grid for radial and polygon outlines, block mesh for the dumbbell.
pub fn build_mesh(domain: &AnnularDomain, params: &MeshParams) -> Result<Mesh> {
    let mut mesh = match &domain.outline {
        Outline::Dumbbell(d) => {
            if params.neck_layers < 2 {
                return Err(Error::Parameter("at least two element layers across the neck".into()));
            }
            dumbbell_mesh(d.eps, domain.hole_radius, d.eps.powi(3) / params.neck_layers as f64)?
        }
        _ => polar_mesh(domain, params.n_radial, params.n_angular)?,
    };
    for _ in 0..params.refine {
        mesh = mesh.uniform_refine()?;
    }
    Ok(mesh)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::AnnularDomain;

    #[test]
    fn refinement_quadruples_and_halves() {
        let d = AnnularDomain::shell(1.0, 2.0).unwrap();
        let m = polar_mesh(&d, 4, 16).unwrap();
        let f = m.uniform_refine().unwrap();
        assert_eq!(f.triangles.len(), 4 * m.triangles.len());
        let ratio = f.h() / m.h();
        assert!((ratio - 0.5).abs() < 0.025, "h ratio {ratio}");
        assert!(f.inner_circle_deviation().unwrap() < 1e-12);
        assert_eq!(f.boundary_loops().unwrap().len(), 2);
    }

    #[test]
    fn validation_rejects_bad_meshes() {
        let v = vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]];
        let edges = vec![
            BoundaryEdge {
                a: 0,
                b: 1,
                tag: BoundaryTag::Outer,
            },
            BoundaryEdge {
                a: 1,
                b: 2,
                tag: BoundaryTag::Outer,
            },
            BoundaryEdge {
                a: 2,
                b: 0,
                tag: BoundaryTag::Outer,
            },
        ];
        assert!(Mesh::new(v.clone(), vec![[0, 1, 2]], edges.clone(), None).is_ok());
        assert!(Mesh::new(v.clone(), vec![[0, 2, 1]], edges.clone(), None).is_err());
        assert!(Mesh::new(v.clone(), vec![[0, 1, 2]], edges[..2].to_vec(), None).is_err());
        assert!(Mesh::new(v, vec![[0, 1, 5]], edges, None).is_err());
    }
}
