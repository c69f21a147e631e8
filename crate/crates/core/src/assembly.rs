//! P1 finite-element assembly of the stiffness, boundary and volume mass
//! matrices, and the quotients and norms evaluated from them.

use crate::error::{Error, Result};
use crate::geometry::BetaSpec;
use crate::mesh::{BoundaryTag, Mesh};
pub use crate::sparse::SymSparse;

/// One value per mesh vertex.
pub type DofVector = Vec<f64>;

/// Weight of a boundary mass matrix.
#[derive(Debug, Clone, Copy)]
pub enum Weight<'a> {
    Unit,
    /// Sampled at the polar angle of each edge midpoint about the hole center.
    Beta(&'a BetaSpec),
}

/// Element gradients of the three hat functions and the element area.
fn element_gradients(mesh: &Mesh, t: &[usize; 3]) -> Result<([[f64; 2]; 3], f64)> {
    let [p0, p1, p2] = t.map(|i| mesh.vertices[i]);
    let det = (p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1]);
    let area = 0.5 * det;
    let scale = [p0, p1, p2]
        .iter()
        .flat_map(|p| p.iter().map(|c| c.abs()))
        .fold(1.0, f64::max);
    if !(area.abs() > 1e-14 * scale * scale) {
        return Err(Error::Assembly(format!("degenerate triangle {t:?} with area {area:e}")));
    }
    let inv = 1.0 / det;
    let g = [
        [(p1[1] - p2[1]) * inv, (p2[0] - p1[0]) * inv],
        [(p2[1] - p0[1]) * inv, (p0[0] - p2[0]) * inv],
        [(p0[1] - p1[1]) * inv, (p1[0] - p0[0]) * inv],
    ];
    Ok((g, area.abs()))
}

/// `K_ij = int grad phi_i . grad phi_j`.
pub fn stiffness(mesh: &Mesh) -> Result<SymSparse> {
    let mut trip = Vec::with_capacity(9 * mesh.triangles.len());
    for t in &mesh.triangles {
        let (g, area) = element_gradients(mesh, t)?;
        for a in 0..3 {
            for b in 0..3 {
                let v = area * (g[a][0] * g[b][0] + g[a][1] * g[b][1]);
                trip.push((t[a], t[b], v));
            }
        }
    }
    Ok(SymSparse::from_triplets(mesh.num_vertices(), trip))
}

/// `M_ij = int_tag w phi_i phi_j`, integrated exactly edge by edge with a
/// constant weight per edge.
pub fn boundary_mass(mesh: &Mesh, tag: BoundaryTag, weight: Weight<'_>) -> Result<SymSparse> {
    if let Weight::Beta(b) = weight {
        b.validate()?;
    }
    let center = mesh.hole_center();
    let mut trip = Vec::new();
    for e in mesh.boundary_edges.iter().filter(|e| e.tag == tag) {
        let (p, q) = (mesh.vertices[e.a], mesh.vertices[e.b]);
        let len = (q[0] - p[0]).hypot(q[1] - p[1]);
        let w = match weight {
            Weight::Unit => 1.0,
            Weight::Beta(b) => {
                let mid = [0.5 * (p[0] + q[0]) - center[0], 0.5 * (p[1] + q[1]) - center[1]];
                b.value_at(mid[1].atan2(mid[0]))
            }
        };
        let d = w * len / 3.0;
        let o = w * len / 6.0;
        trip.extend([(e.a, e.a, d), (e.b, e.b, d), (e.a, e.b, o), (e.b, e.a, o)]);
    }
    if trip.is_empty() {
        return Err(Error::Tagging(tag));
    }
    Ok(SymSparse::from_triplets(mesh.num_vertices(), trip))
}

/// Consistent P1 mass `int_Omega phi_i phi_j`.
pub fn volume_mass(mesh: &Mesh) -> Result<SymSparse> {
    let mut trip = Vec::with_capacity(9 * mesh.triangles.len());
    for t in &mesh.triangles {
        let (_, area) = element_gradients(mesh, t)?;
        for a in 0..3 {
            for b in 0..3 {
                let v = if a == b { area / 6.0 } else { area / 12.0 };
                trip.push((t[a], t[b], v));
            }
        }
    }
    Ok(SymSparse::from_triplets(mesh.num_vertices(), trip))
}

/// `(v'Kv + v'B_in v) / v'M_out v`.
pub fn rayleigh(k: &SymSparse, b_in: &SymSparse, m_out: &SymSparse, v: &[f64]) -> Result<f64> {
    let den = m_out.quad_form(v)?;
    if !(den > 0.0) {
        return Err(Error::DivisionDomain("test function has zero outer trace".into()));
    }
    Ok((k.quad_form(v)? + b_in.quad_form(v)?) / den)
}

/// `sqrt((u-v)'(K + M_vol)(u-v))`.
pub fn h1_distance(k: &SymSparse, m_vol: &SymSparse, u: &[f64], v: &[f64]) -> Result<f64> {
    if u.len() != v.len() {
        return Err(Error::Dimension {
            expected: u.len(),
            found: v.len(),
        });
    }
    let d: Vec<f64> = u.iter().zip(v).map(|(a, b)| a - b).collect();
    Ok((k.quad_form(&d)? + m_vol.quad_form(&d)?).max(0.0).sqrt())
}

/// `sqrt(v'Mv)`.
pub fn boundary_l2(m: &SymSparse, v: &[f64]) -> Result<f64> {
    Ok(m.quad_form(v)?.max(0.0).sqrt())
}

/// Nodal interpolant of `f`.
pub fn interpolate(mesh: &Mesh, f: impl Fn([f64; 2]) -> f64) -> DofVector {
    mesh.vertices.iter().map(|&p| f(p)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::AnnularDomain;
    use crate::mesh::{polar_mesh, BoundaryEdge};
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn unit_triangle() -> Mesh {
        let edges = [(0, 1), (1, 2), (2, 0)]
            .map(|(a, b)| BoundaryEdge {
                a,
                b,
                tag: BoundaryTag::Outer,
            })
            .to_vec();
        Mesh::new(vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]], vec![[0, 1, 2]], edges, None).unwrap()
    }

    fn shell() -> Mesh {
        polar_mesh(&AnnularDomain::shell(1.0, 2.0).unwrap(), 8, 64).unwrap()
    }

    #[test]
    fn reference_element() {
        let m = unit_triangle();
        let k = stiffness(&m).unwrap();
        assert_relative_eq!(k.get(0, 0), 1.0, epsilon = 1e-15);
        assert_relative_eq!(k.get(1, 1), 0.5, epsilon = 1e-15);
        assert_relative_eq!(k.get(0, 1), -0.5, epsilon = 1e-15);
        let mv = volume_mass(&m).unwrap();
        assert_relative_eq!(mv.get(0, 0), 0.5 / 6.0, epsilon = 1e-15);
        assert_relative_eq!(mv.get(0, 2), 0.5 / 12.0, epsilon = 1e-15);
        let mb = boundary_mass(&m, BoundaryTag::Outer, Weight::Unit).unwrap();
        // edge (0,1) has length 1 and is the only edge containing both vertices
        assert_relative_eq!(mb.get(0, 1), 1.0 / 6.0, epsilon = 1e-15);
        assert!(matches!(
            boundary_mass(&m, BoundaryTag::Inner, Weight::Unit),
            Err(Error::Tagging(_))
        ));
    }

    #[test]
    fn kernel_and_affine_exactness() {
        let m = shell();
        let k = stiffness(&m).unwrap();
        assert!(k.max_asymmetry() == 0.0);
        let ones = vec![1.0; m.num_vertices()];
        let r = k.mul_vec(&ones).unwrap();
        assert!(r.iter().all(|x| x.abs() <= 1e-12 * k.norm_inf()));
        let x = interpolate(&m, |p| p[0]);
        assert_relative_eq!(k.quad_form(&x).unwrap(), m.area(), max_relative = 1e-10);
    }

    #[test]
    fn masses_reproduce_measures() {
        let m = shell();
        let ones = vec![1.0; m.num_vertices()];
        let mo = boundary_mass(&m, BoundaryTag::Outer, Weight::Unit).unwrap();
        let p = mo.quad_form(&ones).unwrap();
        assert_relative_eq!(p, m.boundary_length(BoundaryTag::Outer), max_relative = 1e-13);
        assert!((p - 4.0 * PI).abs() / (4.0 * PI) < 0.005);
        assert_relative_eq!(boundary_l2(&mo, &ones).unwrap(), p.sqrt(), max_relative = 1e-14);
        let mv = volume_mass(&m).unwrap();
        assert!((mv.quad_form(&ones).unwrap() - 3.0 * PI).abs() / (3.0 * PI) < 0.005);
        let c = 2.5;
        let k = stiffness(&m).unwrap();
        let d = h1_distance(&k, &mv, &vec![c; m.num_vertices()], &vec![0.0; m.num_vertices()]).unwrap();
        assert_relative_eq!(d, c * m.area().sqrt(), max_relative = 1e-10);
    }

    #[test]
    fn weight_linearity() {
        let m = shell();
        let unit = boundary_mass(&m, BoundaryTag::Inner, Weight::Unit).unwrap();
        let b = BetaSpec::constant(3.0).unwrap();
        let weighted = boundary_mass(&m, BoundaryTag::Inner, Weight::Beta(&b)).unwrap();
        assert!(weighted.add(&unit.scaled(-3.0)).unwrap().norm_inf() < 1e-14);
        assert!(boundary_mass(&m, BoundaryTag::Inner, Weight::Beta(&BetaSpec::Constant(-1.0))).is_err());
    }

    #[test]
    fn constant_quotient_is_rough_bound() {
        let m = shell();
        let k = stiffness(&m).unwrap();
        let b = BetaSpec::constant(2.0).unwrap();
        let bin = boundary_mass(&m, BoundaryTag::Inner, Weight::Beta(&b)).unwrap();
        let mo = boundary_mass(&m, BoundaryTag::Outer, Weight::Unit).unwrap();
        let ones = vec![1.0; m.num_vertices()];
        let expect = bin.quad_form(&ones).unwrap() / mo.quad_form(&ones).unwrap();
        assert_relative_eq!(rayleigh(&k, &bin, &mo, &ones).unwrap(), expect, max_relative = 1e-13);
        let zero_outer = interpolate(&m, |p| if p[0].hypot(p[1]) < 1.9 { 1.0 } else { 0.0 });
        assert!(matches!(
            rayleigh(&k, &bin, &mo, &zero_outer),
            Err(Error::DivisionDomain(_))
        ));
    }

    #[test]
    fn degenerate_triangle_rejected() {
        let mut m = unit_triangle();
        m.vertices[2] = [2.0, 0.0];
        assert!(matches!(stiffness(&m), Err(Error::Assembly(_))));
    }
}
