use std::f64::consts::TAU;

use super::{BoundaryCurves, BoundaryEdge, BoundaryTag, Circle, Mesh, OuterCurve};
use crate::error::{Error, Result};
use crate::geometry::{AnnularDomain, Outline};

/// Mapped tensor grid between the hole circle and a star-shaped outline.
///
/// Node `(i, j)` sits at angle `theta_j` and radius
/// `r + (rho0(theta_j) - r) i / n_radial`; each cell is split into two
/// triangles. Radial outlines use `n_angular` equispaced angles; polygon
/// outlines add the vertex angles so corners are nodes.
pub fn polar_mesh(domain: &AnnularDomain, n_radial: usize, n_angular: usize) -> Result<Mesh> {
    if n_radial < 2 {
        return Err(Error::Parameter(format!("n_radial must be >= 2, got {n_radial}")));
    }
    if n_angular < 8 {
        return Err(Error::Parameter(format!("n_angular must be >= 8, got {n_angular}")));
    }
    domain.validate()?;
    let r = domain.hole_radius;
    let uniform = (0..n_angular).map(|j| TAU * j as f64 / n_angular as f64);

    let (angles, outer_radii, outer_curve): (Vec<f64>, Vec<f64>, OuterCurve) = match &domain.outline {
        Outline::Radial(o) => {
            let angles: Vec<f64> = uniform.collect();
            let radii = angles.iter().map(|&t| o.rho(t)).collect();
            (angles, radii, OuterCurve::Radial(o.clone()))
        }
        Outline::Polygon(v) => {
            check_star_shaped(v)?;
            let mut angles: Vec<f64> = uniform
                .chain(v.iter().map(|p| p[1].atan2(p[0]).rem_euclid(TAU)))
                .collect();
            angles.sort_by(f64::total_cmp);
            angles.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
            if TAU - angles.last().copied().unwrap_or(0.0) < 1e-9 {
                angles.pop();
            }
            let radii = angles.iter().map(|&t| polygon_ray(v, t)).collect::<Result<_>>()?;
            (angles, radii, OuterCurve::Straight)
        }
        Outline::Dumbbell(_) => return Err(Error::UnsupportedOutline("dumbbell")),
    };
    if let Some(rho) = outer_radii.iter().find(|&&rho| rho <= r) {
        return Err(Error::Geometry(format!(
            "outline radius {rho} not beyond hole radius {r}"
        )));
    }

    let na = angles.len();
    let index = |i: usize, j: usize| i * na + (j % na);
    let mut vertices = Vec::with_capacity((n_radial + 1) * na);
    for i in 0..=n_radial {
        let s = i as f64 / n_radial as f64;
        for (j, &t) in angles.iter().enumerate() {
            let radius = if i == n_radial {
                outer_radii[j]
            } else {
                r + (outer_radii[j] - r) * s
            };
            vertices.push([radius * t.cos(), radius * t.sin()]);
        }
    }
    let mut triangles = Vec::with_capacity(2 * n_radial * na);
    for i in 0..n_radial {
        for j in 0..na {
            let (a, b, c, d) = (index(i, j), index(i + 1, j), index(i + 1, j + 1), index(i, j + 1));
            triangles.push([a, b, c]);
            triangles.push([a, c, d]);
        }
    }
    let mut boundary_edges = Vec::with_capacity(2 * na);
    for j in 0..na {
        boundary_edges.push(BoundaryEdge {
            a: index(0, j),
            b: index(0, j + 1),
            tag: BoundaryTag::Inner,
        });
    }
    for j in 0..na {
        boundary_edges.push(BoundaryEdge {
            a: index(n_radial, j),
            b: index(n_radial, j + 1),
            tag: BoundaryTag::Outer,
        });
    }
    let curves = BoundaryCurves {
        inner: Circle {
            center: [0.0, 0.0],
            radius: r,
        },
        outer: outer_curve,
    };
    Mesh::new(vertices, triangles, boundary_edges, Some(curves))
}

fn check_star_shaped(v: &[[f64; 2]]) -> Result<()> {
    let n = v.len();
    for i in 0..n {
        let (a, b) = (v[i], v[(i + 1) % n]);
        if a[0] * b[1] - a[1] * b[0] <= 0.0 {
            return Err(Error::Geometry("polygon is not star-shaped about the origin".into()));
        }
    }
    Ok(())
}

/// Distance from the origin to the polygon along the ray at angle `t`.
fn polygon_ray(v: &[[f64; 2]], t: f64) -> Result<f64> {
    let d = [t.cos(), t.sin()];
    let n = v.len();
    let mut best: Option<f64> = None;
    for i in 0..n {
        let (a, b) = (v[i], v[(i + 1) % n]);
        let e = [b[0] - a[0], b[1] - a[1]];
        let denom = d[0] * e[1] - d[1] * e[0];
        if denom.abs() < 1e-300 {
            continue;
        }
        // solve s d = a + u e
        let s = (a[0] * e[1] - a[1] * e[0]) / denom;
        let u = (a[0] * d[1] - a[1] * d[0]) / denom;
        if s > 0.0 && (-1e-12..=1.0 + 1e-12).contains(&u) {
            best = Some(best.map_or(s, |cur: f64| cur.min(s)));
        }
    }
    best.ok_or_else(|| Error::Geometry(format!("ray at angle {t} misses the polygon")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::RadialOutline;
    use std::f64::consts::PI;

    #[test]
    fn counts_for_structured_grid() {
        let d = AnnularDomain::shell(1.0, 2.0).unwrap();
        let m = polar_mesh(&d, 4, 16).unwrap();
        assert_eq!(m.num_vertices(), 80);
        assert_eq!(m.triangles.len(), 128);
        assert_eq!(m.boundary_loops().unwrap().len(), 2);
    }

    #[test]
    fn inscribed_perimeter() {
        let d = AnnularDomain::shell(1.0, 2.0).unwrap();
        let m = polar_mesh(&d, 8, 64).unwrap();
        let p = m.boundary_length(BoundaryTag::Outer);
        let inscribed = 2.0 * 2.0 * 64.0 * (PI / 64.0).sin();
        assert!((p - inscribed).abs() < 1e-12);
        assert!((p - 4.0 * PI).abs() / (4.0 * PI) < 0.005);
    }

    #[test]
    fn quality_on_balanced_grid() {
        let d = AnnularDomain::shell(1.0, 2.0).unwrap();
        let m = polar_mesh(&d, 8, 64).unwrap();
        assert!(m.min_angle() >= 25.0, "{}", m.min_angle());
        let e = AnnularDomain::new(
            Outline::Radial(RadialOutline::new(1.5, vec![0.0, 0.3], vec![]).unwrap()),
            0.5,
        )
        .unwrap();
        let m = polar_mesh(&e, 8, 64).unwrap();
        assert!(m.min_angle() >= 15.0, "{}", m.min_angle());
    }

    #[test]
    fn polygon_corners_are_nodes() {
        let square = vec![[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]];
        let d = AnnularDomain::new(Outline::Polygon(square), 0.4).unwrap();
        let m = polar_mesh(&d, 4, 30).unwrap();
        assert!((m.boundary_length(BoundaryTag::Outer) - 8.0).abs() < 1e-12);
        let fine = m.uniform_refine().unwrap();
        assert!((fine.boundary_length(BoundaryTag::Outer) - 8.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_parameters() {
        let d = AnnularDomain::shell(1.0, 2.0).unwrap();
        assert!(polar_mesh(&d, 1, 16).is_err());
        assert!(polar_mesh(&d, 4, 4).is_err());
    }
}
