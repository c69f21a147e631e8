use std::f64::consts::PI;

use super::{push_oriented, BoundaryCurves, BoundaryEdge, BoundaryTag, Circle, Mesh, OuterCurve};
use crate::error::{Error, Result};
use crate::geometry::Dumbbell;

/// Block resolutions of the dumbbell mesh.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DumbbellMeshParams {
    /// Cells along the neck.
    pub neck_x: usize,
    /// Cells across the neck.
    pub neck_y: usize,
    /// Target number of angular cells on a lobe away from the neck.
    pub lobe_angular: usize,
    /// Rings per lobe.
    pub lobe_radial: usize,
    /// Growth ratio of the angular spacing away from the neck.
    pub grading: f64,
}

/// Dumbbell mesh with `h_target` the spacing across the neck. The neck
/// (height `eps^3`) must be resolved, so `h_target > eps^3` is rejected.
pub fn dumbbell_mesh(eps: f64, hole_radius: f64, h_target: f64) -> Result<Mesh> {
    let d = Dumbbell::new(eps)?;
    let width = 2.0 * d.neck_half_width();
    if !(h_target > 0.0) || h_target > width {
        return Err(Error::Resolution(format!(
            "h_target {h_target} does not resolve the neck width {width}"
        )));
    }
    let neck_y = ((width / h_target).ceil() as usize).max(2);
    let neck_x = ((0.25 * eps / h_target).ceil() as usize).clamp(32, 512);
    let params = DumbbellMeshParams {
        neck_x,
        neck_y,
        lobe_angular: 64,
        lobe_radial: 12,
        grading: 1.3,
    };
    dumbbell_mesh_with(eps, hole_radius, &params)
}

/// Block-structured mesh of solid lobe, neck, and holed lobe.
///
/// The lobes are polar grids around their centers whose outer ring passes
/// through the neck end nodes, so the blocks share nodes exactly. Angular
/// spacing starts at the neck spacing and grows geometrically.
pub fn dumbbell_mesh_with(eps: f64, hole_radius: f64, p: &DumbbellMeshParams) -> Result<Mesh> {
    let d = Dumbbell::new(eps)?;
    if !(hole_radius > 0.0 && hole_radius < 1.0) {
        return Err(Error::Geometry(format!("hole radius {hole_radius} must lie in (0, 1)")));
    }
    if p.neck_y < 2 || p.neck_x < 2 || p.lobe_radial < 2 || p.lobe_angular < 8 || !(p.grading > 1.0) {
        return Err(Error::Parameter(format!("invalid dumbbell mesh parameters {p:?}")));
    }
    let (half_len, half_w) = (d.neck_half_length(), d.neck_half_width());
    let ys: Vec<f64> = (0..=p.neck_y)
        .map(|k| -half_w + 2.0 * half_w * k as f64 / p.neck_y as f64)
        .collect();
    let (lobe_angles, chord_start) = lobe_angles(&ys, p);

    let mut vertices: Vec<[f64; 2]> = Vec::new();
    let mut triangles = Vec::new();
    let mut boundary_edges = Vec::new();

    // neck grid: column i, row k
    let mut neck = vec![vec![0usize; p.neck_y + 1]; p.neck_x + 1];
    for (i, column) in neck.iter_mut().enumerate() {
        let x = if i == p.neck_x {
            half_len
        } else {
            -half_len + 2.0 * half_len * i as f64 / p.neck_x as f64
        };
        for (k, slot) in column.iter_mut().enumerate() {
            *slot = vertices.len();
            vertices.push([x, ys[k]]);
        }
    }
    for i in 0..p.neck_x {
        for k in 0..p.neck_y {
            let (a, b, c, dd) = (neck[i][k], neck[i + 1][k], neck[i + 1][k + 1], neck[i][k + 1]);
            push_oriented(&vertices, &mut triangles, [a, b, c]);
            push_oriented(&vertices, &mut triangles, [a, c, dd]);
        }
        for row in [0, p.neck_y] {
            boundary_edges.push(BoundaryEdge {
                a: neck[i][row],
                b: neck[i + 1][row],
                tag: BoundaryTag::Outer,
            });
        }
    }

    let na = lobe_angles.len();
    let is_chord = |j: usize| j >= chord_start && j <= chord_start + p.neck_y;
    // (center, direction towards the neck, chord column, inner radius)
    let lobes = [
        (d.solid_center(), 1.0, 0usize, None),
        (d.holed_center(), -1.0, p.neck_x, Some(hole_radius)),
    ];
    for (center, dir, column, hole) in lobes {
        let radii: Vec<f64> = match hole {
            None => (1..=p.lobe_radial).map(|i| i as f64 / p.lobe_radial as f64).collect(),
            Some(r) => (0..=p.lobe_radial)
                .map(|i| r + (1.0 - r) * i as f64 / p.lobe_radial as f64)
                .collect(),
        };
        let mut rings: Vec<Vec<usize>> = Vec::with_capacity(radii.len());
        for (ri, &t) in radii.iter().enumerate() {
            let outer = ri + 1 == radii.len();
            let ring = lobe_angles
                .iter()
                .enumerate()
                .map(|(j, &a)| {
                    if outer && is_chord(j) {
                        neck[column][j - chord_start]
                    } else {
                        vertices.push([center[0] + dir * t * a.cos(), center[1] + t * a.sin()]);
                        vertices.len() - 1
                    }
                })
                .collect();
            rings.push(ring);
        }
        if hole.is_none() {
            let c = vertices.len();
            vertices.push(center);
            for j in 0..na {
                push_oriented(&vertices, &mut triangles, [c, rings[0][j], rings[0][(j + 1) % na]]);
            }
        }
        for w in rings.windows(2) {
            let (inner, outer) = (&w[0], &w[1]);
            for j in 0..na {
                let jn = (j + 1) % na;
                push_oriented(&vertices, &mut triangles, [inner[j], outer[j], outer[jn]]);
                push_oriented(&vertices, &mut triangles, [inner[j], outer[jn], inner[jn]]);
            }
        }
        let outer = rings.last().expect("rings");
        for j in 0..na {
            let jn = (j + 1) % na;
            if is_chord(j) && is_chord(jn) && jn == j + 1 {
                continue;
            }
            boundary_edges.push(BoundaryEdge {
                a: outer[j],
                b: outer[jn],
                tag: BoundaryTag::Outer,
            });
        }
        if hole.is_some() {
            for j in 0..na {
                boundary_edges.push(BoundaryEdge {
                    a: rings[0][j],
                    b: rings[0][(j + 1) % na],
                    tag: BoundaryTag::Inner,
                });
            }
        }
    }

    let curves = BoundaryCurves {
        inner: Circle {
            center: d.holed_center(),
            radius: hole_radius,
        },
        outer: OuterCurve::Dumbbell(d),
    };
    Mesh::new(vertices, triangles, boundary_edges, Some(curves))
}

/// Angles in `(-pi, pi]`, measured from the direction towards the neck: the
/// chord angles `asin(y_k)`, then geometrically growing steps capped at
/// `2 pi / lobe_angular`, mirrored to the other side. Also returns the index
/// of the first chord angle.
fn lobe_angles(ys: &[f64], p: &DumbbellMeshParams) -> (Vec<f64>, usize) {
    let chord: Vec<f64> = ys.iter().map(|y| y.asin()).collect();
    let max_step = 2.0 * PI / p.lobe_angular as f64;
    let n = chord.len();
    let mut step = (chord[n - 1] - chord[n - 2]) * p.grading;
    let mut side = Vec::new();
    let mut a = chord[n - 1];
    while step < max_step && a + step < PI - max_step {
        a += step;
        side.push(a);
        step *= p.grading;
    }
    let remaining = PI - a;
    let m = (remaining / max_step).ceil().max(1.0) as usize;
    for t in 1..=m {
        side.push(if t == m {
            PI
        } else {
            a + remaining * t as f64 / m as f64
        });
    }
    let mut angles: Vec<f64> = side[..side.len() - 1].iter().rev().map(|a| -a).collect();
    let chord_start = angles.len();
    angles.extend_from_slice(&chord);
    angles.extend_from_slice(&side);
    (angles, chord_start)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neck_is_resolved_and_topology_is_annular() {
        let m = dumbbell_mesh(0.2, 0.5, 0.004).unwrap();
        let loops = m.boundary_loops().unwrap();
        assert_eq!(loops.len(), 2);
        assert_eq!(loops.iter().filter(|l| l.tag == BoundaryTag::Inner).count(), 1);
        // at least two element layers across the neck at x = 0
        let across = m
            .vertices
            .iter()
            .filter(|v| v[0].abs() < 1e-12 && v[1].abs() <= 0.004 + 1e-15)
            .count();
        assert!(across >= 3);
        assert!(m.inner_circle_deviation().unwrap() < 1e-12);
    }

    #[test]
    fn area_and_perimeter_close_to_exact() {
        let d = Dumbbell::new(0.2).unwrap();
        let m = dumbbell_mesh(0.2, 0.5, 0.004).unwrap();
        let exact_p = d.perimeter();
        let rel = (m.boundary_length(BoundaryTag::Outer) - exact_p).abs() / exact_p;
        assert!(rel < 5e-3, "perimeter rel err {rel}");
        let f = m.uniform_refine().unwrap();
        let rel_f = (f.boundary_length(BoundaryTag::Outer) - exact_p).abs() / exact_p;
        assert!(rel_f < rel / 3.0);
    }

    #[test]
    fn rejects_unresolved_neck() {
        assert!(matches!(dumbbell_mesh(0.2, 0.5, 0.01), Err(Error::Resolution(_))));
        assert!(dumbbell_mesh(0.2, 1.5, 0.001).is_err());
    }
}
