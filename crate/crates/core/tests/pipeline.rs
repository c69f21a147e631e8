use steklov_robin::assembly::h1_distance;
use steklov_robin::geometry::{AnnularDomain, BetaSpec, Outline, RadialOutline};
use steklov_robin::mesh::{build_mesh, polar_mesh, read_mesh, write_mesh, BoundaryTag, MeshParams};
use steklov_robin::radial_oracle::{q_shell, sigma_beta_shell, sigma_dirichlet_shell, ShellSpec};
use steklov_robin::spectral::{harmonic_split, inverse_iteration, Discretization};

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn ellipse() -> AnnularDomain {
    let o = RadialOutline::new(1.5, vec![0.0, 0.3], vec![]).unwrap();
    AnnularDomain::new(Outline::Radial(o), 0.5).unwrap()
}

#[test]
fn schur_path_matches_full_pencil_inverse_iteration() {
    let mesh = polar_mesh(&ellipse(), 9, 48).unwrap();
    assert!((400..=600).contains(&mesh.num_vertices()));
    let d = Discretization::new(mesh).unwrap();
    for b in [0.5, 5.0] {
        let beta = BetaSpec::constant(b).unwrap();
        let s = d.robin(&beta).unwrap();
        let a = d.stiffness.add(&d.robin_mass(&beta).unwrap()).unwrap();
        let (lam, v) = inverse_iteration(&a, &d.outer_mass, 1e-13, 5000).unwrap();
        assert!(rel(lam, s.value) < 1e-8, "beta {b}: {lam} vs {}", s.value);
        let sign = if v[d.outer_dofs[0]] > 0.0 { 1.0 } else { -1.0 };
        let w: Vec<f64> = v.iter().map(|x| sign * x).collect();
        assert!(h1_distance(&d.stiffness, &d.volume_mass, &w, &s.vector).unwrap() < 1e-4);
    }
}

#[test]
fn shell_pipeline_against_closed_forms() {
    let spec = ShellSpec::new(2, 1.0, 2.0).unwrap();
    let d = Discretization::new(build_mesh(&AnnularDomain::shell(1.0, 2.0).unwrap(), &MeshParams::default()).unwrap())
        .unwrap();
    let beta = BetaSpec::constant(1.0).unwrap();
    let s = d.robin(&beta).unwrap();
    assert!(rel(s.value, sigma_beta_shell(&spec, 1.0).unwrap()) < 0.01);
    assert!(s.residual < 1e-10);
    assert!(s.gap.unwrap() > 0.0);
    assert!(d.outer_dofs.iter().all(|&i| s.vector[i] > 0.0));
    let sd = d.dirichlet().unwrap();
    assert!(rel(sd.value, sigma_dirichlet_shell(&spec).unwrap()) < 0.01);
    assert!(d.inner_dofs.iter().all(|&i| sd.vector[i] == 0.0));
    let q = d.q_beta(&beta).unwrap();
    assert!(rel(q.value, q_shell(&spec).unwrap()) < 0.01);
    let mu = d.mu1().unwrap();
    assert!(mu.value > 0.0);
    let c = d.inner_mass_row();
    let cv: f64 = c.iter().zip(&mu.vector).map(|(a, b)| a * b).sum();
    let nc = c.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nv = mu.vector.iter().map(|x| x * x).sum::<f64>().sqrt();
    assert!(cv.abs() <= 1e-12 * nc * nv);
}

#[test]
fn harmonic_split_is_energy_orthogonal() {
    let d = Discretization::new(polar_mesh(&ellipse(), 6, 48).unwrap()).unwrap();
    let u = d.robin(&BetaSpec::constant(1.0).unwrap()).unwrap().vector;
    let (v, h) = harmonic_split(&d.stiffness, &u, &d.inner_dofs).unwrap();
    let k = &d.stiffness;
    let uu = k.quad_form(&u).unwrap();
    assert!(k.bilinear(&v, &h).unwrap().abs() <= 1e-12 * uu);
    assert!((k.quad_form(&v).unwrap() + k.quad_form(&h).unwrap() - uu).abs() <= 1e-12 * uu);
    assert!(d.inner_dofs.iter().all(|&i| v[i] == 0.0));

    let ones = vec![1.0; d.num_dofs()];
    let (v, h) = harmonic_split(k, &ones, &d.inner_dofs).unwrap();
    assert!(h.iter().all(|x| (x - 1.0).abs() < 1e-12));
    assert!(v.iter().all(|x| x.abs() < 1e-12));
}

#[test]
fn nested_refinement_never_raises_the_eigenvalue() {
    let square = Outline::Polygon(vec![[1.0, -1.0], [1.0, 1.0], [-1.0, 1.0], [-1.0, -1.0]]);
    let domain = AnnularDomain::new(square, 0.4).unwrap();
    let mut mesh = polar_mesh(&domain, 3, 16).unwrap();
    // without the exact curves refinement keeps the old nodes in place, so the
    // P1 spaces are nested
    mesh.curves = None;
    let beta = BetaSpec::piecewise(vec![0.0, 3.0], vec![1.0, 3.0]).unwrap();
    let mut prev = (f64::INFINITY, f64::INFINITY);
    for _ in 0..3 {
        let d = Discretization::new(mesh.clone()).unwrap();
        let sigma = d.robin(&BetaSpec::constant(2.0).unwrap()).unwrap().value;
        let sd = d.dirichlet().unwrap().value;
        assert!(sigma <= prev.0 * (1.0 + 1e-12), "{sigma} > {}", prev.0);
        assert!(sd <= prev.1 * (1.0 + 1e-12));
        assert!(d.robin(&beta).unwrap().value <= sd);
        prev = (sigma, sd);
        mesh = mesh.uniform_refine().unwrap();
    }
}

#[test]
fn mesh_round_trip_gives_identical_eigenvalue() {
    let domain = ellipse();
    let mesh = polar_mesh(&domain, 6, 48).unwrap();
    let text = write_mesh(&mesh);
    let back = read_mesh(&text).unwrap();
    assert_eq!(back.vertices, mesh.vertices);
    assert_eq!(back.triangles, mesh.triangles);
    let beta = BetaSpec::piecewise(vec![0.0, std::f64::consts::PI], vec![2.0, 4.0]).unwrap();
    let a = Discretization::new(mesh).unwrap().robin(&beta).unwrap().value;
    let b = Discretization::new(back).unwrap().robin(&beta).unwrap().value;
    assert_eq!(a.to_bits(), b.to_bits());
    assert_eq!(write_mesh(&read_mesh(&text).unwrap()), text);
}

#[test]
fn dumbbell_mesh_solves() {
    let domain = steklov_robin::verify::fixture("dumbbell.json")
        .unwrap()
        .build()
        .unwrap()
        .0;
    let mesh = build_mesh(&domain, &MeshParams::default()).unwrap();
    assert!(mesh.boundary_length(BoundaryTag::Inner) > 0.0);
    let d = Discretization::new(mesh).unwrap();
    let s = d.robin(&BetaSpec::constant(1.0).unwrap()).unwrap();
    let bound = 2.0 * std::f64::consts::PI.powi(2) * 0.2;
    assert!(s.value > 0.0 && s.value <= bound);
}

#[test]
fn rough_bound_is_nearly_tight_for_tiny_weight() {
    let d = Discretization::new(polar_mesh(&ellipse(), 8, 64).unwrap()).unwrap();
    let beta = BetaSpec::constant(1e-3).unwrap();
    let sigma = d.robin(&beta).unwrap().value;
    let ratio = sigma / (d.weight_norm(&beta).unwrap() / d.outer_perimeter());
    assert!((0.9..=1.0 + 1e-9).contains(&ratio), "{ratio}");
}
