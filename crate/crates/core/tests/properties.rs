use proptest::prelude::*;
use steklov_robin::geometry::{AnnularDomain, BetaSpec, Outline, RadialOutline};
use steklov_robin::mesh::polar_mesh;
use steklov_robin::radial_oracle::{
    q_shell, shell_bc_residuals, shell_reciprocal_defect, sigma_beta_shell, sigma_dirichlet_shell, ShellSpec,
};
use steklov_robin::spectral::Discretization;

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn shell_oracle_is_consistent(n in 2u32..6, ratio in 0.05f64..0.95, outer in 0.5f64..4.0, lb in -3.0f64..3.0) {
        let beta = 10f64.powf(lb);
        let spec = ShellSpec::new(n, ratio * outer, outer).unwrap();
        let (a, b) = shell_bc_residuals(&spec, beta).unwrap();
        prop_assert!(a.abs() <= 1e-12 && b.abs() <= 1e-12);
        let s = sigma_beta_shell(&spec, beta).unwrap();
        let sd = sigma_dirichlet_shell(&spec).unwrap();
        prop_assert!(s > 0.0 && s < sd);
        let q = q_shell(&spec).unwrap();
        prop_assert!((1.0 / s - 1.0 / sd - 1.0 / (beta * q)).abs() <= 1e-9 / s);
        prop_assert!(shell_reciprocal_defect(&spec, beta).unwrap().abs() <= 1e-9);
        prop_assert!(sigma_beta_shell(&spec, 2.0 * beta).unwrap() > s);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, ..ProptestConfig::default() })]

    #[test]
    fn discrete_inequalities_on_random_outlines(
        c2 in -0.25f64..0.25,
        s3 in -0.1f64..0.1,
        r in 0.2f64..0.6,
        b in 0.1f64..20.0,
        b2 in 0.1f64..20.0,
    ) {
        let o = RadialOutline::new(1.5, vec![0.0, c2], vec![0.0, 0.0, s3]).unwrap();
        let d = Discretization::new(polar_mesh(&AnnularDomain::new(Outline::Radial(o), r).unwrap(), 4, 32).unwrap()).unwrap();
        let beta = BetaSpec::piecewise(vec![0.0, 2.0], vec![b, b2]).unwrap();
        let s = d.robin(&beta).unwrap();
        let sd = d.dirichlet().unwrap().value;
        let q = d.q_beta(&beta).unwrap().value;
        // the beta-weighted mean constraint; the plain one is not enough for
        // non-constant weights
        let mu = d.mu1_weighted(&beta).unwrap().value;
        let m = d.weight_norm(&beta).unwrap();
        let p = d.outer_perimeter();
        let tol = 1e-6;
        prop_assert!(s.value <= sd * (1.0 + tol));
        prop_assert!(s.value <= m / p * (1.0 + tol));
        prop_assert!(1.0 / s.value <= (1.0 / mu + p / m) * (1.0 + tol));
        prop_assert!(1.0 / s.value <= (1.0 / sd + 1.0 / q) * (1.0 + tol));
        prop_assert!(d.outer_dofs.iter().all(|&i| s.vector[i] > 0.0));
        let x: Vec<f64> = (0..d.num_dofs()).map(|i| 1.0 + (i as f64).sin()).collect();
        prop_assert!(d.rayleigh(&beta, &x).unwrap() >= s.value * (1.0 - 1e-10));
        let c = BetaSpec::constant(b).unwrap();
        prop_assert!(1.0 / d.robin(&c).unwrap().value <= (1.0 / d.mu1().unwrap().value + p / d.weight_norm(&c).unwrap()) * (1.0 + tol));
    }
}
