use proptest::prelude::*;

use areaext::clifford::{CliffordRep, Sector};
use areaext::exterior::{
    hodge_star, orientation_flip, star_trace, wedge2, wedge_vectors, CurvatureOperator, Plane, BIANCHI_TOL,
};
use areaext::sampling::{
    gaussian_matrix, random_area_nonincreasing, random_bianchi, random_map, random_mixed_bianchi, random_psd,
    random_rotation, random_symmetric, rng_for,
};
use areaext::smallmat::{dot, herm_eigen, svd, sym_eigen, CMatrix, RealMatrix};
use areaext::thorpe::{shifted_min_eigenvalue, tau_interval};
use areaext::weitzenbock::{build_r_endo, build_r_endo_in_basis, build_t_endo, build_t_endo_in_basis, check_rt_identity};

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

fn diff(a: &RealMatrix, b: &RealMatrix) -> f64 {
    (a - b).frobenius_norm()
}

proptest! {
    #![proptest_config(config(200))]

    #[test]
    fn wedge2_is_functorial(seed in any::<u64>()) {
        let mut rng = rng_for(seed, 0);
        let a = random_map(&mut rng);
        let b = random_map(&mut rng);
        let lhs = wedge2(&(&a * &b));
        let rhs = &wedge2(&a) * &wedge2(&b);
        prop_assert!(diff(&lhs, &rhs) <= 1e-10 * (1.0 + rhs.frobenius_norm()));
    }

    #[test]
    fn wedge2_commutes_with_transpose(seed in any::<u64>()) {
        let l = random_map(&mut rng_for(seed, 1));
        prop_assert!(diff(&wedge2(&l.transpose()), &wedge2(&l).transpose()) <= 1e-12 * (1.0 + l.frobenius_norm().powi(2)));
    }

    #[test]
    fn decomposable_two_vectors_satisfy_pluecker(seed in any::<u64>()) {
        let mut rng = rng_for(seed, 2);
        let g = gaussian_matrix(2, 4, &mut rng);
        let w = wedge_vectors(g.row(0), g.row(1));
        // ⟨ω, ★ω⟩ = 2(ω₀ω₁ + ω₂ω₃ + ω₄ω₅) vanishes on decomposable ω.
        let star = hodge_star().mul_vec(&w);
        prop_assert!(dot(&w, &star).abs() <= 1e-12 * (1.0 + dot(&w, &w)));
        let plane = Plane::from_vectors(g.row(0), g.row(1)).unwrap();
        let s = plane.two_vector();
        prop_assert!((dot(&s, &s) - 1.0).abs() <= 1e-12);
        let (x, y) = plane.spanning_vectors();
        let back = wedge_vectors(&x, &y);
        prop_assert!(back.iter().zip(&s).all(|(a, b)| (a - b).abs() <= 1e-10));
    }

    #[test]
    fn bianchi_projection_is_an_idempotent_projection(seed in any::<u64>()) {
        let s = random_symmetric(6, &mut rng_for(seed, 3));
        let r = CurvatureOperator::bianchi_projection(&s).unwrap();
        prop_assert!(r.bianchi_residual() <= BIANCHI_TOL * (1.0 + s.frobenius_norm()));
        let again = CurvatureOperator::bianchi_projection(r.matrix()).unwrap();
        prop_assert!(diff(again.matrix(), r.matrix()) <= 1e-13 * (1.0 + s.frobenius_norm()));
        // The removed part is a multiple of ★.
        let removed = &s - r.matrix();
        let c = star_trace(&s) / 6.0;
        prop_assert!(diff(&removed, &hodge_star().scale(c)) <= 1e-12 * (1.0 + s.frobenius_norm()));
    }

    #[test]
    fn ricci_trace_is_scalar_curvature(seed in any::<u64>()) {
        let r = random_bianchi(&mut rng_for(seed, 4));
        let ric = r.ricci();
        prop_assert!((ric.trace() - r.scal()).abs() <= 1e-10 * (1.0 + r.frobenius_norm()));
        prop_assert!((r.scal() - 2.0 * r.matrix().trace()).abs() <= 1e-12 * (1.0 + r.frobenius_norm()));
        prop_assert!(ric.asymmetry() <= 1e-12 * (1.0 + ric.frobenius_norm()));
    }

    #[test]
    fn shifted_min_eigenvalue_is_concave(seed in any::<u64>(), a in -3.0..3.0f64, b in -3.0..3.0f64) {
        let r = random_mixed_bianchi(&mut rng_for(seed, 5));
        let f = |t: f64| shifted_min_eigenvalue(r.matrix(), t);
        let mid = f(0.5 * (a + b));
        prop_assert!(mid >= 0.5 * (f(a) + f(b)) - 1e-10 * (1.0 + r.spectral_norm()));
    }

    #[test]
    fn orientation_flip_negates_the_interval(seed in any::<u64>()) {
        let r = random_mixed_bianchi(&mut rng_for(seed, 6));
        let d = orientation_flip();
        prop_assert!(diff(&(&(&d * &hodge_star()) * &d), &hodge_star().scale(-1.0)) == 0.0);
        let fwd = tau_interval(&r);
        let rev = tau_interval(&r.reversed());
        match (fwd.bounds, rev.bounds) {
            (Some((a, b)), Some((c, e))) => {
                prop_assert!((a + e).abs() <= 1e-6 && (b + c).abs() <= 1e-6);
            }
            (None, None) => {}
            (x, y) => {
                // Only near-degenerate peaks may land on different sides.
                prop_assert!(fwd.peak_value.abs() <= 1e-8 * fwd.scale, "{x:?} vs {y:?}");
            }
        }
    }

    #[test]
    fn svd_is_compatible_with_exterior_square(seed in any::<u64>()) {
        let l = random_map(&mut rng_for(seed, 7));
        let s = svd(&l).unwrap();
        prop_assert!(diff(&s.reconstruct(), &l) <= 1e-10 * (1.0 + l.frobenius_norm()));
        let mut products = Vec::new();
        for i in 0..4 {
            for j in i + 1..4 {
                products.push(s.singular_values[i] * s.singular_values[j]);
            }
        }
        products.sort_by(|a, b| b.total_cmp(a));
        let w = svd(&wedge2(&l)).unwrap();
        for (a, b) in w.singular_values.iter().zip(&products) {
            prop_assert!((a - b).abs() <= 1e-9 * (1.0 + products[0]));
        }
        for i in 0..4 {
            let gram = (&l.transpose() * &l).mul_vec(&s.right.column(i));
            let lam2 = s.singular_values[i].powi(2);
            prop_assert!(gram.iter().zip(s.right.column(i)).all(|(g, v)| (g - lam2 * v).abs() <= 1e-9 * (1.0 + lam2)));
        }
    }

    #[test]
    fn symmetric_eigendecomposition_reconstructs(seed in any::<u64>(), n in 2usize..=6) {
        let m = random_symmetric(n, &mut rng_for(seed, 8));
        let e = sym_eigen(&m).unwrap();
        prop_assert!(diff(&e.reconstruct(), &m) <= 1e-10 * m.frobenius_norm());
        prop_assert!(diff(&(&e.vectors.transpose() * &e.vectors), &RealMatrix::identity(n)) <= 1e-12);
        prop_assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn hermitian_eigenpairs(seed in any::<u64>()) {
        let mut rng = rng_for(seed, 9);
        let a = gaussian_matrix(4, 4, &mut rng);
        let b = gaussian_matrix(4, 4, &mut rng);
        let z = CMatrix::from_fn(4, 4, |i, j| num_complex::Complex64::new(a[(i, j)] + a[(j, i)], b[(i, j)] - b[(j, i)]));
        let e = herm_eigen(&z).unwrap();
        for k in 0..4 {
            let v = e.vector(k);
            let zv = z.mul_vec(&v);
            let err: f64 = zv.iter().zip(&v).map(|(x, y)| (x - y * e.values[k]).norm_sqr()).sum::<f64>().sqrt();
            prop_assert!(err <= 1e-10 * z.frobenius_norm());
        }
    }
}

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn endomorphisms_commute_with_chirality(seed in any::<u64>()) {
        let mut rng = rng_for(seed, 10);
        let r = random_bianchi(&mut rng);
        let l = random_map(&mut rng);
        let rep = CliffordRep::standard();
        let pp = rep.proj_plus.kron(&rep.proj_plus);
        let pw = rep.proj_plus.kron(&CMatrix::identity(4));
        let pv = CMatrix::identity(4).kron(&rep.proj_plus);
        for e in [build_r_endo(&r, &l).unwrap(), build_t_endo(r.matrix(), &l).unwrap()] {
            let scale = 1.0 + e.frobenius_norm();
            for p in [&pp, &pw, &pv] {
                prop_assert!(e.matrix.commutator(p).frobenius_norm() <= 1e-12 * scale);
            }
            prop_assert!(e.hermitian_defect() <= 1e-10 * scale);
            prop_assert!(e.sector_mixing() <= 1e-12 * scale);
        }
    }

    #[test]
    fn endomorphisms_are_basis_independent(seed in any::<u64>()) {
        let mut rng = rng_for(seed, 11);
        let r = random_bianchi(&mut rng);
        let l = random_map(&mut rng);
        let basis = random_rotation(6, &mut rng);
        let a = build_r_endo(&r, &l).unwrap();
        let b = build_r_endo_in_basis(&r, &l, &basis).unwrap();
        prop_assert!((&a.matrix - &b.matrix).frobenius_norm() <= 1e-10 * (1.0 + a.frobenius_norm()));
        let s = random_symmetric(6, &mut rng);
        let a = build_t_endo(&s, &l).unwrap();
        let b = build_t_endo_in_basis(&s, &l, &basis).unwrap();
        prop_assert!((&a.matrix - &b.matrix).frobenius_norm() <= 1e-10 * (1.0 + a.frobenius_norm()));
    }

    #[test]
    fn t_endo_is_linear_in_the_operator(seed in any::<u64>(), c in -2.0..2.0f64) {
        let mut rng = rng_for(seed, 12);
        let a = random_symmetric(6, &mut rng);
        let b = random_symmetric(6, &mut rng);
        let l = random_map(&mut rng);
        let combo = &a + &b.scale(c);
        let lhs = build_t_endo(&combo, &l).unwrap().matrix;
        let rhs = &build_t_endo(&a, &l).unwrap().matrix + &build_t_endo(&b, &l).unwrap().matrix.scale_real(c);
        prop_assert!((&lhs - &rhs).frobenius_norm() <= 1e-10 * (1.0 + lhs.frobenius_norm()));
    }

    #[test]
    fn rt_identity_holds(seed in any::<u64>()) {
        let mut rng = rng_for(seed, 13);
        let r = random_bianchi(&mut rng);
        let l = random_map(&mut rng);
        let c = check_rt_identity(&r, &l).unwrap();
        prop_assert!(c.passed(), "{c:?}");
    }

    #[test]
    fn psd_operators_give_psd_t(seed in any::<u64>()) {
        let mut rng = rng_for(seed, 14);
        let s = random_psd(6, &mut rng);
        let l = random_area_nonincreasing(&mut rng);
        let t = build_t_endo(&s, &l).unwrap();
        let scale = 1.0 + s.frobenius_norm();
        for sector in Sector::ALL {
            prop_assert!(t.min_eigenvalue_on(sector) >= -1e-9 * scale);
        }
    }
}
