use blockfd::analysis::order::fit_order;
use blockfd::postprocess::FilterSpec;
use blockfd::timestep::{evolve, NoForcing};
use blockfd::{BlockGrid, GridFunction, IntegratorSpec, Method, SchemeId};
use proptest::prelude::*;

fn scheme() -> impl Strategy<Value = SchemeId> {
    prop::sample::select(SchemeId::ALL.to_vec())
}

fn operator(s: SchemeId, c: f64) -> blockfd::StencilOperator {
    s.build_on(16, c).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn operators_are_linear(
        s in scheme(),
        c in -0.45f64..0.45,
        a in -3.0f64..3.0,
        b in -3.0f64..3.0,
        seed in prop::collection::vec(-1.0f64..1.0, 102),
    ) {
        let op = operator(s, c);
        let m = op.grid().len();
        let u = GridFunction::new(*op.grid(), seed[..m].to_vec()).unwrap();
        let v = GridFunction::new(*op.grid(), seed[seed.len() - m..].to_vec()).unwrap();
        let combo: Vec<f64> = u.values().iter().zip(v.values()).map(|(x, y)| a * x + b * y).collect();
        let lhs = op.apply(&GridFunction::new(*op.grid(), combo).unwrap()).unwrap();
        let (au, bv) = (op.apply(&u).unwrap(), op.apply(&v).unwrap());
        let scale = op.scale().abs() * 64.0;
        for i in 0..m {
            let rhs = a * au.values()[i] + b * bv.values()[i];
            prop_assert!((lhs.values()[i] - rhs).abs() <= 1e-12 * scale);
        }
    }

    #[test]
    fn apply_matches_dense_assembly(s in scheme(), c in -0.45f64..0.45, seed in prop::collection::vec(-1.0f64..1.0, 51)) {
        let op = operator(s, c);
        let m = op.grid().len();
        let v = GridFunction::new(*op.grid(), seed[..m].to_vec()).unwrap();
        let dense = op.to_dense();
        let out = op.apply(&v).unwrap();
        let want = &dense * nalgebra::DVector::from_column_slice(v.values());
        let scale = want.amax().max(1.0);
        for i in 0..m {
            prop_assert!((out.values()[i] - want[i]).abs() <= 1e-13 * scale);
        }
    }

    #[test]
    fn block_shift_equivariance(s in scheme(), c in -0.45f64..0.45, seed in prop::collection::vec(-1.0f64..1.0, 51)) {
        let op = operator(s, c);
        let m = op.grid().len();
        let p = op.period();
        let v: Vec<f64> = seed[..m].to_vec();
        let shifted: Vec<f64> = (0..m).map(|i| v[(i + p) % m]).collect();
        let a = op.apply(&GridFunction::new(*op.grid(), v).unwrap()).unwrap();
        let b = op.apply(&GridFunction::new(*op.grid(), shifted).unwrap()).unwrap();
        for i in 0..m {
            prop_assert!((a.values()[(i + p) % m] - b.values()[i]).abs() <= 1e-12 * op.scale().abs() * 64.0);
        }
    }

    #[test]
    fn constants_map_to_zero(s in scheme(), c in -2.0f64..2.0, k in -5.0f64..5.0) {
        prop_assume!(s != SchemeId::Perturbed);
        let op = operator(s, c);
        let out = op.apply(&GridFunction::sample(*op.grid(), |_| k)).unwrap();
        prop_assert!(out.values().iter().all(|v| *v == 0.0));
    }

    #[test]
    fn evolution_is_linear(a in -4.0f64..4.0, seed in prop::collection::vec(-1.0f64..1.0, 34)) {
        let g = BlockGrid::new(16, 2).unwrap();
        let op = SchemeId::Block2.build(g, -0.25).unwrap();
        let v0 = GridFunction::new(g, seed).unwrap();
        let spec = IntegratorSpec::new(Method::Rk4);
        let base = evolve(&op, &NoForcing, &v0, 0.05, &spec).unwrap().final_state;
        let scaled = evolve(&op, &NoForcing, &v0.scale(a), 0.05, &spec).unwrap().final_state;
        for (x, y) in base.values().iter().zip(scaled.values()) {
            prop_assert!((a * x - y).abs() <= 1e-12 * (1.0 + a.abs()));
        }
    }

    #[test]
    fn spectral_filter_is_idempotent(seed in prop::collection::vec(-1.0f64..1.0, 99), cutoff in 0.05f64..1.0) {
        let g = BlockGrid::new(32, 3).unwrap();
        let f = FilterSpec::SpectralCutoff { cutoff };
        let once = f.apply(&GridFunction::new(g, seed).unwrap()).unwrap();
        let twice = f.apply(&once).unwrap();
        for (x, y) in once.values().iter().zip(twice.values()) {
            prop_assert!((x - y).abs() < 1e-14);
        }
    }

    #[test]
    fn filters_are_linear(seed in prop::collection::vec(-1.0f64..1.0, 132), a in -2.0f64..2.0) {
        let g = BlockGrid::new(32, 2).unwrap();
        let (u, v) = seed.split_at(66);
        for f in [FilterSpec::spectral(), FilterSpec::local()] {
            let sum: Vec<f64> = u.iter().zip(v).map(|(x, y)| a * x + y).collect();
            let lhs = f.apply(&GridFunction::new(g, sum).unwrap()).unwrap();
            let fu = f.apply(&GridFunction::new(g, u.to_vec()).unwrap()).unwrap();
            let fv = f.apply(&GridFunction::new(g, v.to_vec()).unwrap()).unwrap();
            for i in 0..66 {
                prop_assert!((lhs.values()[i] - (a * fu.values()[i] + fv.values()[i])).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn fitted_order_ignores_norm_scaling(
        errs in prop::collection::vec(1e-8f64..1e-2, 4),
        k in 1e-3f64..1e3,
    ) {
        let m = [64.0, 128.0, 256.0, 512.0];
        let scaled: Vec<f64> = errs.iter().map(|e| e * k).collect();
        let a = fit_order(&m, &errs, 0.0);
        let b = fit_order(&m, &scaled, 0.0);
        prop_assert_eq!(&a.used, &b.used);
        prop_assert!((a.order - b.order).abs() < 1e-9);
    }
}
