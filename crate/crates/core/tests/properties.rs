use proptest::prelude::*;
use veelab::catalog::Params;
use veelab::exact::ExactScalar;
use veelab::geometry::{positive_normalize, Vector, VectorConfig, C64};
use veelab::prepotential::{pole_clearance, third_derivative_tensor, DerivativeTensor, Kernel};
use veelab::strings::alpha_strings;
use veelab::vee_check::{condition2_residual, euclidean_vee_residual};

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

prop_compose! {
    fn int_config(max_len: usize)(dim in 2usize..=3)(
        rows in prop::collection::vec(prop::collection::vec(-2i64..=2, dim), 1..=max_len),
        mults in prop::collection::vec(-3.0f64..3.0, max_len),
        dim in Just(dim),
    ) -> VectorConfig {
        let rows: Vec<Vec<i64>> = rows.into_iter().filter(|r| r.iter().any(|&x| x != 0)).collect();
        let rows = if rows.is_empty() { vec![vec![1; dim]] } else { rows };
        let n = rows.len();
        VectorConfig::new(dim, rows.iter().map(|r| Vector::from_ints(r)).collect(), mults[..n].iter().map(|&m| c(m)).collect()).unwrap()
    }
}

fn point(dim: usize) -> impl Strategy<Value = Vec<C64>> {
    prop::collection::vec((-1.0f64..1.0, 0.2f64..0.6), dim).prop_map(|v| v.into_iter().map(|(re, im)| C64::new(re, im)).collect())
}

fn config_and_point(max_len: usize) -> impl Strategy<Value = (VectorConfig, Vec<C64>)> {
    int_config(max_len).prop_flat_map(|cfg| {
        let d = cfg.dim();
        (Just(cfg), point(d))
    })
}

fn tensor(cfg: &VectorConfig, x: &[C64]) -> Option<DerivativeTensor> {
    (pole_clearance(cfg, &Kernel::Trig, x) > 1e-2).then(|| third_derivative_tensor(cfg, &Kernel::Trig, x).unwrap())
}

fn exact_scalar() -> impl Strategy<Value = ExactScalar> {
    prop::collection::vec((-6i64..=6, 1i64..=5), 4).prop_map(|t| {
        let roots = [ExactScalar::one(), ExactScalar::sqrt2(), ExactScalar::sqrt3(), ExactScalar::sqrt6()];
        t.iter().zip(&roots).fold(ExactScalar::zero(), |acc, ((p, q), r)| &acc + &(&ExactScalar::from_ratio(*p, *q) * r))
    })
}

fn brute_strings(cfg: &VectorConfig, alpha: usize) -> Vec<Vec<usize>> {
    let a = cfg.vector(alpha).as_exact().unwrap().to_vec();
    let ratio = |v: &[ExactScalar]| -> Option<ExactScalar> {
        let k = a.iter().position(|x| !x.is_zero())?;
        let r = &v[k] / &a[k];
        v.iter().zip(&a).all(|(x, y)| *x == &r * y).then_some(r)
    };
    let int_multiple = |v: &[ExactScalar]| v.iter().all(ExactScalar::is_zero) || ratio(v).is_some_and(|r| r.is_integer());
    let rest: Vec<usize> = (0..cfg.len()).filter(|&i| ratio(cfg.vector(i).as_exact().unwrap()).is_none()).collect();
    let mut comps: Vec<Vec<usize>> = rest.iter().map(|&i| vec![i]).collect();
    // merge until stable
    loop {
        let mut merged = false;
        'outer: for x in 0..comps.len() {
            for y in x + 1..comps.len() {
                let linked = comps[x].iter().any(|&i| {
                    comps[y].iter().any(|&j| {
                        let (u, v) = (cfg.vector(i).as_exact().unwrap(), cfg.vector(j).as_exact().unwrap());
                        let s: Vec<ExactScalar> = u.iter().zip(v).map(|(p, q)| p + q).collect();
                        let d: Vec<ExactScalar> = u.iter().zip(v).map(|(p, q)| p - q).collect();
                        int_multiple(&s) || int_multiple(&d)
                    })
                });
                if linked {
                    let other = comps.remove(y);
                    comps[x].extend(other);
                    merged = true;
                    break 'outer;
                }
            }
        }
        if !merged {
            break;
        }
    }
    for comp in &mut comps {
        comp.sort();
    }
    comps.sort();
    comps
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tensor_is_totally_symmetric((cfg, x) in config_and_point(8)) {
        if let Some(t) = tensor(&cfg, &x) {
            let n = cfg.dim();
            for i in 0..n { for j in 0..n { for k in 0..n {
                prop_assert_eq!(t.get(i, j, k), t.get(j, k, i));
                prop_assert_eq!(t.get(i, j, k), t.get(k, j, i));
            }}}
        }
    }

    #[test]
    fn commutator_entries_exchange((cfg, x) in config_and_point(8)) {
        if let Some(t) = tensor(&cfg, &x) {
            let n = cfg.dim();
            let scale = 1.0 + t.matrices().iter().map(|m| m.norm_squared()).sum::<f64>();
            for a in 0..n { for b in 0..n {
                let ab = t.matrix(a) * t.matrix(b) - t.matrix(b) * t.matrix(a);
                for i in 0..n { for j in 0..n {
                    let ij = t.matrix(i) * t.matrix(j) - t.matrix(j) * t.matrix(i);
                    prop_assert!((ab[(i, j)] - ij[(a, b)]).norm() / scale < 1e-12);
                }}
            }}
        }
    }

    #[test]
    fn total_commutator_is_rotation_invariant((cfg, x) in config_and_point(6), angle in 0.0f64..6.3) {
        let n = cfg.dim();
        let mut q = nalgebra::DMatrix::<C64>::identity(n, n);
        let (s, co) = angle.sin_cos();
        q[(0, 0)] = c(co); q[(0, 1)] = c(-s); q[(1, 0)] = c(s); q[(1, 1)] = c(co);
        let moved = cfg.transformed(&q).unwrap();
        let y: Vec<C64> = (&q * nalgebra::DVector::from_column_slice(&x)).iter().copied().collect();
        if let (Some(t), Some(u)) = (tensor(&cfg, &x), tensor(&moved, &y)) {
            let total = |t: &DerivativeTensor| {
                let f = t.matrices();
                (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| (&f[i] * &f[j] - &f[j] * &f[i]).norm_squared()).sum::<f64>().sqrt()
            };
            let (a, b) = (total(&t), total(&u));
            prop_assert!((a - b).abs() <= 1e-9 * (1.0 + a));
        }
    }

    #[test]
    fn sign_flips_change_nothing((cfg, x) in config_and_point(8), flips in prop::collection::vec(any::<bool>(), 8)) {
        let vectors: Vec<Vector> = cfg.vectors().iter().zip(&flips).map(|(v, &f)| if f { v.neg() } else { v.clone() }).collect();
        let flipped = VectorConfig::new(cfg.dim(), vectors, cfg.multiplicities().to_vec()).unwrap();
        prop_assert_eq!(euclidean_vee_residual(&flipped, 0.0).max_residual, euclidean_vee_residual(&cfg, 0.0).max_residual);
        prop_assert_eq!(positive_normalize(&flipped), positive_normalize(&cfg));
        if let (Some(t), Some(u)) = (tensor(&cfg, &x), tensor(&flipped, &x)) {
            for (a, b) in t.matrices().iter().zip(u.matrices()) {
                prop_assert!((a - b).norm() <= 1e-12 * (1.0 + a.norm()));
            }
        }
    }

    #[test]
    fn normalization_is_idempotent(cfg in int_config(10)) {
        let once = positive_normalize(&cfg);
        prop_assert_eq!(positive_normalize(&once), once);
    }

    #[test]
    fn condition2_is_quadratic(cfg in int_config(8), re in -3.0f64..3.0, im in -3.0f64..3.0) {
        let lambda = C64::new(re, im);
        let base = condition2_residual(&cfg);
        let scaled = condition2_residual(&cfg.scaled_multiplicities(lambda));
        prop_assert!((scaled - lambda.norm_sqr() * base).abs() <= 1e-12 * (1.0 + lambda.norm_sqr() * base));
    }

    #[test]
    fn strings_match_brute_force(cfg in int_config(12)) {
        for alpha in 0..cfg.len() {
            let mut got: Vec<Vec<usize>> = alpha_strings(&cfg, alpha).unwrap().into_iter().map(|s| s.members).collect();
            got.sort();
            prop_assert_eq!(got, brute_strings(&cfg, alpha));
        }
    }

    #[test]
    fn exact_field_axioms(a in exact_scalar(), b in exact_scalar()) {
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        prop_assert_eq!(&a * &b, &b * &a);
        if !b.is_zero() {
            prop_assert_eq!(&(&a * &b) / &b, a.clone());
        }
        prop_assert!(((&a * &b).to_f64() - a.to_f64() * b.to_f64()).abs() <= 1e-9 * (1.0 + (a.to_f64() * b.to_f64()).abs()));
        prop_assert_eq!(a.to_string().parse::<ExactScalar>().unwrap(), a.clone());
        prop_assert_eq!(a.signum(), if a.is_zero() { 0 } else if a.to_f64() > 0.0 { 1 } else { -1 });
    }

    #[test]
    fn params_round_trip(r in -50i32..50, q in -50i32..50, m in prop::collection::vec(1u8..5, 1..4)) {
        let m: Vec<f64> = m.into_iter().map(f64::from).collect();
        let p = Params::new().with("r", f64::from(r) / 4.0).with("q", f64::from(q)).with_list("m", &m);
        prop_assert_eq!(p.to_string().parse::<Params>().unwrap(), p);
    }
}
