use proptest::prelude::*;
use rug::{Float, Rational};
use symplectic_zeta::sp4::{big_z, evaluate_value, xi_sp4, FunctionId};
use symplectic_zeta::special::{chi, xi};
use symplectic_zeta::weyl::*;
use symplectic_zeta::{BigComplex, PrecisionContext};

fn ctx() -> PrecisionContext {
    PrecisionContext::new(128).unwrap()
}

fn rel_err(a: &BigComplex, b: &BigComplex) -> f64 {
    let scale = a.abs().to_f64().max(b.abs().to_f64()).max(1e-300);
    a.dist(b).to_f64() / scale
}

fn far_from(re: f64, im: f64, points: &[f64], gap: f64) -> bool {
    points.iter().all(|p| (re - p).hypot(im) >= gap)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn arithmetic_commutes(a in -1e6f64..1e6, b in -1e6f64..1e6, c in -1e3f64..1e3, d in -1e3f64..1e3) {
        let k = ctx();
        let z = k.complex(a, b);
        let w = k.complex(c, d);
        prop_assert!((&z + &w).dist(&(&w + &z)).is_zero());
        prop_assert!((&z * &w).dist(&(&w * &z)).is_zero());
    }

    #[test]
    fn exp_inverts_log(mag in -20i32..20, frac in 1.0f64..2.0, angle in -3.1f64..3.1) {
        let k = ctx();
        let r = frac * 2f64.powi(mag);
        let z = k.complex(r * angle.cos(), r * angle.sin());
        let back = z.ln().unwrap().exp();
        let ulp = Float::with_val(64, z.abs()) * k.epsilon();
        prop_assert!(back.dist(&z) <= ulp * 4u32);
    }

    #[test]
    fn xi_reflection_and_conjugation(re in -20.0f64..20.0, im in -30.0f64..30.0) {
        prop_assume!(far_from(re, im, &[0.0, 1.0], 0.1));
        let k = ctx();
        let s = k.complex(re, im);
        let a = xi(&s, &k).value;
        let b = xi(&s.int_sub(1), &k).value;
        let tol = k.pow2(-(k.bits() as i32) + 16).to_f64() * a.abs().to_f64().max(1.0);
        prop_assert!(a.dist(&b).to_f64() <= tol);
        let c = xi(&s.conj(), &k).value;
        prop_assert!(rel_err(&c, &a.conj()) <= 4.0 * k.epsilon().to_f64());
    }

    #[test]
    fn chi_ratio_below_one(re in 0.01f64..50.0, im in -80.0f64..80.0) {
        prop_assume!(re.hypot(im) <= 100.0);
        let k = ctx();
        let s = k.complex(re, im);
        let ratio = Float::with_val(128, chi(&s, &k).abs() / chi(&s.add_int(1), &k).abs());
        prop_assert!(ratio < 1);
    }

    #[test]
    fn rank_two_zeta_is_symmetric(re in -6.0f64..7.0, im in -20.0f64..20.0) {
        prop_assume!(far_from(re, im, &[-1.0, 0.0, 0.5, 1.0, 2.0], 0.1));
        let k = ctx();
        let s = k.complex(re, im);
        let a = xi_sp4(&s, &k).value;
        let b = xi_sp4(&s.int_sub(1), &k).value;
        prop_assert!(rel_err(&a, &b) <= k.pow2(-(k.bits() as i32) + 20).to_f64());
    }

    #[test]
    fn z_is_antisymmetric_and_imaginary_on_the_line(re in -5.0f64..6.0, im in 0.1f64..60.0) {
        let k = ctx();
        let s = k.complex(re, im);
        let sum = &big_z(&s, &k) + &big_z(&s.int_sub(1), &k);
        let scale = big_z(&s, &k).abs().to_f64().max(1e-300);
        prop_assert!(sum.abs().to_f64() <= k.pow2(-(k.bits() as i32) + 20).to_f64() * scale);
        let line = big_z(&k.complex(0.5, im), &k);
        let bound = k.pow2(-(k.bits() as i32) + 20).to_f64() * line.abs().to_f64();
        prop_assert!(line.re.to_f64().abs() <= bound);
    }

    #[test]
    fn functions_commute_with_conjugation(re in -4.0f64..5.0, im in 0.2f64..30.0, which in 0usize..8) {
        let ids = [FunctionId::Xi, FunctionId::Chi, FunctionId::XiSp4, FunctionId::Z, FunctionId::F, FunctionId::G, FunctionId::U, FunctionId::V];
        let k = ctx();
        let s = k.complex(re, im);
        let a = evaluate_value(ids[which], &s, &k).unwrap();
        let b = evaluate_value(ids[which], &s.conj(), &k).unwrap();
        prop_assert!(rel_err(&b, &a.conj()) <= 16.0 * k.epsilon().to_f64());
    }

    #[test]
    fn doubling_precision_is_stable(re in 1.0f64..4.0, im in 1.0f64..25.0) {
        let lo = ctx();
        let hi = lo.with_bits(2 * lo.bits()).unwrap();
        let a = xi_sp4(&lo.complex(re, im), &lo).value;
        let b = xi_sp4(&hi.complex(re, im), &hi).value;
        prop_assert!(rel_err(&a, &b) < lo.pow2(-(lo.bits() as i32) + 8).to_f64());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn primitive_forms_rescale_to_the_original(c in prop::collection::vec(-9i64..9, 3), num in -30i64..30, den in 1i64..7) {
        let f = LinearForm::new(c, Rational::from((num, den)));
        let (scale, p) = f.primitive();
        let back = LinearForm::new(
            p.coeffs.iter().map(|x| (Rational::from(*x) * &scale).numer().to_i64().unwrap()).collect(),
            Rational::from(&p.constant * &scale),
        );
        if !f.is_constant() || f.constant != 0 {
            prop_assert_eq!(back, f);
            prop_assert!(p.leading().map_or(p.constant > 0, |l| l > 0));
        }
    }

    #[test]
    fn weyl_action_is_a_group_action(a in 0usize..48, b in 0usize..48, v in prop::collection::vec(-5i64..5, 3)) {
        let g = enumerate_weyl(3).unwrap();
        let form = LinearForm::new(v, 0);
        let ab = g[a].compose(&g[b]);
        let lhs = weyl_action(&ab, &form).unwrap();
        let rhs = weyl_action(&g[a], &weyl_action(&g[b], &form).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        let back = weyl_action(&g[a].inverse(), &weyl_action(&g[a], &form).unwrap()).unwrap();
        prop_assert_eq!(back, form);
    }

    #[test]
    fn weyl_elements_permute_roots(a in 0usize..48) {
        let rs = root_system_c(3).unwrap();
        let w = &enumerate_weyl(3).unwrap()[a];
        for r in &rs.positive_roots {
            let image = w.apply(r);
            let neg: Vec<i64> = image.iter().map(|x| -x).collect();
            prop_assert!(rs.positive_roots.contains(&image) || rs.positive_roots.contains(&neg));
        }
    }

    #[test]
    fn residue_is_linear(a in 0usize..48, b in 0usize..48, num in -7i64..7, den in 1i64..5, step in 0usize..2) {
        prop_assume!(num != 0);
        let rs = root_system_c(3).unwrap();
        let g = enumerate_weyl(3).unwrap();
        let k = Rational::from((num, den));
        let t1 = build_period_term(&g[a], &rs).unwrap();
        let t2 = build_period_term(&g[b], &rs).unwrap();
        let s1 = SymbolicSum::from_terms(3, [t1.clone()]).unwrap();
        let s2 = SymbolicSum::from_terms(3, [t2.clone()]).unwrap();
        let combined = SymbolicSum::from_terms(3, [t1.scaled(&k), t2]).unwrap();
        // both steps make sense on the raw sum; the second takes z2-z3=1 first
        let lhs = take_residue(&combined, step).unwrap();
        let rhs = take_residue(&s1, step).unwrap().scale(&k).add(&take_residue(&s2, step).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn reflection_is_an_involution(c in -6i64..6) {
        let xi_o = normalize_to_zeta(&assemble_period(2).unwrap(), 2).unwrap().xi_o;
        let c = Rational::from(c);
        let twice = reflect_variable(&reflect_variable(&xi_o, &c).unwrap(), &c).unwrap();
        prop_assert_eq!(twice, xi_o);
    }
}
