use std::fmt::Write;

use rug::{Float, Rational};
use symplectic_zeta::sp4::xi_sp4;
use symplectic_zeta::weyl::*;
use symplectic_zeta::{BigComplex, Error, PrecisionContext};

fn golden(name: &str) -> String {
    std::fs::read_to_string(format!("{}/tests/golden/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

#[test]
fn rank_two_tables_match_golden_files() {
    let rs = root_system_c(2).unwrap();
    let (mut contributions, mut residues) = (String::new(), String::new());
    for w in enumerate_weyl(2).unwrap() {
        let t = build_period_term(&w, &rs).unwrap();
        writeln!(contributions, "{w} | {t}").unwrap();
        let r = match term_residue(&t, 0).unwrap() {
            Some(r) => SymbolicSum::from_terms(2, [r])
                .unwrap()
                .restrict_to(1)
                .unwrap()
                .canonical_text(),
            None => "0\n".into(),
        };
        write!(residues, "{w} | {r}").unwrap();
    }
    assert_eq!(contributions, golden("rank2_contributions.txt"));
    assert_eq!(residues, golden("rank2_residues.txt"));
    let zero_rows: Vec<&str> = residues.lines().filter(|l| l.ends_with("| 0")).collect();
    assert_eq!(zero_rows, vec!["c2 | 0", "(12)c2 | 0"]);
}

#[test]
fn rank_two_period_and_zeta_match_golden_files() {
    let p = assemble_period(2).unwrap();
    assert_eq!(p.canonical_text(), golden("rank2_period.txt"));
    let norm = normalize_to_zeta(&p, 2).unwrap();
    assert_eq!(norm.xi_o.canonical_text(), golden("rank2_normalized.txt"));
    let zeta = norm.centred(&Rational::from(-1)).unwrap();
    assert_eq!(zeta.canonical_text(), golden("rank2_zeta.txt"));
    assert!(zeta.diff(&reference_rank_two()).is_empty());
}

#[test]
fn rank_two_symbolic_sum_agrees_with_closed_form() {
    let ctx = PrecisionContext::new(192).unwrap();
    let p = assemble_period(2).unwrap();
    let zeta = normalize_to_zeta(&p, 2).unwrap().centred(&Rational::from(-1)).unwrap();
    let tol = ctx.pow2(-(ctx.bits() as i32) + 24);
    for s in [ctx.complex(3, 1), ctx.complex(0.25, 14), ctx.complex(-1.5, -2.5)] {
        let sym = eval_symbolic(&zeta, std::slice::from_ref(&s), &ctx).unwrap();
        let direct = xi_sp4(&s, &ctx).value;
        let bound = Float::with_val(64, direct.abs() + 1u32) * &tol;
        assert!(sym.dist(&direct) <= bound, "{s:?}");
    }
}

#[test]
fn rank_one_and_two_reflection_constants() {
    let ctx = PrecisionContext::new(128).unwrap();
    let range = CandidateRange {
        min: Rational::from(-3),
        max: Rational::from(3),
        step: Rational::from((1, 2)),
    };
    let one = normalize_to_zeta(&assemble_period(1).unwrap(), 1).unwrap();
    let r1 = search_functional_equation(&one.xi_o, 1, &range, 3, 11, &ctx).unwrap();
    assert_eq!(r1.best_c, "0");
    assert!(r1.residual < 1e-30);
    let two = normalize_to_zeta(&assemble_period(2).unwrap(), 2).unwrap();
    let r2 = search_functional_equation(&two.xi_o, 2, &range, 3, 11, &ctx).unwrap();
    assert_eq!(r2.best_c, "-1");
    assert!(r2.residual < 1e-30);
    assert!(r2.candidates.iter().filter(|(c, _)| c != "-1").all(|(_, r)| *r > 1e-6));
}

#[test]
fn rank_three_pipeline() {
    let w = weyl_sum(3).unwrap();
    assert_eq!(w.len(), 48);
    let first = take_residue(&w, 0).unwrap();
    let period = assemble_period(3).unwrap();
    assert!(!period.is_empty());
    assert!(period.terms().all(|t| t.xi_factor_count() <= 9));
    let norm = normalize_to_zeta(&period, 3).unwrap();
    assert!(symbolic_reflection_holds(&norm.xi_o, &Rational::from(-2)).unwrap());

    let ctx = PrecisionContext::new(128).unwrap();
    let point = [BigComplex::zero(128), ctx.complex(0.37, 0.21), ctx.complex(-0.13, 0.45)];
    let check = contour_residue_check(&w, &first, 0, &point, 0.05, 64, &ctx).unwrap();
    assert!(check.abs_error < 1e-30, "{check:?}");
}

#[test]
fn engine_limits() {
    assert!(matches!(assemble_period(6), Err(Error::SizeOverflow(_))));
    assert!(matches!(enumerate_weyl(9), Err(Error::SizeOverflow(_))));
    let two_var = weyl_sum(2).unwrap();
    assert!(normalize_to_zeta(&two_var, 2).is_err());
}
