//! End-to-end acceptance run: one line per criterion, nonzero exit on failure.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::{Float, Rational};
use symplectic_zeta::sp4::{
    big_z, big_z_from_xi_sp4, compact_domain_volume, f_aux, g_aux, remainders, residue_by_one_sided_limit,
    residue_by_symmetric_limit, u_v, xi_sp4, FunctionId,
};
use symplectic_zeta::special::{chi, xi};
use symplectic_zeta::weyl::*;
use symplectic_zeta::zeros::*;
use symplectic_zeta::{BigComplex, PrecisionContext};

const SEED: u64 = 20_240_601;

type Outcome = (bool, String);
type Criterion = (&'static str, fn() -> Outcome);

fn ctx() -> PrecisionContext {
    PrecisionContext::new(256).unwrap()
}

fn rel(a: &BigComplex, b: &BigComplex) -> f64 {
    let scale = Float::with_val(64, a.abs().max(&b.abs()));
    if scale.is_zero() {
        return 0.0;
    }
    Float::with_val(64, a.dist(b) / scale).to_f64()
}

/// Random points in the disc `|s| <= radius`, at least `gap` from each of `avoid`.
fn random_points(rng: &mut ChaCha8Rng, count: usize, radius: f64, avoid: &[f64], gap: f64) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let (x, y) = (rng.gen_range(-radius..radius), rng.gen_range(-radius..radius));
        if x.hypot(y) <= radius && avoid.iter().all(|p| (x - p).hypot(y) >= gap) {
            out.push((x, y));
        }
    }
    out
}

fn special_identities() -> Outcome {
    let c = ctx();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut worst_xi, mut worst_chi) = (0.0f64, 0.0f64);
    for (x, y) in random_points(&mut rng, 1000, 50.0, &[0.0, 1.0], 0.1) {
        let s = c.complex(x, y);
        let r = s.int_sub(1);
        worst_xi = worst_xi.max(rel(&xi(&s, &c).value, &xi(&r, &c).value));
        worst_chi = worst_chi.max(rel(&chi(&s, &c), &chi(&r, &c)));
    }
    let one = BigComplex::one(c.working_bits());
    let at_poles = chi(&c.complex(0, 0), &c)
        .dist(&one)
        .to_f64()
        .max(chi(&c.complex(1, 0), &c).dist(&one).to_f64());
    let ok = worst_xi <= 1e-50 && worst_chi <= 1e-50 && at_poles <= 1e-60;
    (
        ok,
        format!("max rel xi {worst_xi:.2e}, chi {worst_chi:.2e}; |chi(0,1) - 1| {at_poles:.2e}"),
    )
}

fn rank_two_functional_equation() -> Outcome {
    let c = ctx();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    let mut worst = 0.0f64;
    for (x, y) in random_points(&mut rng, 1000, 30.0, &[-1.0, 0.0, 1.0, 2.0], 0.1) {
        let s = c.complex(x, y);
        worst = worst.max(rel(&xi_sp4(&s, &c).value, &xi_sp4(&s.int_sub(1), &c).value));
    }
    let eps = c.real(Float::parse("1e-20").unwrap());
    let mut poles = Vec::new();
    for k in -6..=8 {
        let p = c.complex(k as f64 / 2.0, 0.0);
        let r = residue_by_symmetric_limit(FunctionId::XiSp4, &p, &eps, &c).unwrap();
        if r.abs() > 1e-10 {
            poles.push(k as f64 / 2.0);
        }
    }
    let ok = worst <= 1e-45 && poles == [-1.0, 0.0, 1.0, 2.0];
    (
        ok,
        format!("max rel {worst:.2e}; poles among half-integers in [-3, 4]: {poles:?}"),
    )
}

fn residue_at_two() -> Outcome {
    let c = ctx();
    let vol = compact_domain_volume(&c);
    let two = c.complex(2, 0);
    let eps = c.real(Float::parse("1e-25").unwrap());
    let one_sided = residue_by_one_sided_limit(FunctionId::XiSp4, &two, &eps, &c).unwrap();
    let err = one_sided.dist(&BigComplex::from_real(vol.clone())).to_f64();
    let symmetric = residue_by_symmetric_limit(FunctionId::XiSp4, &two, &eps, &c).unwrap();
    let xi3 = xi(&c.complex(3, 0), &c).value.re;
    let scaled = BigComplex::from_real(Float::with_val(c.working_bits(), &xi3 * &vol));
    let scaled_err = symmetric.dist(&scaled).to_f64();
    (
        err <= 1e-40,
        format!(
            "limit {:.12e} vs volume {:.12e} (diff {err:.2e}); symmetric limit matches xi(3)*volume to {scaled_err:.2e}",
            one_sided.re.to_f64(),
            vol.to_f64()
        ),
    )
}

fn f_and_z_forms() -> Outcome {
    let c = ctx();
    let third = Float::with_val(c.working_bits(), c.pi() / 3u32);
    let f0 = f_aux(&c.complex(0, 0), &c).dist(&BigComplex::from_real(third)).to_f64();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 3);
    let (mut worst_g, mut worst_forms) = (0.0f64, 0.0f64);
    for (x, y) in random_points(&mut rng, 100, 30.0, &[-1.0, 0.0, 0.5, 1.0, 2.0], 0.1) {
        let s = c.complex(x, y);
        let z = big_z(&s, &c);
        let g = &g_aux(&s, &c) - &g_aux(&s.int_sub(1), &c);
        worst_g = worst_g.max(rel(&z, &g));
        worst_forms = worst_forms.max(rel(&z, &big_z_from_xi_sp4(&s, &c).unwrap()));
    }
    let ok = f0 <= 1e-50 && worst_g <= 1e-45 && worst_forms <= 1e-45;
    (
        ok,
        format!("|f(0) - pi/3| {f0:.2e}; Z vs g(s)-g(1-s) {worst_g:.2e}; closed vs entire form {worst_forms:.2e}"),
    )
}

fn f_zeros() -> Outcome {
    let c = ctx();
    let rect = Rectangle::from_f64(0.5, 2.0, -10.0, 10.0, &c).unwrap();
    let count = count_zeros_rect(FunctionId::F, &rect, &c).unwrap();
    let tol = c.real(Float::parse("1e-30").unwrap());
    let mut located = Vec::new();
    let mut ok = count == 2;
    for im in [3.2, -3.2] {
        let z = refine_zero(FunctionId::F, &Seed::Point(c.complex(0.9, im)), &tol, &c).unwrap();
        let (x, y) = z.location.to_f64_pair();
        ok &= (x - 0.927).abs() <= 5e-3 && (y - im).abs() <= 5e-3;
        located.push(format!("{x:.6}{y:+.6}i"));
    }
    (ok, format!("count {count}; zeros {}", located.join(", ")))
}

fn z_region_count() -> Outcome {
    let c = ctx();
    let rect = Rectangle::from_f64(0.51, 20.0, -22.0, 22.0, &c).unwrap();
    let r = count_zeros_detailed(FunctionId::Z, &rect, true, &c).unwrap();
    (
        r.count == 1,
        format!(
            "count {} (raw winding {:.9}, nudges {})",
            r.count, r.raw_winding, r.nudges
        ),
    )
}

fn remainder_bounds() -> Outcome {
    let c = ctx();
    let mut max = [0.0f64; 3];
    for sigma in 10..=40 {
        for t in 0..=40 {
            let r = remainders(&c.complex(sigma, t), &c).unwrap();
            for (m, v) in max.iter_mut().zip([&r.r1, &r.r2, &r.r3]) {
                *m = m.max(v.abs().to_f64());
            }
        }
    }
    let ok = max[0] <= 0.5 && max[1] <= 0.1 && max[2] <= 0.3;
    (
        ok,
        format!("max |R1| {:.5}, |R2| {:.6}, |R3| {:.5}", max[0], max[1], max[2]),
    )
}

fn xi_census(c: &PrecisionContext) -> CensusReport {
    let strip = Rectangle::from_f64(-1.0, 2.0, 0.0, 61.0, c).unwrap();
    zero_census(FunctionId::Xi, &c.real(61), &strip, c).unwrap()
}

fn gap_lemma() -> Outcome {
    let c = ctx();
    let census = xi_census(&c);
    let ordinates = census.ordinates();
    let coverage = c.real(61);
    let mut failures = Vec::new();
    let mut t = 12.0;
    while t <= 50.0 {
        if !gap_check(&ordinates, &coverage, &c.real(t)).unwrap().holds {
            failures.push(t);
        }
        t += 0.5;
    }
    let w = gap_check(&ordinates, &coverage, &c.real(12))
        .unwrap()
        .witnesses
        .unwrap();
    let (a, b) = (w.0.to_f64(), w.1.to_f64());
    let ok =
        census.confirms_line() && failures.is_empty() && (a - 14.134725).abs() <= 1e-6 && (b - 21.022040).abs() <= 1e-6;
    (
        ok,
        format!(
            "{} xi zeros to 61 (rect {} / line {}); failing t: {failures:?}; witnesses at 12: {a:.9}, {b:.9}",
            ordinates.len(),
            census.rect_count,
            census.line_count
        ),
    )
}

fn z_census() -> Outcome {
    let c = ctx();
    let strip = Rectangle::from_f64(-5.0, 6.0, 0.0, 50.0, &c).unwrap();
    let r = zero_census(FunctionId::Z, &c.real(50), &strip, &c).unwrap();
    let worst = r
        .zeros
        .iter()
        .map(|z| reflection_residual(FunctionId::Z, &z.location, &c).unwrap().to_f64())
        .fold(0.0f64, f64::max);
    let ok = r.rect_count == r.line_count && r.off_line_suspects.is_empty() && worst <= 1e-30;
    (
        ok,
        format!(
            "rect {} / line {}, suspects {}, max reflection residual {worst:.2e}",
            r.rect_count,
            r.line_count,
            r.off_line_suspects.len()
        ),
    )
}

fn u_v_identity() -> Outcome {
    let c = ctx();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 10);
    let mut worst = 0.0f64;
    for (x, y) in random_points(&mut rng, 200, 30.0, &[0.0, 1.0], 0.1) {
        let s = c.complex(x, y);
        let (u, v) = u_v(&s, &c);
        let lhs = &(&(&s * &s.add_int(-1)) * &xi(&s, &c).value) * &u;
        let rhs = &v - &big_z(&s, &c);
        worst = worst.max(rel(&lhs, &rhs));
    }
    let strip = Rectangle::from_f64(-5.0, 6.0, 0.0, 30.0, &c).unwrap();
    let census = zero_census(FunctionId::V, &c.real(30), &strip, &c).unwrap();
    let ok = worst <= 1e-45 && census.confirms_line();
    (
        ok,
        format!(
            "max rel {worst:.2e}; V zeros to 30: rect {} / line {}, suspects {}",
            census.rect_count,
            census.line_count,
            census.off_line_suspects.len()
        ),
    )
}

fn golden(name: &str) -> String {
    std::fs::read_to_string(format!("{}/tests/golden/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

fn weyl_rank_two() -> Outcome {
    let c = ctx();
    let group = enumerate_weyl(2).unwrap();
    let rs = root_system_c(2).unwrap();
    let mut table = String::new();
    let mut vanishing = Vec::new();
    for w in &group {
        let t = build_period_term(w, &rs).unwrap();
        table.push_str(&format!("{w} | {t}\n"));
        if term_residue(&t, 0).unwrap().is_none() {
            vanishing.push(w.name());
        }
    }
    let table_ok = table == golden("rank2_contributions.txt");
    let period = assemble_period(2).unwrap();
    let norm = normalize_to_zeta(&period, 2).unwrap();
    let zeta = norm.centred(&Rational::from(-1)).unwrap();
    let diff = zeta.diff(&reference_rank_two());

    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 11);
    let mut worst = 0.0f64;
    for (x, y) in random_points(&mut rng, 20, 20.0, &[-1.0, 0.0, 0.5, 1.0, 2.0], 0.1) {
        let s = c.complex(x, y);
        let sym = eval_symbolic(&zeta, std::slice::from_ref(&s), &c).unwrap();
        let direct = xi_sp4(&s, &c).value;
        let scaled = Float::with_val(64, sym.dist(&direct) / Float::with_val(64, direct.abs() + 1u32));
        worst = worst.max(scaled.to_f64());
    }
    let fe = search_functional_equation(&norm.xi_o, 2, &CandidateRange::default(), 8, SEED, &c).unwrap();
    let ok = group.len() == 8
        && table_ok
        && vanishing == ["c2", "(12)c2"]
        && diff.is_empty()
        && worst <= 1e-40
        && fe.best_c == "-1"
        && fe.residual <= 1e-40;
    (
        ok,
        format!(
            "{} elements; table matches: {table_ok}; vanishing residues {vanishing:?}; term diff {}; eval max {worst:.2e}; fe-search c = {} residual {:.2e}",
            group.len(),
            diff.len(),
            fe.best_c,
            fe.residual
        ),
    )
}

fn weyl_rank_three() -> Outcome {
    let c = ctx();
    let sum = weyl_sum(3).unwrap();
    let first = take_residue(&sum, 0).unwrap();
    let second = take_residue(&first, 1).unwrap();
    let period = second.restrict_to(2).unwrap();
    let points = [
        [(0.0, 0.0), (0.37, 0.21), (-0.13, 0.45)],
        [(0.0, 0.0), (-0.41, 1.3), (0.22, -0.6)],
        [(0.0, 0.0), (1.7, -0.35), (0.61, 0.83)],
    ];
    let mut worst = 0.0f64;
    for pt in points {
        let z: Vec<BigComplex> = pt.iter().map(|(x, y)| c.complex(*x, *y)).collect();
        let check = contour_residue_check(&sum, &first, 0, &z, 0.05, 96, &c).unwrap();
        worst = worst.max(check.abs_error);
    }
    let norm = normalize_to_zeta(&period, 3).unwrap();
    let fe = search_functional_equation(&norm.xi_o, 3, &CandidateRange::default(), 8, SEED, &c).unwrap();
    let ok = sum.len() == 48 && worst <= 1e-20;
    (
        ok,
        format!(
            "48-term sum -> {} -> {} terms; contour check max {worst:.2e}; clearing {}; fe-search (recorded) c = {} residual {:.2e}",
            first.len(),
            period.len(),
            norm.clearing,
            fe.best_c,
            fe.residual
        ),
    )
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("special-function identities", special_identities),
        ("rank-two functional equation and poles", rank_two_functional_equation),
        ("residue at s = 2 equals the compact-domain volume", residue_at_two),
        ("f(0) and the forms of Z", f_and_z_forms),
        ("two zeros of f right of the line", f_zeros),
        ("one zero of Z in [0.51, 20] x [-22, 22]", z_region_count),
        ("remainder bounds for sigma >= 10", remainder_bounds),
        ("gap check from xi zeros to height 61", gap_lemma),
        ("Z census to height 50", z_census),
        ("U/V identity and V zeros on the line", u_v_identity),
        ("Weyl engine, rank two", weyl_rank_two),
        ("Weyl engine, rank three", weyl_rank_three),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (ok, detail) = run();
        failed += usize::from(!ok);
        println!(
            "criterion {:>2} {} {name}: {detail} [{:.1}s]",
            i + 1,
            if ok { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
