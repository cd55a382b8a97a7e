//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Exits nonzero when a criterion fails that is not listed in `KNOWN_FALSE`.

use std::collections::HashMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use pindex::cert;
use pindex_core::brauerhodge::{
    brauer_symbol_length, gabber_instance, hodge_locus_residual, hodge_theoretic_index, pathology_candidates,
    pathology_instance, period, symbol_length, GaussRat, HodgeDatum, SiegelPoint,
};
use pindex_core::dtseries::{expand_dt, squared_product_coefficient};
use pindex_core::evenring::{char_pfaffian, exp_mul, fm_transform, igusa_discriminant, EvenClass, FourClass, TwoClass};
use pindex_core::exactalg::Cubic;
use pindex_core::pipeline::{
    check_orbit_identities, orbit_leading_terms, orbit_search, run_pipeline, verify_all, SearchConfig,
};
use pindex_core::sample;
use pindex_core::tiltstab::{bogomolov, params_valid, reduce_along_h, ChernQuadruple, StabParams};
use pindex_core::{Int, Mat, Rat};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Criteria whose literal statement is false; they print FAIL without failing the run.
const KNOWN_FALSE: &[u32] = &[8];

type Outcome = Result<String, String>;
type Criterion = (u32, &'static str, fn() -> Outcome);

fn r(x: i64) -> Rat {
    Rat::from_integer(Int::from(x))
}

fn check(cond: bool, why: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(why())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    check(elapsed < limit, || format!("took {elapsed:?}, limit {limit:?}"))
}

fn random_even(rng: &mut ChaCha8Rng) -> EvenClass {
    EvenClass::new(
        sample::rat_in(rng, -9, 9),
        sample::two_class(rng, -3, 3),
        sample::four_class(rng, -3, 3),
        sample::rat_in(rng, -9, 9),
    )
}

fn c01_igusa_normalization() -> Outcome {
    let v = &EvenClass::one() + &EvenClass::omega();
    let _ = igusa_discriminant(&v);
    let start = Instant::now();
    let delta = igusa_discriminant(&v);
    let elapsed = start.elapsed();
    check(delta == Rat::new(Int::from(-1), Int::from(4)), || format!("got {delta}"))?;
    within(elapsed, Duration::from_millis(1))?;
    Ok(format!("delta = {delta} in {elapsed:?}"))
}

fn c02_igusa_vanishing() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let start = Instant::now();
    for _ in 0..500 {
        let w = sample::two_class(&mut rng, -9, 9);
        let d = igusa_discriminant(&EvenClass::exp(&w));
        check(d.is_zero(), || format!("delta(exp w) = {d} for {w:?}"))?;
    }
    within(start.elapsed(), Duration::from_secs(1))?;
    Ok(format!("500 classes in {:?}", start.elapsed()))
}

fn c03_spin_invariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let start = Instant::now();
    for _ in 0..500 {
        let w = sample::two_class(&mut rng, -3, 3);
        let v = random_even(&mut rng);
        let d = igusa_discriminant(&v);
        check(igusa_discriminant(&exp_mul(&w, &v)) == d, || format!("exp twist changed delta of {v:?}"))?;
        check(igusa_discriminant(&fm_transform(&v)) == d, || format!("fm changed delta of {v:?}"))?;
    }
    within(start.elapsed(), Duration::from_secs(2))?;
    Ok(format!("500 pairs in {:?}", start.elapsed()))
}

fn c04_fm_involution() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..500 {
        let v = random_even(&mut rng);
        check(fm_transform(&fm_transform(&v)) == -&v, || format!("fm^2 != -id on {v:?}"))?;
    }
    Ok("500 classes".into())
}

fn c05_char_pfaffian() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let start = Instant::now();
    let mut done = 0;
    while done < 200 {
        let u = sample::two_class(&mut rng, -9, 9);
        let h = sample::two_class(&mut rng, -3, 3);
        if h.cube_integral().is_zero() {
            continue;
        }
        let cp = char_pfaffian(&u, &h).map_err(|e| e.to_string())?;
        check(cp.interpolated == cp.closed, || "routes disagree".into())?;
        done += 1;
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(2))?;
    let u = TwoClass::polarization(&[2, -3, 5]);
    let cp = char_pfaffian(&u, &TwoClass::principal()).map_err(|e| e.to_string())?;
    let expected = Cubic::from_i64(1, -4, -11, 30);
    check(cp.closed == expected, || format!("diagonal instance gave {}", cp.closed))?;
    Ok(format!("200 pairs in {elapsed:?}; diagonal (t-2)(t+3)(t-5) ok"))
}

fn c06_discriminant_identity() -> Outcome {
    for d in 1..=20i64 {
        let beta = TwoClass::polarization(&[1, 1, d]).star();
        for n in -10..=10i64 {
            let v = EvenClass::new(Rat::one(), TwoClass::zero(), -&beta, r(-n));
            let want = r(d) - Rat::new(Int::from(n * n), Int::from(4));
            check(igusa_discriminant(&v) == want, || format!("d = {d}, n = {n}"))?;
        }
    }
    Ok("420 pairs".into())
}

type Series = HashMap<(usize, i64), Int>;

fn mul(a: &Series, b: &Series, d_max: usize) -> Series {
    let mut out = Series::new();
    for (&(da, na), x) in a {
        for (&(db, nb), y) in b {
            if da + db <= d_max {
                *out.entry((da + db, na + nb)).or_insert_with(Int::zero) += x * y;
            }
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

fn poly(terms: &[(usize, i64, i64)]) -> Series {
    terms.iter().map(|&(d, n, c)| ((d, n), Int::from(c))).collect()
}

fn naive_dt(d_max: usize) -> Series {
    let mut s = poly(&[(0, 1, 1), (0, 0, 2), (0, -1, 1)]);
    for m in 1..=d_max {
        for _ in 0..2 {
            s = mul(&s, &poly(&[(0, 0, 1), (m, 1, 1)]), d_max);
            s = mul(&s, &poly(&[(0, 0, 1), (m, -1, 1)]), d_max);
        }
        let geo: Series = (0..=d_max / m).map(|k| ((k * m, 0), Int::one())).collect();
        for _ in 0..4 {
            s = mul(&s, &geo, d_max);
        }
    }
    s
}

fn c07_dt_series() -> Outcome {
    let start = Instant::now();
    let table = expand_dt(60);
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(10))?;
    check(table.is_symmetric(), || "table is not symmetric".into())?;
    for d in 1..=60usize {
        for n in -16i64..=16 {
            if n * n <= 4 * d as i64 {
                check(table.get(d, n).is_positive(), || format!("DT({d},{n}) = {}", table.get(d, n)))?;
            }
        }
    }
    let oracle = naive_dt(20);
    for (&(d, n), v) in &oracle {
        check(&table.get(d, n) == v, || format!("oracle mismatch at ({d},{n})"))?;
    }
    for (d, n, v) in table.entries().into_iter().filter(|e| e.0 <= 20) {
        check(oracle.get(&(d, n)) == Some(&v), || format!("oracle mismatch at ({d},{n})"))?;
    }
    let spots = [(0, 0, 2), (1, 0, 12), (1, 2, 2), (1, -2, 2)];
    for (d, n, v) in spots {
        check(table.get(d, n) == Int::from(v), || format!("DT({d},{n}) = {}", table.get(d, n)))?;
    }
    Ok(format!("d <= 60 in {elapsed:?}; oracle agrees through d = 20"))
}

fn c08_partition_lemma() -> Outcome {
    let mut single: Series = poly(&[(0, 0, 1)]);
    for m in 1..=20 {
        single = mul(&single, &poly(&[(0, 0, 1), (m, 1, 1)]), 20);
    }
    let sq = mul(&single, &single, 20);
    for d in 0..=20usize {
        for n in 1..=10usize {
            let want = sq.get(&(d, n as i64 - 1)).cloned().unwrap_or_else(Int::zero);
            check(squared_product_coefficient(n, d) == want, || format!("oracle mismatch at n = {n}, d = {d}"))?;
        }
    }
    let mut vanishing = Vec::new();
    for d in 1..=60usize {
        for n in 1..=60usize {
            if n * n <= 4 * d && !squared_product_coefficient(n, d).is_positive() {
                vanishing.push((n, d));
            }
        }
    }
    if vanishing.is_empty() {
        return Ok("positive on the whole range; oracle agrees through d = 20".into());
    }
    let only_n1 = vanishing.iter().all(|&(n, _)| n == 1);
    Err(format!(
        "coefficient is zero at {} points{}, first (n, d) = {:?}; q^0 t^d has no partition into zero parts for d > 0",
        vanishing.len(),
        if only_n1 { ", all with n = 1" } else { "" },
        vanishing[0]
    ))
}

fn c09_gabber() -> Outcome {
    let start = Instant::now();
    for ell in [2u64, 3, 5, 7] {
        let d = gabber_instance(ell).map_err(|e| e.to_string())?;
        let per = period(&d).map_err(|e| e.to_string())?;
        let w = hodge_theoretic_index(&d).map_err(|e| e.to_string())?;
        check(per == Int::from(ell), || format!("period {per} at {ell}"))?;
        check(w.n == Int::from(ell * ell), || format!("index {} at {ell}", w.n))?;
        check(w.verify(&d), || format!("witness failed at {ell}"))?;
    }
    within(start.elapsed(), Duration::from_secs(5))?;
    Ok(format!("ell in 2,3,5,7 in {:?}", start.elapsed()))
}

fn c10_index_solver() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let h = TwoClass::principal();
    let h2 = h.wedge(&h).scale(&Rat::new(Int::one(), Int::from(2)));
    for _ in 0..100 {
        let n = rng.gen_range(1i64..=6);
        let b = sample::two_class(&mut rng, -5, 5);
        let mut ns2 = vec![h.clone()];
        let mut hdg4 = vec![h2.clone()];
        if rng.gen_bool(0.5) {
            let extra = sample::two_class(&mut rng, -2, 2);
            hdg4.push(h.wedge(&extra));
            ns2.push(extra);
        }
        let d = HodgeDatum::new(&b, Int::from(n), ns2, hdg4).map_err(|e| e.to_string())?;
        let per = period(&d).map_err(|e| e.to_string())?;
        let w = hodge_theoretic_index(&d).map_err(|e| e.to_string())?;
        check(w.verify(&d), || "witness failed to re-verify".into())?;
        check(w.n.is_multiple_of(&per), || format!("period {per} does not divide index {}", w.n))?;
        check(Int::from(n * n).is_multiple_of(&w.n), || format!("index {} does not divide {}", w.n, n * n))?;
    }
    Ok("100 data".into())
}

fn example_b() -> TwoClass {
    let mut b = TwoClass::zero();
    for (i, cols) in [&[0usize, 1][..], &[0, 2], &[0, 1, 2]].iter().enumerate() {
        for &j in cols.iter() {
            b.add_term(3 + i, j, Rat::one());
        }
    }
    b
}

fn c11_symbol_length() -> Outcome {
    let b = example_b();
    let h = TwoClass::principal();
    let lb = symbol_length(&b, 2).map_err(|e| e.to_string())?;
    let lbh = symbol_length(&(&b + &h), 2).map_err(|e| e.to_string())?;
    let coset = brauer_symbol_length(&b, &[h], 2, 16).map_err(|e| e.to_string())?;
    check(lb == 3 && lbh == 3 && coset.length == 3, || format!("lengths {lb}, {lbh}, {}", coset.length))?;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let g = sample::unimodular(&mut rng, 6, 30);
        let l = symbol_length(&b.pullback(&g), 2).map_err(|e| e.to_string())?;
        check(l == 3, || format!("basis change gave {l}"))?;
    }
    Ok("l(b) = l(b + H) = 3, coset minimum 3, 100 basis changes".into())
}

fn c12_pathology() -> Outcome {
    let inst = pathology_instance(&[3, 5, 7], &pathology_candidates()).map_err(|e| e.to_string())?;
    let ell = Int::from(inst.ell);
    check(inst.index.n == &ell * &ell, || "index is not ell^2".into())?;
    check(inst.bh_not_hodge, || "bH is Hodge".into())?;
    check(inst.gram_divisible(), || "a Gram entry is not divisible by ell".into())?;
    let g = inst.sublattice.gram_gcd();
    check(g > Int::one(), || format!("Gram gcd {g}"))?;
    Ok(format!("ell = {}, rank {}, Gram gcd {g}", inst.ell, inst.sublattice.rank()))
}

fn siegel(diag: [(i64, i64); 3]) -> Result<SiegelPoint, String> {
    let mut z = Mat::<GaussRat>::zeros(3, 3);
    for (i, (re, im)) in diag.into_iter().enumerate() {
        z.set(i, i, GaussRat::new(r(re), r(im)));
    }
    SiegelPoint::new(z).map_err(|e| e.to_string())
}

fn c13_hodge_locus() -> Outcome {
    let z = siegel([(1, 1), (0, 2), (-3, 5)])?;
    let mut m = Mat::<Rat>::zeros(6, 6);
    for (i, x) in [2i64, -1, 4].into_iter().enumerate() {
        m.set(i, 3 + i, r(x));
        m.set(3 + i, i, r(-x));
    }
    let res = hodge_locus_residual(&m, &z).map_err(|e| e.to_string())?;
    check(res.data().iter().all(Zero::is_zero), || "diagonal residual is nonzero".into())?;
    m.set(0, 1, r(1));
    m.set(1, 0, r(-1));
    let res = hodge_locus_residual(&m, &z).map_err(|e| e.to_string())?;
    check(!res.data().iter().all(Zero::is_zero), || "perturbed residual vanished".into())?;
    check(siegel([(0, 1), (0, 1), (0, -1)]).is_err(), || "indefinite Im Z accepted".into())?;
    let mut asym = Mat::<GaussRat>::zeros(3, 3);
    for i in 0..3 {
        asym.set(i, i, GaussRat::new(r(0), r(1)));
    }
    asym.set(0, 2, GaussRat::real(r(1)));
    check(SiegelPoint::new(asym).is_err(), || "non-symmetric Z accepted".into())?;
    Ok("diagonal residual 0, perturbation nonzero, domain enforced".into())
}

fn c14_orbit_trick() -> Outcome {
    let h_type = [Int::one(), Int::one(), Int::one()];
    let cfg = SearchConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let mut done = 0;
    let start = Instant::now();
    while done < 50 {
        let u = sample::two_class(&mut rng, -4, 4);
        if !u.pfaffian().is_positive() {
            continue;
        }
        let (xy, yz, _) = orbit_leading_terms(&u, &h_type);
        if xy.is_zero() || yz.is_zero() {
            continue;
        }
        let level = Int::from(rng.gen_range(1i64..=6));
        let res = orbit_search(&u, &h_type, &level, &cfg).map_err(|e| e.to_string())?;
        check(res.cubic.positive_real_roots().unwrap_or(false), || "cubic lacks positive roots".into())?;
        let ok = check_orbit_identities(&u, &h_type).map_err(|e| e.to_string())?;
        check(ok, || format!("leading-coefficient identities fail for {u:?}"))?;
        done += 1;
    }
    Ok(format!("50 classes in {:?}", start.elapsed()))
}

fn c15_pipeline() -> Outcome {
    let mut notes = Vec::new();
    for n in [2i64, 3] {
        let start = Instant::now();
        let h_type = [Int::one(), Int::one(), Int::one()];
        let c = run_pipeline(&Int::from(n), &h_type, &TwoClass::principal(), &SearchConfig::with_seed(7))
            .map_err(|e| e.to_string())?;
        let elapsed = start.elapsed();
        within(elapsed, Duration::from_secs(60))?;
        check(c.all_passed(), || format!("n = {n}: stage {:?} failed", c.failed_stage()))?;
        check(verify_all(&c), || format!("n = {n}: replay failed"))?;
        let reread = cert::from_str(&cert::to_string(&c)).map_err(|e| e.to_string())?;
        check(reread == c && verify_all(&reread), || format!("n = {n}: JSON round trip failed"))?;
        let dt = c.dt.as_ref().ok_or("missing DT verdict")?;
        check(dt.positive, || format!("n = {n}: DT not positive"))?;
        notes.push(format!("n = {n} in {elapsed:?}"));
    }
    Ok(notes.join(", "))
}

fn display_twist(v: &EvenClass, h: &TwoClass, b: &Rat) -> ChernQuadruple {
    let dd = h.scale(b);
    let d2 = dd.wedge(&dd);
    let d3 = dd.pair(&d2);
    let half = Rat::new(Int::one(), Int::from(2));
    let sixth = Rat::new(Int::one(), Int::from(6));
    let ch1 = &v.b - &dd.scale(&v.a);
    let ch2: FourClass = &(&v.c - &dd.wedge(&v.b)) + &d2.scale(&(&half * &v.a));
    let ch3 = &v.d - dd.pair(&v.c) + &half * v.b.pair(&d2) - &sixth * &d3 * &v.a;
    ChernQuadruple::new(&v.a * h.cube_integral(), ch1.pair(&h.wedge(h)), h.pair(&ch2), ch3)
}

fn c16_stability() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    let h = TwoClass::polarization(&[1, 2, 2]);
    for _ in 0..100 {
        let v = random_even(&mut rng);
        let b = Rat::new(Int::from(rng.gen_range(-12i64..=12)), Int::from(rng.gen_range(1i64..=6)));
        let q = reduce_along_h(&v, &h, &b).map_err(|e| e.to_string())?;
        check(q == display_twist(&v, &h, &b), || "twist does not match the expansion".into())?;
        let base = reduce_along_h(&v, &h, &Rat::zero()).map_err(|e| e.to_string())?;
        check(base.twist(&b) == q, || "quadruple twist disagrees".into())?;
        check(bogomolov(&q) == bogomolov(&base), || "discriminant changed under twist".into())?;
    }
    let a = r(1);
    for d in [r(0), r(2), r(-2)] {
        let c = &a * &a / r(6) + d.abs() * &a / r(2);
        check(!params_valid(&StabParams::new(a.clone(), r(0), c.clone(), d.clone())), || "boundary accepted".into())?;
        let above = &c + Rat::new(Int::one(), Int::from(1000));
        check(params_valid(&StabParams::new(a.clone(), r(0), above, d.clone())), || "interior rejected".into())?;
    }
    check(!params_valid(&StabParams::new(r(0), r(0), r(9), r(0))), || "a = 0 accepted".into())?;
    Ok("100 twists, discriminant invariant, window boundaries".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 16] = [
        (1, "Igusa normalization", c01_igusa_normalization),
        (2, "Igusa vanishing on exp", c02_igusa_vanishing),
        (3, "spin invariance of Igusa", c03_spin_invariance),
        (4, "FM involution", c04_fm_involution),
        (5, "characteristic Pfaffian", c05_char_pfaffian),
        (6, "discriminant identity", c06_discriminant_identity),
        (7, "DT series", c07_dt_series),
        (8, "partition lemma", c08_partition_lemma),
        (9, "Gabber index", c09_gabber),
        (10, "index solver properties", c10_index_solver),
        (11, "symbol length", c11_symbol_length),
        (12, "Euler-pairing divisibility", c12_pathology),
        (13, "Hodge locus", c13_hodge_locus),
        (14, "orbit trick", c14_orbit_trick),
        (15, "end-to-end pipeline", c15_pipeline),
        (16, "stability formulas", c16_stability),
    ];
    let mut unexpected = 0;
    for (id, name, f) in criteria {
        match f() {
            Ok(detail) => println!("PASS {id:>2} {name}: {detail}"),
            Err(why) => {
                let known = KNOWN_FALSE.contains(&id);
                if !known {
                    unexpected += 1;
                }
                println!("FAIL {id:>2} {name}: {why}{}", if known { " [known]" } else { "" });
            }
        }
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
