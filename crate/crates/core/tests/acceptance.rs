//! End-to-end acceptance checks, one line per criterion.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use hybridnc::bounds::{gaussian_coeff, gaussian_sandwich_holds, optimal_d, sphere_size_lower, sphere_size_t0};
use hybridnc::channel::{enumerate_dimension_errors, transmit, trial_rng, ChannelSpec};
use hybridnc::experiment::{run_experiment, Cell, CodeConfig, DecoderChoice, ExperimentConfig};
use hybridnc::grs::reference;
use hybridnc::hybrid::erasure_sets;
use hybridnc::linalg::enumerate_subspaces;
use hybridnc::{
    Field, FieldRef, GrassmannCode, GrsCode, GrsOptions, HybridCode, KkCode, KkDecoder, MaskedSubspace, MaskedVector,
    Matrix, Subspace, SubspaceCode,
};
use num_bigint::BigUint;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn gf(q: u32) -> FieldRef {
    Field::with_order(q).unwrap()
}

fn random_subspace(f: &FieldRef, n: usize, dim: usize, rng: &mut dyn RngCore) -> Subspace {
    let q = f.order() as u16;
    loop {
        let rows: Vec<Vec<u16>> = (0..dim).map(|_| (0..n).map(|_| rng.random_range(0..q)).collect()).collect();
        let s = Subspace::from_rows(f, n, &rows).unwrap();
        if s.dim() == dim {
            return s;
        }
    }
}

fn grassmann_inner_gf5() -> Outcome {
    let start = Instant::now();
    let f = gf(5);
    let code = HybridCode::new(GrassmannCode::new(&f, 4, 3).unwrap(), 3).unwrap();
    let p = code.params();
    ensure((p.n, p.ell, p.d) == (6, 3, 3) && p.two_d >= 2, format!("parameters {p:?}"))?;
    let inner = code.inner().codewords().unwrap();
    let lifted = code.codewords().unwrap();
    ensure(inner.len() == 156 && p.size == BigUint::from(156u32), format!("{} codewords", inner.len()))?;
    ensure(BigUint::from(156u32) > BigUint::from(5u32).pow(3), "156 is not above 125")?;
    let sets = erasure_sets(6, 2);
    let mut decoded = 0;
    for (v, sent) in inner.iter().zip(&lifted) {
        for s in &sets {
            let received = sent.project(s).unwrap();
            let got = code.decode_dim_and_erasures(&received).map_err(|e| format!("erasures {s:?}: {e}"))?;
            ensure(&got == v, format!("erasures {s:?} decoded to a different codeword"))?;
            decoded += 1;
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(60), format!("took {elapsed:?}"))?;
    Ok(format!("156 codewords x {} erasure sets = {decoded} decodes, 156 > 125, {elapsed:.2?}", sets.len()))
}

fn gaussian_10_4_gf11() -> Outcome {
    let g = gaussian_coeff(10, 4, 11);
    let q = BigUint::from(11u32);
    let four_q16 = q.pow(16) * 4u32;
    ensure(g > four_q16, "[10 4]_11 <= 4*11^16")?;
    ensure(g > q.pow(24), "[10 4]_11 <= 11^24")?;
    Ok(format!("[10 4]_11 = {g} > 4*11^16 and > 11^24"))
}

fn kk_5_2_2_1_d2() -> HybridCode {
    HybridCode::new(KkCode::new(&gf(5), 2, 2, 1).unwrap(), 2).unwrap()
}

fn construction_size() -> Outcome {
    let code = kk_5_2_2_1_d2();
    let (n, ell, big_d, d) = (code.n() as u32, code.ell() as u32, code.big_d() as u32, code.d() as u32);
    let words = code.codewords().unwrap();
    let distinct: std::collections::HashSet<_> = words.iter().collect();
    let expected = 5u64.pow((n - ell - d + 1) * (ell - big_d + 1));
    ensure(distinct.len() as u64 == expected, format!("{} distinct codewords, expected {expected}", distinct.len()))?;
    ensure(expected == 25, format!("closed form gives {expected}"))?;
    Ok(format!("n={n}, l={ell}, D={big_d}, d={d}: |L| = {} = 5^{}", distinct.len(), (n - ell - d + 1) * (ell - big_d + 1)))
}

fn erasure_decoder_sweep() -> Outcome {
    let start = Instant::now();
    let code = kk_5_2_2_1_d2();
    let (big_d, d, n) = (code.big_d(), code.d(), code.n());
    let inner = code.inner().codewords().unwrap();
    let mut patterns = 0usize;
    for v in &inner {
        let sent = code.lift_subspace(v).unwrap();
        for theta in 0..big_d {
            for omega in 0..big_d - theta {
                for u in enumerate_dimension_errors(&sent, theta, omega).unwrap() {
                    for s in erasure_sets(n, d - 1) {
                        let received = u.project(&s).unwrap();
                        let got = code
                            .decode_dim_and_erasures(&received)
                            .map_err(|e| format!("theta={theta} omega={omega} S={s:?}: {e}"))?;
                        ensure(&got == v, format!("theta={theta} omega={omega} S={s:?}: wrong codeword"))?;
                        patterns += 1;
                    }
                }
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(300), format!("took {elapsed:?}"))?;
    Ok(format!("{patterns} channel patterns over {} codewords, no failures, {elapsed:.2?}", inner.len()))
}

fn error_decoder_monte_carlo() -> Outcome {
    let cells: Vec<Cell> = [0, 1]
        .iter()
        .flat_map(|&theta| [(0, 0), (0, 1), (0, 2), (1, 0)].map(move |(rho, mu)| Cell::new(theta, 0, rho, mu)))
        .collect();
    let cfg = ExperimentConfig {
        code: CodeConfig::kk(7, 2, 2, 1, 3),
        cells,
        trials: 10_000,
        seed: 2024,
        mix: true,
        decoder: DecoderChoice::SymbolErrors,
        record_trials: false,
    };
    let code = cfg.code.build().unwrap();
    ensure(code.outer().decoder() == hybridnc::GrsDecoder::BerlekampMassey, "outer decoder is not Berlekamp-Massey")?;
    let report = run_experiment(&cfg).map_err(|e| e.to_string())?;
    for c in &report.cells {
        ensure(c.in_promise, format!("cell {:?} outside the promise region", c.cell))?;
        ensure(c.successes == c.trials, format!("cell {:?}: {}/{} successes", c.cell, c.successes, c.trials))?;
    }
    Ok(format!("{} cells x {} trials, all decoded", report.cells.len(), cfg.trials))
}

fn sphere_counts() -> Outcome {
    let f = gf(2);
    let all: Vec<Subspace> = enumerate_subspaces(&f, 4, 2).unwrap().collect();
    ensure(all.len() == 35, format!("{} subspaces", all.len()))?;
    for t in [0u64, 2, 4] {
        let formula = sphere_size_t0(4, 2, t, 2).unwrap();
        for v in &all {
            let count = all.iter().filter(|u| u.distance(v).unwrap() as u64 <= t).count();
            ensure(BigUint::from(count) == formula, format!("T={t}: count {count} vs formula {formula}"))?;
        }
    }
    Ok("all 35 subspaces, T in {0,2,4}: counts 1, 19, 35 match".into())
}

fn adjacency_lower_bound() -> Outcome {
    let f = gf(2);
    let (n, ell, big_t, t) = (5usize, 2usize, 2usize, 1usize);
    let all: Vec<Subspace> = enumerate_subspaces(&f, n, ell).unwrap().collect();
    let bound = sphere_size_lower(n as u64, ell as u64, big_t as u64, t as u64, 2).unwrap();
    let sets = erasure_sets(n, t);
    let projections: Vec<Vec<MaskedSubspace>> =
        all.iter().map(|v| sets.iter().map(|s| v.project(s).unwrap()).collect()).collect();
    let mut min = usize::MAX;
    for pv in &projections {
        let count = projections
            .iter()
            .filter(|pu| pv.iter().zip(pu.iter()).any(|(a, b)| a.space().distance(b.space()).unwrap() <= big_t))
            .count();
        min = min.min(count);
    }
    ensure(BigUint::from(min) >= bound, format!("smallest adjacency count {min} below the bound {bound}"))?;
    Ok(format!("{} subspaces, smallest (2,1)-adjacency count {min} >= {bound}", all.len()))
}

fn projection_distance() -> Outcome {
    let f = gf(2);
    let mut rng = ChaCha8Rng::seed_from_u64(0x1e11a);
    let mut violations = 0;
    for _ in 0..10_000 {
        let a = random_subspace(&f, 6, rng.random_range(0..=6), &mut rng);
        let b = random_subspace(&f, 6, rng.random_range(0..=6), &mut rng);
        let s: Vec<usize> = (0..6).filter(|_| rng.random_bool(0.4)).collect();
        let before = a.distance(&b).unwrap();
        let after = a.project(&s).unwrap().space().distance(b.project(&s).unwrap().space()).unwrap();
        if after > before {
            violations += 1;
        }
    }
    ensure(violations == 0, format!("{violations} violations"))?;
    Ok("10000 random triples in F_2^6, zero violations".into())
}

fn gaussian_sandwich() -> Outcome {
    let mut checked = 0;
    for q in [2u64, 3, 4, 5, 7, 8, 9, 11] {
        for n in 2..=12u64 {
            for ell in 1..n {
                ensure(gaussian_sandwich_holds(n, ell, q), format!("fails at n={n}, l={ell}, q={q}"))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} (n, l, q) triples satisfy the strict sandwich"))
}

struct FailureScenario {
    code: HybridCode,
    z: Subspace,
    u: Vec<Vec<u16>>,
    x: [u16; 3],
}

fn failure_scenario() -> FailureScenario {
    let f = gf(8);
    let inner = KkCode::new(&f, 3, 3, 1).unwrap();
    let outer = GrsCode::new(&f, 6, 3).unwrap();
    let g = outer.generator();
    // weight-3 codeword supported on the first three coordinates
    let tail = g.select_columns(&[3, 4, 5, 6, 7]).transpose();
    let msg = tail.kernel().row(0).to_vec();
    let u5 = g.vec_mul(&msg).unwrap();
    let mut basis = vec![u5.clone()];
    for r in g.row_vecs() {
        let mut trial = basis.clone();
        trial.push(r);
        if Matrix::from_rows(&f, 8, &trial).unwrap().rank() == trial.len() && basis.len() < 6 {
            basis = trial;
        }
    }
    // u1..u4, u5, u6 in network order
    let mut u = basis[1..5].to_vec();
    u.push(u5.clone());
    u.push(basis[5].clone());
    let rows = Matrix::from_rows(&f, 8, &u).unwrap();
    let code = HybridCode::with_network_basis(inner, 3, &rows, GrsOptions::default()).unwrap();
    let z = Subspace::span_units(&f, 6, &[0, 1, 2]);
    FailureScenario { code, z, u, x: [u5[0], u5[1], u5[2]] }
}

fn add(f: &FieldRef, a: &[u16], b: &[u16]) -> Vec<u16> {
    a.iter().zip(b).map(|(&x, &y)| f.add(x, y)).collect()
}

fn failure_demo() -> Outcome {
    let sc = failure_scenario();
    let f = sc.code.inner().field().clone();
    let code = &sc.code;
    let u = &sc.u;
    ensure(sc.x.iter().all(|&x| x != 0), "minimum-weight codeword is not supported on three coordinates")?;
    ensure(code.inner().decode(&sc.z).as_ref() == Ok(&sc.z), "Z is not an inner codeword")?;
    let sent = code.lift_subspace(&sc.z).unwrap();
    ensure(sent == Subspace::from_rows(&f, 8, &u[0..3]).unwrap(), "E(Z) is not <u1,u2,u3>")?;

    let mut e1 = vec![0; 8];
    e1[0] = sc.x[0];
    let z = add(&f, &u[3], &e1);
    let mut e12 = e1.clone();
    e12[1] = sc.x[1];
    let z_err = add(&f, &u[3], &e12);
    let received = [add(&f, &u[0], &z), add(&f, &u[1], &z), z_err.clone()];
    let rs: Vec<Vec<u16>> = received.iter().map(|r| code.outer().decode(&MaskedVector::unmasked(r.clone())).unwrap()).collect();
    ensure(rs[0] == add(&f, &u[0], &u[3]) && rs[1] == add(&f, &u[1], &u[3]), "RS stage did not strip the gain offset")?;
    ensure(rs[2] == add(&f, &u[3], &u[4]), "z' did not decode to u4 + u5")?;
    let u_tilde = Subspace::from_rows(&f, 8, &rs).unwrap();
    let v_tilde = code.unlift_subspace(&u_tilde).unwrap();
    let unit = |i: usize| {
        let mut e = vec![0; 6];
        e[i] = 1;
        e
    };
    let expected = Subspace::from_rows(&f, 6, &[add(&f, &unit(0), &unit(3)), add(&f, &unit(1), &unit(3)), add(&f, &unit(3), &unit(4))]).unwrap();
    ensure(v_tilde == expected, "preimage differs from <e1+e4, e2+e4, e4+e5>")?;
    let meet = sc.z.intersect(&v_tilde).unwrap();
    let dist = sc.z.distance(&v_tilde).unwrap();
    ensure(meet.dim() == 1 && dist == 4, format!("dim(Z ^ V~) = {}, D = {dist}", meet.dim()))?;
    ensure(meet.contains_vector(&add(&f, &unit(0), &unit(1))).unwrap(), "e1 + e2 not in the intersection")?;
    let basis: Vec<MaskedVector> = received.iter().cloned().map(MaskedVector::unmasked).collect();
    let result = code.decode_dim_losses_and_symbol_errors(&basis);
    ensure(result.as_ref().ok() != Some(&sc.z), "decoder recovered Z")?;
    let outcome = match &result {
        Ok(_) => "a different codeword".to_string(),
        Err(e) => format!("failure ({e})"),
    };

    // control: the gain without the symbol error
    let clean = [add(&f, &u[0], &z), add(&f, &u[1], &z), z.clone()];
    let rs: Vec<Vec<u16>> = clean.iter().map(|r| code.outer().decode(&MaskedVector::unmasked(r.clone())).unwrap()).collect();
    ensure(rs == vec![add(&f, &u[0], &u[3]), add(&f, &u[1], &u[3]), u[3].clone()], "control without symbol error: RS outputs")?;
    let basis: Vec<MaskedVector> = clean.iter().cloned().map(MaskedVector::unmasked).collect();
    ensure(code.decode_dim_losses_and_symbol_errors(&basis).as_ref() == Ok(&sc.z), "control without symbol error not decoded")?;

    // control: the symbol error without the gain
    let mut e2 = vec![0; 8];
    e2[1] = sc.x[1];
    let no_gain = [u[0].clone(), add(&f, &u[1], &e2)];
    let basis: Vec<MaskedVector> = no_gain.iter().cloned().map(MaskedVector::unmasked).collect();
    ensure(code.decode_dim_losses_and_symbol_errors(&basis).as_ref() == Ok(&sc.z), "control without gain not decoded")?;
    Ok(format!("dim(Z ^ V~) = 1, D(Z, V~) = 4, decoder returned {outcome}; both controls decode Z"))
}

fn oracle_equivalence() -> Outcome {
    let f = gf(5);
    let grs = GrsCode::new(&f, 4, 3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let q = f.order() as u16;
    for case in 0..10_000 {
        let msg: Vec<u16> = (0..4).map(|_| rng.random_range(0..q)).collect();
        let c = grs.encode(&msg).unwrap();
        let mu = rng.random_range(0..=2usize);
        let rho = rng.random_range(0..=(2 - mu) / 2);
        let mut pos: Vec<usize> = (0..6).collect();
        for i in 0..6 {
            let j = rng.random_range(i..6);
            pos.swap(i, j);
        }
        let mut r = c.clone();
        for &j in &pos[..rho] {
            r[j] = f.add(r[j], rng.random_range(1..q));
        }
        let word = MaskedVector::with_erasures(r, &pos[rho..rho + mu]).unwrap();
        let fast = grs.decode(&word);
        let slow = reference::decode(&grs, &word);
        ensure(fast.is_ok() == slow.is_ok() && fast.as_ref().ok() == slow.as_ref().ok(), format!("GRS case {case} disagrees"))?;
        ensure(fast.as_ref() == Ok(&c), format!("GRS case {case} not corrected"))?;
    }

    let base = gf(2);
    let scan = KkCode::with_decoder(&base, 3, 4, 2, KkDecoder::Exhaustive).unwrap();
    let interp = scan.with_backend(KkDecoder::Interpolation);
    let mut agree_ok = 0;
    for case in 0..1_000u32 {
        let mut rng = trial_rng(91, 0, case);
        let v = scan.random_codeword(&mut rng);
        let theta = rng.random_range(0..=2);
        let omega = rng.random_range(0..=2);
        let out = transmit(&v, &ChannelSpec::new(theta, omega, 0, 0), &mut rng).unwrap();
        let received = out.received.space().clone();
        let a = scan.decode(&received);
        let b = interp.decode(&received);
        ensure(a == b, format!("KK case {case}: scan {a:?} vs interpolation {b:?}"))?;
        if a.is_ok() {
            agree_ok += 1;
        }
    }
    Ok(format!("10000 GRS cases agree; 1000 KK cases agree ({agree_ok} decoded)"))
}

fn allocation_scan() -> Outcome {
    let mut checked = 0;
    for n in 2..=20i64 {
        for ell in 1..n {
            for dt in 1..=n {
                let eq13 = |d: i64| (n - ell - d + 1) * (ell - (dt - d + 1) + 1);
                let mut best = 1;
                for d in 2..=dt {
                    if eq13(d) > eq13(best) {
                        best = d;
                    }
                }
                let closed = optimal_d(n as u64, ell as u64, dt as u64).unwrap() as i64;
                ensure(closed == best, format!("n={n}, l={ell}, D~={dt}: closed form {closed}, scan {best}"))?;
                if n >= 2 * ell + dt - 1 {
                    ensure(closed == dt, format!("n={n}, l={ell}, D~={dt}: expected D~"))?;
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} (n, l, D~) triples agree"))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 12] = [
        ("hybrid code over GF(5) with Grassmannian inner code", grassmann_inner_gf5),
        ("[10 4]_11 against the subspace code ceiling", gaussian_10_4_gf11),
        ("construction size", construction_size),
        ("erasure decoder exhaustive sweep", erasure_decoder_sweep),
        ("error decoder Monte-Carlo", error_decoder_monte_carlo),
        ("sphere size formula", sphere_counts),
        ("adjacency sphere lower bound", adjacency_lower_bound),
        ("projection does not increase distance", projection_distance),
        ("Gaussian coefficient sandwich", gaussian_sandwich),
        ("gain plus symbol error failure", failure_demo),
        ("decoder oracle equivalence", oracle_equivalence),
        ("optimal erasure allocation", allocation_scan),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        match result {
            Ok(detail) => println!("criterion {:>2} PASS {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
