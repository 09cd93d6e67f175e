//! Acceptance criteria 1 to 9. Each prints one PASS/FAIL line with its
//! elapsed time and pinned limit. Run with `--nocapture` to see them.

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use anosov_core::actions::{is_anosov_matrix, is_semisimple, is_totally_reducible, validate};
use anosov_core::exactnum::rational::{q, Interval, Q};
use anosov_core::freenil::{free_nilpotent_lift, hall_basis, lift_is_anosov};
use anosov_core::normalforms::{brute_force_dimension, sr_group_dimension, ContractionSpectrum, Convention};
use anosov_core::oracle::{lyndon_count, root_moduli_sq};
use anosov_core::report::selftest::numeric_lift_is_anosov;
use anosov_core::report::{ActionFile, Payload};
use anosov_core::samples::{random_commuting_pair, random_unimodular};
use anosov_core::weyl::{
    anosov_in_every_chamber, coarse_classes, complementary_splitting, fast_stable_element, is_tns, lyapunov_data,
    stable_set, weyl_chambers, LyapunovFunctional, Side,
};
use anosov_core::{root_modulus_classes, Config, Verdict3};
use num_bigint::BigInt;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

const SEED: u64 = 20_260_601;

type Outcome = Result<String, String>;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(name)
}

fn forge(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_anosov-forge"))
        .args(args)
        .env_remove("ANOSOV_FORGE_BITS")
        .output()
        .expect("binary runs")
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn block_unipotent_fixture() -> Outcome {
    let o = forge(&["analyze", fixture("block_unipotent.json").to_str().unwrap(), "--json", "-"]);
    let v: Value = serde_json::from_slice(&o.stdout).map_err(|e| e.to_string())?;
    let h = &v["hypotheses"];
    ensure(h["semisimple"]["status"] == "false", || format!("semisimple = {}", h["semisimple"]))?;
    ensure(h["totally_reducible"]["status"] == "false", || format!("totally_reducible = {}", h["totally_reducible"]))?;
    ensure(o.status.code() == Some(1), || format!("exit {:?}", o.status.code()))?;
    Ok("semisimple=false totally_reducible=false exit=1".into())
}

fn reducibility_matches_semisimplicity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut semisimple = 0;
    for i in 0..200 {
        let (a, b) = random_commuting_pair(&mut rng, 6, 3);
        let act = validate(vec![a, b]).map_err(|e| e.to_string())?;
        let ss = is_semisimple(&act);
        let tr = is_totally_reducible(&act).totally_reducible;
        ensure(ss == tr, || format!("pair {i}: semisimple={ss} totally_reducible={tr}"))?;
        semisimple += ss as usize;
    }
    Ok(format!("200 pairs agree ({semisimple} semisimple)"))
}

fn lift_matches_numeric_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    let tol = Q::new(BigInt::one(), BigInt::from(10).pow(30));
    let (mut anosov, mut near) = (0, 0);
    for i in 0..100 {
        let d = rng.gen_range(1..=3);
        let step = rng.gen_range(2..=3);
        // half the cases use a hyperbolic base
        let a = loop {
            let a = random_unimodular(&mut rng, d, 3);
            if i % 2 == 1 || d == 1 || is_anosov_matrix(&a) {
                break a;
            }
        };
        let act = validate(vec![a.clone()]).map_err(|e| e.to_string())?;
        let lift = free_nilpotent_lift(&act, step, 10_000).map_err(|e| e.to_string())?;
        let exact = lift_is_anosov(&lift, &[1]);
        let numeric = numeric_lift_is_anosov(&root_moduli_sq(&a.charpoly(), 50), step, &tol);
        if exact && !numeric {
            // a product within the tolerance of 1 that is not exactly 1
            near += 1;
        } else {
            ensure(exact == numeric, || format!("case {i}: exact={exact} numeric={numeric} step={step}"))?;
        }
        anosov += exact as usize;
    }
    Ok(format!("100 lifts agree ({anosov} Anosov, {near} within tolerance)"))
}

fn witt_dimensions() -> Outcome {
    for d in 1..=4 {
        for k in 1..=4 {
            let b = hall_basis(d, k, 10_000).map_err(|e| e.to_string())?;
            for n in 1..=k {
                let l = lyndon_count(d, n);
                ensure(b.dims[n - 1] == l, || format!("d={d} n={n}: {} vs {l}", b.dims[n - 1]))?;
            }
        }
    }
    Ok("all degrees for d,k <= 4".into())
}

fn planar_chambers() -> Outcome {
    let cfg = Config::default();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 2);
    for t in 0..50 {
        let n = rng.gen_range(1..=10);
        let mut dirs: Vec<(i64, i64)> = Vec::new();
        while dirs.len() < n {
            let v = (rng.gen_range(-9..=9), rng.gen_range(-9..=9));
            if v != (0, 0) && dirs.iter().all(|w| v.0 * w.1 != v.1 * w.0) {
                dirs.push(v);
            }
        }
        let mut fs: Vec<LyapunovFunctional> = Vec::new();
        for &(a, b) in &dirs {
            fs.push(LyapunovFunctional::synthetic_i64(&[a, b]));
            match rng.gen_range(0..4) {
                0 => fs.push(LyapunovFunctional::synthetic_i64(&[2 * a, 2 * b])),
                1 => fs.push(LyapunovFunctional::synthetic_i64(&[-a, -b])),
                _ => {}
            }
        }
        let dec = weyl_chambers(&fs, &cfg).map_err(|e| format!("case {t}: {e}"))?;
        ensure(dec.chambers.len() == 2 * n, || format!("case {t}: {} chambers for {n} lines", dec.chambers.len()))?;
        for ch in &dec.chambers {
            for (ci, class) in dec.classes.iter().enumerate() {
                for &m in &class.members {
                    let s = fs[m].sign_at_i64(&ch.witness, cfg.precision_cap_bits);
                    ensure(s == Some(ch.class_signs[ci]), || format!("case {t}: sign mismatch at {:?}", ch.witness))?;
                }
            }
        }
        let mut vectors: Vec<&Vec<i32>> = dec.chambers.iter().map(|c| &c.hyperplane_signs).collect();
        vectors.sort();
        vectors.dedup();
        ensure(vectors.len() == 2 * n, || format!("case {t}: repeated sign vectors"))?;
    }
    Ok("50 arrangements, 2n sign-verified chambers each".into())
}

fn cartan_end_to_end() -> Outcome {
    let cfg = Config::default();
    let text = std::fs::read_to_string(fixture("cartan.json")).map_err(|e| e.to_string())?;
    let Payload::Torus(p) = ActionFile::parse(&text).map_err(|e| e.to_string())?.payload else {
        return Err("cartan fixture is not torus-kind".into());
    };
    let gens = p.generators;
    let act = validate(gens.clone()).map_err(|e| e.to_string())?;
    let data = lyapunov_data(&act.rational_generators(), cfg.precision_cap_bits);
    let fs = &data.functionals;
    let classes = coarse_classes(fs, &cfg).map_err(|e| e.to_string())?;
    ensure(classes.len() == 3, || format!("{} coarse classes", classes.len()))?;
    ensure(is_tns(fs, &cfg).map_err(|e| e.to_string())?.verdict == Verdict3::True, || "not TNS".into())?;
    let dec = weyl_chambers(fs, &cfg).map_err(|e| e.to_string())?;
    ensure(dec.chambers.len() == 6, || format!("{} chambers", dec.chambers.len()))?;
    let (all, per) = anosov_in_every_chamber(&gens, &dec.chambers);
    ensure(all, || format!("per-chamber Anosov: {per:?}"))?;
    let members = |set: &std::collections::BTreeSet<usize>, extra: Option<usize>| {
        let mut v: Vec<usize> = set.iter().chain(extra.iter()).flat_map(|&c| classes[c].members.clone()).collect();
        v.sort();
        v
    };
    let mut min_gap = f64::INFINITY;
    for target in 0..classes.len() {
        let s = complementary_splitting(fs, target, &cfg).map_err(|e| e.to_string())?;
        for (w, expect) in [
            (&s.a1, members(&s.e1, Some(target))),
            (&s.c1, members(&s.e1, None)),
            (&s.a2, members(&s.e2, Some(target))),
            (&s.c2, members(&s.e2, None)),
        ] {
            let got: Vec<usize> = stable_set(fs, w, &cfg).map_err(|e| e.to_string())?.into_iter().collect();
            ensure(got == expect, || format!("class {target}: stable set at {w:?} is {got:?}, expected {expect:?}"))?;
        }
        for side in [Side::E1, Side::E2] {
            let f = fast_stable_element(fs, &s, side, &cfg).map_err(|e| e.to_string())?;
            ensure(f.min_gap > 0.0 && f.max_target < 0.0, || format!("class {target}: margins {f:?}"))?;
            min_gap = min_gap.min(f.min_gap);
        }
    }
    Ok(format!("3 classes, TNS, 6 Anosov chambers, 12 stable sets, min margin {min_gap:.3}"))
}

fn subresonance_grid() -> Outcome {
    let cfg = Config::default();
    let spot = ContractionSpectrum::from_i64(&[-1, -2], &[1, 1]).map_err(|e| e.to_string())?;
    let v = sr_group_dimension(&spot, Convention::default(), &cfg).map_err(|e| e.to_string())?;
    ensure(v == 3, || format!("spot value {v}"))?;
    let mut cases = 0;
    for mask in 1u32..64 {
        let exps: Vec<i64> = (1..=6).filter(|i| mask & (1 << (i - 1)) != 0).map(|i| -i).collect();
        let l = exps.len();
        if l > 4 {
            continue;
        }
        let qe: Vec<Q> = exps.iter().map(|&x| q(x)).collect();
        for code in 0..3usize.pow(l as u32) {
            let mults: Vec<usize> = (0..l).map(|i| code / 3usize.pow(i as u32) % 3 + 1).collect();
            let spec = ContractionSpectrum::from_i64(&exps, &mults).map_err(|e| e.to_string())?;
            for conv in [Convention::DiagonalLinear, Convention::AllJ, Convention::ExcludeSelf] {
                let fast = sr_group_dimension(&spec, conv, &cfg).map_err(|e| e.to_string())?;
                let slow = brute_force_dimension(&qe, &mults, conv);
                ensure(fast == slow, || format!("{exps:?} {mults:?} {conv:?}: {fast} vs {slow}"))?;
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} cases agree, spot value 3"))
}

/// Number of pairwise position products inside each block class, or `None`
/// when some product meets zero or several classes.
fn product_counts(base: &[anosov_core::ModulusClass], block: &[anosov_core::ModulusClass]) -> Option<Vec<usize>> {
    let positions: Vec<Interval> = base
        .iter()
        .flat_map(|c| std::iter::repeat_n(c.squared_enclosure(), c.multiplicity()))
        .collect();
    let mut counts = vec![0usize; block.len()];
    for i in 0..positions.len() {
        for j in i + 1..positions.len() {
            let p = positions[i].mul(&positions[j]);
            let mut hits = (0..block.len()).filter(|&c| block[c].squared_enclosure().intersects(&p));
            match (hits.next(), hits.next()) {
                (Some(c), None) => counts[c] += 1,
                _ => return None,
            }
        }
    }
    Some(counts)
}

fn degree_two_products() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 3);
    let mut checked = 0;
    for t in 0..50 {
        let d = rng.gen_range(2..=4);
        let a = random_unimodular(&mut rng, d, 3);
        let act = validate(vec![a.clone()]).map_err(|e| e.to_string())?;
        let lift = free_nilpotent_lift(&act, 2, 10_000).map_err(|e| e.to_string())?;
        let base = root_modulus_classes(&a.charpoly());
        let block = root_modulus_classes(&lift.blocks[0][1].charpoly());
        let counts = (|| {
            for bits in [64, 128, 256] {
                base.iter().chain(&block).for_each(|c| c.refine(bits));
                if let Some(c) = product_counts(&base, &block) {
                    return Ok(c);
                }
            }
            Err(format!("case {t}: products still meet several classes"))
        })()?;
        for (c, n) in block.iter().zip(&counts) {
            ensure(c.multiplicity() == *n, || format!("case {t}: multiplicity {} vs {n} products", c.multiplicity()))?;
        }
        checked += 1;
    }
    Ok(format!("{checked} lifts match pairwise products"))
}

fn byte_identical_outputs() -> Outcome {
    let names = ["cartan.json", "block_unipotent.json", "fibonacci.json", "symplectic.json", "identity.json"];
    for name in names {
        let p = fixture(name);
        let p = p.to_str().unwrap();
        let first = forge(&["analyze", p, "--json", "-"]).stdout;
        let second = forge(&["analyze", p, "--json", "-"]).stdout;
        ensure(!first.is_empty() && first == second, || format!("{name}: analyze output differs"))?;
    }
    for name in ["cartan.json", "fibonacci.json"] {
        let p = fixture(name);
        let p = p.to_str().unwrap();
        let args = ["chambers", p, "--format", if name == "cartan.json" { "svg" } else { "json" }];
        let first = forge(&args).stdout;
        ensure(!first.is_empty() && first == forge(&args).stdout, || format!("{name}: chambers output differs"))?;
    }
    Ok("analyze JSON and chambers output repeat byte for byte".into())
}

#[test]
fn acceptance() {
    let criteria: [(&str, u64, fn() -> Outcome); 9] = [
        ("block-unipotent fixture fails semisimplicity", 1, block_unipotent_fixture),
        ("total reducibility matches semisimplicity", 30, reducibility_matches_semisimplicity),
        ("lift verdicts match the numeric oracle", 60, lift_matches_numeric_oracle),
        ("Hall basis dimensions match Lyndon counts", 5, witt_dimensions),
        ("planar arrangements have 2n chambers", 10, planar_chambers),
        ("Cartan action end to end", 10, cartan_end_to_end),
        ("subresonance dimensions match brute force", 60, subresonance_grid),
        ("degree-2 moduli are pairwise products", 30, degree_two_products),
        ("outputs are deterministic", 30, byte_identical_outputs),
    ];
    let mut failed = Vec::new();
    for (i, (name, limit, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > Duration::from_secs(limit) => Err(format!("{detail}; over time limit")),
            other => other,
        };
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d.clone()),
            Err(d) => ("FAIL", d.clone()),
        };
        println!("criterion {}: {tag} {name} [{:.2}s / {limit}s] {detail}", i + 1, elapsed.as_secs_f64());
        if outcome.is_err() {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
