//! Acceptance suite: one PASS/FAIL line per criterion. Runs without the libtest
//! harness so the lines are always printed.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use greenseq::bounds::{
    assem_tilted, bounds_report, c_module_count, construct_mgs_from_cut, cuts, disjoint_hom_cycles, fho_from_cut, Cut,
};
use greenseq::catalog::Catalog;
use greenseq::exchange::{initial_seed, maximal_green_sequences, mgs_classes, mutation_chain, ExtExchangeMatrix};
use greenseq::fho::{
    enumerate_maximal_fho, insertion_slots, is_maximal_fho, sequence_from_dims, verify_equivalence, VerifyOptions,
};
use greenseq::field::PrimeField;
use greenseq::named;
use greenseq::qp::QuiverWithPotential;
use greenseq::rational::{midpoint, ratio, Q};
use greenseq::reflect::{mutated_catalog, rotate_sequence, ReflectionContext};
use greenseq::rep::{hom_dim, is_isomorphic, projective, simple, DEFAULT_SUBMODULE_BUDGET};
use greenseq::walls::{compartment_signature, random_generic_path, random_point, WallSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const BUDGET: usize = 50_000_000;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn f(p: u32) -> PrimeField {
    PrimeField::new(p).unwrap()
}

fn catalog(qp: &QuiverWithPotential, p: u32) -> Catalog {
    Catalog::strings(Arc::new(qp.algebra().unwrap()), f(p)).unwrap()
}

fn dims_of(cat: &Catalog, seq: &[usize]) -> Vec<Vec<i64>> {
    seq.iter().map(|&i| cat.dims(i)).collect()
}

fn seed_of(qp: &QuiverWithPotential) -> ExtExchangeMatrix {
    initial_seed(qp.quiver()).unwrap()
}

fn criterion_1() -> Outcome {
    let expected: [[[i64; 3]; 6]; 6] = [
        [[0, -1, 1], [1, 0, -1], [-1, 1, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]],
        [[0, 0, -1], [0, 0, 1], [1, -1, 0], [1, 0, 0], [0, 1, 0], [0, 1, -1]],
        [[0, 0, -1], [0, 0, -1], [1, 1, 0], [1, 0, 0], [0, -1, 1], [0, -1, 0]],
        [[0, 0, 1], [0, 0, 1], [-1, -1, 0], [1, 0, 0], [1, 0, -1], [0, -1, 0]],
        [[0, 0, -1], [0, 0, 1], [1, -1, 0], [-1, 0, 1], [-1, 0, 0], [0, -1, 0]],
        [[0, -1, 1], [1, 0, -1], [-1, 1, 0], [0, 0, -1], [-1, 0, 0], [0, -1, 0]],
    ];
    let seed = seed_of(&named::a3_cycle());
    let start = Instant::now();
    let chain = mutation_chain(&seed, &[2, 1, 2, 0, 2]).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure!(chain.len() == 6, "chain has {} matrices", chain.len());
    for (i, (m, want)) in chain.iter().zip(&expected).enumerate() {
        let want: Vec<Vec<i64>> = want.iter().map(|r| r.to_vec()).collect();
        ensure!(m.rows() == want, "matrix {i} is {:?}", m.rows());
    }
    ensure!(chain[5].green_vertices().is_empty(), "final matrix still has a green column");
    ensure!(elapsed < Duration::from_millis(1), "took {elapsed:?}");
    Ok(format!("six matrices bit-exact, no green column at the end, {elapsed:?}"))
}

fn criterion_2() -> Outcome {
    let qp = named::a3_cycle();
    let cat = catalog(&qp, 2);
    let start = Instant::now();
    let mgs: BTreeSet<Vec<Vec<i64>>> =
        maximal_green_sequences(&seed_of(&qp), BUDGET).unwrap().into_iter().map(|g| g.c_vectors).collect();
    let fho: BTreeSet<Vec<Vec<i64>>> =
        enumerate_maximal_fho(&cat, BUDGET).unwrap().into_iter().map(|s| s.dim_vectors).collect();
    let walls = WallSet::new(&cat, DEFAULT_SUBMODULE_BUDGET).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut crossed = BTreeSet::new();
    for _ in 0..200 {
        let (_, c) = random_generic_path(&walls, &mut rng, 50).map_err(|e| e.to_string())?;
        crossed.insert(c.into_iter().map(|r| r.dims).collect::<Vec<_>>());
    }
    ensure!(cat.len() == 6, "catalog has {} modules", cat.len());
    ensure!(mgs == fho, "MGS and FHO sets differ: {} vs {}", mgs.len(), fho.len());
    ensure!(crossed == fho, "crossing set has {} of {} sequences", crossed.len(), fho.len());
    let example: Vec<Vec<i64>> = vec![vec![0, 0, 1], vec![0, 1, 1], vec![0, 1, 0], vec![1, 1, 0], vec![1, 0, 0]];
    ensure!(mgs.contains(&example) && fho.contains(&example) && crossed.contains(&example), "example sequence missing");
    let seq = sequence_from_dims(&cat, &example).unwrap();
    let m6 = cat.unique_by_dims(&[1, 0, 1]).ok_or("no module (1,0,1)")?;
    let obstruction = insertion_slots(&cat, &seq, m6).err().ok_or("(1,0,1) was insertable")?;
    ensure!(obstruction.from == 0 && obstruction.to == 4, "obstruction {obstruction:?}");
    ensure!(cat.hom(seq[0], m6) != 0 && cat.hom(m6, seq[4]) != 0, "Hom witnesses vanish");
    Ok(format!(
        "{} sequences in each of the three sets (200 random paths), example present, (1,0,1) blocked by M1 -> M6 and M6 -> M5, {:?}",
        mgs.len(),
        start.elapsed()
    ))
}

fn criterion_3() -> Outcome {
    let qp = named::a3_cycle();
    let cat = catalog(&qp, 2);
    let r = bounds_report(&qp, &cat, Some(BUDGET)).map_err(|e| e.to_string())?;
    ensure!(r.min_len == Some(4) && r.max_len == Some(5), "extrema {:?} {:?}", r.min_len, r.max_len);
    ensure!(r.cuts.len() == 3, "{} cuts", r.cuts.len());
    ensure!(r.cuts.iter().all(|c| c.tilted && c.c_modules == 5), "cut counts {:?}", r.cuts);
    ensure!(r.lower_bound == 5 && r.conjecture == Some(true), "lower bound {} conjecture {:?}", r.lower_bound, r.conjecture);
    Ok("min 4 = n + k, max 5 = binom(4,2) - 1, each of 3 cuts gives 5, conjecture holds".into())
}

fn criterion_4() -> Outcome {
    let qp = named::a5_example();
    let cat = catalog(&qp, 2);
    ensure!(cat.len() == 15, "catalog has {} modules", cat.len());
    let cut = Cut::by_ids(&qp, &named::A5_CUT).unwrap();
    ensure!(assem_tilted(&qp, &cut, &cat).unwrap(), "cut is not alternating");
    let c = c_module_count(&cut, &cat);
    ensure!(c == 13, "C-module count {c}");
    let start = Instant::now();
    let all = maximal_green_sequences(&seed_of(&qp), BUDGET).map_err(|e| e.to_string())?;
    let min = all.iter().map(|g| g.len()).min().unwrap();
    let max = all.iter().map(|g| g.len()).max().unwrap();
    ensure!((min, max) == (7, 13), "extrema ({min}, {max})");
    let alg = cat.algebra().clone();
    let find = |m: greenseq::rep::Representation| -> Result<usize, String> {
        (0..cat.len())
            .find(|&i| is_isomorphic(cat.module(i), &m).unwrap())
            .ok_or_else(|| format!("module {:?} not in catalog", m.dims()))
    };
    let s = |v: usize| find(simple(&alg, f(2), v).unwrap());
    let p = |v: usize| find(projective(&alg, f(2), v).unwrap());
    let seq = vec![s(0)?, s(3)?, p(0)?, s(2)?, p(3)?, s(1)?, s(4)?];
    ensure!(is_maximal_fho(&cat, &seq), "S1,S4,P1,S3,P4,S2,S5 = {:?} is not maximal FHO", dims_of(&cat, &seq));
    Ok(format!(
        "15 modules, cut {{a12, a45}} alternating with 13 C-modules, {} sequences with lengths 7..13 ({:?}), S1,S4,P1,S3,P4,S2,S5 maximal FHO",
        all.len(),
        start.elapsed()
    ))
}

fn criterion_5() -> Outcome {
    let qp = named::d4_cycle();
    let cat = catalog(&qp, 2);
    ensure!(cat.len() == 12, "catalog has {} modules", cat.len());
    let all = maximal_green_sequences(&seed_of(&qp), BUDGET).map_err(|e| e.to_string())?;
    let max = all.iter().map(|g| g.len()).max().unwrap();
    ensure!(max == 9, "max length {max}");
    let longest: Vec<_> = all.iter().filter(|g| g.len() == max).cloned().collect();
    let classes = mgs_classes(&longest).len();
    ensure!(classes == 4, "{classes} classes of maximal length");
    let cs = cuts(&qp).unwrap();
    ensure!(cs.len() == 4, "{} cuts", cs.len());
    for cut in &cs {
        let seq = fho_from_cut(cut, &cat).ok_or_else(|| format!("cut {:?} has a Hom cycle", cut.deleted_ids))?;
        ensure!(seq.len() == 9 && is_maximal_fho(&cat, &seq), "cut {:?} gives {:?}", cut.deleted_ids, dims_of(&cat, &seq));
    }
    Ok(format!("12 modules, max length 9, 4 classes among {} longest sequences, every cut gives a maximal FHO sequence of length 9", longest.len()))
}

fn criterion_6() -> Outcome {
    let qp = named::a9_example();
    let cat = catalog(&qp, 2);
    ensure!(cat.len() == 45, "catalog has {} modules", cat.len());
    let cut = Cut::by_ids(&qp, &named::A9_CUT).unwrap();
    let g = construct_mgs_from_cut(&qp, &cut, &cat).map_err(|e| e.to_string())?;
    ensure!(g.len() == 37, "constructed length {}", g.len());
    let cycles = disjoint_hom_cycles(&cat);
    let sets: Vec<BTreeSet<String>> = cycles.iter().map(|c| c.iter().map(|&i| cat.support_label(i)).collect()).collect();
    let want = |xs: [&str; 3]| -> BTreeSet<String> { xs.iter().map(|s| s.to_string()).collect() };
    ensure!(cycles.len() >= 8, "{} disjoint cycles", cycles.len());
    ensure!(sets.contains(&want(["12", "23", "13"])), "cycle 12, 23, 31 missing: {sets:?}");
    ensure!(sets.contains(&want(["78", "89", "79"])), "cycle 89, 97, 78 missing: {sets:?}");
    let r = bounds_report(&qp, &cat, None).map_err(|e| e.to_string())?;
    ensure!(r.upper_bound == 37 && r.achieved == Some(37) && r.certified, "report {} {:?} {}", r.upper_bound, r.achieved, r.certified);
    Ok(format!("length-37 MGS constructed, {} disjoint Hom cycles, upper bound 45 - {} = 37 achieved and certified", cycles.len(), cycles.len()))
}

/// Result of one sub-check of criterion 7. `attainable = false` marks a check
/// that is reported but not required for the exit status.
struct Sub {
    name: &'static str,
    outcome: Outcome,
    attainable: bool,
}

fn sub(name: &'static str, outcome: Outcome) -> Sub {
    Sub { name, outcome, attainable: true }
}

fn random_green_walk(seed: &ExtExchangeMatrix, rng: &mut ChaCha8Rng) -> Vec<ExtExchangeMatrix> {
    let mut chain = vec![seed.clone()];
    loop {
        let g = chain.last().unwrap().green_vertices();
        if g.is_empty() {
            return chain;
        }
        let k = g[rng.gen_range(0..g.len())];
        let next = chain.last().unwrap().mutate(k).unwrap();
        chain.push(next);
    }
}

fn prop_mutation(algebras: &[(&str, QuiverWithPotential)]) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(71);
    let mut steps = 0;
    for (name, qp) in algebras {
        let seed = seed_of(qp);
        for _ in 0..200 {
            let chain = random_green_walk(&seed, &mut rng);
            for m in &chain {
                ensure!(m.sign_incoherent_column().is_none(), "{name}: sign-incoherent matrix {:?}", m.rows());
                for k in 0..m.n() {
                    ensure!(m.mutate(k).unwrap().mutate(k).unwrap() == *m, "{name}: mutation at {k} is not an involution");
                }
                steps += 1;
            }
        }
    }
    Ok(format!("800 green walks, {steps} matrices, involutive and sign-coherent"))
}

fn prop_reflection(algebras: &[(&str, QuiverWithPotential)]) -> Outcome {
    let mut modules = 0;
    let mut pairs = 0;
    for (name, qp) in algebras {
        let cat = catalog(qp, 2);
        for k in 0..qp.vertex_count() {
            let ctx = ReflectionContext::new(qp, k, f(2)).map_err(|e| format!("{name}: {e}"))?;
            let perp: Vec<usize> = (0..cat.len())
                .filter(|&x| ctx.in_perp(cat.module(x)) && cat.module(x).dims()[k] != cat.module(x).total_dim())
                .collect();
            let images: Vec<_> = perp.iter().map(|&x| ctx.psi(cat.module(x)).unwrap()).collect();
            for (&x, y) in perp.iter().zip(&images) {
                ensure!(y.dim_vector() == ctx.phi(&cat.dims(x)), "{name}, k = {}: dims of psi {}", k + 1, cat.entry(x).name);
                modules += 1;
            }
            for (a, ya) in perp.iter().zip(&images) {
                for (b, yb) in perp.iter().zip(&images) {
                    ensure!(hom_dim(ya, yb).unwrap() == cat.hom(*a, *b), "{name}, k = {}: Hom not preserved", k + 1);
                    pairs += 1;
                }
            }
        }
    }
    Ok(format!("{modules} modules reflected, {pairs} Hom dimensions preserved"))
}

fn prop_rotation(algebras: &[(&str, QuiverWithPotential)]) -> Outcome {
    let mut checked = 0;
    for (name, qp) in algebras.iter().take(3) {
        let cat = catalog(qp, 2);
        let seqs = enumerate_maximal_fho(&cat, BUDGET).unwrap();
        for k in 0..qp.vertex_count() {
            let ctx = ReflectionContext::new(qp, k, f(2)).unwrap();
            let mc = mutated_catalog(&ctx, &cat).map_err(|e| e.to_string())?;
            let sk = cat.simple_index(k).unwrap();
            for s in seqs.iter().filter(|s| s.modules[0] == sk) {
                let rot = rotate_sequence(&mc, &s.modules).map_err(|e| format!("{name}: {e}"))?;
                ensure!(is_maximal_fho(&mc.catalog, &rot), "{name}, k = {}: rotation of {:?} not maximal", k + 1, s.dim_vectors);
                for (&x, &y) in s.modules[1..].iter().zip(&rot) {
                    let back = ctx.psi_inverse(mc.catalog.module(y)).unwrap();
                    ensure!(is_isomorphic(&back, cat.module(x)).unwrap(), "{name}: round trip of {} fails", cat.entry(x).name);
                }
                checked += 1;
            }
        }
    }
    ensure!(checked >= 200, "only {checked} sequences start at a simple");
    Ok(format!("{checked} sequences rotated and returned"))
}

fn prop_paths(algebras: &[(&str, QuiverWithPotential)]) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(73);
    for (name, qp) in algebras {
        let cat = catalog(qp, 2);
        let walls = WallSet::new(&cat, DEFAULT_SUBMODULE_BUDGET).unwrap();
        for _ in 0..200 {
            let (_, c) = random_generic_path(&walls, &mut rng, 50).map_err(|e| e.to_string())?;
            ensure!(c[0].dims.iter().sum::<i64>() == 1, "{name}: first wall {} is not a simple", c[0].name);
            let seq: Vec<usize> = c.iter().map(|r| r.module).collect();
            ensure!(is_maximal_fho(&cat, &seq), "{name}: crossing sequence {:?} is not maximal FHO", dims_of(&cat, &seq));
        }
    }
    Ok("800 random generic paths: first crossing simple, every crossing sequence maximal FHO".into())
}

fn prop_bound(algebras: &[(&str, QuiverWithPotential)]) -> Outcome {
    let mut parts = Vec::new();
    for (name, qp) in algebras {
        let cat = catalog(qp, 2);
        let n = qp.vertex_count();
        let (p, m) = if *name == "A9" {
            // certified maximum and the shortest of 200 random green walks
            let cut = Cut::by_ids(qp, &named::A9_CUT).unwrap();
            let m = construct_mgs_from_cut(qp, &cut, &cat).unwrap().len();
            let mut rng = ChaCha8Rng::seed_from_u64(79);
            let p = (0..200).map(|_| random_green_walk(&seed_of(qp), &mut rng).len() - 1).min().unwrap();
            (p, m)
        } else {
            let all = maximal_green_sequences(&seed_of(qp), BUDGET).unwrap();
            (all.iter().map(|g| g.len()).min().unwrap(), all.iter().map(|g| g.len()).max().unwrap())
        };
        ensure!(m + p <= cat.len() + n, "{name}: {m} + {p} - {n} > {}", cat.len());
        parts.push(format!("{name} {m}+{p}-{n}<={}", cat.len()));
    }
    Ok(parts.join(", "))
}

fn prop_convexity(algebras: &[(&str, QuiverWithPotential)]) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(83);
    let mut checks = 0;
    let mut per = Vec::new();
    for (name, qp) in algebras {
        let cat = catalog(qp, 2);
        let walls = WallSet::new(&cat, DEFAULT_SUBMODULE_BUDGET).unwrap();
        let n = qp.vertex_count();
        let mut here = 0;
        let mut attempts = 0;
        while here < 300 {
            attempts += 1;
            ensure!(attempts < 100_000, "{name}: too few same-compartment pairs");
            let x = random_point(&mut rng, n);
            let scale = ratio(1, rng.gen_range(1..=50));
            let y: Vec<Q> = x.iter().zip(random_point(&mut rng, n)).map(|(a, b)| a + &scale * b).collect();
            let (Ok(sx), Ok(sy)) = (compartment_signature(&x, &walls, &cat), compartment_signature(&y, &walls, &cat)) else {
                continue;
            };
            if sx != sy {
                continue;
            }
            let mid = midpoint(&x, &y);
            match compartment_signature(&mid, &walls, &cat) {
                Ok(sm) => ensure!(sm == sx, "{name}: midpoint leaves the compartment"),
                Err(_) => return Err(format!("{name}: midpoint lies on a wall")),
            }
            here += 1;
        }
        checks += here;
        per.push(format!("{name} {here}"));
    }
    Ok(format!("{checks} midpoint checks ({}), zero failures", per.join(", ")))
}

fn acceptance_numbers(qp: &QuiverWithPotential, name: &str, p: u32) -> (Vec<Vec<usize>>, Vec<usize>) {
    let cat = catalog(qp, p);
    let mut numbers = vec![cat.len()];
    if name != "A9" {
        numbers.push(enumerate_maximal_fho(&cat, BUDGET).unwrap().len());
    }
    let r = bounds_report(qp, &cat, None).unwrap();
    numbers.extend([r.lower_bound, r.upper_bound, r.hom_cycles.len(), r.achieved.unwrap_or(0)]);
    numbers.extend(r.cuts.iter().flat_map(|c| [c.tilted as usize, c.c_modules, c.mgs_len.unwrap_or(0)]));
    (cat.hom_table().to_vec(), numbers)
}

fn prop_field(algebras: &[(&str, QuiverWithPotential)]) -> Outcome {
    for (name, qp) in algebras {
        let (h2, n2) = acceptance_numbers(qp, name, 2);
        let (h3, n3) = acceptance_numbers(qp, name, 3);
        ensure!(h2 == h3, "{name}: Hom tables differ between p = 2 and p = 3");
        ensure!(n2 == n3, "{name}: numbers differ: {n2:?} vs {n3:?}");
    }
    Ok("Hom tables, catalog sizes, FHO counts and bounds identical at p = 2 and p = 3".into())
}

fn prop_converse(algebras: &[(&str, QuiverWithPotential)]) -> (Sub, Sub) {
    let mut line_parts = Vec::new();
    let mut poly_parts = Vec::new();
    let mut line_ok = true;
    let mut poly_ok = true;
    for (name, qp) in algebras.iter().take(3) {
        let cat = catalog(qp, 2);
        let opts = VerifyOptions { samples: 200, seed: 89, ..VerifyOptions::default() };
        let r = match verify_equivalence(qp, &cat, &opts) {
            Ok(r) => r,
            Err(e) => {
                let msg = format!("{name}: {e}");
                return (sub("7e", Err(msg.clone())), sub("7e", Err(msg)));
            }
        };
        let total = r.fho.len();
        line_ok &= r.line_realized == total;
        line_parts.push(format!(
            "{name} {}/{total} ({} sampled, {} with no admissible base)",
            r.line_realized,
            r.fho.intersection(&r.sampled).count(),
            r.line_unrealizable.len()
        ));
        poly_ok &= r.passed && r.polygonal_realized == total;
        poly_parts.push(format!("{name} {}/{total}", r.polygonal_realized));
    }
    let line = if line_ok { Ok(line_parts.join(", ")) } else { Err(line_parts.join(", ")) };
    let poly = if poly_ok { Ok(poly_parts.join(", ")) } else { Err(poly_parts.join(", ")) };
    (
        Sub { name: "converse, straight paths x + t 1", outcome: line, attainable: false },
        Sub { name: "converse, piecewise-linear green paths", outcome: poly, attainable: true },
    )
}

fn criterion_7() -> Vec<Sub> {
    let algebras = named::acceptance_algebras();
    let mut out = vec![
        sub("mutation involution and sign coherence", prop_mutation(&algebras)),
        sub("reflection dims and Hom preservation", prop_reflection(&algebras)),
        sub("rotation round trip", prop_rotation(&algebras)),
        sub("first crossing simple, crossings maximal FHO", prop_paths(&algebras)),
    ];
    let (line, poly) = prop_converse(&algebras);
    out.push(line);
    out.push(poly);
    out.push(sub("m + p - n <= catalog size", prop_bound(&algebras)));
    out.push(sub("compartment convexity", prop_convexity(&algebras)));
    out.push(sub("field independence", prop_field(&algebras)));
    out
}

fn main() -> ExitCode {
    let mut required_failures = 0;
    let criteria: [(&str, fn() -> Outcome); 6] = [
        ("1", criterion_1),
        ("2", criterion_2),
        ("3", criterion_3),
        ("4", criterion_4),
        ("5", criterion_5),
        ("6", criterion_6),
    ];
    for (id, run) in criteria {
        match run() {
            Ok(msg) => println!("criterion {id}: PASS {msg}"),
            Err(msg) => {
                required_failures += 1;
                println!("criterion {id}: FAIL {msg}");
            }
        }
    }
    let subs = criterion_7();
    let mut all_ok = true;
    for s in &subs {
        match &s.outcome {
            Ok(msg) => println!("  7 {}: PASS {msg}", s.name),
            Err(msg) => {
                all_ok = false;
                if s.attainable {
                    required_failures += 1;
                    println!("  7 {}: FAIL {msg}", s.name);
                } else {
                    println!("  7 {}: FAIL (not attainable) {msg}", s.name);
                }
            }
        }
    }
    let failed: Vec<&str> = subs.iter().filter(|s| s.outcome.is_err()).map(|s| s.name).collect();
    if all_ok {
        println!("criterion 7: PASS");
    } else {
        println!("criterion 7: FAIL ({})", failed.join("; "));
    }
    if required_failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
