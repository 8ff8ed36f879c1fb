use std::sync::{Arc, OnceLock};

use greenseq::catalog::Catalog;
use greenseq::exchange::{initial_seed, ExtExchangeMatrix};
use greenseq::fho::{enumerate_maximal_fho, insertion_slots, is_maximal_in_torsion_class, is_weakly_fho, FhoSequence};
use greenseq::field::{Mat, PrimeField};
use greenseq::io::{parse_dims_sequence, parse_sequence, ModuleJson};
use greenseq::lp::{feasible_point, Cmp, Constraint};
use greenseq::named;
use greenseq::quiver::Quiver;
use greenseq::rational::{format_rational, parse_rational, ratio, Q};
use greenseq::rep::DEFAULT_SUBMODULE_BUDGET;
use greenseq::walls::{crossing_sequence, GreenPath, WallSet};
use proptest::prelude::*;

/// A quiver on `n` vertices with no loops and no 2-cycles.
fn quiver_strategy() -> impl Strategy<Value = Quiver> {
    (2usize..=5).prop_flat_map(|n| {
        proptest::collection::vec((0..n, 0..n, 1usize..=2), 0..8).prop_map(move |edges| {
            let mut mult = vec![vec![0usize; n]; n];
            for (s, t, m) in edges {
                if s != t && mult[t][s] == 0 {
                    mult[s][t] = m;
                }
            }
            let mut names = Vec::new();
            for s in 0..n {
                for t in 0..n {
                    for i in 0..mult[s][t] {
                        names.push((format!("a{s}_{t}_{i}"), s, t));
                    }
                }
            }
            let edges: Vec<(&str, usize, usize)> = names.iter().map(|(id, s, t)| (id.as_str(), *s, *t)).collect();
            Quiver::from_edges(n, &edges).unwrap()
        })
    })
}

fn a5_catalog() -> &'static (Catalog, Vec<FhoSequence>) {
    static CELL: OnceLock<(Catalog, Vec<FhoSequence>)> = OnceLock::new();
    CELL.get_or_init(|| {
        let cat = Catalog::strings(Arc::new(named::a5_example().algebra().unwrap()), PrimeField::new(2).unwrap()).unwrap();
        let seqs = enumerate_maximal_fho(&cat, 10_000_000).unwrap();
        (cat, seqs)
    })
}

fn walk(m: &ExtExchangeMatrix, picks: &[usize]) -> Vec<ExtExchangeMatrix> {
    let mut out = vec![m.clone()];
    for &p in picks {
        let cur = out.last().unwrap();
        let g = cur.green_vertices();
        if g.is_empty() {
            break;
        }
        let next = cur.mutate(g[p % g.len()]).unwrap();
        out.push(next);
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn mutation_is_an_involution(q in quiver_strategy(), ks in proptest::collection::vec(0usize..5, 0..8)) {
        let seed = initial_seed(&q).unwrap();
        let mut m = seed;
        for k in ks {
            let k = k % m.n();
            let Ok(next) = m.mutate(k) else { break };
            prop_assert_eq!(next.mutate(k).unwrap(), m.clone());
            m = next;
        }
    }

    #[test]
    fn c_matrices_stay_sign_coherent(q in quiver_strategy(), picks in proptest::collection::vec(0usize..5, 0..12)) {
        let seed = initial_seed(&q).unwrap();
        for m in walk(&seed, &picks) {
            prop_assert!(m.sign_incoherent_column().is_none());
        }
    }

    #[test]
    fn rationals_round_trip(n in -10_000i64..10_000, d in 1i64..10_000) {
        let x: Q = ratio(n, d);
        prop_assert_eq!(parse_rational(&format_rational(&x)).unwrap(), x);
    }

    #[test]
    fn sequences_parse_without_panicking(s in "[0-9 ,;a-z-]{0,24}") {
        let _ = parse_sequence(&s, 4);
        let _ = parse_dims_sequence(&s, 3);
        let _ = parse_rational(&s);
    }

    #[test]
    fn lp_points_satisfy_their_constraints(
        rows in proptest::collection::vec((proptest::collection::vec(-5i64..=5, 3), 0u8..3, -10i64..=10), 0..7)
    ) {
        let cons: Vec<Constraint> = rows
            .iter()
            .map(|(c, cmp, rhs)| {
                let cmp = [Cmp::Le, Cmp::Eq, Cmp::Ge][*cmp as usize];
                Constraint::new(c.iter().map(|&v| ratio(v, 1)).collect(), cmp, ratio(*rhs, 1))
            })
            .collect();
        if let Some(x) = feasible_point(3, &cons) {
            prop_assert!(cons.iter().all(|c| c.holds(&x)));
        }
    }

    #[test]
    fn module_json_never_panics(
        dims in proptest::collection::vec(0usize..3, 0..4),
        rows in proptest::collection::vec(proptest::collection::vec(-3i64..3, 0..3), 0..3),
        arrow in prop_oneof![Just("alpha"), Just("beta"), Just("gamma"), Just("x")],
    ) {
        let alg = Arc::new(named::a3_cycle().algebra().unwrap());
        let m = ModuleJson { dims, mats: [(arrow.to_string(), rows)].into_iter().collect() };
        if let Ok(rep) = m.to_module(&alg, PrimeField::new(3).unwrap()) {
            prop_assert!(rep.check_relations().is_ok());
        }
    }

    #[test]
    fn insertion_slots_keep_sequences_orthogonal(idx in 0usize..2242, x in 0usize..15, cut in 0usize..13) {
        let (cat, seqs) = a5_catalog();
        let seq = &seqs[idx % seqs.len()].modules;
        let prefix: Vec<usize> = seq[..cut.min(seq.len())].iter().copied().filter(|&m| m != x).collect();
        if let Ok(slots) = insertion_slots(cat, &prefix, x) {
            for p in slots {
                let mut s = prefix.clone();
                s.insert(p, x);
                prop_assert!(is_weakly_fho(cat, &s) || !cat.is_schurian(x));
            }
        }
    }

    #[test]
    fn crossing_points_lie_on_their_walls(a in -50i64..50, b in -50i64..50, c in -50i64..50, d in 1i64..60) {
        static WALLS: OnceLock<WallSet> = OnceLock::new();
        let walls = WALLS.get_or_init(|| {
            let cat = Catalog::strings(Arc::new(named::d4_cycle().algebra().unwrap()), PrimeField::new(2).unwrap()).unwrap();
            WallSet::new(&cat, DEFAULT_SUBMODULE_BUDGET).unwrap()
        });
        let base = vec![ratio(a, d), ratio(b, d + 1), ratio(c, d + 2), ratio(a - b, d + 3)];
        if let Ok(c) = crossing_sequence(&GreenPath::new(base), walls) {
            for w in c.windows(2) {
                prop_assert!(w[0].time < w[1].time);
            }
            for r in &c {
                let wall = walls.wall_of(r.module).unwrap();
                prop_assert!(wall.interior_contains(&r.point));
            }
        }
    }
}

#[test]
fn prefixes_are_maximal_in_their_torsion_class() {
    let (cat, seqs) = a5_catalog();
    for s in seqs {
        for l in 1..=s.len() {
            assert!(is_maximal_in_torsion_class(cat, &s.modules[..l]));
        }
    }
}

#[test]
fn omitted_simples_receive_no_maps() {
    let (cat, seqs) = a5_catalog();
    let n = cat.algebra().vertex_count();
    for s in seqs {
        for j in 0..n {
            let sj = cat.simple_index(j).unwrap();
            if !s.modules.contains(&sj) {
                assert!(s.modules.iter().all(|&m| cat.hom(m, sj) == 0), "{:?} omits S{}", s.dim_vectors, j + 1);
            }
        }
    }
}

#[test]
fn every_simple_appears_somewhere() {
    let (cat, seqs) = a5_catalog();
    for j in 0..cat.algebra().vertex_count() {
        let sj = cat.simple_index(j).unwrap();
        assert!(seqs.iter().any(|s| s.modules.contains(&sj)));
    }
}

#[test]
fn zero_matrices_are_accepted() {
    let alg = Arc::new(named::a3_cycle().algebra().unwrap());
    let m = ModuleJson { dims: vec![0, 2, 0], mats: Default::default() };
    let rep = m.to_module(&alg, PrimeField::new(2).unwrap()).unwrap();
    assert_eq!(rep.mat(0), &Mat::zeros(0, 2));
}
