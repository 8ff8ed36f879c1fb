//! Semistability walls `D(M)`, straight green paths `x + t(1, ..., 1)` and their
//! wall crossings, Harder-Narasimhan filtrations along a path, and compartments.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::{Serialize, Serializer};

use crate::catalog::Catalog;
use crate::error::{Error, Result};
use crate::exchange::ExtExchangeMatrix;
use crate::fho::torsion_pair;
use crate::lp::{feasible_point, Cmp, Constraint};
use crate::rational::{dot, format_point, format_rational, one_dot, q, ratio, shift, Q};
use crate::rep::{submodule_dimvecs, submodules, Representation};

fn ser_q<S: Serializer>(x: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(x))
}

fn ser_point<S: Serializer>(x: &[Q], s: S) -> std::result::Result<S::Ok, S::Error> {
    format_point(x).serialize(s)
}

/// The wall `D(M)` of a module: `x . dim M = 0` and `x . d <= 0` for every
/// submodule dimension vector `d`.
#[derive(Clone, Debug)]
pub struct Wall {
    pub module: usize,
    pub name: String,
    pub normal: Vec<i64>,
    /// Dimension vectors of the proper nonzero submodules.
    pub subs: Vec<Vec<i64>>,
}

impl Wall {
    pub fn new(module: usize, name: &str, rep: &Representation, budget: usize) -> Result<Self> {
        let normal = rep.dim_vector();
        let subs = submodule_dimvecs(rep, budget)?
            .into_iter()
            .filter(|d| d.iter().any(|&v| v != 0) && *d != normal)
            .collect();
        Ok(Self { module, name: name.to_string(), normal, subs })
    }

    /// `x` in `D(M)`.
    pub fn contains(&self, x: &[Q]) -> bool {
        dot(x, &self.normal).is_zero() && self.subs.iter().all(|d| !dot(x, d).is_positive())
    }

    /// `x` in the stable interior: every proper nonzero submodule pairs strictly negatively.
    pub fn interior_contains(&self, x: &[Q]) -> bool {
        dot(x, &self.normal).is_zero() && self.subs.iter().all(|d| dot(x, d).is_negative())
    }

    /// Does the stable interior span the hyperplane `H(M)`?
    pub fn full_rank(&self) -> bool {
        let n = self.normal.len();
        let mut cons = vec![Constraint::new(self.normal.iter().map(|&v| q(v)).collect(), Cmp::Eq, q(0))];
        for d in &self.subs {
            cons.push(Constraint::new(d.iter().map(|&v| q(v)).collect(), Cmp::Le, q(-1)));
        }
        feasible_point(n, &cons).is_some()
    }

    /// The unique `t` with `(x + t 1) . dim M = 0`.
    pub fn crossing_time(&self, x: &[Q]) -> Q {
        -dot(x, &self.normal) / q(one_dot(&self.normal))
    }
}

pub fn in_d(m: &Representation, x: &[Q], budget: usize) -> Result<bool> {
    Ok(Wall::new(0, "", m, budget)?.contains(x))
}

pub fn in_int_d(m: &Representation, x: &[Q], budget: usize) -> Result<bool> {
    Ok(Wall::new(0, "", m, budget)?.interior_contains(x))
}

pub fn d_full_rank(m: &Representation, budget: usize) -> Result<bool> {
    Ok(Wall::new(0, "", m, budget)?.full_rank())
}

/// The walls of every Schurian module of a catalog.
#[derive(Clone, Debug)]
pub struct WallSet {
    n: usize,
    walls: Vec<Wall>,
}

impl WallSet {
    pub fn new(cat: &Catalog, budget: usize) -> Result<Self> {
        let walls = cat
            .schurian_indices()
            .into_iter()
            .map(|i| Wall::new(i, &cat.entry(i).name, cat.module(i), budget))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { n: cat.algebra().vertex_count(), walls })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn walls(&self) -> &[Wall] {
        &self.walls
    }

    pub fn wall_of(&self, module: usize) -> Option<&Wall> {
        self.walls.iter().find(|w| w.module == module)
    }
}

/// The line `gamma(t) = base + t (1, ..., 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GreenPath {
    #[serde(serialize_with = "ser_point")]
    pub base: Vec<Q>,
}

impl GreenPath {
    pub fn new(base: Vec<Q>) -> Self {
        Self { base }
    }

    pub fn point(&self, t: &Q) -> Vec<Q> {
        shift(&self.base, t)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrossingRecord {
    #[serde(rename = "t", serialize_with = "ser_q")]
    pub time: Q,
    pub module: usize,
    pub name: String,
    pub dims: Vec<i64>,
    #[serde(serialize_with = "ser_point")]
    pub point: Vec<Q>,
    pub interior: bool,
}

/// Crossings of `path` with every wall, ordered by time. Fails unless the base is
/// generic: distinct crossing times and every crossing in a stable interior.
pub fn crossing_sequence(path: &GreenPath, walls: &WallSet) -> Result<Vec<CrossingRecord>> {
    let mut out: Vec<CrossingRecord> = Vec::new();
    for w in walls.walls() {
        debug_assert!(one_dot(&w.normal) > 0);
        let t = w.crossing_time(&path.base);
        let point = path.point(&t);
        if w.contains(&point) {
            let interior = w.interior_contains(&point);
            out.push(CrossingRecord { time: t, module: w.module, name: w.name.clone(), dims: w.normal.clone(), point, interior });
        }
    }
    out.sort_by(|a, b| a.time.cmp(&b.time).then(a.module.cmp(&b.module)));
    for pair in out.windows(2) {
        if pair[0].time == pair[1].time {
            return Err(Error::NotGeneric { first: pair[0].name.clone(), second: pair[1].name.clone() });
        }
    }
    if let Some(c) = out.iter().find(|c| !c.interior) {
        return Err(Error::NotInterior(c.name.clone()));
    }
    Ok(out)
}

/// A random rational vector with numerators in `[-1000, 1000]` and denominators in `[1, 997]`.
pub fn random_point<R: Rng>(rng: &mut R, n: usize) -> Vec<Q> {
    (0..n).map(|_| ratio(rng.gen_range(-1000..=1000), rng.gen_range(1..=997))).collect()
}

/// Samples base points until one is generic, at most `retries` times.
pub fn random_generic_path<R: Rng>(walls: &WallSet, rng: &mut R, retries: usize) -> Result<(GreenPath, Vec<CrossingRecord>)> {
    let mut last = Error::Precondition("no attempts made".into());
    for _ in 0..retries.max(1) {
        let path = GreenPath::new(random_point(rng, walls.n()));
        match crossing_sequence(&path, walls) {
            Ok(c) => return Ok((path, c)),
            Err(e @ (Error::NotGeneric { .. } | Error::NotInterior(_))) => last = e,
            Err(e) => return Err(e),
        }
    }
    Err(last)
}

/// Looks for a base whose crossings are exactly the walls of `seq` (catalog
/// indices) in that order. The cone of base points crossing these walls in
/// order at stable points is found by linear feasibility, then perturbed
/// randomly until generic. `Ok(None)` means the cone is empty.
pub fn realize_sequence<R: Rng>(
    walls: &WallSet,
    seq: &[usize],
    rng: &mut R,
    retries: usize,
) -> Result<Option<(GreenPath, Vec<CrossingRecord>)>> {
    let n = walls.n();
    let ws: Vec<&Wall> = seq
        .iter()
        .map(|&i| walls.wall_of(i).ok_or_else(|| Error::Precondition(format!("module {i} is not Schurian"))))
        .collect::<Result<_>>()?;
    // With t_i = -(x . d_i) / s_i eliminated, every condition is linear in x alone.
    let qv = |v: Vec<i64>| -> Vec<Q> { v.into_iter().map(q).collect() };
    let mut cons = Vec::new();
    for (i, w) in ws.iter().enumerate() {
        let s = one_dot(&w.normal);
        for d in &w.subs {
            let sd = one_dot(d);
            let row = d.iter().zip(&w.normal).map(|(&a, &b)| s * a - sd * b).collect();
            cons.push(Constraint::new(qv(row), Cmp::Le, q(-s)));
        }
        if let Some(next) = ws.get(i + 1) {
            let s2 = one_dot(&next.normal);
            let row = next.normal.iter().zip(&w.normal).map(|(&a, &b)| s * a - s2 * b).collect();
            cons.push(Constraint::new(qv(row), Cmp::Le, q(-s * s2)));
        }
    }
    let Some(x) = feasible_point(n, &cons) else {
        return Ok(None);
    };
    let scale: i64 = ws.iter().map(|w| w.normal.iter().sum::<i64>()).sum::<i64>().max(1) * 100;
    let target: Vec<usize> = seq.to_vec();
    for attempt in 0..retries.max(1) {
        let base: Vec<Q> = if attempt == 0 {
            x.clone()
        } else {
            x.iter().map(|v| v + ratio(rng.gen_range(-1000..=1000), 1000 * scale)).collect()
        };
        let path = GreenPath::new(base);
        if let Ok(c) = crossing_sequence(&path, walls) {
            if c.iter().map(|r| r.module).collect::<Vec<_>>() == target {
                return Ok(Some((path, c)));
            }
        }
    }
    Err(Error::Precondition(format!("the cone for {seq:?} is nonempty but no generic perturbation reproduced it")))
}

/// A polygonal green path: the ray `v_0 + t 1` for `t <= 0`, the segments
/// `v_0 v_1, ..., v_{r-1} v_r`, then the ray `v_r + t 1` for `t >= 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PolygonalPath {
    #[serde(serialize_with = "ser_points")]
    pub vertices: Vec<Vec<Q>>,
}

fn ser_points<S: Serializer>(x: &[Vec<Q>], s: S) -> std::result::Result<S::Ok, S::Error> {
    x.iter().map(|p| format_point(p)).collect::<Vec<_>>().serialize(s)
}

/// Crossings of a polygonal path. Times run through `(-inf, 0)` on the first
/// ray, `[i, i + 1)` on segment `i` and `[r, inf)` on the last ray. Fails unless
/// the crossings have distinct times, lie in stable interiors, and the velocity
/// pairs positively with the wall normal at each of them.
pub fn polygonal_crossings(path: &PolygonalPath, walls: &WallSet) -> Result<Vec<CrossingRecord>> {
    let v = &path.vertices;
    let r = v.len().checked_sub(1).ok_or_else(|| Error::Precondition("polygonal path without vertices".into()))?;
    let mut out: Vec<CrossingRecord> = Vec::new();
    for w in walls.walls() {
        let mut push = |time: Q, point: Vec<Q>, green: bool| {
            let interior = green && w.interior_contains(&point);
            out.push(CrossingRecord { time, module: w.module, name: w.name.clone(), dims: w.normal.clone(), point, interior });
        };
        let t0 = w.crossing_time(&v[0]);
        if t0.is_negative() {
            let p = shift(&v[0], &t0);
            if w.contains(&p) {
                push(t0, p, true);
            }
        }
        for i in 0..r {
            let dir: Vec<Q> = v[i + 1].iter().zip(&v[i]).map(|(a, b)| a - b).collect();
            let speed = dot(&dir, &w.normal);
            let here = dot(&v[i], &w.normal);
            if speed.is_zero() {
                if here.is_zero() && w.contains(&v[i]) {
                    return Err(Error::NotGeneric { first: w.name.clone(), second: w.name.clone() });
                }
                continue;
            }
            let s = -here / &speed;
            if s.is_negative() || s >= Q::one() {
                continue;
            }
            let p: Vec<Q> = v[i].iter().zip(&dir).map(|(a, b)| a + &s * b).collect();
            if w.contains(&p) {
                push(q(i as i64) + s, p, speed.is_positive());
            }
        }
        let t1 = w.crossing_time(&v[r]);
        if !t1.is_negative() {
            let p = shift(&v[r], &t1);
            if w.contains(&p) {
                push(q(r as i64) + t1, p, true);
            }
        }
    }
    out.sort_by(|a, b| a.time.cmp(&b.time).then(a.module.cmp(&b.module)));
    for pair in out.windows(2) {
        if pair[0].time == pair[1].time {
            return Err(Error::NotGeneric { first: pair[0].name.clone(), second: pair[1].name.clone() });
        }
    }
    if let Some(c) = out.iter().find(|c| !c.interior) {
        return Err(Error::NotInterior(c.name.clone()));
    }
    Ok(out)
}

fn cone_point(n: usize, eq: Option<&[i64]>, negative: &[Vec<i64>]) -> Option<Vec<Q>> {
    let mut cons: Vec<Constraint> = negative.iter().map(|c| Constraint::new(c.iter().map(|&v| q(v)).collect(), Cmp::Le, q(-1))).collect();
    if let Some(d) = eq {
        cons.push(Constraint::new(d.iter().map(|&v| q(v)).collect(), Cmp::Eq, q(0)));
    }
    feasible_point(n, &cons)
}

/// A polygonal green path crossing exactly the walls of `seq` (catalog indices)
/// in order. The seed is mutated along the sequence, matching each wall to a
/// green c-vector; the path visits a point of each compartment
/// `{ y : y . c < 0 for every c-vector c }` and crosses between consecutive ones
/// through a point of their common face.
pub fn realize_polygonal<R: Rng>(
    walls: &WallSet,
    seq: &[usize],
    seed: &ExtExchangeMatrix,
    rng: &mut R,
    retries: usize,
) -> Result<(PolygonalPath, Vec<CrossingRecord>)> {
    let n = walls.n();
    let mut m = seed.clone();
    let cvecs = |m: &ExtExchangeMatrix| (0..m.n()).map(|k| m.c_vector(k)).collect::<Result<Vec<_>>>();
    let empty = || Error::Precondition("compartment is empty".into());
    let mut prev = cone_point(n, None, &cvecs(&m)?).ok_or_else(empty)?;
    let mut vertices = vec![prev.clone()];
    for &module in seq {
        let w = walls.wall_of(module).ok_or_else(|| Error::Precondition(format!("module {module} is not Schurian")))?;
        let cs = cvecs(&m)?;
        let k = cs
            .iter()
            .position(|c| *c == w.normal)
            .ok_or_else(|| Error::Precondition(format!("wall {} is not a green c-vector of the current seed", w.name)))?;
        let others: Vec<Vec<i64>> = cs.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, c)| c.clone()).collect();
        let face = cone_point(n, Some(&w.normal), &others).ok_or_else(empty)?;
        m = m.mutate(k)?;
        let u: Vec<Q> = face.iter().zip(&prev).map(|(a, b)| a - b).collect();
        let worst = cvecs(&m)?.iter().map(|c| dot(&u, c).abs()).max().unwrap_or_else(|| q(0));
        let eps = Q::one() / (q(2) * (q(1) + worst));
        let next: Vec<Q> = face.iter().zip(&u).map(|(a, b)| a + &eps * b).collect();
        vertices.push(face);
        vertices.push(next.clone());
        prev = next;
    }
    let target = seq.to_vec();
    let mut last = Error::Precondition("no attempts made".into());
    for attempt in 0..retries.max(1) {
        let path = if attempt == 0 {
            PolygonalPath { vertices: vertices.clone() }
        } else {
            let jitter = ratio(1, 1_000_000);
            PolygonalPath {
                vertices: vertices
                    .iter()
                    .map(|p| p.iter().map(|a| a + &jitter * ratio(rng.gen_range(-1000..=1000), 1000)).collect())
                    .collect(),
            }
        };
        match polygonal_crossings(&path, walls) {
            Ok(c) if c.iter().map(|r| r.module).collect::<Vec<_>>() == target => return Ok((path, c)),
            Ok(c) => {
                last = Error::Precondition(format!(
                    "polygonal path crossed {:?} instead of {target:?}",
                    c.iter().map(|r| r.module).collect::<Vec<_>>()
                ))
            }
            Err(e) => last = e,
        }
    }
    Err(last)
}

/// One step `X_j / X_{j-1}` of a Harder-Narasimhan filtration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Stratum {
    /// Position in the crossing sequence.
    pub crossing: usize,
    pub module: usize,
    pub multiplicity: i64,
    pub dims: Vec<i64>,
}

/// The filtration `0 = X_0 < X_1 < ... < X_r = X` whose subquotients are
/// semistable at strictly increasing crossings of the path, found by exhaustive
/// search over submodules. Fails if none or more than one exists.
pub fn hn_filtration(x: &Representation, crossings: &[CrossingRecord], budget: usize) -> Result<Vec<Stratum>> {
    let f = x.field();
    let subs = submodules(x, budget)?;
    let dims: Vec<Vec<i64>> = subs.iter().map(|s| s.dim_vector()).collect();
    let zero = dims.iter().position(|d| d.iter().all(|&v| v == 0)).expect("zero submodule");
    let full = dims.iter().position(|d| *d == x.dim_vector()).expect("whole module");
    let contains: Vec<Vec<bool>> =
        subs.iter().map(|a| subs.iter().map(|b| a.contains(b, f)).collect()).collect();

    struct Search<'a> {
        dims: &'a [Vec<i64>],
        contains: &'a [Vec<bool>],
        crossings: &'a [CrossingRecord],
        full: usize,
        found: Vec<Vec<(usize, usize, i64)>>,
    }
    impl Search<'_> {
        fn multiple(&self, diff: &[i64], normal: &[i64]) -> Option<i64> {
            let (pos, &base) = normal.iter().enumerate().find(|(_, &v)| v != 0)?;
            if diff[pos] % base != 0 {
                return None;
            }
            let c = diff[pos] / base;
            (c >= 1 && diff.iter().zip(normal).all(|(&a, &b)| a == c * b)).then_some(c)
        }

        fn rec(&mut self, cur: usize, last: Option<usize>, chain: &mut Vec<(usize, usize, i64)>) {
            if cur == self.full {
                self.found.push(chain.clone());
                return;
            }
            for next in 0..self.dims.len() {
                if next == cur || !self.contains[next][cur] {
                    continue;
                }
                let diff: Vec<i64> = self.dims[next].iter().zip(&self.dims[cur]).map(|(a, b)| a - b).collect();
                let start = last.map_or(0, |l| l + 1);
                for p in start..self.crossings.len() {
                    let Some(c) = self.multiple(&diff, &self.crossings[p].dims) else {
                        continue;
                    };
                    let point = &self.crossings[p].point;
                    // semistability of next/cur: every intermediate submodule pairs to <= 0
                    let semistable = (0..self.dims.len()).all(|u| {
                        !(self.contains[next][u] && self.contains[u][cur]) || {
                            let d: Vec<i64> = self.dims[u].iter().zip(&self.dims[cur]).map(|(a, b)| a - b).collect();
                            !dot(point, &d).is_positive()
                        }
                    });
                    if semistable {
                        chain.push((p, next, c));
                        self.rec(next, Some(p), chain);
                        chain.pop();
                    }
                }
            }
        }
    }

    let mut s = Search { dims: &dims, contains: &contains, crossings, full, found: Vec::new() };
    s.rec(zero, None, &mut Vec::new());
    match s.found.len() {
        0 => Err(Error::NoFiltration(format!("no chain of semistable subquotients for dims {:?}", x.dim_vector()))),
        1 => Ok(s.found[0]
            .iter()
            .map(|&(p, _, c)| Stratum {
                crossing: p,
                module: crossings[p].module,
                multiplicity: c,
                dims: crossings[p].dims.iter().map(|v| v * c).collect(),
            })
            .collect()),
        k => Err(Error::NoFiltration(format!("{k} different filtrations for dims {:?}", x.dim_vector()))),
    }
}

/// The compartment of a base point, described by the seed reached after
/// mutating along the walls crossed before the base.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Compartment {
    /// Modules crossed by the line before reaching the base, in order.
    pub prefix: Vec<usize>,
    /// Mutation indices matching the prefix.
    pub indices: Vec<usize>,
    pub c_vectors: Vec<Vec<i64>>,
}

pub fn compartment_cvectors(base: &[Q], walls: &WallSet, seed: &ExtExchangeMatrix) -> Result<Compartment> {
    let path = GreenPath::new(base.to_vec());
    let crossings = crossing_sequence(&path, walls)?;
    if let Some(c) = crossings.iter().find(|c| c.time.is_zero()) {
        return Err(Error::OnWall(c.name.clone()));
    }
    let mut m = seed.clone();
    let mut prefix = Vec::new();
    let mut indices = Vec::new();
    for c in crossings.iter().filter(|c| c.time.is_negative()) {
        let k = (0..m.n())
            .find(|&k| m.c_vector(k).map(|v| v == c.dims).unwrap_or(false))
            .ok_or_else(|| Error::Precondition(format!("wall {} is not a green c-vector of the current seed", c.name)))?;
        m = m.mutate(k)?;
        prefix.push(c.module);
        indices.push(k);
    }
    let c_vectors = (0..m.n()).map(|k| m.c_vector(k)).collect::<Result<Vec<_>>>()?;
    Ok(Compartment { prefix, indices, c_vectors })
}

/// Exact solve of a square rational system `a x = b`.
fn solve_q(a: &[Vec<Q>], b: &[Q]) -> Option<Vec<Q>> {
    let n = a.len();
    let mut m: Vec<Vec<Q>> = a.iter().zip(b).map(|(r, v)| r.iter().cloned().chain([v.clone()]).collect()).collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        let inv = Q::one() / &m[col][col];
        for v in m[col].iter_mut() {
            *v *= &inv;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let fac = m[r][col].clone();
                for c in col..=n {
                    let d = &fac * &m[col][c];
                    m[r][c] -= d;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n].clone()).collect())
}

/// The walls first met by rays from `base`. One ray per c-vector aims at the face
/// `x . c = 0` while staying on the other hyperplanes; `random_rays` more are drawn
/// at random. Fails if the base is not strictly on the negative side of every c-vector.
pub fn adjacent_walls<R: Rng>(
    base: &[Q],
    walls: &WallSet,
    c_vectors: &[Vec<i64>],
    rng: &mut R,
    random_rays: usize,
) -> Result<BTreeSet<Vec<i64>>> {
    let n = walls.n();
    for c in c_vectors {
        if !dot(base, c).is_negative() {
            return Err(Error::Precondition(format!("base does not pair negatively with the c-vector {c:?}")));
        }
    }
    let rows: Vec<Vec<Q>> = c_vectors.iter().map(|c| c.iter().map(|&v| q(v)).collect()).collect();
    let mut rays: Vec<Vec<Q>> = Vec::new();
    for j in 0..c_vectors.len() {
        let e: Vec<Q> = (0..c_vectors.len()).map(|i| if i == j { q(1) } else { q(0) }).collect();
        rays.push(solve_q(&rows, &e).ok_or_else(|| Error::Precondition("c-matrix is singular".into()))?);
    }
    for _ in 0..random_rays {
        rays.push(random_point(rng, n));
    }
    let mut found = BTreeSet::new();
    for v in rays {
        let mut best: Option<(Q, Vec<i64>, bool)> = None;
        for w in walls.walls() {
            let vd = dot(&v, &w.normal);
            if vd.is_zero() {
                continue;
            }
            let s = -dot(base, &w.normal) / vd;
            if !s.is_positive() {
                continue;
            }
            let point: Vec<Q> = base.iter().zip(&v).map(|(a, b)| a + &s * b).collect();
            if !w.contains(&point) {
                continue;
            }
            best = match best {
                Some((bs, bn, tie)) if bs < s => Some((bs, bn, tie)),
                Some((bs, bn, _)) if bs == s => Some((bs, bn, true)),
                _ => Some((s, w.normal.clone(), false)),
            };
        }
        if let Some((_, normal, false)) = best {
            found.insert(normal);
        }
    }
    Ok(found)
}

/// Identity of the compartment of `base`: the torsion class generated by the
/// walls crossed before it.
pub fn compartment_signature(base: &[Q], walls: &WallSet, cat: &Catalog) -> Result<Vec<usize>> {
    let crossings = crossing_sequence(&GreenPath::new(base.to_vec()), walls)?;
    if let Some(c) = crossings.iter().find(|c| c.time.is_zero()) {
        return Err(Error::OnWall(c.name.clone()));
    }
    let prefix: Vec<usize> = crossings.iter().filter(|c| c.time.is_negative()).map(|c| c.module).collect();
    Ok(torsion_pair(cat, &prefix).torsion)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::named;
    use crate::rep::DEFAULT_SUBMODULE_BUDGET;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    fn a3() -> Catalog {
        let alg = Arc::new(named::a3_cycle().algebra().unwrap());
        Catalog::strings(alg, PrimeField::new(2).unwrap()).unwrap()
    }

    #[test]
    fn origin_is_on_every_wall_but_no_interior() {
        let cat = a3();
        let ws = WallSet::new(&cat, DEFAULT_SUBMODULE_BUDGET).unwrap();
        let zero = vec![q(0); 3];
        for w in ws.walls() {
            assert!(w.contains(&zero));
            assert!(!w.interior_contains(&zero) || w.subs.is_empty());
        }
        assert!(crossing_sequence(&GreenPath::new(zero), &ws).is_err());
    }

    #[test]
    fn random_paths_start_at_a_simple() {
        let cat = a3();
        let ws = WallSet::new(&cat, DEFAULT_SUBMODULE_BUDGET).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let (_, c) = random_generic_path(&ws, &mut rng, 50).unwrap();
            assert_eq!(c[0].dims.iter().sum::<i64>(), 1);
        }
    }
}
