//! Diagonal lattice classes in one apartment: adjacency, hulls, convexity, transition maps.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::affine_weyl::omega;
use crate::error::Error;

/// A subset of coordinate positions `{0, …, d−1}` (serialized 1-based).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct CoordSet(pub u64);

impl CoordSet {
    pub fn full(d: usize) -> Self {
        CoordSet(if d == 64 { u64::MAX } else { (1u64 << d) - 1 })
    }

    pub fn from_positions(ps: impl IntoIterator<Item = usize>) -> Self {
        CoordSet(ps.into_iter().fold(0, |m, p| m | (1 << p)))
    }

    pub fn contains(self, k: usize) -> bool {
        self.0 & (1 << k) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn intersect(self, o: Self) -> Self {
        CoordSet(self.0 & o.0)
    }

    pub fn union(self, o: Self) -> Self {
        CoordSet(self.0 | o.0)
    }

    pub fn minus(self, o: Self) -> Self {
        CoordSet(self.0 & !o.0)
    }

    pub fn complement(self, d: usize) -> Self {
        CoordSet::full(d).minus(self)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..64).filter(move |&k| self.contains(k))
    }
}

impl fmt::Debug for CoordSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|k| k + 1)).finish()
    }
}

impl Serialize for CoordSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.iter().map(|k| k + 1))
    }
}

impl<'de> Deserialize<'de> for CoordSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v: Vec<usize> = Vec::deserialize(d)?;
        if v.iter().any(|&k| k == 0 || k > 64) {
            return Err(serde::de::Error::custom("positions are 1-based and at most 64"));
        }
        Ok(CoordSet::from_positions(v.into_iter().map(|k| k - 1)))
    }
}

/// Homothety class of a diagonal lattice; the stored vector has minimum entry 0.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct LatticeClass(Vec<i64>);

impl<'de> Deserialize<'de> for LatticeClass {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v: Vec<i64> = Vec::deserialize(d)?;
        if v.is_empty() {
            return Err(serde::de::Error::custom("empty lattice vector"));
        }
        Ok(LatticeClass::new(v))
    }
}

impl fmt::Debug for LatticeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for LatticeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

pub fn canonicalize(v: &[i64]) -> LatticeClass {
    LatticeClass::new(v.to_vec())
}

impl LatticeClass {
    pub fn new(mut v: Vec<i64>) -> Self {
        let m = v.iter().copied().min().unwrap_or(0);
        v.iter_mut().for_each(|x| *x -= m);
        LatticeClass(v)
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn d(&self) -> usize {
        self.0.len()
    }

    pub fn sum(&self) -> i64 {
        self.0.iter().sum()
    }

    fn spread(&self, other: &Self) -> (i64, i64) {
        let diff = self.0.iter().zip(&other.0).map(|(a, b)| b - a);
        diff.fold((i64::MAX, i64::MIN), |(lo, hi), x| (lo.min(x), hi.max(x)))
    }

    /// Distinct classes spanning an edge of the building.
    pub fn is_adjacent(&self, other: &Self) -> bool {
        let (lo, hi) = self.spread(other);
        hi - lo == 1
    }
}

pub fn is_adjacent(u: &LatticeClass, v: &LatticeClass) -> bool {
    u.is_adjacent(v)
}

/// The classes `[min(u, v + k𝟙)]`, ordered from `u` to `v`.
pub fn convex_hull_pair(u: &LatticeClass, v: &LatticeClass) -> Vec<LatticeClass> {
    let (lo, hi) = v.spread(u);
    let mut out: Vec<LatticeClass> = Vec::new();
    for k in (lo..=hi).rev() {
        let m: Vec<i64> = u.0.iter().zip(&v.0).map(|(a, b)| (*a).min(b + k)).collect();
        let c = LatticeClass::new(m);
        if out.last() != Some(&c) {
            out.push(c);
        }
    }
    out
}

/// Minimal shift `n` with `πⁿL_u ⊂ L_v`, and the coordinates where the induced map is nonzero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TransitionData {
    pub n: i64,
    pub support: CoordSet,
}

pub fn transition(u: &LatticeClass, v: &LatticeClass) -> TransitionData {
    let diff: Vec<i64> = u.0.iter().zip(&v.0).map(|(a, b)| a - b).collect();
    let n = diff.iter().copied().max().expect("nonempty vector");
    let support = CoordSet::from_positions((0..diff.len()).filter(|&k| diff[k] == n));
    TransitionData { n, support }
}

/// A finite set of classes in one apartment, kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Configuration {
    pub d: usize,
    pub vertices: Vec<LatticeClass>,
}

#[derive(Deserialize)]
struct ConfigurationJson {
    d: usize,
    vertices: Vec<Vec<i64>>,
}

impl<'de> Deserialize<'de> for Configuration {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let j = ConfigurationJson::deserialize(de)?;
        Configuration::from_vectors(j.d, j.vertices).map_err(serde::de::Error::custom)
    }
}

impl Configuration {
    pub fn new(d: usize, vertices: impl IntoIterator<Item = LatticeClass>) -> Result<Self, Error> {
        let set: BTreeSet<LatticeClass> = vertices.into_iter().collect();
        if d == 0 {
            return Err(Error::Invalid("dimension must be positive".into()));
        }
        if let Some(bad) = set.iter().find(|c| c.d() != d) {
            return Err(Error::DimensionMismatch { expected: d, got: bad.d() });
        }
        if set.is_empty() {
            return Err(Error::Invalid("configuration has no vertices".into()));
        }
        Ok(Configuration { d, vertices: set.into_iter().collect() })
    }

    pub fn from_vectors(d: usize, vs: Vec<Vec<i64>>) -> Result<Self, Error> {
        Self::new(d, vs.into_iter().map(LatticeClass::new))
    }

    /// The vertices `ω_0, …, ω_{d−1}` of the standard alcove.
    pub fn standard_alcove(d: usize) -> Self {
        Self::standard_face(d, &(0..d).collect::<Vec<_>>())
    }

    pub fn standard_face(d: usize, types: &[usize]) -> Self {
        Self::new(d, types.iter().map(|&i| LatticeClass::new(omega(d, i)))).expect("valid face")
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn index_of(&self, c: &LatticeClass) -> Option<usize> {
        self.vertices.binary_search(c).ok()
    }

    pub fn contains(&self, c: &LatticeClass) -> bool {
        self.index_of(c).is_some()
    }

    pub fn adjacency(&self) -> Vec<Vec<bool>> {
        let n = self.len();
        (0..n).map(|i| (0..n).map(|j| self.vertices[i].is_adjacent(&self.vertices[j])).collect()).collect()
    }

    /// The vertices with the given indices, as a configuration.
    pub fn sub(&self, idx: &[usize]) -> Configuration {
        Configuration::new(self.d, idx.iter().map(|&i| self.vertices[i].clone())).expect("nonempty subset")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConvexityReport {
    pub convex: bool,
    pub missing: Vec<LatticeClass>,
}

pub fn is_convex(g: &Configuration) -> ConvexityReport {
    let mut missing = BTreeSet::new();
    for (a, u) in g.vertices.iter().enumerate() {
        for v in &g.vertices[a + 1..] {
            for c in convex_hull_pair(u, v) {
                if !g.contains(&c) {
                    missing.insert(c);
                }
            }
        }
    }
    ConvexityReport { convex: missing.is_empty(), missing: missing.into_iter().collect() }
}

pub fn convex_closure(seed: &Configuration) -> Configuration {
    let mut cur = seed.clone();
    loop {
        let rep = is_convex(&cur);
        if rep.convex {
            return cur;
        }
        cur = Configuration::new(cur.d, cur.vertices.into_iter().chain(rep.missing)).expect("same dimension");
    }
}

pub fn require_convex(g: &Configuration) -> Result<(), Error> {
    let rep = is_convex(g);
    if rep.convex {
        Ok(())
    } else {
        Err(Error::NotConvex(rep.missing.iter().map(|c| c.coords().to_vec()).collect()))
    }
}

/// Maximal cliques of the adjacency graph, each listed in lattice-chain order.
pub fn maximal_simplices(g: &Configuration) -> Vec<Vec<usize>> {
    let adj = g.adjacency();
    let n = g.len();
    let mut out = Vec::new();
    bron_kerbosch(&adj, Vec::new(), (0..n).collect(), Vec::new(), &mut out);
    for s in out.iter_mut() {
        s.sort_by_key(|&i| (g.vertices[i].sum(), i));
    }
    out.sort();
    out
}

fn bron_kerbosch(adj: &[Vec<bool>], r: Vec<usize>, p: Vec<usize>, x: Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if p.is_empty() && x.is_empty() {
        out.push(r);
        return;
    }
    let pivot = p.iter().chain(&x).copied().max_by_key(|&u| p.iter().filter(|&&v| adj[u][v]).count()).unwrap();
    let mut p = p;
    let mut x = x;
    let candidates: Vec<usize> = p.iter().copied().filter(|&v| !adj[pivot][v]).collect();
    for v in candidates {
        let mut r2 = r.clone();
        r2.push(v);
        let p2 = p.iter().copied().filter(|&w| adj[v][w]).collect();
        let x2 = x.iter().copied().filter(|&w| adj[v][w]).collect();
        bron_kerbosch(adj, r2, p2, x2, out);
        p.retain(|&w| w != v);
        x.push(v);
    }
}

/// Canonical representatives, checked to form a chain `L₀ ⊂ … ⊂ L_n ⊂ π⁻¹L₀` on every maximal simplex.
pub fn lattice_quiver_representatives(g: &Configuration) -> Result<Vec<Vec<i64>>, Error> {
    for s in maximal_simplices(g) {
        let reps: Vec<&[i64]> = s.iter().map(|&i| g.vertices[i].coords()).collect();
        let first = reps[0];
        for w in reps.windows(2) {
            if w[0].iter().zip(w[1]).any(|(a, b)| a > b) {
                return Err(Error::ChainOrder(format!("{:?} not below {:?}", w[0], w[1])));
            }
        }
        let last = reps[reps.len() - 1];
        if last.iter().zip(first).any(|(a, b)| *a > b + 1) {
            return Err(Error::ChainOrder(format!("{:?} not below {:?} + 1", last, first)));
        }
    }
    Ok(g.vertices.iter().map(|c| c.coords().to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn lc(v: &[i64]) -> LatticeClass {
        LatticeClass::new(v.to_vec())
    }

    #[test]
    fn canonical_forms() {
        assert_eq!(lc(&[3, 3, 3]).coords(), &[0, 0, 0]);
        assert_eq!(lc(&[1, 2, 0, 0, 0]).coords(), &[1, 2, 0, 0, 0]);
        assert_eq!(lc(&[-1, 0, 1]).coords(), &[0, 1, 2]);
    }

    #[test]
    fn adjacency_examples() {
        assert!(lc(&[0, 0, 0, 0, 0]).is_adjacent(&lc(&[1, 1, 0, 0, 0])));
        assert!(!lc(&[0, 0]).is_adjacent(&lc(&[2, 0])));
        assert!(!lc(&[0, 1]).is_adjacent(&lc(&[0, 1])));
    }

    #[test]
    fn hull_examples() {
        let h = convex_hull_pair(&lc(&[0, 0, 0, 2, 0]), &lc(&[1, 2, 0, 0, 0]));
        let expect: Vec<LatticeClass> =
            [[0, 0, 0, 2, 0], [0, 0, 0, 1, 0], [0, 0, 0, 0, 0], [1, 1, 0, 0, 0], [1, 2, 0, 0, 0]].iter().map(|v| lc(v)).collect();
        assert_eq!(h, expect);
        assert_eq!(convex_hull_pair(&lc(&[0, 0]), &lc(&[2, 0])), vec![lc(&[0, 0]), lc(&[1, 0]), lc(&[2, 0])]);
        assert_eq!(convex_hull_pair(&lc(&[1, 0]), &lc(&[1, 0])), vec![lc(&[1, 0])]);
    }

    #[test]
    fn convexity_and_closure() {
        let g = Configuration::from_vectors(2, vec![vec![0, 0], vec![2, 0]]).unwrap();
        let rep = is_convex(&g);
        assert!(!rep.convex);
        assert_eq!(rep.missing, vec![lc(&[1, 0])]);
        let c = convex_closure(&g);
        assert_eq!(c.vertices, vec![lc(&[0, 0]), lc(&[1, 0]), lc(&[2, 0])]);
        assert!(is_convex(&Configuration::from_vectors(3, vec![vec![4, 1, 1]]).unwrap()).convex);
        let omega = Configuration::standard_alcove(4);
        assert_eq!(convex_closure(&omega), omega);
    }

    #[test]
    fn transition_examples() {
        let t = transition(&lc(&[0, 0]), &lc(&[1, 0]));
        assert_eq!((t.n, t.support), (0, CoordSet::from_positions([1])));
        let u = lc(&[2, 0, 1]);
        assert_eq!(transition(&u, &u), TransitionData { n: 0, support: CoordSet::full(3) });
    }

    #[test]
    fn simplices_examples() {
        let omega = Configuration::standard_alcove(4);
        assert_eq!(
            maximal_simplices(&omega),
            vec![vec![0, 1, 2, 3]
                .into_iter()
                .map(|i| omega.index_of(&lc(&crate::affine_weyl::omega(4, i))).unwrap())
                .collect::<Vec<_>>()]
        );
        let two = Configuration::from_vectors(3, vec![vec![0, 0, 0], vec![1, 0, 0], vec![1, 1, 0], vec![0, 0, 1], vec![0, 1, 1]])
            .unwrap();
        let s = maximal_simplices(&two);
        assert_eq!(s.len(), 2);
        assert!(s.iter().all(|x| x.len() == 3));
        assert_eq!(lattice_quiver_representatives(&omega).unwrap()[1], vec![1, 0, 0, 0]);
    }

    fn class(d: usize) -> impl Strategy<Value = LatticeClass> {
        proptest::collection::vec(-3i64..=3, d).prop_map(LatticeClass::new)
    }

    proptest! {
        #[test]
        fn hull_reverses(u in class(4), v in class(4)) {
            let mut a = convex_hull_pair(&u, &v);
            a.reverse();
            prop_assert_eq!(a, convex_hull_pair(&v, &u));
        }

        #[test]
        fn hull_chain_structure(u in class(4), v in class(4)) {
            let h = convex_hull_pair(&u, &v);
            prop_assert_eq!(h.first(), Some(&u));
            prop_assert_eq!(h.last(), Some(&v));
            let d = 4;
            let mut total = 0;
            for w in h.windows(2) {
                prop_assert!(w[0].is_adjacent(&w[1]));
                let f = transition(&w[0], &w[1]);
                let b = transition(&w[1], &w[0]);
                prop_assert!(f.support.intersect(b.support).is_empty());
                prop_assert_eq!(f.support.union(b.support), CoordSet::full(d));
                total += f.n;
            }
            prop_assert_eq!(total, transition(&u, &v).n);
            if h.len() >= 2 {
                // rank along the hull equals the rank of the first step
                let s = h.windows(2).fold(CoordSet::full(d), |acc, w| acc.intersect(transition(&w[0], &w[1]).support));
                prop_assert_eq!(s, transition(&u, &v).support);
                prop_assert_eq!(transition(&u, &v).support.len(), transition(&h[0], &h[1]).support.len());
            }
        }

        #[test]
        fn transition_shift_invariant(a in proptest::collection::vec(-3i64..=3, 3), b in proptest::collection::vec(-3i64..=3, 3), c in -5i64..5) {
            let shifted: Vec<i64> = a.iter().map(|x| x + c).collect();
            prop_assert_eq!(transition(&LatticeClass::new(a), &LatticeClass::new(b.clone())), transition(&LatticeClass::new(shifted), &LatticeClass::new(b)));
        }

        #[test]
        fn closure_is_convex(vs in proptest::collection::vec(proptest::collection::vec(0i64..=2, 3), 1..4)) {
            let g = convex_closure(&Configuration::from_vectors(3, vs).unwrap());
            prop_assert!(is_convex(&g).convex);
            prop_assert!(lattice_quiver_representatives(&g).is_ok());
        }
    }
}
