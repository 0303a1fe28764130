//! The quiver `Q(Γ)` of a configuration and sub-representations of `M_Γ` over `F_p`.

mod decompose;
mod deform;

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::Error;
use crate::fp::{self, Subspace, Vector};
use crate::lattice::{self, convex_hull_pair, maximal_simplices, transition, Configuration, CoordSet, TransitionData};

pub use decompose::{all_summand_types, decompose, multiplicities_from_rank, Decomposition, Summand, SummandKind, SummandType};
pub use deform::{deform_step, deform_toward, degeneration_chain, extend_partial, DeformStep};

#[derive(Clone, Debug, Serialize)]
pub struct QuiverData {
    pub config: Configuration,
    #[serde(skip)]
    pub trans: Vec<Vec<TransitionData>>,
    pub arrows: Vec<(usize, usize)>,
    pub simplices: Vec<Vec<usize>>,
}

impl QuiverData {
    pub fn n(&self) -> usize {
        self.config.len()
    }

    pub fn d(&self) -> usize {
        self.config.d
    }

    pub fn t(&self, u: usize, v: usize) -> TransitionData {
        self.trans[u][v]
    }

    pub fn supp(&self, u: usize, v: usize) -> CoordSet {
        self.trans[u][v].support
    }

    pub fn has_arrow(&self, u: usize, v: usize) -> bool {
        self.arrows.binary_search(&(u, v)).is_ok()
    }

    pub fn in_neighbors(&self, v: usize) -> Vec<usize> {
        self.arrows.iter().filter(|a| a.1 == v).map(|a| a.0).collect()
    }

    pub fn out_neighbors(&self, v: usize) -> Vec<usize> {
        self.arrows.iter().filter(|a| a.0 == v).map(|a| a.1).collect()
    }

    /// `f_{u,v} = f_{k,v} ∘ f_{u,k}`.
    pub fn factors_through(&self, u: usize, k: usize, v: usize) -> bool {
        let (a, b, c) = (self.t(u, k), self.t(k, v), self.t(u, v));
        a.n + b.n == c.n && a.support.intersect(b.support) == c.support
    }

    /// The maximal simplex containing both vertices, rotated to start at `v`.
    pub fn cycle_through(&self, v: usize, z: usize) -> Option<Vec<usize>> {
        let s = self.simplices.iter().find(|s| s.contains(&v) && s.contains(&z))?;
        let pos = s.iter().position(|&x| x == v)?;
        Some((0..s.len()).map(|i| s[(pos + i) % s.len()]).collect())
    }

    /// Simplices containing `v`, each rotated to start at `v`.
    pub fn cycles_at(&self, v: usize) -> Vec<Vec<usize>> {
        self.simplices
            .iter()
            .filter(|s| s.contains(&v) && s.len() > 1)
            .map(|s| {
                let pos = s.iter().position(|&x| x == v).unwrap();
                (0..s.len()).map(|i| s[(pos + i) % s.len()]).collect()
            })
            .collect()
    }

    /// Vertex of `Conv(u, v)` adjacent to `u` (or `u` itself when equal).
    pub fn hull_step(&self, u: usize, v: usize) -> usize {
        let h = convex_hull_pair(&self.config.vertices[u], &self.config.vertices[v]);
        match h.get(1) {
            Some(c) => self.config.index_of(c).expect("convex configuration"),
            None => u,
        }
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph quiver {\n");
        for (i, c) in self.config.vertices.iter().enumerate() {
            out.push_str(&format!("  v{} [label=\"{}\"];\n", i, c));
        }
        for &(u, v) in &self.arrows {
            let t = self.t(u, v);
            let s: Vec<String> = t.support.iter().map(|k| (k + 1).to_string()).collect();
            out.push_str(&format!("  v{} -> v{} [label=\"n={} {{{}}}\"];\n", u, v, t.n, s.join(",")));
        }
        out.push_str("}\n");
        out
    }
}

pub fn build_quiver(g: &Configuration) -> Result<QuiverData, Error> {
    lattice::require_convex(g)?;
    lattice::lattice_quiver_representatives(g)?;
    let n = g.len();
    let trans: Vec<Vec<TransitionData>> =
        (0..n).map(|u| (0..n).map(|v| transition(&g.vertices[u], &g.vertices[v])).collect()).collect();
    let mut q = QuiverData { config: g.clone(), trans, arrows: Vec::new(), simplices: maximal_simplices(g) };
    for u in 0..n {
        for v in 0..n {
            if u != v && !(0..n).any(|k| k != u && k != v && q.factors_through(u, k, v)) {
                q.arrows.push((u, v));
            }
        }
    }
    Ok(q)
}

/// Arrow set computed by searching all simple factoring paths.
pub fn arrows_by_paths(q: &QuiverData) -> Vec<(usize, usize)> {
    let n = q.n();
    let mut out = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u == v {
                continue;
            }
            let target = q.t(u, v);
            let mut found = false;
            let mut stack = vec![(u, 0i64, CoordSet::full(q.d()), vec![u])];
            while let Some((x, shift, supp, path)) = stack.pop() {
                for y in 0..n {
                    if path.contains(&y) {
                        continue;
                    }
                    let t = q.t(x, y);
                    let (s2, p2) = (shift + t.n, supp.intersect(t.support));
                    if y == v {
                        if path.len() >= 2 && s2 == target.n && p2 == target.support {
                            found = true;
                        }
                    } else {
                        let mut next = path.clone();
                        next.push(y);
                        stack.push((y, s2, p2, next));
                    }
                }
            }
            if !found {
                out.push((u, v));
            }
        }
    }
    out
}

/// Ranks `Φ_{u,v} = dim f_{u,v}(V_u)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RankVector {
    n: usize,
    entries: Vec<u32>,
}

impl Serialize for RankVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.entries.chunks(self.n.max(1)))
    }
}

impl RankVector {
    pub fn zeros(n: usize) -> Self {
        RankVector { n, entries: vec![0; n * n] }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> u32) -> Self {
        let mut r = Self::zeros(n);
        for u in 0..n {
            for v in 0..n {
                r.entries[u * n + v] = f(u, v);
            }
        }
        r
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, u: usize, v: usize) -> u32 {
        self.entries[u * self.n + v]
    }

    pub fn set(&mut self, u: usize, v: usize, x: u32) {
        self.entries[u * self.n + v] = x;
    }

    /// Componentwise order.
    pub fn leq(&self, o: &RankVector) -> bool {
        self.entries.iter().zip(&o.entries).all(|(a, b)| a <= b)
    }

    pub fn below(&self, o: &RankVector) -> bool {
        self.leq(o) && self != o
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SubRepresentation {
    pub p: u8,
    pub spaces: Vec<Subspace>,
}

impl SubRepresentation {
    pub fn zero(q: &QuiverData, p: u8) -> Self {
        SubRepresentation { p, spaces: vec![Subspace::zero(q.d(), p); q.n()] }
    }

    pub fn dims(&self) -> Vec<usize> {
        self.spaces.iter().map(|s| s.dim()).collect()
    }
}

pub fn ambient(q: &QuiverData, p: u8) -> SubRepresentation {
    SubRepresentation { p, spaces: vec![Subspace::full(q.d(), p); q.n()] }
}

/// The first arrow along which `m` fails to be closed, if any.
pub fn subrep_violation(m: &SubRepresentation, q: &QuiverData) -> Option<(usize, usize)> {
    q.arrows.iter().copied().find(|&(u, v)| !m.spaces[v].contains_space(&m.spaces[u].project(q.supp(u, v))))
}

pub fn is_subrep(m: &SubRepresentation, q: &QuiverData) -> bool {
    subrep_violation(m, q).is_none()
}

pub fn generated(q: &QuiverData, p: u8, seeds: &[(usize, Vector)]) -> SubRepresentation {
    let mut m = SubRepresentation::zero(q, p);
    for (v, e) in seeds {
        m.spaces[*v] = m.spaces[*v].with(e.clone());
    }
    let mut changed = true;
    while changed {
        changed = false;
        for &(u, v) in &q.arrows {
            let img = m.spaces[u].project(q.supp(u, v));
            if !m.spaces[v].contains_space(&img) {
                m.spaces[v] = m.spaces[v].sum(&img);
                changed = true;
            }
        }
    }
    m
}

/// The sub-representation generated by up to `2d` random vectors at random vertices.
pub fn random_subrep<R: rand::Rng>(q: &QuiverData, p: u8, rng: &mut R) -> SubRepresentation {
    let k = rng.gen_range(0..=2 * q.d());
    let seeds: Vec<(usize, Vector)> =
        (0..k).map(|_| (rng.gen_range(0..q.n()), (0..q.d()).map(|_| rng.gen_range(0..p)).collect())).collect();
    generated(q, p, &seeds)
}

pub fn rank_vector(m: &SubRepresentation, q: &QuiverData) -> RankVector {
    RankVector::from_fn(q.n(), |u, v| m.spaces[u].project(q.supp(u, v)).dim() as u32)
}

/// `{u : f_{v,u}(ε) ≠ 0}`.
pub fn support_of_generated(q: &QuiverData, v: usize, eps: &[u8]) -> Result<BTreeSet<usize>, Error> {
    if fp::is_zero(eps) {
        return Err(Error::Invalid("zero generator".into()));
    }
    Ok((0..q.n()).filter(|&u| !fp::is_zero(&fp::project(eps, q.supp(v, u)))).collect())
}

/// Checks `Φ_{u,v} = Φ_{u,w}` for the hull neighbour `w` of `u` towards `v`.
pub fn hull_invariant_holds(q: &QuiverData, phi: &RankVector) -> bool {
    (0..q.n()).all(|u| (0..q.n()).all(|v| phi.get(u, v) == phi.get(u, q.hull_step(u, v))))
}

/// All sub-representations with the given dimension vector.
pub fn enumerate_subreps(q: &QuiverData, dims: &[usize], p: u8, budget: u64) -> Result<Vec<SubRepresentation>, Error> {
    let n = q.n();
    if dims.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: dims.len() });
    }
    if let Some(&bad) = dims.iter().find(|&&x| x > q.d()) {
        return Err(Error::Invalid(format!("dimension {bad} exceeds {}", q.d())));
    }
    let mut order = Vec::with_capacity(n);
    let mut placed = vec![false; n];
    while order.len() < n {
        let next = (0..n)
            .filter(|&v| !placed[v])
            .max_by_key(|&v| (order.iter().filter(|&&u| q.has_arrow(u, v) || q.has_arrow(v, u)).count(), std::cmp::Reverse(v)))
            .unwrap();
        placed[next] = true;
        order.push(next);
    }
    let mut by_dim: Vec<Option<Vec<Subspace>>> = vec![None; q.d() + 1];
    for &k in dims {
        if by_dim[k].is_none() {
            by_dim[k] = Some(Subspace::all_of_dim(q.d(), p, k));
        }
    }
    let candidates: Vec<&[Subspace]> = dims.iter().map(|&k| by_dim[k].as_deref().unwrap()).collect();
    let mut state = Enum { q, order: &order, candidates, budget, spent: 0, chosen: vec![None; n], out: Vec::new() };
    state.go(0)?;
    let mut out = state.out;
    out.sort();
    Ok(out)
}

struct Enum<'a> {
    q: &'a QuiverData,
    order: &'a [usize],
    candidates: Vec<&'a [Subspace]>,
    budget: u64,
    spent: u64,
    chosen: Vec<Option<Subspace>>,
    out: Vec<SubRepresentation>,
}

impl Enum<'_> {
    fn go(&mut self, depth: usize) -> Result<(), Error> {
        if depth == self.order.len() {
            let spaces = self.chosen.iter().map(|s| s.clone().unwrap()).collect();
            let p = self.candidates.first().and_then(|c| c.first()).map_or(2, |s| s.p());
            self.out.push(SubRepresentation { p, spaces });
            return Ok(());
        }
        let v = self.order[depth];
        let mut need: Option<Subspace> = None;
        for &u in &self.order[..depth] {
            let img = self.chosen[u].as_ref().unwrap().project(self.q.supp(u, v));
            need = Some(match need {
                Some(n) => n.sum(&img),
                None => img,
            });
        }
        for cand in self.candidates[v] {
            self.spent += 1;
            if self.spent > self.budget {
                return Err(Error::BudgetExceeded { budget: self.budget });
            }
            if let Some(n) = &need {
                if !cand.contains_space(n) {
                    continue;
                }
            }
            let ok = self.order[..depth]
                .iter()
                .all(|&u| self.chosen[u].as_ref().unwrap().contains_space(&cand.project(self.q.supp(v, u))));
            if ok {
                self.chosen[v] = Some(cand.clone());
                self.go(depth + 1)?;
                self.chosen[v] = None;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affine_weyl::omega;
    use crate::lattice::LatticeClass;

    pub(crate) fn chain2() -> QuiverData {
        build_quiver(&Configuration::from_vectors(2, vec![vec![0, 0], vec![1, 0]]).unwrap()).unwrap()
    }

    #[test]
    fn simplex_quiver_is_a_cycle() {
        for d in 2..=5 {
            let q = build_quiver(&Configuration::standard_alcove(d)).unwrap();
            let idx = |i: usize| q.config.index_of(&LatticeClass::new(omega(d, i))).unwrap();
            let mut expect: Vec<(usize, usize)> = (0..d).map(|i| (idx(i), idx((i + 1) % d))).collect();
            expect.sort();
            assert_eq!(q.arrows, expect);
            assert_eq!(arrows_by_paths(&q), q.arrows);
        }
    }

    #[test]
    fn chain_has_no_long_arrow() {
        let q = build_quiver(&Configuration::from_vectors(2, vec![vec![0, 0], vec![1, 0], vec![2, 0]]).unwrap()).unwrap();
        assert_eq!(q.arrows, vec![(0, 1), (1, 0), (1, 2), (2, 1)]);
        assert_eq!(arrows_by_paths(&q), q.arrows);
        assert!(build_quiver(&Configuration::from_vectors(2, vec![vec![0, 0], vec![2, 0]]).unwrap()).is_err());
    }

    #[test]
    fn ambient_ranks_are_support_sizes() {
        let q = build_quiver(&Configuration::standard_alcove(4)).unwrap();
        let m = ambient(&q, 3);
        assert!(is_subrep(&m, &q));
        let phi = rank_vector(&m, &q);
        for u in 0..q.n() {
            assert_eq!(phi.get(u, u), 4);
            for v in 0..q.n() {
                assert_eq!(phi.get(u, v) as usize, q.supp(u, v).len());
            }
        }
        assert!(hull_invariant_holds(&q, &phi));
    }

    #[test]
    fn closure_violation_reported() {
        let q = chain2();
        let mut m = SubRepresentation::zero(&q, 2);
        m.spaces[0] = Subspace::span(2, 2, vec![vec![0, 1]]);
        assert_eq!(subrep_violation(&m, &q), Some((0, 1)));
        assert!(is_subrep(&SubRepresentation::zero(&q, 2), &q));
    }

    #[test]
    fn generated_examples() {
        let q = chain2();
        assert_eq!(generated(&q, 2, &[]), SubRepresentation::zero(&q, 2));
        let g = generated(&q, 2, &[(0, vec![1, 1])]);
        assert_eq!(g.dims(), vec![1, 1]);
        let full = generated(&q, 3, &[(0, vec![1, 0]), (0, vec![0, 1]), (1, vec![1, 0]), (1, vec![0, 1])]);
        assert_eq!(full, ambient(&q, 3));
        assert_eq!(support_of_generated(&q, 0, &[1, 0]).unwrap(), [0].into_iter().collect());
        assert!(support_of_generated(&q, 0, &[0, 0]).is_err());
    }

    #[test]
    fn one_simplex_lines_over_f2() {
        let q = chain2();
        let all = enumerate_subreps(&q, &[1, 1], 2, 1_000_000).unwrap();
        // two projective lines glued at one point
        assert_eq!(all.len(), 5);
        assert_eq!(enumerate_subreps(&q, &[0, 0], 2, 10).unwrap().len(), 1);
        let brute: usize = Subspace::all_of_dim(2, 2, 1)
            .iter()
            .flat_map(|a| Subspace::all_of_dim(2, 2, 1).into_iter().map(move |b| (a.clone(), b)))
            .filter(|(a, b)| is_subrep(&SubRepresentation { p: 2, spaces: vec![a.clone(), b.clone()] }, &q))
            .count();
        assert_eq!(brute, 5);
    }

    #[test]
    fn enumeration_matches_brute_force() {
        let q = build_quiver(&Configuration::standard_alcove(3)).unwrap();
        for dims in [[1, 1, 1], [2, 2, 2], [1, 2, 1], [0, 1, 2]] {
            let fast = enumerate_subreps(&q, &dims, 2, 10_000_000).unwrap();
            let mut brute = Vec::new();
            for a in Subspace::all_of_dim(3, 2, dims[0]) {
                for b in Subspace::all_of_dim(3, 2, dims[1]) {
                    for c in Subspace::all_of_dim(3, 2, dims[2]) {
                        let m = SubRepresentation { p: 2, spaces: vec![a.clone(), b.clone(), c] };
                        if is_subrep(&m, &q) {
                            brute.push(m);
                        }
                    }
                }
            }
            brute.sort();
            assert_eq!(fast, brute, "{dims:?}");
        }
        assert!(matches!(enumerate_subreps(&q, &[1, 1, 1], 2, 5), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn counts_invariant_under_relabeling() {
        let a = Configuration::from_vectors(3, vec![vec![0, 0, 0], vec![1, 0, 0], vec![0, 0, 1]]).unwrap();
        let b = Configuration::from_vectors(3, vec![vec![0, 0, 0], vec![0, 1, 0], vec![1, 0, 0]]).unwrap();
        let qa = build_quiver(&a).unwrap();
        let qb = build_quiver(&b).unwrap();
        for p in [2, 3] {
            assert_eq!(
                enumerate_subreps(&qa, &[1, 1, 1], p, 1_000_000).unwrap().len(),
                enumerate_subreps(&qb, &[1, 1, 1], p, 1_000_000).unwrap().len()
            );
        }
    }
}
