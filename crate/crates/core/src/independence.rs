//! Local weak and linear independence of configurations.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::Error;
use crate::quiver::QuiverData;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Failure {
    /// `f_{from,v}` factors through no vertex of `I_v`.
    NotFactoring { from: usize },
    /// Images of `f_{a,v}` and `f_{b,v}` share a coordinate.
    Overlap { a: usize, b: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VertexWitness {
    pub vertex: usize,
    pub in_set: Vec<usize>,
    pub failure: Option<Failure>,
}

#[derive(Clone, Debug, Serialize)]
pub struct IndependenceCertificate {
    pub independent: bool,
    pub vertices: Vec<VertexWitness>,
}

impl IndependenceCertificate {
    pub fn first_failure(&self) -> Option<usize> {
        self.vertices.iter().find(|w| w.failure.is_some()).map(|w| w.vertex)
    }
}

fn check_with(q: &QuiverData, v: usize, in_set: Vec<usize>) -> VertexWitness {
    let mut failure = None;
    for u in 0..q.n() {
        if u != v && !in_set.contains(&u) && !in_set.iter().any(|&w| q.factors_through(u, w, v)) {
            failure = Some(Failure::NotFactoring { from: u });
            break;
        }
    }
    if failure.is_none() {
        'outer: for (i, &a) in in_set.iter().enumerate() {
            for &b in &in_set[i + 1..] {
                if !q.supp(a, v).intersect(q.supp(b, v)).is_empty() {
                    failure = Some(Failure::Overlap { a, b });
                    break 'outer;
                }
            }
        }
    }
    VertexWitness { vertex: v, in_set, failure }
}

pub fn weakly_independent_at(q: &QuiverData, v: usize) -> VertexWitness {
    check_with(q, v, q.in_neighbors(v))
}

pub fn weakly_independent(q: &QuiverData) -> IndependenceCertificate {
    let vertices: Vec<VertexWitness> = (0..q.n()).map(|v| weakly_independent_at(q, v)).collect();
    IndependenceCertificate { independent: vertices.iter().all(|w| w.failure.is_none()), vertices }
}

/// Weak independence with `I_v` taken to be all neighbours of `v`.
pub fn linearly_independent(q: &QuiverData) -> bool {
    let adj = q.config.adjacency();
    (0..q.n()).all(|v| {
        let nb = (0..q.n()).filter(|&u| adj[u][v]).collect();
        check_with(q, v, nb).failure.is_none()
    })
}

/// `(A_e, A_ē)` for the arrow `e = (s, t)`: vertices whose path to `t` passes through `s`, and the rest.
pub fn a_sets(q: &QuiverData, e: (usize, usize)) -> Result<(Vec<usize>, Vec<usize>), Error> {
    let (s, t) = e;
    if !q.has_arrow(s, t) {
        return Err(Error::Invalid(format!("{s}->{t} is not an arrow")));
    }
    let fwd: Vec<usize> = (0..q.n()).filter(|&v| v == s || (v != t && q.factors_through(v, s, t))).collect();
    let bwd: Vec<usize> = (0..q.n()).filter(|&v| v == t || (v != s && q.factors_through(v, t, s))).collect();
    if fwd.len() + bwd.len() != q.n() || fwd.iter().any(|v| bwd.contains(v)) {
        return Err(Error::NotWeaklyIndependent { vertex: t });
    }
    Ok((fwd, bwd))
}

#[derive(Clone, Debug, Serialize)]
pub struct StructureReport {
    pub cycles: Vec<Vec<usize>>,
    pub issues: Vec<String>,
}

impl StructureReport {
    pub fn ok(&self) -> bool {
        self.issues.is_empty()
    }
}

const PATH_LIMIT: usize = 200_000;

/// Checks the path and cycle structure of `Q(Γ)` expected of a weakly independent configuration.
pub fn validate_structure(q: &QuiverData) -> StructureReport {
    let n = q.n();
    let mut issues = Vec::new();
    let mut counts = vec![vec![0usize; n]; n];
    let mut cycles: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut visited = 0usize;
    for start in 0..n {
        let mut stack = vec![(vec![start], 0i64, q.supp(start, start))];
        while let Some((path, shift, supp)) = stack.pop() {
            visited += 1;
            if visited > PATH_LIMIT {
                issues.push("too many paths".into());
                return StructureReport { cycles: Vec::new(), issues };
            }
            let last = *path.last().unwrap();
            for nx in q.out_neighbors(last) {
                let s2 = supp.intersect(q.supp(last, nx));
                let sh2 = shift + q.t(last, nx).n;
                let zero = s2.is_empty() || sh2 > q.t(start, nx).n;
                if nx == start {
                    if !zero {
                        issues.push(format!("cycle {path:?} has nonzero composite"));
                    }
                    let mut c = path.clone();
                    c.sort();
                    cycles.insert(c);
                } else if !path.contains(&nx) {
                    if zero {
                        issues.push(format!("path {path:?}->{nx} has zero composite"));
                    }
                    counts[start][nx] += 1;
                    let mut p2 = path.clone();
                    p2.push(nx);
                    stack.push((p2, sh2, s2));
                }
            }
        }
    }
    for u in 0..n {
        for v in 0..n {
            if u != v && counts[u][v] != 1 {
                issues.push(format!("{} paths from {u} to {v}", counts[u][v]));
            }
        }
    }
    let cycles: Vec<Vec<usize>> = cycles.into_iter().collect();
    let mut simplices: Vec<Vec<usize>> = q
        .simplices
        .iter()
        .filter(|s| s.len() > 1)
        .map(|s| {
            let mut s = s.clone();
            s.sort();
            s
        })
        .collect();
    simplices.sort();
    if simplices != cycles {
        issues.push("cycles differ from maximal simplices".into());
    }
    for (i, a) in cycles.iter().enumerate() {
        for b in &cycles[i + 1..] {
            if a.iter().filter(|x| b.contains(x)).count() > 1 {
                issues.push(format!("cycles {a:?} and {b:?} share an edge"));
            }
        }
    }
    StructureReport { cycles, issues }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{Configuration, LatticeClass};
    use crate::quiver::build_quiver;
    use crate::samples;

    #[test]
    fn simplices_are_weakly_independent() {
        for d in 2..=5 {
            let q = build_quiver(&Configuration::standard_alcove(d)).unwrap();
            assert!(weakly_independent(&q).independent);
            let r = validate_structure(&q);
            assert!(r.ok(), "{:?}", r.issues);
            assert_eq!(r.cycles.len(), 1);
            assert_eq!(linearly_independent(&q), d == 2);
        }
        let single = build_quiver(&Configuration::from_vectors(3, vec![vec![0, 1, 2]]).unwrap()).unwrap();
        assert!(weakly_independent(&single).independent);
        assert!(linearly_independent(&single));
    }

    #[test]
    fn branched_chain_structure() {
        let q = build_quiver(&samples::branched_chain()).unwrap();
        assert!(weakly_independent(&q).independent);
        assert!(!linearly_independent(&q));
        let r = validate_structure(&q);
        assert!(r.ok(), "{:?}", r.issues);
        assert_eq!(r.cycles.len(), 4);
        let idx = |v: &[i64]| q.config.index_of(&LatticeClass::new(v.to_vec())).unwrap();
        let (fwd, bwd) = a_sets(&q, (idx(&[1, 1, 0, 0, 0]), idx(&[0, 0, 0, 0, 0]))).unwrap();
        let mut expect_fwd = vec![idx(&[1, 0, 0, 0, 0]), idx(&[1, 1, 0, 0, 0]), idx(&[1, 2, 0, 0, 0])];
        expect_fwd.sort();
        assert_eq!(fwd, expect_fwd);
        assert_eq!(bwd.len(), 3);
        for set in [fwd, bwd] {
            let sub = build_quiver(&q.config.sub(&set)).unwrap();
            assert!(weakly_independent(&sub).independent);
        }
    }

    #[test]
    fn two_cycle_a_sets() {
        let q = build_quiver(&Configuration::from_vectors(2, vec![vec![0, 0], vec![1, 0]]).unwrap()).unwrap();
        assert_eq!(a_sets(&q, (0, 1)).unwrap(), (vec![0], vec![1]));
        assert!(a_sets(&q, (0, 0)).is_err());
    }

    #[test]
    fn edge_trees_are_linearly_independent() {
        let q = build_quiver(&samples::edge_tree()).unwrap();
        assert!(linearly_independent(&q));
        assert!(weakly_independent(&q).independent);
        let r = validate_structure(&q);
        assert!(r.ok() && r.cycles.iter().all(|c| c.len() == 2));
    }

    #[test]
    fn square_fails_with_witness() {
        let q = build_quiver(&samples::square()).unwrap();
        let cert = weakly_independent(&q);
        assert!(!cert.independent);
        let w = &cert.vertices[cert.first_failure().unwrap()];
        assert!(w.failure.is_some());
        assert!(!validate_structure(&q).ok());
    }
}
