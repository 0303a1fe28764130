//! Small named configurations used by tests, the CLI and the demo.

use std::collections::BTreeSet;

use crate::independence::weakly_independent;
use crate::lattice::{convex_closure, maximal_simplices, Configuration, LatticeClass};
use crate::quiver::build_quiver;

/// Six vertices in `d = 5`: a chain of edges, a triangle and a pendant edge.
pub fn branched_chain() -> Configuration {
    Configuration::from_vectors(
        5,
        vec![
            vec![0, 0, 0, 2, 0],
            vec![0, 0, 0, 1, 0],
            vec![0, 0, 0, 0, 0],
            vec![1, 0, 0, 0, 0],
            vec![1, 1, 0, 0, 0],
            vec![1, 2, 0, 0, 0],
        ],
    )
    .unwrap()
}

/// A tree of edges in `d = 3`.
pub fn edge_tree() -> Configuration {
    Configuration::from_vectors(3, vec![vec![0, 0, 0], vec![1, 0, 0], vec![2, 0, 0], vec![0, 1, 1]]).unwrap()
}

/// Two triangles glued along an edge.
pub fn square() -> Configuration {
    Configuration::from_vectors(3, vec![vec![0, 0, 0], vec![1, 0, 0], vec![0, 1, 0], vec![1, 1, 0]]).unwrap()
}

/// Two triangles sharing a vertex in `d = 4`.
pub fn bowtie() -> Configuration {
    Configuration::from_vectors(4, vec![vec![0, 0, 0, 0], vec![1, 0, 0, 0], vec![1, 1, 0, 0], vec![0, 0, 0, 1], vec![0, 0, 1, 1]])
        .unwrap()
}

/// Every face of the standard alcove in dimension `d`.
pub fn omega_faces(d: usize) -> Vec<Configuration> {
    (1u32..(1 << d))
        .map(|mask| {
            let types: Vec<usize> = (0..d).filter(|i| mask & (1 << i) != 0).collect();
            Configuration::standard_face(d, &types)
        })
        .collect()
}

/// Weakly independent configurations with exactly two maximal simplices and at most `max_len` vertices,
/// obtained as convex closures of a standard face and one point of `{0,1,2}^d`.
pub fn two_simplex_configs(d: usize, max_len: usize) -> Vec<Configuration> {
    let mut out = BTreeSet::new();
    for face in omega_faces(d) {
        if face.len() < 2 {
            continue;
        }
        for code in 0..3usize.pow(d as u32) {
            let x: Vec<i64> = (0..d).map(|k| (code / 3usize.pow(k as u32) % 3) as i64).collect();
            let seed = Configuration::new(d, face.vertices.iter().cloned().chain([LatticeClass::new(x)])).unwrap();
            let g = convex_closure(&seed);
            if g.len() > max_len || maximal_simplices(&g).len() != 2 {
                continue;
            }
            let Ok(q) = build_quiver(&g) else { continue };
            if weakly_independent(&q).independent {
                out.insert(normal_form(&g));
            }
        }
    }
    out.into_iter().map(|vs| Configuration::new(d, vs).unwrap()).collect()
}

/// Least vertex list over translations and coordinate permutations.
fn normal_form(g: &Configuration) -> Vec<LatticeClass> {
    let d = g.d;
    let mut perm: Vec<usize> = (0..d).collect();
    let mut best: Option<Vec<LatticeClass>> = None;
    loop {
        for origin in &g.vertices {
            let mut vs: Vec<LatticeClass> = g
                .vertices
                .iter()
                .map(|v| LatticeClass::new(perm.iter().map(|&k| v.coords()[k] - origin.coords()[k]).collect()))
                .collect();
            vs.sort();
            if best.as_ref().is_none_or(|b| vs < *b) {
                best = Some(vs);
            }
        }
        // next permutation
        let Some(i) = (1..d).rev().find(|&i| perm[i - 1] < perm[i]) else { break };
        let j = (i..d).rev().find(|&j| perm[j] > perm[i - 1]).unwrap();
        perm.swap(i - 1, j);
        perm[i..].reverse();
    }
    best.unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generated_families() {
        assert_eq!(two_simplex_configs(3, 5).len(), 3);
        assert_eq!(two_simplex_configs(4, 5).len(), 9);
        for g in two_simplex_configs(3, 5).iter().chain(&two_simplex_configs(4, 5)) {
            let q = build_quiver(g).unwrap();
            assert_eq!(q.simplices.len(), 2);
            assert!(weakly_independent(&q).independent);
        }
        assert_eq!(omega_faces(4).len(), 15);
    }
}
