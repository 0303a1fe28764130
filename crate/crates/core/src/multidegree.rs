//! Multidegrees on dual graphs: twists, concentration, and the set `V(Ḡ(w₀))`.

use std::collections::BTreeSet;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::Error;

pub type Multidegree = Vec<i64>;

/// A simple connected graph on vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualGraph {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
    #[serde(skip)]
    adj: Vec<Vec<usize>>,
}

#[derive(Deserialize)]
struct GraphJson {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl<'de> Deserialize<'de> for DualGraph {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let j = GraphJson::deserialize(de)?;
        DualGraph::new(j.n, j.edges).map_err(serde::de::Error::custom)
    }
}

impl DualGraph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self, Error> {
        if n == 0 {
            return Err(Error::Invalid("graph has no vertices".into()));
        }
        let mut set = BTreeSet::new();
        for &(a, b) in &edges {
            if a >= n || b >= n {
                return Err(Error::Invalid(format!("edge ({a},{b}) out of range")));
            }
            if a == b {
                return Err(Error::Invalid(format!("self-loop at {a}")));
            }
            if !set.insert((a.min(b), a.max(b))) {
                return Err(Error::Invalid(format!("repeated edge ({a},{b})")));
            }
        }
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in &set {
            adj[a].push(b);
            adj[b].push(a);
        }
        let g = DualGraph { n, edges: set.into_iter().collect(), adj };
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &u in &g.adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::Invalid("graph is not connected".into()));
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        Self::new(n, edges).expect("complete graph")
    }

    pub fn path(n: usize) -> Self {
        Self::new(n, (1..n).map(|b| (b - 1, b)).collect()).expect("path graph")
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    fn check(&self, w: &[i64]) -> Result<(), Error> {
        if w.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: w.len() });
        }
        Ok(())
    }
}

/// Twist at `v`: neighbours gain one, `v` loses its degree.
pub fn twist_at(g: &DualGraph, w: &[i64], v: usize) -> Multidegree {
    twist_by(g, w, v, 1)
}

pub fn negative_twist_at(g: &DualGraph, w: &[i64], v: usize) -> Multidegree {
    twist_by(g, w, v, -1)
}

fn twist_by(g: &DualGraph, w: &[i64], v: usize, k: i64) -> Multidegree {
    let mut out = w.to_vec();
    out[v] -= k * g.degree(v) as i64;
    for &u in g.neighbors(v) {
        out[u] += k;
    }
    out
}

/// `w + Δ·a`: twist `a[v]` times at each `v`.
pub fn apply_twists(g: &DualGraph, w: &[i64], a: &[i64]) -> Multidegree {
    let mut out = w.to_vec();
    for v in 0..g.n {
        out[v] -= a[v] * g.degree(v) as i64;
        for &u in g.neighbors(v) {
            out[u] += a[v];
        }
    }
    out
}

/// An ordering starting at `v` witnessing that `w` is concentrated on `v`.
pub fn is_concentrated(g: &DualGraph, w: &[i64], v: usize) -> Result<Option<Vec<usize>>, Error> {
    g.check(w)?;
    if v >= g.n {
        return Err(Error::Invalid(format!("vertex {v} out of range")));
    }
    let mut order = vec![v];
    let cur = negative_twist_at(g, w, v);
    let mut used = vec![false; g.n];
    used[v] = true;
    Ok(extend_order(g, &cur, &mut used, &mut order).then_some(order))
}

fn extend_order(g: &DualGraph, cur: &[i64], used: &mut [bool], order: &mut Vec<usize>) -> bool {
    if order.len() == g.n {
        return true;
    }
    for u in 0..g.n {
        if !used[u] && cur[u] < 0 {
            used[u] = true;
            order.push(u);
            if extend_order(g, &negative_twist_at(g, cur, u), used, order) {
                return true;
            }
            order.pop();
            used[u] = false;
        }
    }
    false
}

/// Exact solution of `Δ·a = target` with `a[fixed] = 0`.
fn solve_laplacian(g: &DualGraph, target: &[i64], fixed: usize) -> Option<Vec<Ratio<i64>>> {
    if target.iter().sum::<i64>() != 0 {
        return None;
    }
    let idx: Vec<usize> = (0..g.n).filter(|&v| v != fixed).collect();
    let m = idx.len();
    let mut rows: Vec<Vec<Ratio<i64>>> = idx
        .iter()
        .map(|&u| {
            let mut row: Vec<Ratio<i64>> = idx
                .iter()
                .map(|&v| {
                    let x = if u == v { -(g.degree(u) as i64) } else { g.neighbors(u).contains(&v) as i64 };
                    Ratio::from_integer(x)
                })
                .collect();
            row.push(Ratio::from_integer(target[u]));
            row
        })
        .collect();
    for c in 0..m {
        let piv = (c..m).find(|&r| rows[r][c] != Ratio::from_integer(0))?;
        rows.swap(c, piv);
        let p = rows[c][c];
        for x in rows[c].iter_mut() {
            *x /= p;
        }
        for r in 0..m {
            if r != c && rows[r][c] != Ratio::from_integer(0) {
                let f = rows[r][c];
                for k in 0..=m {
                    let sub = f * rows[c][k];
                    rows[r][k] -= sub;
                }
            }
        }
    }
    let mut a = vec![Ratio::from_integer(0); g.n];
    for (r, &v) in idx.iter().enumerate() {
        a[v] = rows[r][m];
    }
    Some(a)
}

/// The integral twist vector `c` with `w′ = w + Δ·c` and `c[fixed] = 0`, possibly with negative entries.
pub fn twist_difference(g: &DualGraph, w: &[i64], w2: &[i64], fixed: usize) -> Result<Option<Vec<i64>>, Error> {
    g.check(w)?;
    g.check(w2)?;
    let target: Vec<i64> = w2.iter().zip(w).map(|(a, b)| a - b).collect();
    let Some(a) = solve_laplacian(g, &target, fixed) else { return Ok(None) };
    if a.iter().any(|x| !x.is_integer()) {
        return Ok(None);
    }
    Ok(Some(a.iter().map(|x| x.to_integer()).collect()))
}

/// Twists avoiding `forbidden` that carry `w` to `w′`, if there are any.
pub fn solve_twist(g: &DualGraph, w: &[i64], w2: &[i64], forbidden: usize) -> Result<Option<Vec<i64>>, Error> {
    Ok(twist_difference(g, w, w2, forbidden)?.filter(|a| a.iter().all(|&x| x >= 0)))
}

fn in_vbar(g: &DualGraph, w: &[i64], ws: &[Multidegree]) -> Result<bool, Error> {
    for (v, wv) in ws.iter().enumerate() {
        if solve_twist(g, w, wv, v)?.is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn scan_box(g: &DualGraph, w0: &[i64], ws: &[Multidegree], hi: &[i64]) -> Result<BTreeSet<Multidegree>, Error> {
    let mut out = BTreeSet::new();
    let mut b = vec![0i64; g.n];
    loop {
        if b.contains(&0) {
            let w = apply_twists(g, w0, &b);
            if in_vbar(g, &w, ws)? {
                out.insert(w);
            }
        }
        let mut k = 0;
        while k < g.n && b[k] == hi[k] {
            b[k] = 0;
            k += 1;
        }
        if k == g.n {
            return Ok(out);
        }
        b[k] += 1;
    }
}

/// Box bound `b_u ≤ max_v c^{(v)}_u` for normalized twist vectors `b` of members of `V(Ḡ(w₀))`.
fn vbar_box(g: &DualGraph, w0: &[i64], ws: &[Multidegree]) -> Result<Vec<i64>, Error> {
    if ws.len() != g.n {
        return Err(Error::DimensionMismatch { expected: g.n, got: ws.len() });
    }
    let mut hi = vec![0i64; g.n];
    for (v, wv) in ws.iter().enumerate() {
        if is_concentrated(g, wv, v)?.is_none() {
            return Err(Error::Invalid(format!("multidegree {wv:?} is not concentrated on {v}")));
        }
        let c =
            twist_difference(g, w0, wv, v)?.ok_or_else(|| Error::Invalid(format!("{wv:?} is not obtained from w0 by twists")))?;
        for u in 0..g.n {
            hi[u] = hi[u].max(c[u]);
        }
    }
    Ok(hi)
}

/// `V(Ḡ(w₀))`: multidegrees twist-equivalent to `w₀` from which every `w_v` is reached by twists avoiding `v`.
pub fn vbar_set(g: &DualGraph, w0: &[i64], ws: &[Multidegree]) -> Result<Vec<Multidegree>, Error> {
    g.check(w0)?;
    let hi = vbar_box(g, w0, ws)?;
    Ok(scan_box(g, w0, ws, &hi)?.into_iter().collect())
}

/// The same set computed over a box widened by `extra` in every direction.
pub fn vbar_set_widened(g: &DualGraph, w0: &[i64], ws: &[Multidegree], extra: i64) -> Result<Vec<Multidegree>, Error> {
    g.check(w0)?;
    let hi: Vec<i64> = vbar_box(g, w0, ws)?.iter().map(|x| x + extra).collect();
    Ok(scan_box(g, w0, ws, &hi)?.into_iter().collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct KnReport {
    pub graph: DualGraph,
    pub w0: Multidegree,
    pub ws: Vec<Multidegree>,
    pub orderings: Vec<Option<Vec<usize>>>,
    pub vbar: Vec<Multidegree>,
    /// `a^{(j)}` with `w_j = w₀ + Δ·a^{(j)}`.
    pub twist_vectors: Vec<Vec<i64>>,
    pub formulas_hold: bool,
    pub concentrated: bool,
    pub vbar_matches: bool,
    pub nested: bool,
}

impl KnReport {
    pub fn ok(&self) -> bool {
        self.formulas_hold && self.concentrated && self.vbar_matches && self.nested
    }
}

/// The complete-graph example: `w₀(v_i) = n−1−i` and `w_j` obtained by twisting at `v_0, …, v_{j−1}`.
pub fn kn_instance(n: usize) -> Result<KnReport, Error> {
    if n < 2 {
        return Err(Error::Invalid("need n >= 2".into()));
    }
    let g = DualGraph::complete(n);
    let w0: Multidegree = (0..n).map(|i| (n - 1 - i) as i64).collect();
    let mut ws = vec![w0.clone()];
    for j in 1..n {
        ws.push(twist_at(&g, &ws[j - 1], j - 1));
    }
    let formula = |j: usize, i: usize| -> i64 {
        let (j, i, n) = (j as i64, i as i64, n as i64);
        if i < j {
            j - i - 1
        } else {
            n - 1 + j - i
        }
    };
    let formulas_hold = ws.iter().enumerate().all(|(j, w)| (0..n).all(|i| w[i] == formula(j, i)));
    let orderings = ws.iter().enumerate().map(|(j, w)| is_concentrated(&g, w, j)).collect::<Result<Vec<_>, _>>()?;
    let concentrated = orderings.iter().all(|o| o.is_some());
    let vbar = vbar_set(&g, &w0, &ws)?;
    let mut sorted = ws.clone();
    sorted.sort();
    let vbar_matches = vbar == sorted;
    let twist_vectors =
        ws.iter().map(|w| twist_difference(&g, &w0, w, n - 1).map(|a| a.expect("same class"))).collect::<Result<Vec<_>, _>>()?;
    let nested = twist_vectors.windows(2).all(|p| p[0].iter().zip(&p[1]).all(|(a, b)| a <= b))
        && twist_vectors.iter().all(|a| a.iter().all(|&x| (0..=1).contains(&x)));
    Ok(KnReport { graph: g, w0, ws, orderings, vbar, twist_vectors, formulas_hold, concentrated, vbar_matches, nested })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn single_vertex() {
        let g = DualGraph::new(1, vec![]).unwrap();
        assert_eq!(twist_at(&g, &[5], 0), vec![5]);
        assert_eq!(is_concentrated(&g, &[5], 0).unwrap(), Some(vec![0]));
        assert_eq!(vbar_set(&g, &[5], &[vec![5]]).unwrap(), vec![vec![5]]);
    }

    #[test]
    fn bad_graphs() {
        assert!(DualGraph::new(3, vec![(0, 1)]).is_err());
        assert!(DualGraph::new(2, vec![(0, 0)]).is_err());
        assert!(DualGraph::new(2, vec![(0, 1), (1, 0)]).is_err());
        let g: DualGraph = serde_json::from_str(r#"{"n": 3, "edges": [[0, 1], [1, 2]]}"#).unwrap();
        assert_eq!(g, DualGraph::path(3));
    }

    #[test]
    fn k4_degrees() {
        let rep = kn_instance(4).unwrap();
        assert_eq!(rep.ws, vec![vec![3, 2, 1, 0], vec![0, 3, 2, 1], vec![1, 0, 3, 2], vec![2, 1, 0, 3]]);
        let g = DualGraph::complete(4);
        assert_eq!(solve_twist(&g, &rep.ws[0], &rep.ws[2], 3).unwrap(), Some(vec![1, 1, 0, 0]));
        assert!(rep.ok());
    }

    #[test]
    fn kn_examples() {
        for n in 2..=8 {
            let rep = kn_instance(n).unwrap();
            assert!(rep.ok(), "n={n}: {rep:?}");
        }
        assert_eq!(kn_instance(2).unwrap().vbar.len(), 2);
    }

    #[test]
    fn edge_concentration() {
        let g = DualGraph::path(2);
        // the negative twist at the first vertex pushes the other to -1
        assert_eq!(is_concentrated(&g, &[0, 0], 0).unwrap(), Some(vec![0, 1]));
        assert_eq!(is_concentrated(&g, &[0, 0], 1).unwrap(), Some(vec![1, 0]));
        assert!(is_concentrated(&g, &[0, 1], 0).unwrap().is_none());
        assert!(is_concentrated(&g, &[0, 1], 1).unwrap().is_some());
    }

    #[test]
    fn solve_edge_cases() {
        let g = DualGraph::path(3);
        assert_eq!(solve_twist(&g, &[1, 1, 1], &[1, 1, 1], 0).unwrap(), Some(vec![0, 0, 0]));
        assert_eq!(solve_twist(&g, &[1, 1, 1], &[1, 1, 2], 0).unwrap(), None);
        // reachable only by twisting the forbidden vertex
        let w2 = twist_at(&g, &[1, 1, 1], 0);
        assert_eq!(solve_twist(&g, &[1, 1, 1], &w2, 0).unwrap(), None);
        assert_eq!(solve_twist(&g, &[1, 1, 1], &w2, 2).unwrap(), Some(vec![1, 0, 0]));
    }

    #[test]
    fn path_vbar_matches_wide_scan() {
        let g = DualGraph::path(3);
        let w0 = vec![1, 1, 1];
        let ws = vec![vec![3, 0, 0], vec![0, 3, 0], vec![0, 0, 3]];
        for (v, w) in ws.iter().enumerate() {
            assert!(is_concentrated(&g, w, v).unwrap().is_some(), "{w:?}");
        }
        let a = vbar_set(&g, &w0, &ws).unwrap();
        assert_eq!(a, vbar_set_widened(&g, &w0, &ws, 3).unwrap());
        assert!(a.contains(&w0));
        for w in &a {
            assert!(twist_difference(&g, &w0, w, 0).unwrap().is_some());
        }
    }

    #[test]
    fn unconcentrated_input_is_rejected() {
        let g = DualGraph::path(2);
        assert!(vbar_set(&g, &[1, 1], &[vec![1, 1], vec![1, 1]]).is_err());
    }

    fn graph_and_degree() -> impl Strategy<Value = (DualGraph, Vec<i64>)> {
        (2usize..6)
            .prop_flat_map(|n| {
                let extra = proptest::collection::vec((0..n, 0..n), 0..6);
                (Just(n), extra, proptest::collection::vec(-3i64..4, n))
            })
            .prop_map(|(n, extra, w)| {
                let mut edges: BTreeSet<(usize, usize)> = (1..n).map(|b| (b - 1, b)).collect();
                for (a, b) in extra {
                    if a != b {
                        edges.insert((a.min(b), a.max(b)));
                    }
                }
                (DualGraph::new(n, edges.into_iter().collect()).unwrap(), w)
            })
    }

    proptest! {
        #[test]
        fn twists_preserve_total((g, w) in graph_and_degree(), seq in proptest::collection::vec(0usize..6, 0..8)) {
            let mut cur = w.clone();
            for &v in &seq {
                cur = twist_at(&g, &cur, v % g.n);
            }
            prop_assert_eq!(cur.iter().sum::<i64>(), w.iter().sum::<i64>());
            let mut rev = w.clone();
            for &v in seq.iter().rev() {
                rev = twist_at(&g, &rev, v % g.n);
            }
            prop_assert_eq!(&rev, &cur);
            for &v in &seq {
                cur = negative_twist_at(&g, &cur, v % g.n);
            }
            prop_assert_eq!(cur, w);
        }

        #[test]
        fn twisting_everything_is_identity((g, w) in graph_and_degree()) {
            prop_assert_eq!(apply_twists(&g, &w, &vec![1; g.n]), w);
        }

        #[test]
        fn solve_recovers_twists((g, w) in graph_and_degree(), a in proptest::collection::vec(0i64..3, 6), f in 0usize..6) {
            let f = f % g.n;
            let mut a: Vec<i64> = a[..g.n].to_vec();
            a[f] = 0;
            let w2 = apply_twists(&g, &w, &a);
            prop_assert_eq!(solve_twist(&g, &w, &w2, f).unwrap(), Some(a));
        }
    }
}
