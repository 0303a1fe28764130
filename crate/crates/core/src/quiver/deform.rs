use std::collections::BTreeSet;

use serde::Serialize;

use super::{decompose, generated, rank_vector, Decomposition, QuiverData, RankVector, SubRepresentation};
use crate::error::Error;
use crate::fp::{self, Subspace, Vector};
use crate::independence;

/// One move of a one-parameter family `M^t`, together with the predicted rank increase.
#[derive(Clone, Debug, Serialize)]
pub struct DeformStep {
    pub rep: SubRepresentation,
    pub t: u8,
    pub cycle: Vec<usize>,
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

impl DeformStep {
    /// `Φ(M^t) - Φ(M)`.
    pub fn increment(&self, n: usize) -> RankVector {
        RankVector::from_fn(n, |u, v| (self.rows.contains(&u) && self.cols.contains(&v)) as u32)
    }
}

/// Restriction of a one-generator summand to the cycle `c`: start index and length.
fn string_on(q: &QuiverData, s: &SubRepresentation, c: &[usize]) -> (usize, usize) {
    let l = c.len();
    let present: Vec<bool> = c.iter().map(|&u| !s.spaces[u].is_zero()).collect();
    for i in 0..l {
        let prev = (i + l - 1) % l;
        if present[i] && (!present[prev] || s.spaces[c[prev]].project(q.supp(c[prev], c[i])).is_zero()) {
            let len = (0..l).take_while(|&k| present[(i + k) % l]).count();
            return (i, len);
        }
    }
    (0, 0)
}

/// Index on `c` of the vertex through which `w` is reached from `c[0]`.
fn entry(q: &QuiverData, c: &[usize], w: usize) -> usize {
    if w == c[0] {
        return 0;
    }
    let h = q.hull_step(c[0], w);
    c.iter().position(|&x| x == h).unwrap_or(0)
}

fn rotate(s: &[usize], k: usize) -> Vec<usize> {
    (0..s.len()).map(|i| s[(k + i) % s.len()]).collect()
}

struct Move<'a> {
    q: &'a QuiverData,
    m: &'a SubRepresentation,
    dec: &'a Decomposition,
    phi: &'a RankVector,
    bound: Option<&'a RankVector>,
}

impl Move<'_> {
    /// Replaces summand `idx` by the one generated at `at` by `base + t·extra`.
    fn try_replace(
        &self,
        idx: usize,
        at: usize,
        base: &[u8],
        extra: &[u8],
        cycle: &[usize],
        rows: Vec<usize>,
        cols: Vec<usize>,
    ) -> Option<DeformStep> {
        let p = self.m.p;
        let mut expected = self.phi.clone();
        for &u in &rows {
            for &w in &cols {
                expected.set(u, w, expected.get(u, w) + 1);
            }
        }
        let others: Vec<(usize, Vector)> = self
            .dec
            .summands
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != idx)
            .map(|(_, s)| (s.ty.generator, s.vector.clone()))
            .collect();
        for t in 1..p {
            let mut seeds = others.clone();
            seeds.push((at, fp::add_scaled(base, t, extra, p)));
            let rep = generated(self.q, p, &seeds);
            if rep.dims() != self.m.dims() {
                continue;
            }
            let phi2 = rank_vector(&rep, self.q);
            if phi2 == expected && self.bound.is_none_or(|b| phi2.leq(b)) {
                return Some(DeformStep { rep, t, cycle: cycle.to_vec(), rows, cols });
            }
        }
        None
    }
}

/// Moves a non-projective `m` one step towards the projective locus; `None` when `m` is projective.
pub fn deform_step(m: &SubRepresentation, q: &QuiverData) -> Result<Option<DeformStep>, Error> {
    let dec = decompose(m, q)?;
    if dec.is_projective(q) {
        return Ok(None);
    }
    let reps: Vec<SubRepresentation> = dec.summands.iter().map(|s| s.rep(q, m.p)).collect();
    let phi = rank_vector(m, q);
    let mv = Move { q, m, dec: &dec, phi: &phi, bound: None };
    for s in q.simplices.iter().filter(|s| s.len() > 1) {
        let l = s.len();
        let n = l - 1;
        let strings: Vec<(usize, usize)> = reps.iter().map(|r| string_on(q, r, s)).collect();
        let Some(mlen) = strings.iter().filter(|x| x.1 > 0 && x.1 < l).map(|x| x.1).max() else { continue };
        for i1 in (0..reps.len()).filter(|&i| strings[i].1 == mlen) {
            let c = rotate(s, strings[i1].0);
            let eta = reps[i1].spaces[c[0]].basis()[0].clone();
            for i2 in 0..reps.len() {
                let (st, len) = strings[i2];
                if i2 == i1 || len == 0 || len == l {
                    continue;
                }
                let k = (st + l - strings[i1].0) % l;
                if k < mlen || k + len - 1 < n || dec.summands[i2].ty.generator != c[k] {
                    continue;
                }
                let lo = k + len - l;
                if fp::project(&eta, q.supp(c[k], c[0])) != eta {
                    continue;
                }
                let rows = c[k..].to_vec();
                let cols: Vec<usize> = (0..q.n()).filter(|&w| (lo..mlen).contains(&entry(q, &c, w))).collect();
                if let Some(step) = mv.try_replace(i2, c[k], &dec.summands[i2].vector, &eta, &c, rows, cols) {
                    return Ok(Some(step));
                }
            }
        }
    }
    Err(Error::Internal("no deformation of a non-projective representation found".into()))
}

/// One step from `m` towards a representation with rank vector `target ≥ Φ(m)`.
pub fn deform_toward(m: &SubRepresentation, q: &QuiverData, target: &RankVector) -> Result<Option<DeformStep>, Error> {
    let phi = rank_vector(m, q);
    if phi == *target {
        return Ok(None);
    }
    if !phi.leq(target) {
        return Err(Error::Invalid("target rank vector is not above the current one".into()));
    }
    let dec = decompose(m, q)?;
    let reps: Vec<SubRepresentation> = dec.summands.iter().map(|s| s.rep(q, m.p)).collect();
    let mv = Move { q, m, dec: &dec, phi: &phi, bound: Some(target) };
    for s in q.simplices.iter().filter(|s| s.len() > 1) {
        let l = s.len() as i64;
        let n = l - 1;
        let found = (1..=n).find_map(|mm| {
            (0..l)
                .find(|&i| {
                    let (a, b) = (s[i as usize], s[((i + mm) % l) as usize]);
                    phi.get(a, b) < target.get(a, b)
                })
                .map(|i| (i, mm))
        });
        let Some((i0, mm)) = found else { continue };
        let c = rotate(s, i0 as usize);
        let at = |j: i64| c[j.rem_euclid(l) as usize];
        let strings: Vec<(i64, i64)> =
            reps.iter().map(|r| string_on(q, r, s)).map(|(st, len)| ((st as i64 - i0).rem_euclid(l), len as i64)).collect();
        let has = |start: i64, end: i64| -> Vec<usize> {
            let len = end - start + 1;
            (0..reps.len()).filter(|&i| strings[i].1 == len && strings[i].0 == start.rem_euclid(l)).collect()
        };
        for lam in (mm - 1 - n..=0).rev() {
            let c1 = has(lam, mm - 1);
            for &i1 in c1.iter().filter(|&&i| dec.summands[i].ty.generator == at(lam)) {
                for delta in mm..=n + 1 {
                    for mu in ((lam + 1)..=1).rev() {
                        if delta - mu > n {
                            continue;
                        }
                        for i2 in has(mu, delta).into_iter().filter(|&i| i != i1) {
                            let eps2 = reps[i2].spaces[at(mu)].basis()[0].clone();
                            if fp::project(&eps2, q.supp(at(lam), at(mu))) != eps2 {
                                continue;
                            }
                            let mut rows: Vec<usize> = (lam..mu).map(at).collect();
                            rows.sort();
                            rows.dedup();
                            let targets: BTreeSet<usize> = (mm..=delta).map(|j| j.rem_euclid(l) as usize).collect();
                            let cols: Vec<usize> = (0..q.n()).filter(|&w| targets.contains(&entry(q, &c, w))).collect();
                            if let Some(step) = mv.try_replace(i1, at(lam), &dec.summands[i1].vector, &eps2, &c, rows, cols) {
                                return Ok(Some(step));
                            }
                        }
                    }
                }
            }
        }
    }
    Err(Error::Internal("no deformation towards the target found".into()))
}

/// Repeated `deform_toward` until the rank vector reaches `target`.
pub fn degeneration_chain(m: &SubRepresentation, q: &QuiverData, target: &RankVector) -> Result<Vec<DeformStep>, Error> {
    let mut cur = m.clone();
    let mut out = Vec::new();
    let bound = q.n() * q.n() * q.d() + 1;
    while let Some(step) = deform_toward(&cur, q, target)? {
        cur = step.rep.clone();
        out.push(step);
        if out.len() > bound {
            return Err(Error::Internal("degeneration chain does not terminate".into()));
        }
    }
    Ok(out)
}

/// Extends `r`-dimensional subspaces on `set` to an `r`-dimensional sub-representation, if the pullbacks allow it.
pub fn extend_partial(q: &QuiverData, set: &[usize], partial: &[Subspace], r: usize) -> Result<Option<SubRepresentation>, Error> {
    if let Some(v) = independence::weakly_independent(q).first_failure() {
        return Err(Error::NotWeaklyIndependent { vertex: v });
    }
    if set.is_empty() || set.len() != partial.len() {
        return Err(Error::Invalid("need one subspace per vertex of a nonempty set".into()));
    }
    if partial.iter().any(|s| s.dim() != r || s.d() != q.d()) {
        return Err(Error::Invalid(format!("partial subspaces must have dimension {r}")));
    }
    let p = partial[0].p();
    let mut v: Vec<Subspace> = (0..q.n())
        .map(|u| set.iter().zip(partial).fold(Subspace::full(q.d(), p), |acc, (&w, s)| acc.intersect(&s.preimage(q.supp(u, w)))))
        .collect();
    if v.iter().any(|s| s.dim() < r) {
        return Ok(None);
    }
    while let Some(&(_, u2)) = q.arrows.iter().find(|&&(a, b)| v[a].dim() == r && v[b].dim() > r) {
        let w = q.in_neighbors(u2).into_iter().fold(Subspace::zero(q.d(), p), |acc, u| acc.sum(&v[u].project(q.supp(u, u2))));
        if w.dim() > r {
            return Err(Error::Internal(format!("image at vertex {u2} has dimension {} > {r}", w.dim())));
        }
        let extra: Vec<Vector> = v[u2].complement_of(&w).into_iter().take(r - w.dim()).collect();
        v[u2] = Subspace::span(q.d(), p, w.basis().iter().cloned().chain(extra));
    }
    let rep = SubRepresentation { p, spaces: v };
    if rep.spaces.iter().any(|s| s.dim() != r)
        || !super::is_subrep(&rep, q)
        || set.iter().zip(partial).any(|(&u, s)| rep.spaces[u] != *s)
    {
        return Err(Error::Internal("extension is not a valid sub-representation".into()));
    }
    Ok(Some(rep))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Configuration;
    use crate::quiver::{ambient, build_quiver, enumerate_subreps};
    use crate::samples;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::collections::BTreeMap;

    fn max_ranks(all: &[SubRepresentation], q: &QuiverData) -> Vec<RankVector> {
        let phis: BTreeSet<RankVector> = all.iter().map(|m| rank_vector(m, q)).collect();
        phis.iter().filter(|a| !phis.iter().any(|b| a.below(b))).cloned().collect()
    }

    #[test]
    fn steps_increase_rank_until_projective() {
        for (g, r, p) in [
            (Configuration::standard_alcove(3), 1, 2),
            (Configuration::standard_alcove(3), 2, 3),
            (Configuration::standard_alcove(4), 2, 2),
            (samples::bowtie(), 2, 2),
            (samples::edge_tree(), 1, 3),
        ] {
            let q = build_quiver(&g).unwrap();
            let all = enumerate_subreps(&q, &vec![r; q.n()], p, 10_000_000).unwrap();
            let tops = max_ranks(&all, &q);
            for m in &all {
                let phi = rank_vector(m, &q);
                let proj = decompose(m, &q).unwrap().is_projective(&q);
                assert_eq!(proj, tops.contains(&phi));
                let mut cur = m.clone();
                let mut steps = 0;
                while let Some(step) = deform_step(&cur, &q).unwrap() {
                    let before = rank_vector(&cur, &q);
                    let after = rank_vector(&step.rep, &q);
                    assert!(before.below(&after));
                    assert_eq!(step.rep.dims(), cur.dims());
                    cur = step.rep;
                    steps += 1;
                    assert!(steps <= q.n() * q.n() * q.d());
                }
            }
        }
    }

    #[test]
    fn chains_reach_every_larger_stratum() {
        for (g, r, p) in
            [(Configuration::standard_alcove(3), 1, 2), (Configuration::standard_alcove(3), 2, 2), (samples::bowtie(), 2, 2)]
        {
            let q = build_quiver(&g).unwrap();
            let all = enumerate_subreps(&q, &vec![r; q.n()], p, 10_000_000).unwrap();
            let mut reps: BTreeMap<RankVector, SubRepresentation> = BTreeMap::new();
            for m in &all {
                reps.entry(rank_vector(m, &q)).or_insert_with(|| m.clone());
            }
            for (a, m) in &reps {
                for b in reps.keys().filter(|b| a.below(b)) {
                    let chain = degeneration_chain(m, &q, b).unwrap();
                    assert_eq!(rank_vector(&chain.last().unwrap().rep, &q), *b);
                }
            }
        }
    }

    #[test]
    fn extension_examples() {
        let q = build_quiver(&Configuration::from_vectors(2, vec![vec![0, 0], vec![1, 0]]).unwrap()).unwrap();
        let m = ambient(&q, 2);
        assert_eq!(extend_partial(&q, &[0, 1], &m.spaces, 2).unwrap().unwrap(), m);
        // kernel of the outgoing map at (0,0) is spanned by e_1
        let line = Subspace::span(2, 2, vec![vec![1, 0]]);
        let ext = extend_partial(&q, &[0], std::slice::from_ref(&line), 1).unwrap().unwrap();
        assert_eq!(ext.spaces[0], line);
        assert_eq!(ext.dims(), vec![1, 1]);
    }

    #[test]
    fn random_extensions() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for g in [Configuration::standard_alcove(4), samples::bowtie(), samples::branched_chain()] {
            let q = build_quiver(&g).unwrap();
            for _ in 0..150 {
                let r = rng.gen_range(1..q.d());
                let p = 2;
                let k = rng.gen_range(1..=q.n().min(3));
                let mut set: Vec<usize> = (0..q.n()).collect();
                for i in 0..k {
                    let j = rng.gen_range(i..q.n());
                    set.swap(i, j);
                }
                set.truncate(k);
                let all = Subspace::all_of_dim(q.d(), p, r);
                let partial: Vec<Subspace> = set.iter().map(|_| all[rng.gen_range(0..all.len())].clone()).collect();
                let res = extend_partial(&q, &set, &partial, r).unwrap();
                if let Some(rep) = res {
                    assert!(crate::quiver::is_subrep(&rep, &q));
                }
            }
        }
    }
}
