use std::collections::BTreeMap;

use serde::Serialize;

use super::{generated, QuiverData, RankVector, SubRepresentation};
use crate::error::Error;
use crate::fp::{Subspace, Vector};
use crate::independence;
use crate::lattice::CoordSet;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SummandKind {
    Projective,
    /// Dies at the `step`-th vertex of the cycle through the in-neighbour `toward`.
    Truncated {
        toward: usize,
        step: usize,
    },
}

/// Isomorphism type of a summand generated by a single vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SummandType {
    pub generator: usize,
    pub support: Vec<usize>,
}

impl SummandType {
    pub fn kind(&self, q: &QuiverData) -> SummandKind {
        if self.support.len() == q.n() {
            return SummandKind::Projective;
        }
        let v = self.generator;
        for z in q.in_neighbors(v) {
            let cyc = q.cycle_through(v, z).expect("arrow lies in a simplex");
            if let Some(m) = (1..cyc.len()).find(|&i| self.support.binary_search(&cyc[i]).is_err()) {
                return SummandKind::Truncated { toward: z, step: m };
            }
        }
        SummandKind::Projective
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Summand {
    #[serde(rename = "type")]
    pub ty: SummandType,
    pub vector: Vector,
}

impl Summand {
    pub fn rep(&self, q: &QuiverData, p: u8) -> SubRepresentation {
        generated(q, p, &[(self.ty.generator, self.vector.clone())])
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Decomposition {
    pub summands: Vec<Summand>,
}

impl Decomposition {
    pub fn multiplicities(&self) -> BTreeMap<SummandType, u32> {
        let mut out = BTreeMap::new();
        for s in &self.summands {
            *out.entry(s.ty.clone()).or_insert(0) += 1;
        }
        out
    }

    pub fn is_projective(&self, q: &QuiverData) -> bool {
        self.summands.iter().all(|s| s.ty.kind(q) == SummandKind::Projective)
    }
}

/// Coordinates killed by `f_{v,v_m}` along the cycle through `z`, for `m = 0..=n`.
fn kernel_chain(q: &QuiverData, cyc: &[usize]) -> Vec<CoordSet> {
    let v = cyc[0];
    let mut out = vec![CoordSet::default()];
    out.extend(cyc[1..].iter().map(|&u| q.supp(v, u).complement(q.d())));
    out
}

fn split(v_space: Subspace, kers: &[Vec<CoordSet>]) -> Vec<Vector> {
    for (zi, chain) in kers.iter().enumerate() {
        for m in 1..chain.len() {
            let km = v_space.intersect_coords(chain[m]);
            let km1 = v_space.intersect_coords(chain[m - 1]);
            if km.dim() > km1.dim() {
                let eps = km.complement_of(&km1).remove(0);
                let mut s = chain[m - 1];
                for (zj, other) in kers.iter().enumerate() {
                    if zj != zi {
                        s = s.union(*other.last().unwrap());
                    }
                }
                let k = v_space.intersect_coords(s);
                let rest = v_space.complement_of(&k.with(eps.clone()));
                let smaller = Subspace::span(v_space.d(), v_space.p(), k.basis().iter().cloned().chain(rest));
                let mut out = vec![eps];
                out.extend(split(smaller, kers));
                return out;
            }
        }
    }
    v_space.basis().to_vec()
}

pub fn decompose(m: &SubRepresentation, q: &QuiverData) -> Result<Decomposition, Error> {
    let cert = independence::weakly_independent(q);
    if let Some(v) = cert.first_failure() {
        return Err(Error::NotWeaklyIndependent { vertex: v });
    }
    let (d, p) = (q.d(), m.p);
    let mut summands = Vec::new();
    for v in 0..q.n() {
        let u_space = &m.spaces[v];
        if u_space.is_zero() {
            continue;
        }
        let mut inner = Subspace::zero(d, p);
        let mut pieces: Vec<Vector> = Vec::new();
        let mut kers = Vec::new();
        for z in q.in_neighbors(v) {
            let cyc = q.cycle_through(v, z).ok_or_else(|| Error::Internal(format!("arrow {z}->{v} outside simplices")))?;
            let chain = kernel_chain(q, &cyc);
            let img = m.spaces[z].project(q.supp(z, v));
            let mut b_prev = Subspace::zero(d, p);
            for k in chain.iter().skip(1) {
                let a = img.intersect_coords(*k);
                let b = u_space.intersect_coords(*k);
                pieces.extend(b.complement_of(&a.sum(&b_prev)));
                b_prev = b;
            }
            inner = inner.sum(&b_prev);
            kers.push(chain);
        }
        let free = u_space.complement_of(&inner);
        let v_space = Subspace::span(d, p, free.into_iter().chain(pieces));
        for eps in split(v_space, &kers) {
            let support = super::support_of_generated(q, v, &eps)?.into_iter().collect();
            summands.push(Summand { ty: SummandType { generator: v, support }, vector: eps });
        }
    }
    for w in 0..q.n() {
        let mut total = 0;
        let mut span = Subspace::zero(d, p);
        for s in &summands {
            let piece = s.rep(q, p).spaces[w].clone();
            total += piece.dim();
            span = span.sum(&piece);
        }
        if total != m.spaces[w].dim() || span != m.spaces[w] {
            return Err(Error::Internal(format!("summands do not reassemble at vertex {w}")));
        }
    }
    summands.sort_by(|a, b| a.ty.cmp(&b.ty).then_with(|| a.vector.cmp(&b.vector)));
    Ok(Decomposition { summands })
}

/// Every summand type occurring over `q`, one per generator vertex and truncation pattern.
pub fn all_summand_types(q: &QuiverData) -> Vec<SummandType> {
    let d = q.d();
    let mut out = Vec::new();
    for v in 0..q.n() {
        let ones = vec![1; d];
        let support = super::support_of_generated(q, v, &ones).unwrap().into_iter().collect();
        out.push(SummandType { generator: v, support });
        for z in q.in_neighbors(v) {
            let Some(cyc) = q.cycle_through(v, z) else { continue };
            let chain = kernel_chain(q, &cyc);
            for m in 1..chain.len() {
                let Some(c) = chain[m].minus(chain[m - 1]).iter().next() else { continue };
                let mut e = vec![0; d];
                e[c] = 1;
                let support = super::support_of_generated(q, v, &e).unwrap().into_iter().collect();
                out.push(SummandType { generator: v, support });
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Number of summands of type `t` in any representation with rank vector `phi`.
pub fn multiplicities_from_rank(q: &QuiverData, phi: &RankVector, t: &SummandType) -> Result<u32, Error> {
    let v = t.generator;
    let f = |a: usize, b: usize| phi.get(a, b) as i64;
    let alpha = match t.kind(q) {
        SummandKind::Projective => f(v, v) - q.in_neighbors(v).iter().map(|&u| f(v, v) - f(v, u)).sum::<i64>(),
        SummandKind::Truncated { toward: z, step: m } => {
            let cyc = q.cycle_through(v, z).unwrap();
            let (prev, cur) = (cyc[m - 1], cyc[m]);
            if cur == z {
                f(v, prev) - f(v, cur) - f(z, prev)
            } else {
                f(v, prev) + f(z, cur) - f(v, cur) - f(z, prev)
            }
        }
    };
    u32::try_from(alpha).map_err(|_| Error::Invalid(format!("rank vector not realizable: multiplicity {alpha}")))
}
