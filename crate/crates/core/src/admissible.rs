//! Admissible faces and collections, Bruhat strata and their rank vectors.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::Serialize;

use crate::affine_weyl::{
    element_for_face, face_stabilizer, omega, standard_face_stabilizer, AffineWeylElement, ParahoricWeylGroup, WeylTables,
    DEFAULT_LEN_CAP,
};
use crate::error::Error;
use crate::fp::{self, Subspace};
use crate::lattice::{Configuration, CoordSet, LatticeClass};
use crate::quiver::{build_quiver, enumerate_subreps, generated, rank_vector, QuiverData, RankVector, SubRepresentation};

fn check_r(r: usize, d: usize) -> Result<(), Error> {
    if r == 0 || r >= d {
        return Err(Error::Invalid(format!("need 0 < r < d, got r={r}, d={d}")));
    }
    Ok(())
}

fn subsets_of_size(d: usize, r: usize) -> Vec<CoordSet> {
    (0..1u64 << d).map(CoordSet).filter(|s| s.len() == r).collect()
}

fn indicator(d: usize, s: CoordSet) -> Vec<i64> {
    (0..d).map(|k| s.contains(k) as i64).collect()
}

/// Arrays `x` with `τ_a ≤ x_a ≤ τ_a + 𝟙`, total increment `r` at every vertex, forming a face of the type of `τ`.
///
/// `tau` lists the vertices of a simplex in chain order.
pub fn admissible_faces(tau: &[Vec<i64>], r: usize) -> Vec<Vec<Vec<i64>>> {
    let d = tau[0].len();
    let choices: Vec<Vec<i64>> = subsets_of_size(d, r).into_iter().map(|s| indicator(d, s)).collect();
    let mut out = Vec::new();
    let mut cur: Vec<Vec<i64>> = Vec::with_capacity(tau.len());
    extend_face(tau, &choices, &mut cur, &mut out);
    out.sort();
    out
}

fn extend_face(tau: &[Vec<i64>], choices: &[Vec<i64>], cur: &mut Vec<Vec<i64>>, out: &mut Vec<Vec<Vec<i64>>>) {
    let a = cur.len();
    if a == tau.len() {
        out.push(cur.clone());
        return;
    }
    for c in choices {
        let x: Vec<i64> = tau[a].iter().zip(c).map(|(t, e)| t + e).collect();
        // chain order: earlier vertices sit between x - 1 and x
        if cur.iter().all(|y| y.iter().zip(&x).all(|(p, q)| p <= q && *q <= p + 1)) {
            cur.push(x);
            extend_face(tau, choices, cur, out);
            cur.pop();
        }
    }
}

/// Admissible alcoves `(g·ω_0, …, g·ω_{d−1})`.
pub fn enumerate_admissible_alcoves(r: usize, d: usize) -> Result<Vec<Vec<Vec<i64>>>, Error> {
    check_r(r, d)?;
    let tau: Vec<Vec<i64>> = (0..d).map(|i| omega(d, i)).collect();
    Ok(admissible_faces(&tau, r))
}

/// Coordinate criterion: `ω_i ≤ g·ω_i ≤ ω_i + 𝟙` and `Σ g·ω_i − Σ ω_i = r` for all `i`.
pub fn coordinate_admissible(g: &AffineWeylElement, r: usize) -> bool {
    let d = g.d();
    (0..d).all(|i| {
        let w = omega(d, i);
        let x = g.apply(&w);
        x.iter().zip(&w).all(|(a, b)| b <= a && *a <= b + 1) && x.iter().sum::<i64>() - w.iter().sum::<i64>() == r as i64
    })
}

/// The translations by distinct permutations of `(1^r, 0^{d−r})`.
pub fn translation_tops(d: usize, r: usize) -> Vec<AffineWeylElement> {
    subsets_of_size(d, r).into_iter().map(|s| AffineWeylElement::translation(indicator(d, s))).collect()
}

/// Bruhat criterion: `g ≼ t_{σμ}` for some permutation `σμ` of `(1^r, 0^{d−r})`.
pub fn bruhat_admissible(tables: &WeylTables, g: &AffineWeylElement, r: usize) -> Result<bool, Error> {
    for t in translation_tops(g.d(), r) {
        if tables.bruhat_leq(g, &t)? {
            return Ok(true);
        }
    }
    Ok(false)
}

#[derive(Clone, Debug, Serialize)]
pub struct EquivalenceReport {
    pub d: usize,
    pub r: usize,
    pub len_cap: u32,
    pub checked: usize,
    pub admissible: usize,
    pub disagreements: Vec<AffineWeylElement>,
}

impl EquivalenceReport {
    pub fn ok(&self) -> bool {
        self.disagreements.is_empty()
    }
}

/// Compares both admissibility criteria on every `w·ι^k` with `𝔩(w) ≤ len_cap`, `0 ≤ k < d`.
pub fn admissibility_equivalence_check(r: usize, d: usize, len_cap: u32) -> Result<EquivalenceReport, Error> {
    check_r(r, d)?;
    let need = len_cap.max((r * (d - r)) as u32);
    let tables = WeylTables::shared(d, need.max(DEFAULT_LEN_CAP));
    let mut rep = EquivalenceReport { d, r, len_cap, checked: 0, admissible: 0, disagreements: Vec::new() };
    for w in tables.ball_elements(len_cap)? {
        for k in 0..d {
            let g = w.mul(&AffineWeylElement::iota_pow(d, k as i64));
            let a = bruhat_admissible(&tables, &g, r)?;
            let b = coordinate_admissible(&g, r);
            rep.checked += 1;
            rep.admissible += a as usize;
            if a != b {
                rep.disagreements.push(g);
            }
        }
    }
    Ok(rep)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct AdmissibleFace {
    pub simplex: usize,
    /// Configuration indices, in chain order.
    pub vertices: Vec<usize>,
    pub vectors: Vec<Vec<i64>>,
    /// Shortest element of `h_j W_j`, where `x = h_j·τ_j`.
    pub coset: AffineWeylElement,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct AdmissibleCollection {
    pub r: usize,
    pub faces: Vec<AdmissibleFace>,
}

struct Frame {
    verts: Vec<usize>,
    tau: Vec<Vec<i64>>,
    types: Vec<usize>,
    g: AffineWeylElement,
    g_inv: AffineWeylElement,
    w_j: ParahoricWeylGroup,
    w_f: ParahoricWeylGroup,
    w_std: ParahoricWeylGroup,
    w_fstd: ParahoricWeylGroup,
    classes: Vec<Vec<Vec<i64>>>,
}

struct Overlap {
    a: usize,
    b: usize,
    pos_a: Vec<usize>,
    pos_b: Vec<usize>,
    group: ParahoricWeylGroup,
}

fn classes_of(vs: &[Vec<i64>]) -> Vec<LatticeClass> {
    vs.iter().map(|v| LatticeClass::new(v.clone())).collect()
}

/// Which double cosets the generalized Bruhat order compares.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CosetFrame {
    /// `W_{ω_I}·(g⁻¹hg·ι^{−r})·W_{ι^rω_I}`, moved to the standard face.
    Standard,
    /// `W_j·(h·ι^{−r})·W_{F_j}` in place.
    InPlace,
}

/// Admissible collections of a convex configuration, with the data needed to compare them.
pub struct Strata {
    pub q: QuiverData,
    pub r: usize,
    pub tables: Arc<WeylTables>,
    frames: Vec<Frame>,
    overlaps: Vec<Overlap>,
    pub collections: Vec<AdmissibleCollection>,
}

impl Strata {
    pub fn new(g: &Configuration, r: usize, len_cap: u32) -> Result<Self, Error> {
        Self::from_quiver(build_quiver(g)?, r, len_cap)
    }

    pub fn from_quiver(q: QuiverData, r: usize, len_cap: u32) -> Result<Self, Error> {
        let d = q.d();
        check_r(r, d)?;
        let tables = WeylTables::shared(d, len_cap);
        let iota_r = AffineWeylElement::iota_pow(d, r as i64);
        let mut frames = Vec::new();
        for s in &q.simplices {
            let tau: Vec<Vec<i64>> = s.iter().map(|&v| q.config.vertices[v].coords().to_vec()).collect();
            let sums: Vec<i64> = tau.iter().map(|t| t.iter().sum()).collect();
            let types: Vec<usize> = sums.iter().map(|x| (x - sums[0]) as usize).collect();
            let g = element_for_face(&types, &tau)?;
            let w_j = face_stabilizer(&classes_of(&tau))?;
            let shifted: Vec<Vec<i64>> = tau.iter().map(|t| iota_r.apply(t)).collect();
            let w_f = face_stabilizer(&classes_of(&shifted))?;
            let w_std = standard_face_stabilizer(d, &types)?;
            let std_shift: Vec<Vec<i64>> = types.iter().map(|&i| iota_r.apply(&omega(d, i))).collect();
            let w_fstd = face_stabilizer(&classes_of(&std_shift))?;
            let mut classes: Vec<Vec<Vec<i64>>> =
                admissible_faces(&tau, r).iter().map(|x| w_j.orbit_min(x)).collect::<BTreeSet<_>>().into_iter().collect();
            classes.sort();
            let g_inv = g.inverse();
            frames.push(Frame { verts: s.clone(), tau, types, g, g_inv, w_j, w_f, w_std, w_fstd, classes });
        }
        let mut overlaps = Vec::new();
        for a in 0..frames.len() {
            for b in a + 1..frames.len() {
                let shared: Vec<usize> = frames[a].verts.iter().copied().filter(|v| frames[b].verts.contains(v)).collect();
                if shared.is_empty() {
                    continue;
                }
                let mut shared = shared;
                shared.sort();
                let pos =
                    |f: &Frame| -> Vec<usize> { shared.iter().map(|v| f.verts.iter().position(|x| x == v).unwrap()).collect() };
                let classes: Vec<LatticeClass> = shared.iter().map(|&v| q.config.vertices[v].clone()).collect();
                overlaps.push(Overlap {
                    a,
                    b,
                    pos_a: pos(&frames[a]),
                    pos_b: pos(&frames[b]),
                    group: face_stabilizer(&classes)?,
                });
            }
        }
        let mut st = Strata { q, r, tables, frames, overlaps, collections: Vec::new() };
        st.collections = st.enumerate()?;
        Ok(st)
    }

    fn enumerate(&self) -> Result<Vec<AdmissibleCollection>, Error> {
        let mut picks = Vec::new();
        let mut out = Vec::new();
        self.glue(&mut picks, &mut out);
        let mut cols = Vec::with_capacity(out.len());
        for pick in out {
            let faces = pick
                .iter()
                .enumerate()
                .map(|(j, &c)| self.face(j, self.frames[j].classes[c].clone()))
                .collect::<Result<Vec<_>, _>>()?;
            cols.push(AdmissibleCollection { r: self.r, faces });
        }
        cols.sort();
        Ok(cols)
    }

    fn glue(&self, picks: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let j = picks.len();
        if j == self.frames.len() {
            out.push(picks.clone());
            return;
        }
        for c in 0..self.frames[j].classes.len() {
            picks.push(c);
            let ok = self.overlaps.iter().filter(|o| o.b == j).all(|o| {
                let xa = &self.frames[o.a].classes[picks[o.a]];
                let xb = &self.frames[j].classes[c];
                let ra: Vec<Vec<i64>> = o.pos_a.iter().map(|&i| xa[i].clone()).collect();
                let rb: Vec<Vec<i64>> = o.pos_b.iter().map(|&i| xb[i].clone()).collect();
                o.group.orbit_min(&ra) == o.group.orbit_min(&rb)
            });
            if ok {
                self.glue(picks, out);
            }
            picks.pop();
        }
    }

    fn face(&self, j: usize, vectors: Vec<Vec<i64>>) -> Result<AdmissibleFace, Error> {
        let f = &self.frames[j];
        let h = f.g.mul(&self.standard_h(j, &vectors)?).mul(&f.g_inv);
        let coset = self.tables.right_coset_min(&h, &f.w_j)?;
        Ok(AdmissibleFace { simplex: j, vertices: f.verts.clone(), vectors, coset })
    }

    /// `h'` with `h'·ω_I = g⁻¹·x`.
    fn standard_h(&self, j: usize, x: &[Vec<i64>]) -> Result<AffineWeylElement, Error> {
        let f = &self.frames[j];
        let y: Vec<Vec<i64>> = x.iter().map(|v| f.g_inv.apply(v)).collect();
        element_for_face(&f.types, &y)
    }

    pub fn d(&self) -> usize {
        self.q.d()
    }

    pub fn simplices(&self) -> Vec<Vec<usize>> {
        self.frames.iter().map(|f| f.verts.clone()).collect()
    }

    /// `g_j` with `g_j·ω_{I_j} = τ_j`, for each maximal simplex.
    pub fn frame_elements(&self) -> Vec<AffineWeylElement> {
        self.frames.iter().map(|f| f.g.clone()).collect()
    }

    pub fn simplex_types(&self) -> Vec<Vec<usize>> {
        self.frames.iter().map(|f| f.types.clone()).collect()
    }

    /// Ranks inside the simplex of `x`, indexed by chain positions.
    pub fn face_rank(&self, x: &AdmissibleFace) -> Vec<Vec<u32>> {
        let f = &self.frames[x.simplex];
        let sets: Vec<CoordSet> =
            x.vectors.iter().zip(&f.tau).map(|(v, t)| CoordSet::from_positions((0..v.len()).filter(|&k| v[k] != t[k]))).collect();
        f.verts
            .iter()
            .enumerate()
            .map(|(a, &u)| f.verts.iter().map(|&w| sets[a].intersect(self.q.supp(u, w)).len() as u32).collect())
            .collect()
    }

    /// The rank vector of the stratum, propagated to all pairs along convex hulls.
    pub fn rank_vector(&self, x: &AdmissibleCollection) -> Result<RankVector, Error> {
        let n = self.q.n();
        let mut local: Vec<Vec<Option<u32>>> = vec![vec![None; n]; n];
        for face in &x.faces {
            let fr = self.face_rank(face);
            for (a, &u) in face.vertices.iter().enumerate() {
                for (b, &w) in face.vertices.iter().enumerate() {
                    match local[u][w] {
                        Some(old) if old != fr[a][b] => {
                            return Err(Error::Internal(format!("ranks at ({u},{w}) differ between simplices")));
                        }
                        _ => local[u][w] = Some(fr[a][b]),
                    }
                }
            }
        }
        let mut out = RankVector::zeros(n);
        for u in 0..n {
            for v in 0..n {
                let w = self.q.hull_step(u, v);
                let val = local[u][w].ok_or_else(|| Error::Internal(format!("no simplex holds {u} and {w}")))?;
                out.set(u, v, val);
            }
        }
        Ok(out)
    }

    fn local_ranks(&self, x: &AdmissibleCollection) -> Vec<Vec<Vec<u32>>> {
        x.faces.iter().map(|f| self.face_rank(f)).collect()
    }

    /// The collection whose per-simplex ranks match `phi`, if any.
    pub fn locate(&self, phi: &RankVector) -> Option<usize> {
        let key: Vec<Vec<Vec<u32>>> = self
            .frames
            .iter()
            .map(|f| f.verts.iter().map(|&u| f.verts.iter().map(|&w| phi.get(u, w)).collect()).collect())
            .collect();
        self.collections.iter().position(|x| self.local_ranks(x) == key)
    }

    /// Collections met by some sub-representation in `reps`; errors if a representation has no collection
    /// or its rank vector differs from the one attached to its collection.
    pub fn realized_by(&self, reps: &[SubRepresentation]) -> Result<BTreeSet<usize>, Error> {
        let mut out = BTreeSet::new();
        let phis: BTreeSet<RankVector> = reps.iter().map(|m| rank_vector(m, &self.q)).collect();
        for phi in phis {
            let i = self.locate(&phi).ok_or_else(|| Error::Internal(format!("no collection for {:?}", phi.entries())))?;
            if self.rank_vector(&self.collections[i])? != phi {
                return Err(Error::Internal(format!("collection {i} predicts another rank vector")));
            }
            out.insert(i);
        }
        Ok(out)
    }

    /// Collections containing a torus-fixed point `V_u = span{e_k : k ∈ S_u}`.
    pub fn fixed_point_collections(&self) -> Result<BTreeSet<usize>, Error> {
        let n = self.q.n();
        let subs = subsets_of_size(self.d(), self.r);
        let mut index: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for (i, x) in self.collections.iter().enumerate() {
            let key = x
                .faces
                .iter()
                .enumerate()
                .map(|(j, f)| self.frames[j].classes.binary_search(&f.vectors).expect("class representative"))
                .collect();
            index.insert(key, i);
        }
        let mut out = BTreeSet::new();
        let mut pick: Vec<CoordSet> = Vec::with_capacity(n);
        self.fixed_points(&subs, &mut pick, &mut |pick| {
            let key: Option<Vec<usize>> = self
                .frames
                .iter()
                .map(|f| {
                    let x: Vec<Vec<i64>> = f
                        .verts
                        .iter()
                        .zip(&f.tau)
                        .map(|(&u, t)| t.iter().zip(indicator(t.len(), pick[u])).map(|(a, b)| a + b).collect())
                        .collect();
                    f.classes.binary_search(&f.w_j.orbit_min(&x)).ok()
                })
                .collect();
            match key.and_then(|k| index.get(&k).copied()) {
                Some(i) => {
                    out.insert(i);
                    Ok(())
                }
                None => Err(Error::Internal("torus-fixed point outside every collection".into())),
            }
        })?;
        Ok(out)
    }

    fn fixed_points(
        &self,
        subs: &[CoordSet],
        pick: &mut Vec<CoordSet>,
        f: &mut impl FnMut(&[CoordSet]) -> Result<(), Error>,
    ) -> Result<(), Error> {
        let v = pick.len();
        if v == self.q.n() {
            return f(pick);
        }
        for &s in subs {
            let ok = (0..v).all(|u| {
                (!self.q.has_arrow(u, v) || pick[u].intersect(self.q.supp(u, v)).minus(s).is_empty())
                    && (!self.q.has_arrow(v, u) || s.intersect(self.q.supp(v, u)).minus(pick[u]).is_empty())
            });
            if ok {
                pick.push(s);
                self.fixed_points(subs, pick, f)?;
                pick.pop();
            }
        }
        Ok(())
    }

    fn frame_leq(&self, j: usize, x: &AdmissibleFace, y: &AdmissibleFace, mode: CosetFrame) -> Result<bool, Error> {
        let d = self.d();
        let f = &self.frames[j];
        let back = AffineWeylElement::iota_pow(d, -(self.r as i64));
        match mode {
            CosetFrame::Standard => {
                let a = self.standard_h(j, &x.vectors)?.mul(&back);
                let b = self.standard_h(j, &y.vectors)?.mul(&back);
                self.tables.double_coset_leq(&a, &b, &f.w_std, &f.w_fstd)
            }
            CosetFrame::InPlace => {
                let a = x.coset.mul(&back);
                let b = y.coset.mul(&back);
                self.tables.double_coset_leq(&a, &b, &f.w_j, &f.w_f)
            }
        }
    }

    pub fn bruhat_leq_with(&self, x: &AdmissibleCollection, y: &AdmissibleCollection, mode: CosetFrame) -> Result<bool, Error> {
        for j in 0..self.frames.len() {
            if !self.frame_leq(j, &x.faces[j], &y.faces[j], mode)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Generalized Bruhat order: componentwise comparison of the per-simplex double cosets.
    pub fn bruhat_leq(&self, x: &AdmissibleCollection, y: &AdmissibleCollection) -> Result<bool, Error> {
        self.bruhat_leq_with(x, y, CosetFrame::Standard)
    }

    /// `𝔩(^{W_{ω_I}}(h'ι^{−r})^{W_F})` when the configuration is a single simplex.
    pub fn dimension(&self, x: &AdmissibleCollection) -> Result<Option<u32>, Error> {
        if self.frames.len() != 1 || self.frames[0].verts.len() != self.q.n() {
            return Ok(None);
        }
        let f = &self.frames[0];
        let back = AffineWeylElement::iota_pow(self.d(), -(self.r as i64));
        let a = self.standard_h(0, &x.faces[0].vectors)?.mul(&back);
        let m = self.tables.minmax_rep(&a, &f.w_std, &f.w_fstd)?;
        Ok(Some(self.tables.length(&m)?))
    }

    /// `leq[a][b]` for all pairs of collections.
    pub fn order_matrix(&self) -> Result<Vec<Vec<bool>>, Error> {
        let c = &self.collections;
        let mut m = vec![vec![false; c.len()]; c.len()];
        for a in 0..c.len() {
            for b in 0..c.len() {
                m[a][b] = a == b || self.bruhat_leq(&c[a], &c[b])?;
            }
        }
        Ok(m)
    }

    /// Indices of the maximal collections.
    pub fn top_indices(&self) -> Result<Vec<usize>, Error> {
        let m = self.order_matrix()?;
        let n = m.len();
        Ok((0..n).filter(|&a| (0..n).all(|b| b == a || !m[a][b] || m[b][a])).collect())
    }

    pub fn report(&self) -> Result<StrataReport, Error> {
        let m = self.order_matrix()?;
        let n = m.len();
        let ranks = self.collections.iter().map(|x| self.rank_vector(x)).collect::<Result<Vec<_>, _>>()?;
        let mut strata = Vec::with_capacity(n);
        let mut discrepancies = Vec::new();
        for a in 0..n {
            let covers: Vec<usize> =
                (0..n).filter(|&b| b != a && m[b][a] && !(0..n).any(|c| c != a && c != b && m[b][c] && m[c][a])).collect();
            for b in 0..n {
                if m[a][b] != ranks[a].leq(&ranks[b]) {
                    discrepancies.push((a, b));
                }
            }
            strata.push(StratumReport {
                index: a,
                collection: self.collections[a].clone(),
                rank: ranks[a].clone(),
                dimension: self.dimension(&self.collections[a])?,
                covers,
                top: (0..n).all(|b| b == a || !m[a][b]),
            });
        }
        Ok(StrataReport { r: self.r, strata, order_discrepancies: discrepancies })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StratumReport {
    pub index: usize,
    pub collection: AdmissibleCollection,
    pub rank: RankVector,
    pub dimension: Option<u32>,
    /// Strata covered by this one in the generalized Bruhat order.
    pub covers: Vec<usize>,
    pub top: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct StrataReport {
    pub r: usize,
    pub strata: Vec<StratumReport>,
    /// Pairs where the Bruhat order and the rank-vector order disagree.
    pub order_discrepancies: Vec<(usize, usize)>,
}

impl StrataReport {
    pub fn hasse_dot(&self) -> String {
        let mut out = String::from("digraph strata {\n  rankdir=BT;\n");
        for s in &self.strata {
            let dim = s.dimension.map(|x| format!(" dim {x}")).unwrap_or_default();
            out.push_str(&format!("  s{} [label=\"{}{}\"];\n", s.index, s.index, dim));
        }
        for s in &self.strata {
            for c in &s.covers {
                out.push_str(&format!("  s{} -> s{};\n", c, s.index));
            }
        }
        out.push_str("}\n");
        out
    }
}

pub fn enumerate_admissible_collections(g: &Configuration, r: usize) -> Result<Vec<AdmissibleCollection>, Error> {
    Ok(Strata::new(g, r, DEFAULT_LEN_CAP)?.collections)
}

pub fn top_strata(g: &Configuration, r: usize) -> Result<Vec<AdmissibleCollection>, Error> {
    let st = Strata::new(g, r, DEFAULT_LEN_CAP)?;
    Ok(st.top_indices()?.into_iter().map(|i| st.collections[i].clone()).collect())
}

/// `D(i, j)` on a simplex with chain `c`, indices taken cyclically.
fn cyc_rank(c: &[usize], dvec: &RankVector, i: i64, j: i64) -> i64 {
    let l = c.len() as i64;
    if j < i || j - i >= l {
        return 0;
    }
    dvec.get(c[i.rem_euclid(l) as usize], c[j.rem_euclid(l) as usize]) as i64
}

/// Multiplicities `a_{i,j}` of the interval summands of a candidate rank vector on a simplex.
pub fn interval_multiplicities(q: &QuiverData, dvec: &RankVector) -> Result<BTreeMap<(usize, usize), i64>, Error> {
    let c = single_simplex(q)?;
    let l = c.len() as i64;
    let mut out = BTreeMap::new();
    for i in 0..l {
        for j in i..i + l {
            let a = cyc_rank(&c, dvec, i, j) + cyc_rank(&c, dvec, i - 1, j + 1)
                - cyc_rank(&c, dvec, i, j + 1)
                - cyc_rank(&c, dvec, i - 1, j);
            out.insert((i as usize, (j - i) as usize), a);
        }
    }
    Ok(out)
}

fn single_simplex(q: &QuiverData) -> Result<Vec<usize>, Error> {
    match q.simplices.as_slice() {
        [s] if s.len() == q.n() => Ok(s.clone()),
        _ => Err(Error::NotSimplex("configuration is not a single simplex".into())),
    }
}

/// Tests whether `dvec` is the rank vector of a sub-representation of dimension `x` on a simplex,
/// and builds one from interval summands when it is.
pub fn simplex_rank_realizable(
    q: &QuiverData,
    dvec: &RankVector,
    x: &[usize],
    p: u8,
) -> Result<Option<SubRepresentation>, Error> {
    let c = single_simplex(q)?;
    let l = c.len();
    if dvec.n() != q.n() || x.len() != q.n() {
        return Err(Error::DimensionMismatch { expected: q.n(), got: dvec.n().min(x.len()) });
    }
    let mult = interval_multiplicities(q, dvec)?;
    if mult.values().any(|&a| a < 0) {
        return Ok(None);
    }
    for i in 0..l {
        let (u, w) = (c[i], c[(i + 1) % l]);
        let here = dvec.get(u, u) as i64;
        if here != x[u] as i64 {
            return Ok(None);
        }
        let ker = q.d() - q.supp(u, w).len();
        if l > 1 && here - dvec.get(u, w) as i64 > ker as i64 {
            return Ok(None);
        }
    }
    // interval [k, k+len] dies after position k+len; its generator uses a coordinate killed by the next step
    let mut used: Vec<usize> = vec![0; l];
    let mut seeds = Vec::new();
    for (&(k, len), &a) in &mult {
        let last = (k + len) % l;
        let next = (last + 1) % l;
        let pool: Vec<usize> = if l == 1 { (0..q.d()).collect() } else { q.supp(c[next], c[last]).iter().collect() };
        for _ in 0..a {
            let Some(&coord) = pool.get(used[last]) else {
                return Err(Error::Internal(format!("not enough coordinates for intervals ending at {last}")));
            };
            used[last] += 1;
            let mut e = vec![0u8; q.d()];
            e[coord] = 1;
            seeds.push((c[k], e));
        }
    }
    let m = generated(q, p, &seeds);
    if rank_vector(&m, q) != *dvec {
        return Err(Error::Internal("witness has the wrong rank vector".into()));
    }
    Ok(Some(m))
}

/// All nonempty sets of pairwise adjacent vertices, each sorted.
pub fn all_faces(q: &QuiverData) -> Vec<Vec<usize>> {
    let adj = q.config.adjacency();
    let mut out = Vec::new();
    let mut cur = Vec::new();
    cliques(&adj, 0, &mut cur, &mut out);
    out.sort();
    out
}

fn cliques(adj: &[Vec<bool>], start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    for v in start..adj.len() {
        if cur.iter().all(|&u| adj[u][v]) {
            cur.push(v);
            out.push(cur.clone());
            cliques(adj, v + 1, cur, out);
            cur.pop();
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct R1Face {
    pub face: Vec<usize>,
    /// `J_u`: vertices reached nontrivially from `u`, for each `u` in the face.
    pub parts: BTreeMap<usize, Vec<usize>>,
}

fn line_generators(m: &SubRepresentation) -> Result<Vec<Vec<u8>>, Error> {
    m.spaces
        .iter()
        .map(|s| match s.basis() {
            [v] => Ok(v.clone()),
            _ => Err(Error::Invalid("expected dimension one at every vertex".into())),
        })
        .collect()
}

/// The maximal vertices of a dimension-𝟏 representation and the partition they induce.
pub fn r1_face_of(q: &QuiverData, m: &SubRepresentation) -> Result<R1Face, Error> {
    let eps = line_generators(m)?;
    let n = q.n();
    let face: Vec<usize> =
        (0..n).filter(|&u| (0..n).all(|v| v == u || fp::is_zero(&fp::project(&eps[v], q.supp(v, u))))).collect();
    let parts =
        face.iter().map(|&u| (u, (0..n).filter(|&v| !fp::is_zero(&fp::project(&eps[u], q.supp(u, v)))).collect())).collect();
    Ok(R1Face { face, parts })
}

/// A dimension-𝟏 representation whose maximal vertices are exactly `face`.
pub fn r1_rep_of_face(q: &QuiverData, face: &[usize], p: u8) -> Result<SubRepresentation, Error> {
    let mut f: Vec<usize> = face.to_vec();
    f.sort_by_key(|&v| (q.config.vertices[v].sum(), v));
    f.dedup();
    if f.is_empty() || f.iter().any(|&v| v >= q.n()) {
        return Err(Error::Invalid("face must be a nonempty set of vertices".into()));
    }
    let adj = q.config.adjacency();
    if f.iter().any(|&a| f.iter().any(|&b| a != b && !adj[a][b])) {
        return Err(Error::NotSimplex("vertices are not pairwise adjacent".into()));
    }
    let d = q.d();
    let seeds: Vec<(usize, Vec<u8>)> = (0..f.len())
        .map(|i| {
            let u = f[i];
            let succ = f[(i + 1) % f.len()];
            let keep = if succ == u { CoordSet::full(d) } else { q.supp(u, succ).complement(d) };
            (u, (0..d).map(|k| keep.contains(k) as u8).collect())
        })
        .collect();
    let m = generated(q, p, &seeds);
    if m.dims().iter().any(|&x| x != 1) {
        return Err(Error::Internal("generated representation is not of dimension one".into()));
    }
    let mut want = f.clone();
    want.sort();
    if r1_face_of(q, &m)?.face != want {
        return Err(Error::Internal("maximal vertices differ from the requested face".into()));
    }
    Ok(m)
}

#[derive(Clone, Debug, Serialize)]
pub struct R1OrderReport {
    pub representations: usize,
    pub strata: usize,
    pub faces: usize,
    pub issues: Vec<String>,
}

impl R1OrderReport {
    pub fn ok(&self) -> bool {
        self.issues.is_empty()
    }
}

/// Checks that dimension-𝟏 strata match faces, with the rank order reversing face containment.
pub fn r1_order_check(q: &QuiverData, p: u8, budget: u64) -> Result<R1OrderReport, Error> {
    let reps = enumerate_subreps(q, &vec![1; q.n()], p, budget)?;
    let mut by_rank: BTreeMap<RankVector, BTreeSet<Vec<usize>>> = BTreeMap::new();
    let mut issues = Vec::new();
    for m in &reps {
        let f = r1_face_of(q, m)?;
        let covered: usize = f.parts.values().map(|s| s.len()).sum();
        let union: BTreeSet<usize> = f.parts.values().flatten().copied().collect();
        if covered != q.n() || union.len() != q.n() {
            issues.push(format!("parts of {:?} do not partition the vertices", f.face));
        }
        by_rank.entry(rank_vector(m, q)).or_default().insert(f.face);
    }
    let mut face_of: Vec<(RankVector, Vec<usize>)> = Vec::new();
    for (phi, faces) in &by_rank {
        if faces.len() != 1 {
            issues.push(format!("one stratum has faces {faces:?}"));
        }
        face_of.push((phi.clone(), faces.iter().next().unwrap().clone()));
    }
    let all = all_faces(q);
    let realized: BTreeSet<&Vec<usize>> = face_of.iter().map(|(_, f)| f).collect();
    if realized.len() != face_of.len() {
        issues.push("two strata share a face".into());
    }
    for f in &all {
        if !realized.contains(f) {
            issues.push(format!("face {f:?} has no stratum"));
        }
    }
    for (pa, fa) in &face_of {
        for (pb, fb) in &face_of {
            let contained = fb.iter().all(|v| fa.contains(v));
            if pa.leq(pb) != contained {
                issues.push(format!("order mismatch between faces {fa:?} and {fb:?}"));
            }
        }
    }
    Ok(R1OrderReport { representations: reps.len(), strata: face_of.len(), faces: all.len(), issues })
}

/// The torus-fixed sub-representation `V_u = span{e_k : x_u(k) > τ_u(k)}` inside one simplex.
pub fn fixed_point_of_face(q: &QuiverData, x: &AdmissibleFace, p: u8) -> SubRepresentation {
    let mut m = SubRepresentation::zero(q, p);
    for (v, &u) in x.vectors.iter().zip(&x.vertices) {
        let tau = q.config.vertices[u].coords();
        let s = CoordSet::from_positions((0..v.len()).filter(|&k| v[k] != tau[k]));
        m.spaces[u] = Subspace::coordinate(q.d(), p, s);
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::is_subrep;
    use crate::samples;

    fn binom(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    fn omega_faces(d: usize) -> Vec<Configuration> {
        let mut out = Vec::new();
        for mask in 1u32..(1 << d) {
            let types: Vec<usize> = (0..d).filter(|i| mask & (1 << i) != 0).collect();
            out.push(Configuration::standard_face(d, &types));
        }
        out
    }

    #[test]
    fn rank_two_alcoves() {
        let got = enumerate_admissible_alcoves(1, 2).unwrap();
        let want = vec![vec![vec![0, 1], vec![1, 1]], vec![vec![1, 0], vec![1, 1]], vec![vec![1, 0], vec![2, 0]]];
        assert_eq!(got, want);
    }

    #[test]
    fn translation_alcoves_are_admissible() {
        for d in 2..=4 {
            for r in 1..d {
                let all = enumerate_admissible_alcoves(r, d).unwrap();
                for t in translation_tops(d, r) {
                    let x: Vec<Vec<i64>> = (0..d).map(|i| t.apply(&omega(d, i))).collect();
                    assert!(all.contains(&x));
                    assert!(coordinate_admissible(&t, r));
                }
                assert!(!coordinate_admissible(&AffineWeylElement::identity(d), r));
            }
        }
    }

    #[test]
    fn criteria_agree() {
        for (d, r) in [(2, 1), (3, 1), (3, 2)] {
            let rep = admissibility_equivalence_check(r, d, 6).unwrap();
            assert!(rep.ok(), "{:?}", rep.disagreements);
            let count = enumerate_admissible_alcoves(r, d).unwrap().len();
            assert_eq!(rep.admissible, count);
        }
    }

    #[test]
    fn admissible_faces_are_fixed_points() {
        for g in [samples::bowtie(), Configuration::standard_alcove(4), samples::edge_tree()] {
            let q = build_quiver(&g).unwrap();
            for r in 1..q.d() {
                for s in &q.simplices {
                    let tau: Vec<Vec<i64>> = s.iter().map(|&v| q.config.vertices[v].coords().to_vec()).collect();
                    let faces = admissible_faces(&tau, r);
                    // brute force over all coordinate choices
                    let subs = subsets_of_size(q.d(), r);
                    let mut count = 0;
                    let mut idx = vec![0usize; s.len()];
                    loop {
                        let mut m = SubRepresentation::zero(&q, 2);
                        for (a, &v) in s.iter().enumerate() {
                            m.spaces[v] = Subspace::coordinate(q.d(), 2, subs[idx[a]]);
                        }
                        let sub = crate::quiver::build_quiver(&q.config.sub(s)).unwrap();
                        let local = SubRepresentation { p: 2, spaces: s.iter().map(|&v| m.spaces[v].clone()).collect() };
                        count += is_subrep(&local, &sub) as usize;
                        let mut k = 0;
                        while k < idx.len() && idx[k] + 1 == subs.len() {
                            idx[k] = 0;
                            k += 1;
                        }
                        if k == idx.len() {
                            break;
                        }
                        idx[k] += 1;
                    }
                    assert_eq!(count, faces.len());
                }
            }
        }
    }

    #[test]
    fn omega_top_strata() {
        for d in 2..=4 {
            for r in 1..d {
                let st = Strata::new(&Configuration::standard_alcove(d), r, DEFAULT_LEN_CAP).unwrap();
                let tops = st.top_indices().unwrap();
                assert_eq!(tops.len(), binom(d, r), "d={d} r={r}");
                for &t in &tops {
                    assert_eq!(st.dimension(&st.collections[t]).unwrap(), Some((r * (d - r)) as u32));
                }
                let min = st.collections.iter().map(|x| st.dimension(x).unwrap().unwrap()).min().unwrap();
                assert_eq!(min, 0);
            }
        }
    }

    #[test]
    fn small_case_counts() {
        let st = Strata::new(&Configuration::standard_alcove(2), 1, DEFAULT_LEN_CAP).unwrap();
        assert_eq!(st.collections.len(), 3);
        assert_eq!(st.top_indices().unwrap().len(), 2);
        let single = Configuration::from_vectors(3, vec![vec![0, 0, 0]]).unwrap();
        assert_eq!(enumerate_admissible_collections(&single, 1).unwrap().len(), 1);
        assert_eq!(top_strata(&single, 2).unwrap().len(), 1);
    }

    fn check_orders(g: &Configuration, r: usize) -> (usize, usize) {
        let st = Strata::new(g, r, DEFAULT_LEN_CAP).unwrap();
        let rep = st.report().unwrap();
        assert!(rep.order_discrepancies.is_empty(), "{:?} r={r}: {:?}", g.vertices, rep.order_discrepancies);
        let keys: BTreeSet<_> = st.collections.iter().map(|x| st.local_ranks(x)).collect();
        assert_eq!(keys.len(), st.collections.len());
        let q = build_quiver(g).unwrap();
        let mut realized = 0;
        for p in [2, 3] {
            let reps = enumerate_subreps(&q, &vec![r; q.n()], p, 5_000_000).unwrap();
            let hit = st.realized_by(&reps).unwrap();
            let phis: BTreeSet<RankVector> = reps.iter().map(|m| rank_vector(m, &q)).collect();
            assert_eq!(hit.len(), phis.len());
            let fixed = st.fixed_point_collections().unwrap();
            assert!(fixed.is_subset(&hit));
            realized = hit.len();
        }
        for a in &rep.strata {
            for b in &rep.strata {
                if let (Some(x), Some(y)) = (a.dimension, b.dimension) {
                    if a.rank.leq(&b.rank) {
                        assert!(x <= y);
                    }
                }
            }
        }
        (realized, st.collections.len())
    }

    #[test]
    fn order_and_rank_agree_on_faces_of_omega() {
        for d in 2..=4 {
            for g in omega_faces(d) {
                for r in 1..d {
                    let (hit, all) = check_orders(&g, r);
                    assert_eq!(hit, all);
                }
            }
        }
    }

    #[test]
    fn order_and_rank_agree_on_glued_simplices() {
        let two_triangles =
            Configuration::from_vectors(3, vec![vec![0, 0, 0], vec![1, 0, 0], vec![1, 1, 0], vec![1, 0, 1]]).unwrap();
        for g in [two_triangles, samples::bowtie(), samples::edge_tree(), samples::square()] {
            for r in 1..g.d {
                let (hit, all) = check_orders(&g, r);
                assert!(hit < all);
            }
        }
    }

    #[test]
    fn literal_order_on_standard_faces() {
        for d in 2..=4 {
            for r in 1..d {
                let st = Strata::new(&Configuration::standard_alcove(d), r, DEFAULT_LEN_CAP).unwrap();
                for x in &st.collections {
                    for y in &st.collections {
                        assert_eq!(st.bruhat_leq_with(x, y, CosetFrame::InPlace).unwrap(), st.bruhat_leq(x, y).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn literal_order_off_standard_faces() {
        for g in [crate::samples::bowtie(), crate::samples::square()] {
            let st = Strata::new(&g, 1, DEFAULT_LEN_CAP).unwrap();
            let ranks: Vec<_> = st.collections.iter().map(|x| st.rank_vector(x).unwrap()).collect();
            let mut differ = 0;
            for (a, x) in st.collections.iter().enumerate() {
                for (b, y) in st.collections.iter().enumerate() {
                    assert_eq!(st.bruhat_leq(x, y).unwrap(), ranks[a].leq(&ranks[b]));
                    differ += (st.bruhat_leq_with(x, y, CosetFrame::InPlace).unwrap() != ranks[a].leq(&ranks[b])) as usize;
                }
            }
            assert!(differ > 0);
        }
    }

    #[test]
    fn equivalent_faces_share_ranks() {
        let q = build_quiver(&Configuration::standard_face(4, &[0, 2])).unwrap();
        let st = Strata::from_quiver(q, 2, DEFAULT_LEN_CAP).unwrap();
        let f = &st.frames[0];
        for x in admissible_faces(&f.tau, 2) {
            let a = st.face(0, x.clone()).unwrap();
            let b = st.face(0, f.w_j.orbit_min(&x)).unwrap();
            assert_eq!(st.face_rank(&a), st.face_rank(&b));
        }
    }

    #[test]
    fn fixed_points_have_stratum_ranks() {
        let q = build_quiver(&Configuration::standard_alcove(3)).unwrap();
        let st = Strata::from_quiver(q.clone(), 1, DEFAULT_LEN_CAP).unwrap();
        for x in &st.collections {
            let m = fixed_point_of_face(&q, &x.faces[0], 2);
            assert!(is_subrep(&m, &q));
            assert_eq!(rank_vector(&m, &q), st.rank_vector(x).unwrap());
        }
    }

    fn simplex_configs() -> Vec<Configuration> {
        let mut out = Vec::new();
        for d in 2..=4 {
            for mask in 1u32..(1 << d) {
                let types: Vec<usize> = (0..d).filter(|i| mask & (1 << i) != 0).collect();
                if types.len() <= 3 {
                    out.push(Configuration::standard_face(d, &types));
                }
            }
        }
        out
    }

    #[test]
    fn two_vertex_examples() {
        let q = build_quiver(&Configuration::standard_alcove(2)).unwrap();
        let phi = |a: u32, b: u32| {
            RankVector::from_fn(2, |u, v| {
                if u == v {
                    1
                } else if u == 0 {
                    a
                } else {
                    b
                }
            })
        };
        assert!(simplex_rank_realizable(&q, &phi(1, 1), &[1, 1], 2).unwrap().is_none());
        let w = simplex_rank_realizable(&q, &phi(1, 0), &[1, 1], 2).unwrap().unwrap();
        assert_eq!(rank_vector(&w, &q), phi(1, 0));
        let zero_off = RankVector::from_fn(2, |u, v| (u == v) as u32);
        assert!(simplex_rank_realizable(&q, &zero_off, &[1, 1], 2).unwrap().is_some());
    }

    #[test]
    fn realizability_matches_enumeration() {
        for g in simplex_configs() {
            let q = build_quiver(&g).unwrap();
            let n = q.n();
            let d = q.d();
            let top = d.min(2);
            let mut dims = vec![0usize; n];
            loop {
                let image: BTreeSet<RankVector> =
                    enumerate_subreps(&q, &dims, 2, 5_000_000).unwrap().iter().map(|m| rank_vector(m, &q)).collect();
                let pairs: Vec<(usize, usize)> =
                    (0..n).flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v))).collect();
                let mut vals = vec![0u32; pairs.len()];
                let mut accepted = BTreeSet::new();
                loop {
                    let mut phi = RankVector::from_fn(n, |u, v| if u == v { dims[u] as u32 } else { 0 });
                    for (k, &(u, v)) in pairs.iter().enumerate() {
                        phi.set(u, v, vals[k]);
                    }
                    if let Some(w) = simplex_rank_realizable(&q, &phi, &dims, 2).unwrap() {
                        assert_eq!(w.dims(), dims);
                        accepted.insert(phi);
                    }
                    let mut k = 0;
                    while k < vals.len() && vals[k] as usize >= dims[pairs[k].0] {
                        vals[k] = 0;
                        k += 1;
                    }
                    if k == vals.len() {
                        break;
                    }
                    vals[k] += 1;
                }
                assert_eq!(accepted, image, "{:?} dims {:?}", g.vertices, dims);
                let mut k = 0;
                while k < n && dims[k] == top {
                    dims[k] = 0;
                    k += 1;
                }
                if k == n {
                    break;
                }
                dims[k] += 1;
            }
        }
    }

    #[test]
    fn r1_round_trip() {
        for g in
            [Configuration::standard_alcove(3), Configuration::standard_alcove(4), samples::bowtie(), samples::branched_chain()]
        {
            let q = build_quiver(&g).unwrap();
            for f in all_faces(&q) {
                for p in [2, 3] {
                    let m = r1_rep_of_face(&q, &f, p).unwrap_or_else(|e| panic!("{:?} {:?} {e:?}", g.vertices, f));
                    let got = r1_face_of(&q, &m).unwrap();
                    assert_eq!(got.face, f);
                }
            }
        }
    }

    #[test]
    fn r1_single_vertex_is_projective() {
        let q = build_quiver(&Configuration::standard_alcove(3)).unwrap();
        let m = r1_rep_of_face(&q, &[1], 2).unwrap();
        let f = r1_face_of(&q, &m).unwrap();
        assert_eq!(f.face, vec![1]);
        assert_eq!(f.parts[&1], vec![0, 1, 2]);
    }

    #[test]
    fn r1_orders() {
        for g in [Configuration::standard_alcove(3), samples::bowtie(), samples::edge_tree(), samples::square()] {
            let q = build_quiver(&g).unwrap();
            let rep = r1_order_check(&q, 2, 5_000_000).unwrap();
            assert!(rep.ok(), "{:?}", rep.issues);
            assert_eq!(rep.strata, rep.faces);
        }
    }
}
