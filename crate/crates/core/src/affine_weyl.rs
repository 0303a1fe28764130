//! The extended affine Weyl group `S_d ⋉ Z^d`, its length function and Bruhat order.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::lattice::LatticeClass;

pub const DEFAULT_LEN_CAP: u32 = 24;

/// An element `(σ, v)` acting by `(σ, v)·a = (a_{σ⁻¹(1)}, …, a_{σ⁻¹(d)}) + v`.
///
/// `sigma` is stored 0-based; JSON uses 1-based images.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "ElementJson", into = "ElementJson")]
pub struct AffineWeylElement {
    sigma: Vec<usize>,
    trans: Vec<i64>,
}

#[derive(Serialize, Deserialize)]
struct ElementJson {
    sigma: Vec<usize>,
    trans: Vec<i64>,
}

impl TryFrom<ElementJson> for AffineWeylElement {
    type Error = Error;
    fn try_from(j: ElementJson) -> Result<Self, Error> {
        AffineWeylElement::from_one_based(&j.sigma, j.trans)
    }
}

impl From<AffineWeylElement> for ElementJson {
    fn from(g: AffineWeylElement) -> Self {
        ElementJson { sigma: g.sigma.iter().map(|&s| s + 1).collect(), trans: g.trans }
    }
}

impl fmt::Debug for AffineWeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<usize> = self.sigma.iter().map(|&x| x + 1).collect();
        write!(f, "({:?}, {:?})", s, self.trans)
    }
}

impl fmt::Display for AffineWeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl AffineWeylElement {
    pub fn new(sigma: Vec<usize>, trans: Vec<i64>) -> Result<Self, Error> {
        if sigma.len() != trans.len() {
            return Err(Error::DimensionMismatch { expected: sigma.len(), got: trans.len() });
        }
        let mut seen = vec![false; sigma.len()];
        for &s in &sigma {
            if s >= sigma.len() || seen[s] {
                return Err(Error::NotPermutation(sigma.iter().map(|x| x + 1).collect()));
            }
            seen[s] = true;
        }
        Ok(AffineWeylElement { sigma, trans })
    }

    pub fn from_one_based(sigma: &[usize], trans: Vec<i64>) -> Result<Self, Error> {
        if sigma.contains(&0) {
            return Err(Error::NotPermutation(sigma.to_vec()));
        }
        Self::new(sigma.iter().map(|&s| s - 1).collect(), trans)
    }

    pub fn identity(d: usize) -> Self {
        AffineWeylElement { sigma: (0..d).collect(), trans: vec![0; d] }
    }

    pub fn translation(v: Vec<i64>) -> Self {
        AffineWeylElement { sigma: (0..v.len()).collect(), trans: v }
    }

    /// Simple reflection `s_i`, `0 ≤ i < d`.
    pub fn simple(d: usize, i: usize) -> Self {
        assert!(d >= 2 && i < d);
        let mut g = Self::identity(d);
        if i == 0 {
            g.sigma.swap(0, d - 1);
            g.trans[0] = 1;
            g.trans[d - 1] = -1;
        } else {
            g.sigma.swap(i - 1, i);
        }
        g
    }

    /// The affine reflection `((i j), k(e_i − e_j))` (0-based positions).
    pub fn reflection(d: usize, i: usize, j: usize, k: i64) -> Self {
        assert!(i != j && i < d && j < d);
        let mut g = Self::identity(d);
        g.sigma.swap(i, j);
        g.trans[i] = k;
        g.trans[j] = -k;
        g
    }

    /// `ι = ((1 2 … d), (1, 0, …, 0))`.
    pub fn iota(d: usize) -> Self {
        let sigma = (0..d).map(|j| (j + 1) % d).collect();
        let mut trans = vec![0; d];
        trans[0] = 1;
        AffineWeylElement { sigma, trans }
    }

    pub fn iota_pow(d: usize, k: i64) -> Self {
        let base = if k >= 0 { Self::iota(d) } else { Self::iota(d).inverse() };
        let mut g = Self::identity(d);
        for _ in 0..k.unsigned_abs() {
            g = g.mul(&base);
        }
        g
    }

    pub fn d(&self) -> usize {
        self.sigma.len()
    }

    pub fn sigma(&self) -> &[usize] {
        &self.sigma
    }

    pub fn sigma_one_based(&self) -> Vec<usize> {
        self.sigma.iter().map(|s| s + 1).collect()
    }

    pub fn trans(&self) -> &[i64] {
        &self.trans
    }

    pub fn trans_sum(&self) -> i64 {
        self.trans.iter().sum()
    }

    pub fn in_affine_subgroup(&self) -> bool {
        self.trans_sum() == 0
    }

    pub fn is_identity(&self) -> bool {
        self.trans.iter().all(|&t| t == 0) && self.sigma.iter().enumerate().all(|(i, &s)| i == s)
    }

    /// `σ·v`, i.e. `(σ·v)[σ(j)] = v[j]`.
    pub fn permute(&self, v: &[i64]) -> Vec<i64> {
        let mut out = vec![0; v.len()];
        for (j, &x) in v.iter().enumerate() {
            out[self.sigma[j]] = x;
        }
        out
    }

    /// Product; panics on dimension mismatch. See [`compose`] for the checked form.
    pub fn mul(&self, h: &Self) -> Self {
        assert_eq!(self.d(), h.d(), "dimension mismatch");
        let sigma = h.sigma.iter().map(|&j| self.sigma[j]).collect();
        let moved = self.permute(&h.trans);
        let trans = self.trans.iter().zip(moved).map(|(a, b)| a + b).collect();
        AffineWeylElement { sigma, trans }
    }

    pub fn inverse(&self) -> Self {
        let d = self.d();
        let mut inv = vec![0; d];
        for (j, &s) in self.sigma.iter().enumerate() {
            inv[s] = j;
        }
        let mut trans = vec![0; d];
        for (j, &s) in self.sigma.iter().enumerate() {
            trans[j] = -self.trans[s];
        }
        AffineWeylElement { sigma: inv, trans }
    }

    /// Left action on integer vectors; panics on dimension mismatch.
    pub fn apply(&self, a: &[i64]) -> Vec<i64> {
        assert_eq!(self.d(), a.len(), "dimension mismatch");
        let mut out = self.trans.clone();
        for (j, &x) in a.iter().enumerate() {
            out[self.sigma[j]] += x;
        }
        out
    }
}

pub fn compose(g: &AffineWeylElement, h: &AffineWeylElement) -> Result<AffineWeylElement, Error> {
    if g.d() != h.d() {
        return Err(Error::DimensionMismatch { expected: g.d(), got: h.d() });
    }
    Ok(g.mul(h))
}

pub fn invert(g: &AffineWeylElement) -> AffineWeylElement {
    g.inverse()
}

pub fn act(g: &AffineWeylElement, a: &[i64]) -> Result<Vec<i64>, Error> {
    if g.d() != a.len() {
        return Err(Error::DimensionMismatch { expected: g.d(), got: a.len() });
    }
    Ok(g.apply(a))
}

/// `g = w · ι^power` with `w ∈ W_a`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IotaDecomposition {
    pub w: AffineWeylElement,
    pub power: i64,
}

impl IotaDecomposition {
    /// The ι-component modulo `d`.
    pub fn class(&self) -> usize {
        self.power.rem_euclid(self.w.d() as i64) as usize
    }
}

pub fn iota_decompose(g: &AffineWeylElement) -> IotaDecomposition {
    let power = g.trans_sum();
    let w = g.mul(&AffineWeylElement::iota_pow(g.d(), -power));
    IotaDecomposition { w, power }
}

/// Shi's inversion count for the affine permutation attached to an element of `W_a`.
pub fn inversion_length(w: &AffineWeylElement) -> u32 {
    let d = w.d() as i64;
    let f: Vec<i64> = (0..w.d())
        .map(|j| {
            let s = w.sigma[j];
            s as i64 + 1 + d * w.trans[s]
        })
        .collect();
    let mut total = 0i64;
    for i in 0..f.len() {
        for j in i + 1..f.len() {
            total += (f[j] - f[i]).div_euclid(d).abs();
        }
    }
    total as u32
}

struct Ball {
    lengths: HashMap<AffineWeylElement, (u32, u8)>,
    frontier: Vec<AffineWeylElement>,
    radius: u32,
}

/// Memoized length and Bruhat tables for `W_a` of a fixed rank.
pub struct WeylTables {
    d: usize,
    cap: u32,
    gens: Vec<AffineWeylElement>,
    ball: Mutex<Ball>,
    ideals: Mutex<HashMap<AffineWeylElement, Arc<HashSet<AffineWeylElement>>>>,
}

impl WeylTables {
    pub fn new(d: usize, cap: u32) -> Self {
        assert!(d >= 2, "rank must be at least 2");
        let id = AffineWeylElement::identity(d);
        let mut lengths = HashMap::new();
        lengths.insert(id.clone(), (0, u8::MAX));
        WeylTables {
            d,
            cap,
            gens: (0..d).map(|i| AffineWeylElement::simple(d, i)).collect(),
            ball: Mutex::new(Ball { lengths, frontier: vec![id], radius: 0 }),
            ideals: Mutex::new(HashMap::new()),
        }
    }

    /// Process-wide tables shared per `(d, cap)`.
    pub fn shared(d: usize, cap: u32) -> Arc<WeylTables> {
        static CACHE: OnceLock<Mutex<HashMap<(usize, u32), Arc<WeylTables>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().unwrap();
        guard.entry((d, cap)).or_insert_with(|| Arc::new(WeylTables::new(d, cap))).clone()
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    fn grow(ball: &mut Ball, gens: &[AffineWeylElement]) {
        let mut next = Vec::new();
        for x in &ball.frontier {
            for (i, s) in gens.iter().enumerate() {
                let y = x.mul(s);
                if !ball.lengths.contains_key(&y) {
                    ball.lengths.insert(y.clone(), (ball.radius + 1, i as u8));
                    next.push(y);
                }
            }
        }
        ball.frontier = next;
        ball.radius += 1;
    }

    /// Length of `w ∈ W_a` if it is at most `bound` (and `bound ≤ cap`).
    fn length_within(&self, w: &AffineWeylElement, bound: u32) -> Option<u32> {
        let bound = bound.min(self.cap);
        let mut ball = self.ball.lock().unwrap();
        loop {
            if let Some(&(l, _)) = ball.lengths.get(w) {
                return (l <= bound).then_some(l);
            }
            if ball.radius >= bound {
                return None;
            }
            Self::grow(&mut ball, &self.gens);
        }
    }

    fn check(&self, g: &AffineWeylElement) -> Result<(), Error> {
        if g.d() != self.d {
            return Err(Error::DimensionMismatch { expected: self.d, got: g.d() });
        }
        Ok(())
    }

    /// Length of the `W_a`-part of `g`.
    pub fn length(&self, g: &AffineWeylElement) -> Result<u32, Error> {
        self.check(g)?;
        let w = if g.in_affine_subgroup() { g.clone() } else { iota_decompose(g).w };
        self.length_within(&w, self.cap).ok_or(Error::LengthCapExceeded { cap: self.cap })
    }

    /// A reduced word `[i₁, …, i_l]` with `w = s_{i₁}⋯s_{i_l}`.
    pub fn reduced_word(&self, w: &AffineWeylElement) -> Result<Vec<usize>, Error> {
        self.length(w)?;
        let w = if w.in_affine_subgroup() { w.clone() } else { iota_decompose(w).w };
        let ball = self.ball.lock().unwrap();
        let mut word = Vec::new();
        let mut cur = w;
        loop {
            let &(l, gen) = ball.lengths.get(&cur).expect("element in ball");
            if l == 0 {
                break;
            }
            word.push(gen as usize);
            cur = cur.mul(&self.gens[gen as usize]);
        }
        word.reverse();
        Ok(word)
    }

    /// Elements of `W_a` of length at most `l`.
    pub fn ball_elements(&self, l: u32) -> Result<Vec<AffineWeylElement>, Error> {
        if l > self.cap {
            return Err(Error::LengthCapExceeded { cap: self.cap });
        }
        let mut ball = self.ball.lock().unwrap();
        while ball.radius < l {
            Self::grow(&mut ball, &self.gens);
        }
        let mut out: Vec<_> = ball.lengths.iter().filter(|(_, &(len, _))| len <= l).map(|(g, _)| g.clone()).collect();
        out.sort_by_key(|g| (ball.lengths[g].0, g.clone()));
        Ok(out)
    }

    /// Bruhat covers below `w ∈ W_a`: all `w·t` with `t` a reflection and length one less.
    pub fn lower_covers(&self, w: &AffineWeylElement) -> Result<Vec<AffineWeylElement>, Error> {
        let l = self.length(w)?;
        if l == 0 {
            return Ok(Vec::new());
        }
        let k_max = l as i64 + 1;
        let mut out = Vec::new();
        for i in 0..self.d {
            for j in i + 1..self.d {
                for k in -k_max..=k_max {
                    let u = w.mul(&AffineWeylElement::reflection(self.d, i, j, k));
                    if self.length_within(&u, l - 1) == Some(l - 1) {
                        out.push(u);
                    }
                }
            }
        }
        out.sort();
        Ok(out)
    }

    /// The Bruhat interval `[e, w]` for `w ∈ W_a`.
    pub fn lower_ideal(&self, w: &AffineWeylElement) -> Result<Arc<HashSet<AffineWeylElement>>, Error> {
        if let Some(s) = self.ideals.lock().unwrap().get(w) {
            return Ok(s.clone());
        }
        let mut set = HashSet::new();
        set.insert(w.clone());
        for u in self.lower_covers(w)? {
            set.extend(self.lower_ideal(&u)?.iter().cloned());
        }
        let set = Arc::new(set);
        self.ideals.lock().unwrap().insert(w.clone(), set.clone());
        Ok(set)
    }

    /// Bruhat order on the extended group: equal ι-components and comparable `W_a`-parts.
    pub fn bruhat_leq(&self, u: &AffineWeylElement, w: &AffineWeylElement) -> Result<bool, Error> {
        self.check(u)?;
        self.check(w)?;
        let du = iota_decompose(u);
        let dw = iota_decompose(w);
        if du.power != dw.power {
            return Ok(false);
        }
        if self.length(&du.w)? > self.length(&dw.w)? {
            return Ok(false);
        }
        Ok(self.lower_ideal(&dw.w)?.contains(&du.w))
    }

    /// Minimal-length element of `W1·g·W2`.
    pub fn double_coset_min(
        &self,
        g: &AffineWeylElement,
        w1: &ParahoricWeylGroup,
        w2: &ParahoricWeylGroup,
    ) -> Result<AffineWeylElement, Error> {
        let mut cur = g.clone();
        let mut len = self.length(&cur)?;
        loop {
            let mut best: Option<(u32, AffineWeylElement)> = None;
            let left = w1.elements.iter().map(|a| a.mul(&cur));
            let right = w2.elements.iter().map(|b| cur.mul(b));
            for cand in left.chain(right) {
                let l = self.length(&cand)?;
                if l < len && best.as_ref().is_none_or(|(bl, bg)| (l, &cand) < (*bl, bg)) {
                    best = Some((l, cand));
                }
            }
            match best {
                Some((l, c)) => {
                    cur = c;
                    len = l;
                }
                None => return Ok(cur),
            }
        }
    }

    pub fn double_coset_leq(
        &self,
        g: &AffineWeylElement,
        h: &AffineWeylElement,
        w1: &ParahoricWeylGroup,
        w2: &ParahoricWeylGroup,
    ) -> Result<bool, Error> {
        let a = self.double_coset_min(g, w1, w2)?;
        let b = self.double_coset_min(h, w1, w2)?;
        self.bruhat_leq(&a, &b)
    }

    /// Minimal-length element of `g·W`.
    pub fn right_coset_min(&self, g: &AffineWeylElement, w: &ParahoricWeylGroup) -> Result<AffineWeylElement, Error> {
        let mut best: Option<(u32, AffineWeylElement)> = None;
        for b in &w.elements {
            let c = g.mul(b);
            let l = self.length(&c)?;
            if best.as_ref().is_none_or(|(bl, bg)| (l, &c) < (*bl, bg)) {
                best = Some((l, c));
            }
        }
        Ok(best.expect("parahoric group contains the identity").1)
    }

    /// `^{W1}g^{W2}`: the longest among the minimal right-coset representatives of `v·g`, `v ∈ W1`.
    pub fn minmax_rep(
        &self,
        g: &AffineWeylElement,
        w1: &ParahoricWeylGroup,
        w2: &ParahoricWeylGroup,
    ) -> Result<AffineWeylElement, Error> {
        let mut best: Option<(u32, AffineWeylElement)> = None;
        for v in &w1.elements {
            let c = self.right_coset_min(&v.mul(g), w2)?;
            let l = self.length(&c)?;
            if best.as_ref().is_none_or(|(bl, bg)| (l, &c) > (*bl, bg)) {
                best = Some((l, c));
            }
        }
        Ok(best.expect("parahoric group contains the identity").1)
    }

    /// DOT digraph of the covering relations in the interval below `w`.
    pub fn interval_dot(&self, w: &AffineWeylElement) -> Result<String, Error> {
        let ideal = self.lower_ideal(w)?;
        let mut elems: Vec<_> = ideal.iter().cloned().collect();
        elems.sort_by_key(|g| (self.length(g).unwrap_or(0), g.clone()));
        let index: HashMap<_, _> = elems.iter().enumerate().map(|(i, g)| (g.clone(), i)).collect();
        let mut out = String::from("digraph bruhat {\n  rankdir=BT;\n");
        for (i, g) in elems.iter().enumerate() {
            out.push_str(&format!("  n{} [label=\"{}\"];\n", i, g));
        }
        for (i, g) in elems.iter().enumerate() {
            for u in self.lower_covers(g)? {
                out.push_str(&format!("  n{} -> n{};\n", index[&u], i));
            }
        }
        out.push_str("}\n");
        Ok(out)
    }
}

/// Finite subgroup of `W_a` fixing a face pointwise.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParahoricWeylGroup {
    pub face: Vec<LatticeClass>,
    pub elements: Vec<AffineWeylElement>,
}

impl ParahoricWeylGroup {
    pub fn trivial(d: usize) -> Self {
        ParahoricWeylGroup { face: Vec::new(), elements: vec![AffineWeylElement::identity(d)] }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: &AffineWeylElement) -> bool {
        self.elements.binary_search(g).is_ok()
    }

    /// Orbit of an array of vectors under the group, sorted.
    pub fn orbit(&self, xs: &[Vec<i64>]) -> Vec<Vec<Vec<i64>>> {
        let mut out: Vec<Vec<Vec<i64>>> = self.elements.iter().map(|g| xs.iter().map(|x| g.apply(x)).collect()).collect();
        out.sort();
        out.dedup();
        out
    }

    /// Canonical orbit representative (lexicographically least).
    pub fn orbit_min(&self, xs: &[Vec<i64>]) -> Vec<Vec<i64>> {
        self.elements.iter().map(|g| xs.iter().map(|x| g.apply(x)).collect::<Vec<_>>()).min().expect("nonempty group")
    }
}

/// Equivalence classes of positions with constant difference across the face.
pub fn position_blocks(face: &[Vec<i64>]) -> Vec<Vec<usize>> {
    let d = face[0].len();
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    'outer: for k in 0..d {
        for b in blocks.iter_mut() {
            let k0 = b[0];
            let c = face[0][k0] - face[0][k];
            if face.iter().all(|x| x[k0] - x[k] == c) {
                b.push(k);
                continue 'outer;
            }
        }
        blocks.push(vec![k]);
    }
    blocks
}

pub fn face_stabilizer(face: &[LatticeClass]) -> Result<ParahoricWeylGroup, Error> {
    let Some(first) = face.first() else {
        return Err(Error::NotSimplex("empty face".into()));
    };
    let d = first.d();
    for (a, u) in face.iter().enumerate() {
        if u.d() != d {
            return Err(Error::DimensionMismatch { expected: d, got: u.d() });
        }
        for v in &face[a + 1..] {
            if u == v || !u.is_adjacent(v) {
                return Err(Error::NotSimplex(format!("{u} and {v} do not span an edge")));
            }
        }
    }
    let xs: Vec<Vec<i64>> = face.iter().map(|c| c.coords().to_vec()).collect();
    let mut gens = Vec::new();
    for i in 0..d {
        for j in i + 1..d {
            let c = xs[0][i] - xs[0][j];
            if xs.iter().all(|x| x[i] - x[j] == c) {
                gens.push(AffineWeylElement::reflection(d, i, j, c));
            }
        }
    }
    let mut elements = vec![AffineWeylElement::identity(d)];
    let mut seen: HashSet<AffineWeylElement> = elements.iter().cloned().collect();
    let mut idx = 0;
    while idx < elements.len() {
        let g = elements[idx].clone();
        for s in &gens {
            let h = g.mul(s);
            if seen.insert(h.clone()) {
                elements.push(h);
            }
        }
        idx += 1;
    }
    elements.sort();
    Ok(ParahoricWeylGroup { face: face.to_vec(), elements })
}

/// `ω_i = (1^i, 0^{d−i})`.
pub fn omega(d: usize, i: usize) -> Vec<i64> {
    (0..d).map(|k| (k < i) as i64).collect()
}

/// Stabilizer of the standard face `{ω_i : i ∈ types}`.
pub fn standard_face_stabilizer(d: usize, types: &[usize]) -> Result<ParahoricWeylGroup, Error> {
    let face: Vec<LatticeClass> = types.iter().map(|&i| LatticeClass::new(omega(d, i))).collect();
    face_stabilizer(&face)
}

/// Some `g ∈ W̃` with `g·ω_i = ys[a]` for `types[a] = i`.
///
/// `types` is strictly increasing and `ys` must be a face of that type:
/// consecutive differences are 0/1 vectors with the matching number of ones.
pub fn element_for_face(types: &[usize], ys: &[Vec<i64>]) -> Result<AffineWeylElement, Error> {
    let d = ys[0].len();
    let m = types.len();
    if m != ys.len() || types.windows(2).any(|w| w[0] >= w[1]) || types[m - 1] >= d {
        return Err(Error::NotSimplex("malformed face type".into()));
    }
    // z[k] is the vertex of type k of a full alcove through the face, for k in types[0]..types[0]+d.
    let mut z: Vec<Vec<i64>> = Vec::with_capacity(d + 1);
    z.push(ys[0].clone());
    for a in 0..m {
        let (from, to, target) = if a + 1 < m {
            (types[a], types[a + 1], ys[a + 1].clone())
        } else {
            (types[a], types[0] + d, ys[0].iter().map(|x| x + 1).collect())
        };
        let start = &ys[a];
        let diff: Vec<i64> = target.iter().zip(start).map(|(t, s)| t - s).collect();
        let ones: Vec<usize> = (0..d).filter(|&k| diff[k] == 1).collect();
        if diff.iter().any(|&x| x != 0 && x != 1) || ones.len() != to - from {
            return Err(Error::NotSimplex(format!("vectors {:?} do not form a face of type {:?}", ys, types)));
        }
        let mut cur = start.clone();
        for &k in &ones {
            cur[k] += 1;
            z.push(cur.clone());
        }
    }
    // z[t] has type types[0] + t; rotate so index 0 is type 0.
    let t0 = types[0];
    let vertex = |k: usize| -> Vec<i64> {
        if k >= t0 {
            z[k - t0].clone()
        } else {
            z[k + d - t0].iter().map(|x| x - 1).collect()
        }
    };
    let v0 = vertex(0);
    let mut sigma = vec![0; d];
    for k in 1..=d {
        let prev = vertex(k - 1);
        let next = if k == d { v0.iter().map(|x| x + 1).collect() } else { vertex(k) };
        let pos = (0..d).find(|&c| next[c] != prev[c]).expect("unit step");
        sigma[k - 1] = pos;
    }
    AffineWeylElement::new(sigma, v0)
}
