//! Subspaces of `F_p^d` in reduced row-echelon form.

use std::fmt;

use serde::Serialize;

use crate::error::Error;
use crate::lattice::CoordSet;

pub type Vector = Vec<u8>;

pub fn check_prime(p: u32) -> Result<u8, Error> {
    let is_prime = p >= 2 && (2..p).take_while(|k| k * k <= p).all(|k| !p.is_multiple_of(k));
    if !is_prime || p > 251 {
        return Err(Error::BadPrime(p));
    }
    Ok(p as u8)
}

fn inv(a: u8, p: u8) -> u8 {
    let (a, p) = (a as u32, p as u32);
    let mut r = 1;
    for _ in 0..p - 2 {
        r = r * a % p;
    }
    r as u8
}

/// Row-reduce in place; returns pivot columns. Columns are visited in the given order.
fn rref_in_place(rows: &mut Vec<Vector>, p: u8, order: &[usize]) -> Vec<usize> {
    let pp = p as u16;
    let mut pivots = Vec::new();
    let mut r = 0;
    for &c in order {
        let Some(i) = (r..rows.len()).find(|&i| rows[i][c] != 0) else { continue };
        rows.swap(r, i);
        let s = inv(rows[r][c], p) as u16;
        for x in rows[r].iter_mut() {
            *x = ((*x as u16 * s) % pp) as u8;
        }
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let f = pp - rows[i][c] as u16;
                for k in 0..rows[i].len() {
                    rows[i][k] = ((rows[i][k] as u16 + f * rows[r][k] as u16) % pp) as u8;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Subspace {
    #[serde(skip)]
    d: usize,
    #[serde(skip)]
    p: u8,
    basis: Vec<Vector>,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "⟨")?;
        for (i, r) in self.basis.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            for x in r {
                write!(f, "{x}")?;
            }
        }
        write!(f, "⟩")
    }
}

impl Subspace {
    pub fn zero(d: usize, p: u8) -> Self {
        Subspace { d, p, basis: Vec::new() }
    }

    pub fn full(d: usize, p: u8) -> Self {
        Self::coordinate(d, p, CoordSet::full(d))
    }

    /// `span{e_k : k ∈ s}`.
    pub fn coordinate(d: usize, p: u8, s: CoordSet) -> Self {
        let basis = s
            .iter()
            .filter(|&k| k < d)
            .map(|k| {
                let mut v = vec![0; d];
                v[k] = 1;
                v
            })
            .collect();
        Subspace { d, p, basis }
    }

    pub fn span(d: usize, p: u8, vecs: impl IntoIterator<Item = Vector>) -> Self {
        let mut rows: Vec<Vector> = vecs
            .into_iter()
            .map(|v| {
                assert_eq!(v.len(), d, "vector length");
                v.into_iter().map(|x| x % p).collect()
            })
            .collect();
        let order: Vec<usize> = (0..d).collect();
        rref_in_place(&mut rows, p, &order);
        Subspace { d, p, basis: rows }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn p(&self) -> u8 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    fn pivot(row: &[u8]) -> usize {
        row.iter().position(|&x| x != 0).expect("nonzero row")
    }

    /// Residue of `v` after reduction against the basis.
    pub fn reduce(&self, v: &[u8]) -> Vector {
        let pp = self.p as u16;
        let mut v: Vector = v.iter().map(|x| x % self.p).collect();
        for row in &self.basis {
            let c = Self::pivot(row);
            if v[c] != 0 {
                let f = pp - v[c] as u16;
                for k in 0..self.d {
                    v[k] = ((v[k] as u16 + f * row[k] as u16) % pp) as u8;
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[u8]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    pub fn contains_space(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        Subspace::span(self.d, self.p, self.basis.iter().chain(&other.basis).cloned())
    }

    pub fn with(&self, v: Vector) -> Subspace {
        Subspace::span(self.d, self.p, self.basis.iter().cloned().chain(std::iter::once(v)))
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        let d = self.d;
        let mut rows: Vec<Vector> = Vec::new();
        for u in &self.basis {
            rows.push(u.iter().chain(u.iter()).copied().collect());
        }
        for v in &other.basis {
            rows.push(v.iter().copied().chain(std::iter::repeat_n(0, d)).collect());
        }
        let order: Vec<usize> = (0..2 * d).collect();
        rref_in_place(&mut rows, self.p, &order);
        Subspace::span(d, self.p, rows.into_iter().filter(|r| r[..d].iter().all(|&x| x == 0)).map(|r| r[d..].to_vec()))
    }

    /// `self ∩ span{e_k : k ∈ s}`.
    pub fn intersect_coords(&self, s: CoordSet) -> Subspace {
        let mut rows = self.basis.clone();
        let order: Vec<usize> = (0..self.d).filter(|&k| !s.contains(k)).chain((0..self.d).filter(|&k| s.contains(k))).collect();
        rref_in_place(&mut rows, self.p, &order);
        let keep = rows.into_iter().filter(|r| (0..self.d).all(|k| s.contains(k) || r[k] == 0));
        Subspace::span(self.d, self.p, keep)
    }

    /// Image under the diagonal projection onto the coordinates in `s`.
    pub fn project(&self, s: CoordSet) -> Subspace {
        Subspace::span(self.d, self.p, self.basis.iter().map(|v| project(v, s)))
    }

    /// `{x : P_s(x) ∈ self}`.
    pub fn preimage(&self, s: CoordSet) -> Subspace {
        self.intersect_coords(s).sum(&Subspace::coordinate(self.d, self.p, s.complement(self.d)))
    }

    /// Extends `inner ⊂ self` by basis vectors of `self`; returns the added vectors.
    pub fn complement_of(&self, inner: &Subspace) -> Vec<Vector> {
        let mut cur = inner.clone();
        let mut added = Vec::new();
        for v in &self.basis {
            if !cur.contains(v) {
                cur = cur.with(v.clone());
                added.push(v.clone());
            }
        }
        added
    }

    /// All subspaces of dimension `k`.
    pub fn all_of_dim(d: usize, p: u8, k: usize) -> Vec<Subspace> {
        let mut out = Vec::new();
        if k > d {
            return out;
        }
        let mut pivots = Vec::new();
        choose(d, k, 0, &mut pivots, &mut |piv: &[usize]| {
            let free: Vec<(usize, usize)> = piv
                .iter()
                .enumerate()
                .flat_map(|(r, &c)| ((c + 1)..d).filter(|x| !piv.contains(x)).map(move |x| (r, x)))
                .collect();
            let total = (p as u64).pow(free.len() as u32);
            for mut code in 0..total {
                let mut rows: Vec<Vector> = piv
                    .iter()
                    .map(|&c| {
                        let mut v = vec![0; d];
                        v[c] = 1;
                        v
                    })
                    .collect();
                for &(r, x) in &free {
                    rows[r][x] = (code % p as u64) as u8;
                    code /= p as u64;
                }
                out.push(Subspace { d, p, basis: rows });
            }
        });
        out.sort();
        out
    }
}

fn choose(d: usize, k: usize, start: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if cur.len() == k {
        f(cur);
        return;
    }
    for c in start..d {
        cur.push(c);
        choose(d, k, c + 1, cur, f);
        cur.pop();
    }
}

pub fn project(v: &[u8], s: CoordSet) -> Vector {
    v.iter().enumerate().map(|(k, &x)| if s.contains(k) { x } else { 0 }).collect()
}

pub fn is_zero(v: &[u8]) -> bool {
    v.iter().all(|&x| x == 0)
}

pub fn add_scaled(a: &[u8], t: u8, b: &[u8], p: u8) -> Vector {
    a.iter().zip(b).map(|(&x, &y)| ((x as u16 + t as u16 * y as u16) % p as u16) as u8).collect()
}

/// Number of `k`-dimensional subspaces of `F_p^d`.
pub fn gaussian_binomial(d: usize, k: usize, p: u64) -> u64 {
    if k > d {
        return 0;
    }
    let mut num = 1u64;
    let mut den = 1u64;
    for i in 0..k {
        num *= p.pow((d - i) as u32) - 1;
        den *= p.pow((i + 1) as u32) - 1;
    }
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn subspace_counts() {
        for p in [2u8, 3, 5] {
            for d in 1..=4 {
                for k in 0..=d {
                    let all = Subspace::all_of_dim(d, p, k);
                    assert_eq!(all.len() as u64, gaussian_binomial(d, k, p as u64));
                    assert!(all.iter().all(|s| s.dim() == k && Subspace::span(d, p, s.basis().to_vec()) == *s));
                }
            }
        }
    }

    #[test]
    fn primes() {
        assert_eq!(check_prime(5).unwrap(), 5);
        assert!(check_prime(4).is_err());
        assert!(check_prime(1).is_err());
    }

    fn vecs(d: usize, p: u8) -> impl Strategy<Value = Vec<Vector>> {
        proptest::collection::vec(proptest::collection::vec(0..p, d), 0..4)
    }

    proptest! {
        #[test]
        fn dimension_formula(a in vecs(4, 3), b in vecs(4, 3)) {
            let u = Subspace::span(4, 3, a);
            let v = Subspace::span(4, 3, b);
            let i = u.intersect(&v);
            prop_assert_eq!(u.dim() + v.dim(), u.sum(&v).dim() + i.dim());
            prop_assert!(u.contains_space(&i) && v.contains_space(&i));
        }

        #[test]
        fn coordinate_intersection(a in vecs(5, 2), mask in 0u64..32) {
            let u = Subspace::span(5, 2, a);
            let s = CoordSet(mask);
            prop_assert_eq!(u.intersect_coords(s), u.intersect(&Subspace::coordinate(5, 2, s)));
            let pre = u.project(s).preimage(s);
            prop_assert!(pre.contains_space(&u));
        }

        #[test]
        fn complement_completes(a in vecs(4, 5), b in vecs(4, 5)) {
            let big = Subspace::span(4, 5, a.iter().chain(&b).cloned());
            let small = Subspace::span(4, 5, a);
            let extra = big.complement_of(&small);
            prop_assert_eq!(small.dim() + extra.len(), big.dim());
            prop_assert_eq!(Subspace::span(4, 5, small.basis().iter().cloned().chain(extra)), big);
        }
    }
}
