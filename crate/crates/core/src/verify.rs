//! Verification suites. Each returns a report with the number of checks and any failures.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::admissible::{all_faces, r1_face_of, r1_order_check, r1_rep_of_face, simplex_rank_realizable, Strata};
use crate::affine_weyl::{face_stabilizer, standard_face_stabilizer, AffineWeylElement, WeylTables, DEFAULT_LEN_CAP};
use crate::error::Error;
use crate::independence::weakly_independent;
use crate::lattice::{Configuration, LatticeClass};
use crate::multidegree::kn_instance;
use crate::quiver::{
    all_summand_types, build_quiver, decompose, deform_step, degeneration_chain, enumerate_subreps, multiplicities_from_rank,
    random_subrep, rank_vector, QuiverData, RankVector, SubRepresentation,
};
use crate::{admissible, samples};

pub const SUITES: [&str; 12] = [
    "weyl",
    "parahoric",
    "kr",
    "components",
    "order",
    "bijection",
    "decomposition",
    "degeneration",
    "simplex",
    "dim1",
    "kn",
    "projective",
];

#[derive(Clone, Debug, Serialize)]
pub struct Params {
    pub seed: u64,
    pub trials: usize,
    /// Largest dimension for suites that sweep over `d`.
    pub d: Option<usize>,
    /// Largest `n` for the complete-graph suite.
    pub n: Option<usize>,
    pub len_cap: u32,
    pub budget: u64,
}

impl Default for Params {
    fn default() -> Self {
        Params { seed: 7, trials: 1000, d: None, n: None, len_cap: 8, budget: 20_000_000 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: bool,
    pub checks: usize,
    pub failures: Vec<String>,
    pub notes: Vec<String>,
    #[serde(skip)]
    pub millis: u128,
}

struct Tally {
    checks: usize,
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Tally { checks: 0, failures: Vec::new(), notes: Vec::new() }
    }

    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok && self.failures.len() < 50 {
            self.failures.push(msg());
        }
    }
}

pub fn run_suite(name: &str, params: &Params) -> Result<SuiteReport, Error> {
    let start = Instant::now();
    let mut t = Tally::new();
    match name {
        "weyl" => weyl(&mut t, params.d.unwrap_or(5))?,
        "parahoric" => parahoric(&mut t)?,
        "kr" => kr(&mut t, params.d.unwrap_or(3), params.len_cap)?,
        "components" => components(&mut t, params.d.unwrap_or(4))?,
        "order" => order(&mut t, params.d.unwrap_or(4))?,
        "bijection" => bijection(&mut t, params.d.unwrap_or(4), params.budget)?,
        "decomposition" => decomposition(&mut t, params.trials, params.seed)?,
        "degeneration" => degeneration(&mut t, params.budget)?,
        "simplex" => simplex(&mut t, params.d.unwrap_or(4), params.budget)?,
        "dim1" => dim1(&mut t, params.budget)?,
        "kn" => kn(&mut t, params.n.unwrap_or(6))?,
        "projective" => projective(&mut t, params.budget)?,
        other => return Err(Error::Invalid(format!("unknown suite {other:?}; expected one of {}", SUITES.join(", ")))),
    }
    Ok(SuiteReport {
        suite: name.to_string(),
        passed: t.failures.is_empty(),
        checks: t.checks,
        failures: t.failures,
        notes: t.notes,
        millis: start.elapsed().as_millis(),
    })
}

fn binom(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn weyl(t: &mut Tally, dmax: usize) -> Result<(), Error> {
    for d in 2..=dmax {
        let tables = WeylTables::shared(d, DEFAULT_LEN_CAP);
        for r in 1..d {
            let mu: Vec<i64> = (0..d).map(|k| (k < r) as i64).collect();
            let l = tables.length(&AffineWeylElement::translation(mu.clone()))?;
            t.check(l as usize == r * (d - r), || format!("length of t{mu:?} is {l}, expected {}", r * (d - r)));
        }
    }
    Ok(())
}

fn parahoric(t: &mut Tally) -> Result<(), Error> {
    let g = standard_face_stabilizer(4, &[0, 1, 2])?;
    t.check(g.order() == 2, || format!("stabilizer of types 0,1,2 in d=4 has order {}", g.order()));
    for d in 2..=5 {
        let all: Vec<usize> = (0..d).collect();
        let o = standard_face_stabilizer(d, &all)?.order();
        t.check(o == 1, || format!("alcove stabilizer in d={d} has order {o}"));
        let v = face_stabilizer(&[LatticeClass::new(vec![0; d])])?.order();
        let fact: usize = (1..=d).product();
        t.check(v == fact, || format!("vertex stabilizer in d={d} has order {v}"));
    }
    Ok(())
}

fn kr(t: &mut Tally, dmax: usize, cap: u32) -> Result<(), Error> {
    for d in 2..=dmax {
        for r in 1..d {
            let rep = admissible::admissibility_equivalence_check(r, d, cap)?;
            let alcoves = admissible::enumerate_admissible_alcoves(r, d)?.len();
            t.check(rep.ok(), || format!("d={d} r={r}: criteria disagree on {:?}", rep.disagreements));
            t.check(rep.admissible == alcoves, || {
                format!("d={d} r={r}: {} admissible elements vs {alcoves} alcoves", rep.admissible)
            });
            t.notes.push(format!("d={d} r={r}: {} elements, {} admissible", rep.checked, rep.admissible));
        }
    }
    Ok(())
}

fn components(t: &mut Tally, dmax: usize) -> Result<(), Error> {
    for d in 2..=dmax {
        for r in 1..d {
            let st = Strata::new(&Configuration::standard_alcove(d), r, DEFAULT_LEN_CAP)?;
            let tops = st.top_indices()?;
            t.check(tops.len() == binom(d, r), || format!("d={d} r={r}: {} top strata", tops.len()));
            for &i in &tops {
                let dim = st.dimension(&st.collections[i])?;
                t.check(dim == Some((r * (d - r)) as u32), || format!("d={d} r={r}: top stratum {i} has dimension {dim:?}"));
            }
        }
    }
    Ok(())
}

fn order_configs(dmax: usize) -> Vec<Configuration> {
    let mut out = Vec::new();
    for d in 2..=dmax {
        out.extend(samples::omega_faces(d));
    }
    for d in 3..=dmax {
        out.extend(samples::two_simplex_configs(d, 5));
    }
    if dmax >= 4 {
        out.push(samples::bowtie());
    }
    out
}

fn order(t: &mut Tally, dmax: usize) -> Result<(), Error> {
    for g in order_configs(dmax) {
        for r in 1..g.d {
            let st = Strata::new(&g, r, DEFAULT_LEN_CAP)?;
            let rep = st.report()?;
            t.check(rep.order_discrepancies.is_empty(), || {
                format!("{:?} r={r}: orders differ on {:?}", g.vertices, rep.order_discrepancies)
            });
        }
    }
    Ok(())
}

fn bijection(t: &mut Tally, dmax: usize, budget: u64) -> Result<(), Error> {
    let mut configs: Vec<Configuration> = order_configs(dmax).into_iter().filter(|g| g.len() <= 4).collect();
    configs.push(samples::square());
    for g in configs {
        let q = build_quiver(&g)?;
        for r in 1..g.d {
            let st = Strata::from_quiver(q.clone(), r, DEFAULT_LEN_CAP)?;
            let fixed = st.fixed_point_collections()?;
            for p in [2u8, 3] {
                let reps = enumerate_subreps(&q, &vec![r; q.n()], p, budget)?;
                let phis: BTreeSet<RankVector> = reps.iter().map(|m| rank_vector(m, &q)).collect();
                match st.realized_by(&reps) {
                    Ok(hit) => {
                        t.check(hit.len() == phis.len(), || {
                            format!("{:?} r={r} p={p}: strata and rank vectors differ in number", g.vertices)
                        });
                        t.check(fixed.is_subset(&hit), || {
                            format!("{:?} r={r} p={p}: a torus-fixed stratum was not met", g.vertices)
                        });
                        let predicted: BTreeSet<RankVector> =
                            hit.iter().map(|&i| st.rank_vector(&st.collections[i])).collect::<Result<_, _>>()?;
                        t.check(predicted == phis, || format!("{:?} r={r} p={p}: rank vector sets differ", g.vertices));
                        if hit.len() < st.collections.len() {
                            t.notes.push(format!(
                                "{:?} r={r} p={p}: {} of {} collections realized",
                                g.vertices,
                                hit.len(),
                                st.collections.len()
                            ));
                        }
                    }
                    Err(e) => t.check(false, || format!("{:?} r={r} p={p}: {e}", g.vertices)),
                }
            }
        }
    }
    Ok(())
}

fn decomposition_configs() -> Vec<Configuration> {
    vec![
        Configuration::from_vectors(2, vec![vec![0, 0], vec![1, 0]]).unwrap(),
        Configuration::from_vectors(2, vec![vec![0, 0], vec![1, 0], vec![2, 0]]).unwrap(),
        Configuration::standard_alcove(3),
        Configuration::standard_alcove(4),
        samples::branched_chain(),
        samples::edge_tree(),
        samples::bowtie(),
    ]
}

fn decomposition(t: &mut Tally, trials: usize, seed: u64) -> Result<(), Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for g in decomposition_configs() {
        let q = build_quiver(&g)?;
        let types = all_summand_types(&q);
        for p in [2u8, 3] {
            for _ in 0..trials {
                let m = random_subrep(&q, p, &mut rng);
                let dec = match decompose(&m, &q) {
                    Ok(dec) => dec,
                    Err(e) => {
                        t.check(false, || format!("{:?}: {e}", g.vertices));
                        continue;
                    }
                };
                let mult = dec.multiplicities();
                let phi = rank_vector(&m, &q);
                let mut ok = mult.keys().all(|ty| types.contains(ty));
                for ty in &types {
                    ok &= multiplicities_from_rank(&q, &phi, ty)? == mult.get(ty).copied().unwrap_or(0);
                }
                t.check(ok, || format!("{:?} p={p}: multiplicities disagree for {m:?}", g.vertices));
            }
        }
    }
    Ok(())
}

/// Weakly independent configurations with `d ≤ 4`, paired with the sizes `r` to enumerate.
fn weak_cases() -> Vec<(Configuration, usize)> {
    let mut out = Vec::new();
    let mut gs =
        vec![Configuration::standard_alcove(3), Configuration::standard_alcove(4), samples::bowtie(), samples::edge_tree()];
    gs.extend(samples::two_simplex_configs(3, 5));
    gs.extend(samples::two_simplex_configs(4, 4));
    for g in gs {
        for r in 1..g.d {
            out.push((g.clone(), r));
        }
    }
    out
}

fn class_reps(all: &[SubRepresentation], q: &QuiverData) -> BTreeMap<RankVector, SubRepresentation> {
    let mut reps = BTreeMap::new();
    for m in all {
        reps.entry(rank_vector(m, q)).or_insert_with(|| m.clone());
    }
    reps
}

fn degeneration(t: &mut Tally, budget: u64) -> Result<(), Error> {
    for (g, r) in weak_cases() {
        let q = build_quiver(&g)?;
        if !weakly_independent(&q).independent {
            t.check(false, || format!("{:?} is not weakly independent", g.vertices));
            continue;
        }
        let all = enumerate_subreps(&q, &vec![r; q.n()], 2, budget)?;
        let reps = class_reps(&all, &q);
        for (a, m) in &reps {
            for b in reps.keys().filter(|b| a.below(b)) {
                let chain = match degeneration_chain(m, &q, b) {
                    Ok(c) => c,
                    Err(e) => {
                        t.check(false, || format!("{:?} r={r}: {e}", g.vertices));
                        continue;
                    }
                };
                let mut cur = a.clone();
                let mut ok = !chain.is_empty();
                for step in &chain {
                    let next = rank_vector(&step.rep, &q);
                    let inc = step.increment(q.n());
                    let predicted = RankVector::from_fn(q.n(), |u, v| cur.get(u, v) + inc.get(u, v));
                    ok &= cur.below(&next) && next == predicted && step.rep.dims() == m.dims();
                    cur = next;
                }
                ok &= cur == *b;
                t.check(ok, || format!("{:?} r={r}: chain from {:?} to {:?} failed", g.vertices, a.entries(), b.entries()));
            }
        }
    }
    Ok(())
}

fn simplex(t: &mut Tally, dmax: usize, budget: u64) -> Result<(), Error> {
    for d in 2..=dmax {
        for g in samples::omega_faces(d).into_iter().filter(|g| g.len() <= 3) {
            let q = build_quiver(&g)?;
            let n = q.n();
            let top = d.min(2);
            let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v))).collect();
            let mut dims = vec![0usize; n];
            loop {
                let image: BTreeSet<RankVector> =
                    enumerate_subreps(&q, &dims, 2, budget)?.iter().map(|m| rank_vector(m, &q)).collect();
                let mut accepted = BTreeSet::new();
                let mut vals = vec![0u32; pairs.len()];
                loop {
                    let mut phi = RankVector::from_fn(n, |u, v| if u == v { dims[u] as u32 } else { 0 });
                    for (k, &(u, v)) in pairs.iter().enumerate() {
                        phi.set(u, v, vals[k]);
                    }
                    match simplex_rank_realizable(&q, &phi, &dims, 2) {
                        Ok(Some(w)) => {
                            t.check(w.dims() == dims && rank_vector(&w, &q) == phi, || {
                                format!("bad witness for {:?}", phi.entries())
                            });
                            accepted.insert(phi);
                        }
                        Ok(None) => {}
                        Err(e) => t.check(false, || format!("{:?} {:?}: {e}", g.vertices, phi.entries())),
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
                t.check(accepted == image, || format!("{:?} dims {dims:?}: inequalities and enumeration differ", g.vertices));
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
    Ok(())
}

fn dim1(t: &mut Tally, budget: u64) -> Result<(), Error> {
    let mut gs: Vec<Configuration> = Vec::new();
    for d in 2..=4 {
        gs.extend(samples::omega_faces(d));
    }
    gs.extend([samples::bowtie(), samples::edge_tree(), samples::square()]);
    gs.extend(samples::two_simplex_configs(3, 5));
    gs.extend(samples::two_simplex_configs(4, 5));
    for g in gs {
        let q = build_quiver(&g)?;
        let rep = r1_order_check(&q, 2, budget)?;
        t.check(rep.ok() && rep.strata == rep.faces, || format!("{:?}: {:?}", g.vertices, rep.issues));
        for f in all_faces(&q) {
            for p in [2u8, 3] {
                let ok = r1_rep_of_face(&q, &f, p).and_then(|m| r1_face_of(&q, &m)).map(|x| x.face == f);
                t.check(matches!(ok, Ok(true)), || format!("{:?}: face {f:?} over F_{p} does not round-trip", g.vertices));
            }
        }
    }
    Ok(())
}

fn kn(t: &mut Tally, nmax: usize) -> Result<(), Error> {
    for n in 2..=nmax {
        let rep = kn_instance(n)?;
        t.check(rep.formulas_hold, || format!("n={n}: degree formulas fail"));
        t.check(rep.concentrated, || format!("n={n}: some w_j is not concentrated on v_j"));
        t.check(rep.vbar_matches, || format!("n={n}: V(G(w0)) is {:?}", rep.vbar));
        t.check(rep.nested, || format!("n={n}: twist vectors {:?} do not nest", rep.twist_vectors));
    }
    Ok(())
}

fn projective(t: &mut Tally, budget: u64) -> Result<(), Error> {
    for (g, r) in weak_cases() {
        let q = build_quiver(&g)?;
        let ps: &[u8] = if q.n() <= 3 { &[2, 3] } else { &[2] };
        for &p in ps {
            let all = enumerate_subreps(&q, &vec![r; q.n()], p, budget)?;
            let phis: BTreeSet<RankVector> = all.iter().map(|m| rank_vector(m, &q)).collect();
            let tops: BTreeSet<&RankVector> = phis.iter().filter(|a| !phis.iter().any(|b| a.below(b))).collect();
            for m in &all {
                let phi = rank_vector(m, &q);
                let stuck = deform_step(m, &q)?.is_none();
                let proj = decompose(m, &q)?.is_projective(&q);
                let top = tops.contains(&phi);
                t.check(stuck == top && proj == top, || {
                    format!("{:?} r={r} p={p}: {:?} top={top} stuck={stuck} projective={proj}", g.vertices, phi.entries())
                });
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite_is_an_error() {
        assert!(run_suite("nope", &Params::default()).is_err());
    }

    #[test]
    fn quick_suites_pass() {
        for s in ["weyl", "parahoric", "kn"] {
            let rep = run_suite(s, &Params::default()).unwrap();
            assert!(rep.passed, "{rep:?}");
            assert!(rep.checks > 0);
        }
    }

    #[test]
    fn small_decomposition_run_is_reproducible() {
        let p = Params { trials: 20, ..Params::default() };
        let a = run_suite("decomposition", &p).unwrap();
        let b = run_suite("decomposition", &p).unwrap();
        assert!(a.passed);
        assert_eq!(a.checks, b.checks);
    }
}
