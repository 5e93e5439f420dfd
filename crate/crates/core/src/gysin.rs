//! Dimension chase through the Gysin sequence of `G -> X -> X/G` over Z2.
//!
//! With `h_i = dim H^i(X)` and `q_i = dim H^i(X/G)` the sequence reads
//!
//! ```text
//! ... -> q_{i-d-1} --cup u--> q_i --p*--> h_i --rho--> q_{i-d} --cup u--> q_{i+1} -> ...
//! ```
//!
//! Writing `a_i = rank p*`, `b_i = rank rho` and `c_j = rank(cup u: q_j -> q_{j+d+1})`,
//! exactness gives `q_j = (q_{j-d-1} - b_{j-1}) + (h_j - b_j)`, so the profile is
//! determined degree by degree once each `b_j` is chosen. Choices only arise where
//! `h_j != 0`.

use serde::{Deserialize, Serialize};

use crate::algebra::GradedDims;
use crate::{Error, FieldTag};

pub fn validate_dnm(d: u32, n: u32, m: u32) -> Result<(), Error> {
    if d != 1 && d != 3 {
        return Err(Error::InvalidInput(format!("d must be 1 or 3, got {d}")));
    }
    if n < 1 || n > m {
        return Err(Error::InvalidInput(format!("need 1 <= n <= m, got n={n}, m={m}")));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberProfile {
    pub d: u32,
    pub n: u32,
    pub m: u32,
    pub field: FieldTag,
    pub total_dims: GradedDims,
}

impl FiberProfile {
    /// Kunneth profile of `S^n x S^m`.
    pub fn product_of_spheres(d: u32, n: u32, m: u32, field: FieldTag) -> Result<Self, Error> {
        validate_dnm(d, n, m)?;
        let total_dims = GradedDims::from_pairs(n + m, &[(0, 1), (n, 1), (m, 1), (n + m, 1)]);
        Ok(FiberProfile { d, n, m, field, total_dims })
    }

    fn h(&self, i: usize) -> usize {
        u32::try_from(i).map_or(0, |i| self.total_dims.get(i))
    }

    /// Largest degree the chase has to look at.
    fn top(&self) -> usize {
        (self.n + self.m + self.d + 1) as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum BranchKind {
    #[serde(rename = "p*-trivial")]
    PStarTrivial,
    #[serde(rename = "p*-nontrivial")]
    PStarNontrivial,
    #[serde(rename = "p*-rank-one")]
    PStarRankOne,
    /// Which cyclic `Z2[u]`-summand of `H*(X/G)` starting at `degree` ends at `top`;
    /// recorded only when the degree counts alone do not pin this down.
    #[serde(rename = "truncation")]
    Truncation { top: u32 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BranchChoice {
    pub degree: u32,
    #[serde(flatten)]
    pub kind: BranchKind,
}

/// Ranks of the three maps of the sequence, indexed by the degree of their source.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GysinRanks {
    pub p_star: Vec<usize>,
    pub rho: Vec<usize>,
    pub cup: Vec<usize>,
}

/// A cyclic summand `Z2[u]/u^length` generated in `generator_degree`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CyclicSummand {
    pub generator_degree: u32,
    pub length: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChaseSolution {
    #[serde(rename = "branches")]
    pub scenario: Vec<BranchChoice>,
    pub profile: GradedDims,
    pub ranks: GysinRanks,
    pub summands: Vec<CyclicSummand>,
}

/// Partial assignment explored by the search.
#[derive(Clone, Debug)]
pub struct ChaseState {
    pub q: Vec<usize>,
    pub ranks: GysinRanks,
}

impl ChaseState {
    fn new(len: usize) -> Self {
        ChaseState {
            q: vec![0; len],
            ranks: GysinRanks { p_star: vec![0; len], rho: vec![0; len], cup: vec![0; len] },
        }
    }
}

/// Necessary congruence condition for a free action: one of n, m, m-n is d mod (d+1).
pub fn congruence_precheck(d: u32, n: u32, m: u32) -> bool {
    let k = d + 1;
    n % k == d || m % k == d || (m >= n && (m - n) % k == d)
}

pub fn chase(fp: &FiberProfile) -> Result<Vec<ChaseSolution>, Error> {
    validate_dnm(fp.d, fp.n, fp.m)?;
    if fp.field != FieldTag::Z2 {
        return Err(Error::UnsupportedCombination("the Gysin chase runs over Z2 only".into()));
    }
    let mut states = Vec::new();
    search(fp, 0, ChaseState::new(fp.top() + 1), &mut states);
    let mut out = Vec::new();
    for st in states {
        out.extend(solutions_from(fp, st));
    }
    out.sort_by(|a, b| a.scenario.cmp(&b.scenario));
    Ok(out)
}

fn search(fp: &FiberProfile, j: usize, mut st: ChaseState, out: &mut Vec<ChaseState>) {
    let (d, n, m) = (fp.d as usize, fp.n as usize, fp.m as usize);
    if j > fp.top() {
        out.push(st);
        return;
    }
    // image of cup u landing in q_j
    let carried = if j > d {
        let c = st.q[j - d - 1] - st.ranks.rho[j - 1];
        st.ranks.cup[j - d - 1] = c;
        c
    } else {
        0
    };
    let h = fp.h(j);
    let room = if j >= d { st.q[j - d] } else { 0 };
    for b in 0..=h.min(room) {
        let a = h - b;
        let q = carried + a;
        if j > n + m && q != 0 {
            continue;
        }
        if n < m && j == m && a > 0 && st.ranks.p_star[n] > 0 {
            continue;
        }
        if n == m && j == n && a > 1 {
            continue;
        }
        let mut next = st.clone();
        next.q[j] = q;
        next.ranks.rho[j] = b;
        next.ranks.p_star[j] = a;
        search(fp, j + 1, next, out);
    }
}

fn p_star_kind(fp: &FiberProfile, a: usize) -> BranchKind {
    match (a, fp.n == fp.m) {
        (0, _) => BranchKind::PStarTrivial,
        (_, true) => BranchKind::PStarRankOne,
        _ => BranchKind::PStarNontrivial,
    }
}

fn solutions_from(fp: &FiberProfile, st: ChaseState) -> Vec<ChaseSolution> {
    let d = fp.d as usize;
    let mut gens = Vec::new();
    let mut tops = Vec::new();
    for j in 0..st.q.len() {
        gens.extend(std::iter::repeat_n(j, st.ranks.p_star[j]));
        if j + d < st.q.len() {
            tops.extend(std::iter::repeat_n(j, st.ranks.rho[j + d]));
        }
    }
    let matchings = matchings(&gens, &tops, d + 1);
    let mut base = vec![BranchChoice { degree: fp.n, kind: p_star_kind(fp, st.ranks.p_star[fp.n as usize]) }];
    if fp.n < fp.m {
        base.push(BranchChoice { degree: fp.m, kind: p_star_kind(fp, st.ranks.p_star[fp.m as usize]) });
    }
    let ambiguous = matchings.len() > 1;
    let mut profile = GradedDims::new(fp.n + fp.m);
    for (i, q) in st.q.iter().enumerate() {
        profile.add(i as u32, *q);
    }
    matchings
        .into_iter()
        .map(|pairs| {
            let mut scenario = base.clone();
            if ambiguous {
                scenario.extend(pairs.iter().map(|&(g, t)| BranchChoice {
                    degree: g as u32,
                    kind: BranchKind::Truncation { top: t as u32 },
                }));
            }
            let summands = pairs
                .iter()
                .map(|&(g, t)| CyclicSummand { generator_degree: g as u32, length: ((t - g) / (d + 1) + 1) as u32 })
                .collect();
            ChaseSolution { scenario, profile: profile.clone(), ranks: st.ranks.clone(), summands }
        })
        .collect()
}

/// All ways to pair module generators with tops of cyclic summands
/// (top at or above its generator, in the same residue class).
fn matchings(gens: &[usize], tops: &[usize], period: usize) -> Vec<Vec<(usize, usize)>> {
    fn rec(
        gens: &[usize],
        tops: &mut Vec<usize>,
        period: usize,
        cur: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        let Some((&g, rest)) = gens.split_first() else {
            if tops.is_empty() {
                let mut v = cur.clone();
                v.sort();
                if !out.contains(&v) {
                    out.push(v);
                }
            }
            return;
        };
        for i in 0..tops.len() {
            let t = tops[i];
            if t >= g && (t - g).is_multiple_of(period) {
                tops.remove(i);
                cur.push((g, t));
                rec(rest, tops, period, cur, out);
                cur.pop();
                tops.insert(i, t);
            }
        }
    }
    let mut out = Vec::new();
    rec(gens, &mut tops.to_vec(), period, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// Re-walks the sequence and checks `ker = im` at every node, the rank bounds,
/// and that the summand decomposition reproduces the profile.
pub fn audit(fp: &FiberProfile, sol: &ChaseSolution) -> Result<(), String> {
    let d = fp.d as usize;
    let top = fp.top();
    let q = |i: isize| if i < 0 { 0 } else { sol.profile.get(i as u32) };
    let r = &sol.ranks;
    let get = |v: &Vec<usize>, i: isize| if i < 0 || i as usize >= v.len() { 0 } else { v[i as usize] };
    for i in 0..=(top as isize + d as isize + 1) {
        let h = fp.h(i as usize);
        let (a, b, c) = (get(&r.p_star, i), get(&r.rho, i), get(&r.cup, i));
        if a + b != h {
            return Err(format!("H^{i}(X): ker rho = {} but im p* = {a}", h as isize - b as isize));
        }
        if q(i) < c || q(i) - c != get(&r.rho, i + d as isize) {
            return Err(format!("q_{i}: ker cup = {} but im rho = {}", q(i) as isize - c as isize, get(&r.rho, i + d as isize)));
        }
        let incoming = get(&r.cup, i - d as isize - 1);
        if q(i) < a || q(i) - a != incoming {
            return Err(format!("q_{i}: ker p* = {} but im cup = {incoming}", q(i) as isize - a as isize));
        }
        if a > q(i).min(h) || b > h.min(q(i - d as isize)) || c > q(i).min(q(i + d as isize + 1)) {
            return Err(format!("rank bound violated in degree {i}"));
        }
    }
    if sol.profile.dims.keys().any(|&i| i > fp.n + fp.m) {
        return Err("nonzero cohomology above n+m".into());
    }
    let mut from_summands = GradedDims::new(fp.n + fp.m);
    for s in &sol.summands {
        for k in 0..s.length {
            from_summands.add(s.generator_degree + k * (fp.d + 1), 1);
        }
    }
    if from_summands != sol.profile {
        return Err("summands do not reproduce the profile".into());
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(d: u32, n: u32, m: u32) -> Vec<ChaseSolution> {
        chase(&FiberProfile::product_of_spheres(d, n, m, FieldTag::Z2).unwrap()).unwrap()
    }

    fn dims(pairs: &[(u32, usize)]) -> GradedDims {
        GradedDims::from_pairs(0, pairs)
    }

    #[test]
    fn worked_cases() {
        let s = run(3, 5, 7);
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].profile, dims(&[(0, 1), (4, 1), (5, 1), (9, 1)]));
        assert!(run(3, 1, 2).is_empty());
        let s = run(1, 1, 1);
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].profile, dims(&[(0, 1), (1, 1)]));
        let s = run(3, 4, 7);
        assert_eq!(s.len(), 2);
        assert_eq!(s[0].profile, dims(&[(0, 1), (4, 2), (8, 1)]));
        assert_eq!(s[0].profile, s[1].profile);
        assert_ne!(s[0].summands, s[1].summands);
    }

    #[test]
    fn hand_checked_emptiness() {
        for (n, m) in [(2, 4), (5, 5), (1, 4)] {
            assert!(run(3, n, m).is_empty(), "({n},{m})");
        }
        let s = run(3, 3, 6);
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].profile, dims(&[(0, 1), (6, 1)]));
        let s = run(1, 1, 2);
        let profiles: Vec<_> = s.iter().map(|x| x.profile.clone()).collect();
        assert!(profiles.contains(&dims(&[(0, 1), (2, 1)])));
        assert!(profiles.contains(&dims(&[(0, 1), (1, 1), (2, 1)])));
    }

    #[test]
    fn precheck_examples() {
        assert!(congruence_precheck(3, 5, 7));
        assert!(!congruence_precheck(3, 1, 2));
        assert!(!congruence_precheck(1, 2, 4));
    }

    #[test]
    fn rational_chase_is_refused() {
        let fp = FiberProfile::product_of_spheres(3, 3, 5, FieldTag::Q).unwrap();
        assert!(matches!(chase(&fp), Err(Error::UnsupportedCombination(_))));
    }
}
