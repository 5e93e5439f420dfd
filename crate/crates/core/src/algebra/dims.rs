use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::poly::Monomial;
use super::presentation::Presentation;
use super::rewrite::{add_into, LinComb, RewriteSystem};
use crate::field::{FieldTag, Scalar};
use crate::Error;

/// Degree-wise dimensions. Only nonzero entries are stored; two profiles are
/// equal when their nonzero entries agree, whatever their truncations.
#[derive(Clone, Debug, Default)]
pub struct GradedDims {
    pub dims: BTreeMap<u32, usize>,
    pub truncation: u32,
}

impl GradedDims {
    pub fn new(truncation: u32) -> Self {
        GradedDims { dims: BTreeMap::new(), truncation }
    }

    pub fn from_pairs(truncation: u32, pairs: &[(u32, usize)]) -> Self {
        let mut g = GradedDims::new(truncation);
        for &(i, d) in pairs {
            g.add(i, d);
        }
        g
    }

    pub fn get(&self, i: u32) -> usize {
        self.dims.get(&i).copied().unwrap_or(0)
    }

    pub fn add(&mut self, i: u32, d: usize) {
        if d > 0 {
            *self.dims.entry(i).or_insert(0) += d;
        }
    }

    pub fn total(&self) -> usize {
        self.dims.values().sum()
    }

    pub fn top_degree(&self) -> Option<u32> {
        self.dims.keys().next_back().copied()
    }
}

impl PartialEq for GradedDims {
    fn eq(&self, other: &Self) -> bool {
        self.dims == other.dims
    }
}

impl Eq for GradedDims {}

impl Hash for GradedDims {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.dims.hash(state);
    }
}

impl PartialOrd for GradedDims {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GradedDims {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.dims.cmp(&other.dims)
    }
}

impl fmt::Display for GradedDims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.dims.iter().map(|(i, d)| format!("{i}:{d}")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

impl Serialize for GradedDims {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.dims.serialize(s)
    }
}

impl<'de> Deserialize<'de> for GradedDims {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let dims: BTreeMap<u32, usize> = BTreeMap::deserialize(d)?;
        let dims: BTreeMap<u32, usize> = dims.into_iter().filter(|(_, v)| *v > 0).collect();
        let truncation = dims.keys().next_back().copied().unwrap_or(0);
        Ok(GradedDims { dims, truncation })
    }
}

/// All monomials of degree at most `max_degree`.
pub fn monomials_up_to(degrees: &[u32], max_degree: u32) -> Vec<Monomial> {
    fn rec(degrees: &[u32], i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i == degrees.len() {
            out.push(Monomial(cur.clone()));
            return;
        }
        let mut e = 0;
        while e * degrees[i] <= left {
            cur.push(e);
            rec(degrees, i + 1, left - e * degrees[i], cur, out);
            cur.pop();
            e += 1;
        }
    }
    let mut out = Vec::new();
    rec(degrees, 0, max_degree, &mut Vec::new(), &mut out);
    out
}

/// All assignments of sample values to the given parameters.
pub fn parameter_samples(field: FieldTag, params: &[String]) -> Vec<BTreeMap<String, Scalar>> {
    let values = field.sample_values();
    let mut out = vec![BTreeMap::new()];
    for p in params {
        out = out
            .into_iter()
            .flat_map(|a| {
                values.iter().map(move |v| {
                    let mut b = a.clone();
                    b.insert(p.clone(), v.clone());
                    b
                })
            })
            .collect();
    }
    out
}

/// Dimensions of the quotient in degrees up to the truncation.
///
/// Normal-form monomials do not depend on parameter values because leading
/// coefficients are constants. What can depend on them is whether the rules are
/// confluent: an unresolved overlap is a nonzero ideal element written in normal
/// monomials, so it lowers the dimension at that parameter value.
pub fn poincare(pres: &Presentation) -> Result<GradedDims, Error> {
    let sys = RewriteSystem::new(pres);
    let degrees = pres.degrees();
    let mut dims = GradedDims::new(pres.truncation);
    for m in monomials_up_to(&degrees, pres.truncation) {
        if !sys.is_reducible(&m) {
            dims.add(m.degree(&degrees), 1);
        }
    }
    let residues = sys.critical_pair_residues(pres.truncation)?;
    if residues.is_empty() {
        return Ok(dims);
    }
    let params: Vec<String> = pres.params().into_iter().collect();
    let samples = parameter_samples(pres.field, &params);
    let confluent: Vec<bool> = samples
        .iter()
        .map(|s| residues.iter().all(|r| r.values().all(|c| num_traits::Zero::is_zero(&c.eval(pres.field, s)))))
        .collect();
    if confluent.iter().all(|&c| c) {
        Ok(dims)
    } else if confluent.iter().any(|&c| c) {
        Err(Error::ParamDependent)
    } else {
        Err(Error::NonConfluent)
    }
}

/// Largest `k` with `g^k` nonzero in the quotient (searched up to the truncation).
pub fn nilpotency_index(pres: &Presentation, generator: &str) -> Result<u32, Error> {
    let gi = pres
        .generator_index(generator)
        .ok_or_else(|| Error::InvalidInput(format!("`{generator}` is not a generator")))?;
    let sys = RewriteSystem::new(pres);
    let deg = pres.generators[gi].degree;
    let mut k = 0;
    while (k + 1) * deg <= pres.truncation {
        let m = Monomial::generator(pres.generators.len(), gi, k + 1);
        if sys.reduce_monomial(&m)?.is_empty() {
            break;
        }
        k += 1;
    }
    Ok(k)
}

fn relation_lincomb(pres: &Presentation, idx: usize) -> LinComb {
    let mut lc = LinComb::new();
    for t in &pres.relations[idx].terms {
        let c = match &t.coeff.param {
            Some(p) => super::poly::ParamPoly::param(pres.field, p, t.coeff.scalar.clone()),
            None => super::poly::ParamPoly::constant(pres.field, t.coeff.scalar.clone()),
        };
        add_into(pres.field, &mut lc, t.monomial.clone(), &c);
    }
    lc
}

/// Whether two presentations on the same generators define the same ideal.
/// Both rewriting systems must be confluent (checked).
pub fn same_ideal(a: &Presentation, b: &Presentation) -> Result<bool, Error> {
    if a.field != b.field || a.generators != b.generators {
        return Ok(false);
    }
    poincare(a)?;
    poincare(b)?;
    for (x, y) in [(a, b), (b, a)] {
        let sys = RewriteSystem::new(y);
        for i in 0..x.relations.len() {
            if !sys.reduce(relation_lincomb(x, i))?.is_empty() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
