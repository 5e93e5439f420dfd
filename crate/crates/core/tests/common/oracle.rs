//! Brute-force reference for quotient algebras: linear algebra on the full
//! monomial basis of each degree, no rewriting.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use orbcoh::algebra::Presentation;
use orbcoh::FieldTag;

#[derive(Clone, Debug, PartialEq)]
enum Elt {
    Z2(u8),
    Q(BigRational),
}

impl Elt {
    fn from_rational(field: FieldTag, x: &BigRational) -> Elt {
        match field {
            FieldTag::Z2 => {
                let n = (x.numer() % BigInt::from(2)).is_zero();
                Elt::Z2(if n { 0 } else { 1 })
            }
            FieldTag::Q => Elt::Q(x.clone()),
        }
    }
    fn zero(field: FieldTag) -> Elt {
        match field {
            FieldTag::Z2 => Elt::Z2(0),
            FieldTag::Q => Elt::Q(BigRational::zero()),
        }
    }
    fn one(field: FieldTag) -> Elt {
        match field {
            FieldTag::Z2 => Elt::Z2(1),
            FieldTag::Q => Elt::Q(BigRational::one()),
        }
    }
    fn is_zero(&self) -> bool {
        match self {
            Elt::Z2(a) => *a == 0,
            Elt::Q(a) => a.is_zero(),
        }
    }
    fn add(&self, o: &Elt) -> Elt {
        match (self, o) {
            (Elt::Z2(a), Elt::Z2(b)) => Elt::Z2(a ^ b),
            (Elt::Q(a), Elt::Q(b)) => Elt::Q(a + b),
            _ => unreachable!(),
        }
    }
    fn mul(&self, o: &Elt) -> Elt {
        match (self, o) {
            (Elt::Z2(a), Elt::Z2(b)) => Elt::Z2(a & b),
            (Elt::Q(a), Elt::Q(b)) => Elt::Q(a * b),
            _ => unreachable!(),
        }
    }
    fn neg(&self) -> Elt {
        match self {
            Elt::Z2(a) => Elt::Z2(*a),
            Elt::Q(a) => Elt::Q(-a.clone()),
        }
    }
    fn inv(&self) -> Elt {
        match self {
            Elt::Z2(_) => Elt::Z2(1),
            Elt::Q(a) => Elt::Q(a.recip()),
        }
    }
}

/// Exponent vectors of the free graded-commutative algebra in one degree.
fn basis(field: FieldTag, degrees: &[u32], deg: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; degrees.len()];
    fn go(field: FieldTag, degrees: &[u32], i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == degrees.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let mut e = 0;
        while e * degrees[i] <= left {
            if field == FieldTag::Q && degrees[i] % 2 == 1 && e >= 2 {
                break;
            }
            cur[i] = e;
            go(field, degrees, i + 1, left - e * degrees[i], cur, out);
            e += 1;
        }
        cur[i] = 0;
    }
    go(field, degrees, 0, deg, &mut cur, &mut out);
    out
}

/// Product of two sorted monomials: `None` if it vanishes, else (monomial, negative?).
fn product(field: FieldTag, degrees: &[u32], a: &[u32], b: &[u32]) -> Option<(Vec<u32>, bool)> {
    let c: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
    if field == FieldTag::Q && c.iter().zip(degrees).any(|(e, d)| d % 2 == 1 && *e >= 2) {
        return None;
    }
    // move each factor of b leftwards past the higher-index factors of a
    let mut swaps = 0u64;
    for j in 0..b.len() {
        for i in (j + 1)..a.len() {
            swaps += u64::from(b[j] * a[i] * degrees[j] * degrees[i]);
        }
    }
    Some((c, swaps % 2 == 1))
}

struct Echelon {
    rows: Vec<Vec<Elt>>,
    pivots: Vec<usize>,
}

impl Echelon {
    fn build(field: FieldTag, mut rows: Vec<Vec<Elt>>, width: usize) -> Echelon {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..width {
            let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
            rows.swap(r, p);
            let inv = rows[r][c].inv();
            rows[r] = rows[r].iter().map(|x| x.mul(&inv)).collect();
            for i in 0..rows.len() {
                if i != r && !rows[i][c].is_zero() {
                    let f = rows[i][c].clone();
                    for j in 0..width {
                        let t = f.mul(&rows[r][j]).neg();
                        rows[i][j] = rows[i][j].add(&t);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        rows.truncate(r);
        let _ = field;
        Echelon { rows, pivots }
    }

    fn reduce(&self, v: &mut [Elt]) {
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            if !v[c].is_zero() {
                let f = v[c].clone();
                for j in 0..v.len() {
                    let t = f.mul(&row[j]).neg();
                    v[j] = v[j].add(&t);
                }
            }
        }
    }
}

pub struct OracleResult {
    pub dims: BTreeMap<u32, usize>,
    pub nilpotency: u32,
}

/// Dimensions of the quotient up to its truncation, and the nilpotency of
/// `generator` read off by iterating its multiplication table from 1.
pub fn brute_force(pres: &Presentation, values: &BTreeMap<String, BigRational>, generator: &str) -> OracleResult {
    let field = pres.field;
    let degrees: Vec<u32> = pres.generators.iter().map(|g| g.degree).collect();
    let gi = pres.generators.iter().position(|g| g.name == generator).expect("generator");
    // relations as (exponents, coefficient) lists with parameters substituted
    let rels: Vec<(u32, Vec<(Vec<u32>, Elt)>)> = pres
        .relations
        .iter()
        .map(|r| {
            let terms: Vec<(Vec<u32>, Elt)> = r
                .terms
                .iter()
                .map(|t| {
                    let mut c = t.coeff.scalar.clone();
                    if let Some(p) = &t.coeff.param {
                        c *= values.get(p).cloned().unwrap_or_else(BigRational::zero);
                    }
                    (t.monomial.0.clone(), Elt::from_rational(field, &c))
                })
                .collect();
            let deg = terms[0].0.iter().zip(&degrees).map(|(e, d)| e * d).sum();
            (deg, terms)
        })
        .collect();

    let mut dims = BTreeMap::new();
    let mut echelons = BTreeMap::new();
    let mut bases = BTreeMap::new();
    for deg in 0..=pres.truncation {
        let b = basis(field, &degrees, deg);
        let index: BTreeMap<Vec<u32>, usize> = b.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let mut rows = Vec::new();
        for (rdeg, terms) in &rels {
            if *rdeg > deg {
                continue;
            }
            for w in basis(field, &degrees, deg - rdeg) {
                let mut row = vec![Elt::zero(field); b.len()];
                for (m, c) in terms {
                    if let Some((p, neg)) = product(field, &degrees, &w, m) {
                        let c = if neg { c.neg() } else { c.clone() };
                        let k = index[&p];
                        row[k] = row[k].add(&c);
                    }
                }
                rows.push(row);
            }
        }
        let ech = Echelon::build(field, rows, b.len());
        let d = b.len() - ech.rows.len();
        if d > 0 {
            dims.insert(deg, d);
        }
        echelons.insert(deg, ech);
        bases.insert(deg, b);
    }

    // multiplication by the generator on quotient coordinates (vectors on the full
    // monomial basis, reduced modulo the ideal)
    let gdeg = degrees[gi];
    let mut g = vec![0u32; degrees.len()];
    g[gi] = 1;
    let mut current = vec![Elt::one(field)];
    echelons[&0].reduce(&mut current);
    let mut k = 0;
    let mut deg = 0;
    while current.iter().any(|x| !x.is_zero()) && deg + gdeg <= pres.truncation {
        let from = &bases[&deg];
        let to = &bases[&(deg + gdeg)];
        let mut next = vec![Elt::zero(field); to.len()];
        for (i, m) in from.iter().enumerate() {
            if current[i].is_zero() {
                continue;
            }
            if let Some((p, neg)) = product(field, &degrees, m, &g) {
                let j = to.iter().position(|x| *x == p).expect("basis");
                let c = if neg { current[i].neg() } else { current[i].clone() };
                next[j] = next[j].add(&c);
            }
        }
        echelons[&(deg + gdeg)].reduce(&mut next);
        deg += gdeg;
        current = next;
        if current.iter().any(|x| !x.is_zero()) {
            k += 1;
        }
    }
    OracleResult { dims, nilpotency: k }
}
