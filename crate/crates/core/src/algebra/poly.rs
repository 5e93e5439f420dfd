//! Monomials and coefficients that are polynomials in the symbolic parameters.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Zero};

use crate::field::{fmt_scalar, int, is_negative, FieldTag, Scalar};

/// Exponent vector over the generators of a presentation, in generator order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(ngens: usize) -> Self {
        Monomial(vec![0; ngens])
    }

    pub fn generator(ngens: usize, i: usize, exp: u32) -> Self {
        let mut e = vec![0; ngens];
        e[i] = exp;
        Monomial(e)
    }

    pub fn degree(&self, degrees: &[u32]) -> u32 {
        self.0.iter().zip(degrees).map(|(e, d)| e * d).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`; caller checks divisibility.
    pub fn quotient(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(&self.0).map(|(a, b)| a - b).collect())
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    /// Graded-commutative sign of `self * other` relative to the sorted monomial.
    pub fn koszul_negative(&self, other: &Monomial, degrees: &[u32]) -> bool {
        let mut odd = 0u64;
        for i in 0..self.0.len() {
            for j in 0..i {
                odd += u64::from(self.0[i] * other.0[j] * degrees[i] * degrees[j]);
            }
        }
        odd % 2 == 1
    }

    pub fn render(&self, names: &[String]) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .zip(names)
            .filter(|(e, _)| **e > 0)
            .map(|(e, n)| if *e == 1 { n.clone() } else { format!("{n}^{e}") })
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

/// Degree first, then lexicographic with later generators dominant.
pub fn monomial_cmp(a: &Monomial, b: &Monomial, degrees: &[u32]) -> std::cmp::Ordering {
    a.degree(degrees)
        .cmp(&b.degree(degrees))
        .then_with(|| a.0.iter().rev().cmp(b.0.iter().rev()))
}

type ParamMonomial = Vec<(String, u32)>;

/// Polynomial in the symbolic parameters with field coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ParamPoly {
    terms: BTreeMap<ParamMonomial, Scalar>,
}

impl ParamPoly {
    pub fn zero() -> Self {
        ParamPoly::default()
    }

    pub fn constant(field: FieldTag, c: Scalar) -> Self {
        let mut p = ParamPoly::zero();
        p.push(field, Vec::new(), c);
        p
    }

    pub fn param(field: FieldTag, name: &str, c: Scalar) -> Self {
        let mut p = ParamPoly::zero();
        p.push(field, vec![(name.to_string(), 1)], c);
        p
    }

    fn push(&mut self, field: FieldTag, key: ParamMonomial, c: Scalar) {
        let entry = self.terms.entry(key.clone()).or_insert_with(Scalar::zero);
        *entry = field.add(entry, &c);
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_constant(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(Scalar::zero()),
            1 => self.terms.get(&Vec::new()).cloned(),
            _ => None,
        }
    }

    pub fn params(&self) -> BTreeSet<String> {
        self.terms.keys().flatten().map(|(n, _)| n.clone()).collect()
    }

    pub fn add(&self, field: FieldTag, other: &ParamPoly) -> ParamPoly {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.push(field, k.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, field: FieldTag, c: &Scalar) -> ParamPoly {
        let mut out = ParamPoly::zero();
        for (k, v) in &self.terms {
            out.push(field, k.clone(), field.mul(v, c));
        }
        out
    }

    pub fn mul(&self, field: FieldTag, other: &ParamPoly) -> ParamPoly {
        let mut out = ParamPoly::zero();
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                let mut merged: BTreeMap<String, u32> = ka.iter().cloned().collect();
                for (n, e) in kb {
                    *merged.entry(n.clone()).or_insert(0) += e;
                }
                out.push(field, merged.into_iter().collect(), field.mul(ca, cb));
            }
        }
        out
    }

    pub fn eval(&self, field: FieldTag, values: &BTreeMap<String, Scalar>) -> Scalar {
        let mut acc = Scalar::zero();
        for (k, c) in &self.terms {
            let mut t = c.clone();
            for (n, e) in k {
                let v = values.get(n).cloned().unwrap_or_else(Scalar::zero);
                for _ in 0..*e {
                    t = field.mul(&t, &v);
                }
            }
            acc = field.add(&acc, &t);
        }
        acc
    }
}

impl fmt::Display for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (k, c)) in self.terms.iter().enumerate() {
            let neg = is_negative(c);
            let abs = if neg { -c.clone() } else { c.clone() };
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let mut parts = Vec::new();
            if !abs.is_one() || k.is_empty() {
                parts.push(fmt_scalar(&abs));
            }
            for (n, e) in k {
                parts.push(if *e == 1 { n.clone() } else { format!("{n}^{e}") });
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

pub fn one_poly(field: FieldTag) -> ParamPoly {
    ParamPoly::constant(field, int(1))
}
