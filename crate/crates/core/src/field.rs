//! Coefficient fields and the small dense linear algebra the engines need.
//!
//! Scalars are always exact rationals; over Z2 they are kept reduced to 0 or 1.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::Error;

pub type Scalar = BigRational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FieldTag {
    #[serde(rename = "z2")]
    Z2,
    #[serde(rename = "q")]
    Q,
}

impl fmt::Display for FieldTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldTag::Z2 => write!(f, "Z2"),
            FieldTag::Q => write!(f, "Q"),
        }
    }
}

impl std::str::FromStr for FieldTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().as_str() {
            "z2" => Ok(FieldTag::Z2),
            "q" => Ok(FieldTag::Q),
            other => Err(Error::Parse(format!("unknown field `{other}` (expected z2 or q)"))),
        }
    }
}

pub fn int(v: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(v))
}

impl FieldTag {
    /// Brings an exact rational into the field. Over Z2 the denominator must be odd.
    pub fn element(self, x: Scalar) -> Result<Scalar, Error> {
        match self {
            FieldTag::Q => Ok(x),
            FieldTag::Z2 => {
                let two = BigInt::from(2);
                if (x.denom() % &two).is_zero() {
                    return Err(Error::Parse(format!("{x} is not defined over Z2")));
                }
                if (x.numer() % &two).is_zero() {
                    Ok(Scalar::zero())
                } else {
                    Ok(Scalar::one())
                }
            }
        }
    }

    /// Reduction for values already known to live in the field's image.
    pub fn reduce(self, x: Scalar) -> Scalar {
        self.element(x).expect("scalar with even denominator over Z2")
    }

    pub fn add(self, a: &Scalar, b: &Scalar) -> Scalar {
        self.reduce(a + b)
    }

    pub fn sub(self, a: &Scalar, b: &Scalar) -> Scalar {
        self.reduce(a - b)
    }

    pub fn mul(self, a: &Scalar, b: &Scalar) -> Scalar {
        self.reduce(a * b)
    }

    pub fn neg(self, a: &Scalar) -> Scalar {
        self.reduce(-a.clone())
    }

    pub fn inv(self, a: &Scalar) -> Scalar {
        assert!(!a.is_zero(), "inverse of zero");
        match self {
            FieldTag::Z2 => Scalar::one(),
            FieldTag::Q => a.recip(),
        }
    }

    /// Samples used when checking that a parametrised presentation has
    /// parameter-independent dimensions.
    pub fn sample_values(self) -> Vec<Scalar> {
        match self {
            FieldTag::Z2 => vec![int(0), int(1)],
            FieldTag::Q => vec![int(0), int(1), int(-1), int(2)],
        }
    }
}

pub fn fmt_scalar(x: &Scalar) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn is_negative(x: &Scalar) -> bool {
    x.is_negative()
}

pub fn parse_scalar(s: &str) -> Result<Scalar, Error> {
    let bad = || Error::Parse(format!("bad scalar `{s}`"));
    let (a, b) = s.trim().split_once('/').unwrap_or((s.trim(), "1"));
    let a: BigInt = a.trim().parse().map_err(|_| bad())?;
    let b: BigInt = b.trim().parse().map_err(|_| bad())?;
    if b.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(a, b))
}

/// Serde adapter writing scalars as strings such as `-3/2`.
pub mod scalar_str {
    use super::{fmt_scalar, parse_scalar, Scalar};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Scalar, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_scalar(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Scalar, D::Error> {
        let s = String::deserialize(d)?;
        parse_scalar(&s).map_err(serde::de::Error::custom)
    }
}

/// Row-reduces `rows` in place and returns the pivot column of each surviving row.
pub fn rref(field: FieldTag, rows: &mut Vec<Vec<Scalar>>) -> Vec<usize> {
    let cols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = field.inv(&rows[r][c]);
        for x in rows[r].iter_mut() {
            *x = field.mul(x, &inv);
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in 0..cols {
                    let t = field.mul(&f, &rows[r][j]);
                    rows[i][j] = field.sub(&rows[i][j], &t);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

pub fn rank(field: FieldTag, rows: &[Vec<Scalar>]) -> usize {
    let mut rows = rows.to_vec();
    rref(field, &mut rows).len()
}

/// Dense linear map `F^cols -> F^rows`, stored as a list of rows.
#[derive(Clone, Debug)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vec<Scalar>>,
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![vec![Scalar::zero(); cols]; rows] }
    }

    pub fn apply(&self, field: FieldTag, v: &[Scalar]) -> Vec<Scalar> {
        self.data
            .iter()
            .map(|row| {
                row.iter()
                    .zip(v)
                    .fold(Scalar::zero(), |acc, (a, b)| field.add(&acc, &field.mul(a, b)))
            })
            .collect()
    }
}

/// A subspace of `F^ambient`, kept as a reduced row-echelon basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace {
    pub field: FieldTag,
    pub ambient: usize,
    basis: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(field: FieldTag, ambient: usize) -> Self {
        Subspace { field, ambient, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(field: FieldTag, ambient: usize) -> Self {
        let rows = (0..ambient)
            .map(|i| (0..ambient).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }).collect())
            .collect();
        Self::span(field, ambient, rows)
    }

    pub fn span(field: FieldTag, ambient: usize, vectors: Vec<Vec<Scalar>>) -> Self {
        let mut rows: Vec<Vec<Scalar>> = vectors.into_iter().filter(|v| v.iter().any(|x| !x.is_zero())).collect();
        let pivots = rref(field, &mut rows);
        Subspace { field, ambient, basis: rows, pivots }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.basis
    }

    /// Reduces `v` against the echelon basis; the result is zero iff `v` lies in the span.
    pub fn residue(&self, v: &[Scalar]) -> Vec<Scalar> {
        let f = self.field;
        let mut w = v.to_vec();
        for (row, &c) in self.basis.iter().zip(&self.pivots) {
            if !w[c].is_zero() {
                let k = w[c].clone();
                for j in 0..w.len() {
                    w[j] = f.sub(&w[j], &f.mul(&k, &row[j]));
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.residue(v).iter().all(Zero::is_zero)
    }

    pub fn contains_space(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut vs = self.basis.clone();
        vs.extend(other.basis.iter().cloned());
        Subspace::span(self.field, self.ambient, vs)
    }

    pub fn image(&self, map: &Matrix) -> Subspace {
        let vs = self.basis.iter().map(|v| map.apply(self.field, v)).collect();
        Subspace::span(self.field, map.rows, vs)
    }

    /// `{ z in self : map(z) in target }`.
    pub fn preimage_within(&self, map: &Matrix, target: &Subspace) -> Subspace {
        let f = self.field;
        let k = self.basis.len();
        // rows: [ residue(map z_i) | e_i ]; eliminating the left block leaves kernel combinations.
        let mut rows: Vec<Vec<Scalar>> = self
            .basis
            .iter()
            .enumerate()
            .map(|(i, z)| {
                let mut row = target.residue(&map.apply(f, z));
                row.extend((0..k).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }));
                row
            })
            .collect();
        rref(f, &mut rows);
        let left = map.rows;
        let kernel = rows
            .into_iter()
            .filter(|row| row[..left].iter().all(Zero::is_zero))
            .map(|row| {
                let coeffs = &row[left..];
                (0..self.ambient)
                    .map(|j| {
                        coeffs
                            .iter()
                            .zip(&self.basis)
                            .fold(Scalar::zero(), |acc, (c, z)| f.add(&acc, &f.mul(c, &z[j])))
                    })
                    .collect()
            })
            .collect();
        Subspace::span(f, self.ambient, kernel)
    }

    /// Basis vectors of `self` spanning a complement of `sub` inside `self`.
    pub fn complement_of(&self, sub: &Subspace) -> Vec<Vec<Scalar>> {
        let mut acc = sub.clone();
        let mut out = Vec::new();
        for v in &self.basis {
            if !acc.contains(v) {
                out.push(v.clone());
                acc = acc.sum(&Subspace::span(self.field, self.ambient, vec![v.clone()]));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z2_reduction() {
        let f = FieldTag::Z2;
        assert_eq!(f.add(&int(1), &int(1)), int(0));
        assert_eq!(f.neg(&int(1)), int(1));
        assert!(f.element(BigRational::new(1.into(), 2.into())).is_err());
        assert_eq!(f.element(BigRational::new(3.into(), 5.into())).unwrap(), int(1));
    }

    #[test]
    fn preimage_and_rank() {
        let f = FieldTag::Q;
        // map (a, b) -> a + b
        let map = Matrix { rows: 1, cols: 2, data: vec![vec![int(1), int(1)]] };
        let full = Subspace::full(f, 2);
        let ker = full.preimage_within(&map, &Subspace::zero(f, 1));
        assert_eq!(ker.dim(), 1);
        assert!(ker.contains(&[int(1), int(-1)]));
        assert!(!ker.contains(&[int(1), int(1)]));
        assert_eq!(full.image(&map).dim(), 1);
        let fz = FieldTag::Z2;
        let kz = Subspace::full(fz, 2).preimage_within(&map, &Subspace::zero(fz, 1));
        assert!(kz.contains(&[int(1), int(1)]));
        assert_eq!(rank(f, &[vec![int(1), int(2)], vec![int(2), int(4)]]), 1);
    }
}
