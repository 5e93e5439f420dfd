//! Index, co-index and cohomological index of free S^d-spaces, and the
//! Borsuk-Ulam type consequences.
//!
//! Index values are intervals: the lower end comes from equivariant maps that
//! are actually exhibited, the upper end from the cohomological index.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::algebra::{nilpotency_index, Presentation};
use crate::classify::Classifier;
use crate::{Error, FieldTag};

/// `ind = co-ind = k` for the standard action on `S^((d+1)k+d)`.
pub fn ind_standard_sphere(d: u32, total_dim: u32) -> Result<u32, Error> {
    if (d != 1 && d != 3) || total_dim % (d + 1) != d {
        return Err(Error::BadDimension { d, dim: total_dim });
    }
    Ok(total_dim / (d + 1))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpaceDescriptor {
    StandardSphere { d: u32, total_dim: u32 },
    ProductSpheres { d: u32, n: u32, m: u32, field: FieldTag },
    /// Orbit space given by a presentation; `generator` names the characteristic class.
    OrbitPresentation { presentation: Presentation, generator: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CohomIndex {
    Value(u32),
    /// One value per classification family (keyed by source case).
    ByFamily(BTreeMap<String, u32>),
}

impl CohomIndex {
    pub fn values(&self) -> BTreeSet<u32> {
        match self {
            CohomIndex::Value(v) => [*v].into(),
            CohomIndex::ByFamily(m) => m.values().copied().collect(),
        }
    }
}

pub fn cohom_index(space: &SpaceDescriptor) -> Result<CohomIndex, Error> {
    cohom_index_with(Classifier::embedded(), space)
}

pub fn cohom_index_with(classifier: &Classifier, space: &SpaceDescriptor) -> Result<CohomIndex, Error> {
    match space {
        SpaceDescriptor::StandardSphere { d, total_dim } => Ok(CohomIndex::Value(ind_standard_sphere(*d, *total_dim)?)),
        SpaceDescriptor::ProductSpheres { d, n, m, field } => {
            let mut out = BTreeMap::new();
            for f in classifier.classify(*d, *n, *m, *field)? {
                out.insert(f.source_case.clone(), nilpotency_index(&f.template, "u")?);
            }
            Ok(CohomIndex::ByFamily(out))
        }
        SpaceDescriptor::OrbitPresentation { presentation, generator } => {
            Ok(CohomIndex::Value(nilpotency_index(presentation, generator)?))
        }
    }
}

/// No equivariant map `S^((d+1)k+d) -> X` exists once `k` exceeds the cohomological index.
pub fn borsuk_ulam_forbidden(_d: u32, k: u32, cohom_index: u32) -> bool {
    k > cohom_index
}

/// Upper bound for the co-index of a join; `-1` stands for the empty space.
pub fn coind_join_bound(a: i64, b: i64) -> Result<i64, Error> {
    if a < -1 || b < -1 {
        return Err(Error::InvalidInput(format!("co-index must be at least -1, got {a} and {b}")));
    }
    Ok(a + b + 1)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Justification {
    pub value: i64,
    pub tag: String,
}

impl Justification {
    pub fn new(value: i64, tag: &str) -> Self {
        Justification { value, tag: tag.to_string() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexReport {
    pub ind_lower: Option<i64>,
    pub ind_upper: i64,
    pub cohom_index: i64,
    pub coind_lower: Option<i64>,
    pub justification: Vec<Justification>,
}

impl IndexReport {
    /// `ind_upper` is the cohomological index; a lower bound above it is refused.
    pub fn new(
        cohom_index: i64,
        ind_lower: Option<i64>,
        coind_lower: Option<i64>,
        mut justification: Vec<Justification>,
    ) -> Result<Self, Error> {
        if cohom_index < -1 {
            return Err(Error::InvalidInput(format!("cohomological index {cohom_index} below -1")));
        }
        if let Some(l) = ind_lower {
            if l > cohom_index {
                return Err(Error::InvalidInput(format!(
                    "index lower bound {l} exceeds the cohomological index {cohom_index}"
                )));
            }
        }
        justification.push(Justification::new(cohom_index, "ind<=cohom-ind"));
        Ok(IndexReport { ind_lower, ind_upper: cohom_index, cohom_index, coind_lower, justification })
    }

    pub fn standard_sphere(d: u32, k: u32) -> Self {
        let k = i64::from(k);
        let _ = d;
        IndexReport {
            ind_lower: Some(k),
            ind_upper: k,
            cohom_index: k,
            coind_lower: Some(k),
            justification: vec![
                Justification::new(k, "standard-sphere"),
                Justification::new(k, "standard-sphere co-index"),
            ],
        }
    }

    /// Records an equivariant map `source -> self`. Index is monotone along
    /// such maps, so the source's lower bound becomes ours; a source whose
    /// known index already exceeds our upper bound is refused.
    pub fn with_map_from(mut self, source: &IndexReport, description: &str) -> Result<Self, Error> {
        let Some(l) = source.ind_lower else {
            return Ok(self);
        };
        if l > self.ind_upper {
            return Err(Error::InvalidInput(format!(
                "map {description}: source index {l} exceeds target bound {}",
                self.ind_upper
            )));
        }
        if self.ind_lower.is_none_or(|x| x < l) {
            self.ind_lower = Some(l);
        }
        self.justification.push(Justification::new(l, &format!("equivariant map {description}")));
        Ok(self)
    }

    /// The index when the two bounds meet.
    pub fn pinned(&self) -> Option<i64> {
        (self.ind_lower == Some(self.ind_upper)).then_some(self.ind_upper)
    }

    /// Smallest `k` for which no equivariant map from `S^((d+1)k+d)` exists.
    pub fn forbidden_from(&self) -> i64 {
        self.ind_upper + 1
    }
}

/// Reports for a space: one for a sphere or presentation, one per family for a product.
pub fn index_reports(space: &SpaceDescriptor) -> Result<Vec<(Option<String>, IndexReport)>, Error> {
    index_reports_with(Classifier::embedded(), space)
}

pub fn index_reports_with(
    classifier: &Classifier,
    space: &SpaceDescriptor,
) -> Result<Vec<(Option<String>, IndexReport)>, Error> {
    match space {
        SpaceDescriptor::StandardSphere { d, total_dim } => {
            Ok(vec![(None, IndexReport::standard_sphere(*d, ind_standard_sphere(*d, *total_dim)?))])
        }
        SpaceDescriptor::OrbitPresentation { .. } => {
            let ci = i64::from(*cohom_index_with(classifier, space)?.values().iter().next().expect("one value"));
            Ok(vec![(None, IndexReport::new(ci, None, None, vec![Justification::new(ci, "cohom-index")])?)])
        }
        SpaceDescriptor::ProductSpheres { .. } => {
            let CohomIndex::ByFamily(map) = cohom_index_with(classifier, space)? else { unreachable!() };
            map.into_iter()
                .map(|(fam, ci)| {
                    let ci = i64::from(ci);
                    let r = IndexReport::new(ci, None, None, vec![Justification::new(ci, &format!("cohom-index of {fam}"))])?;
                    Ok((Some(fam), r))
                })
                .collect()
        }
    }
}
