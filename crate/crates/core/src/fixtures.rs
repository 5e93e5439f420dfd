//! The fixture corpus: one JSON file per classification theorem plus one for
//! the worked examples. Copies are compiled in; `ORBCOH_FIXTURES` points at a
//! directory holding replacements.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::algebra::GradedDims;
use crate::template::{eval_bool, eval_int, Env, FamilyTemplate, GeneratorTemplate};
use crate::{Error, FieldTag};

pub const FIXTURES_ENV: &str = "ORBCOH_FIXTURES";

const THEOREM_FILES: [(&str, &str); 3] = [
    ("s3_mod2.json", include_str!("../fixtures/s3_mod2.json")),
    ("s1_mod2.json", include_str!("../fixtures/s1_mod2.json")),
    ("s3_rational.json", include_str!("../fixtures/s3_rational.json")),
];
const EXAMPLES_FILE: (&str, &str) = ("examples.json", include_str!("../fixtures/examples.json"));

/// Degrees `i` in `[from, below)` with `i = residue (mod d+1)` each carry `dim`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    pub dim: usize,
    pub residue: String,
    pub from: String,
    pub below: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ProfileSpec {
    /// `"template"`: the profile is whatever the family template gives.
    Template(String),
    Table(Vec<Segment>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseRow {
    pub source: String,
    pub when: String,
    pub families: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<ProfileSpec>,
    /// Applies only where no ordinary row does.
    #[serde(default)]
    pub otherwise: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremFixture {
    pub theorem: String,
    pub title: String,
    pub d: u32,
    pub field: FieldTag,
    pub families: Vec<FamilyTemplate>,
    pub cases: Vec<CaseRow>,
}

impl TheoremFixture {
    pub fn family(&self, tag: &str) -> Option<&FamilyTemplate> {
        self.families.iter().find(|f| f.tag == tag)
    }

    /// Rows covering `env`: the ordinary rows that hold, or failing those the
    /// `otherwise` rows that hold.
    pub fn rows_for(&self, env: &Env) -> Result<Vec<&CaseRow>, Error> {
        let mut ordinary = Vec::new();
        let mut fallback = Vec::new();
        for row in &self.cases {
            if eval_bool(&row.when, env)? {
                if row.otherwise {
                    fallback.push(row);
                } else {
                    ordinary.push(row);
                }
            }
        }
        Ok(if ordinary.is_empty() { fallback } else { ordinary })
    }

    fn check(&self) -> Result<(), Error> {
        let bad = |msg: String| Err(Error::Fixture(format!("{}: {msg}", self.theorem)));
        if self.d != 1 && self.d != 3 {
            return bad(format!("d = {}", self.d));
        }
        for row in &self.cases {
            for tag in &row.families {
                if self.family(tag).is_none() {
                    return bad(format!("row `{}` names unknown family `{tag}`", row.source));
                }
            }
            if !row.families.is_empty() && row.profile.is_none() {
                return bad(format!("row `{}` lists families but no profile", row.source));
            }
            if let Some(ProfileSpec::Template(s)) = &row.profile {
                if s != "template" {
                    return bad(format!("row `{}`: profile `{s}`", row.source));
                }
            }
        }
        for f in &self.families {
            if let Some(other) = &f.same_as_when_n_eq_m {
                if self.family(other).is_none() {
                    return bad(format!("family `{}` refers to unknown `{other}`", f.tag));
                }
            }
        }
        Ok(())
    }
}

pub fn table_profile(segments: &[Segment], d: u32, env: &Env, truncation: u32) -> Result<GradedDims, Error> {
    let period = i64::from(d) + 1;
    let mut dims = GradedDims::new(truncation);
    for s in segments {
        let residue = eval_int(&s.residue, env)?.rem_euclid(period);
        let (from, below) = (eval_int(&s.from, env)?, eval_int(&s.below, env)?);
        for i in from.max(0)..below {
            if i.rem_euclid(period) == residue {
                dims.add(i as u32, s.dim);
            }
        }
    }
    Ok(dims)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExampleRing {
    pub label: String,
    pub generators: Vec<GeneratorTemplate>,
    pub relations: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExampleIndex {
    pub cohom_index: String,
    pub ind_lower: String,
    pub map: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExampleFixture {
    pub name: String,
    pub description: String,
    pub field: FieldTag,
    pub d_values: Vec<u32>,
    /// Inclusive ranges of the example's own variables.
    pub ranges: BTreeMap<String, [i64; 2]>,
    /// Sphere dimensions of the fibre, in either order.
    pub fiber: [String; 2],
    pub rings: Vec<ExampleRing>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index: Option<ExampleIndex>,
}

/// One concrete instance of an example.
#[derive(Clone, Debug)]
pub struct ExampleInstance {
    pub env: Env,
    pub d: u32,
    pub n: u32,
    pub m: u32,
}

impl ExampleFixture {
    /// Every assignment of the example's variables, in lexicographic order.
    pub fn instances(&self) -> Result<Vec<ExampleInstance>, Error> {
        let mut envs: Vec<Env> = self
            .d_values
            .iter()
            .map(|&d| [("d".to_string(), i64::from(d))].into_iter().collect())
            .collect();
        for (var, [lo, hi]) in &self.ranges {
            envs = envs
                .into_iter()
                .flat_map(|e| {
                    (*lo..=*hi).map(move |v| {
                        let mut e = e.clone();
                        e.insert(var.clone(), v);
                        e
                    })
                })
                .collect();
        }
        envs.into_iter()
            .map(|env| {
                let a = eval_int(&self.fiber[0], &env)?;
                let b = eval_int(&self.fiber[1], &env)?;
                let (n, m) = (a.min(b), a.max(b));
                if n < 1 {
                    return Err(Error::Fixture(format!("{}: fibre sphere of dimension {n}", self.name)));
                }
                Ok(ExampleInstance { d: env["d"] as u32, n: n as u32, m: m as u32, env })
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExamplesFile {
    pub examples: Vec<ExampleFixture>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixtureCorpus {
    pub theorems: Vec<TheoremFixture>,
    pub examples: Vec<ExampleFixture>,
}

fn parse<T: for<'de> Deserialize<'de>>(name: &str, text: &str) -> Result<T, Error> {
    serde_json::from_str(text).map_err(|e| Error::Fixture(format!("{name}: {e}")))
}

impl FixtureCorpus {
    fn from_texts(theorems: &[(String, String)], examples: (String, String)) -> Result<Self, Error> {
        let theorems = theorems
            .iter()
            .map(|(name, text)| {
                let t: TheoremFixture = parse(name, text)?;
                t.check()?;
                Ok(t)
            })
            .collect::<Result<Vec<_>, Error>>()?;
        let examples = parse::<ExamplesFile>(&examples.0, &examples.1)?.examples;
        Ok(FixtureCorpus { theorems, examples })
    }

    pub fn embedded() -> Self {
        let own = |(a, b): (&str, &str)| (a.to_string(), b.to_string());
        let theorems: Vec<_> = THEOREM_FILES.into_iter().map(own).collect();
        Self::from_texts(&theorems, own(EXAMPLES_FILE)).expect("embedded fixtures are valid")
    }

    /// Reads the four corpus files from `dir`.
    pub fn from_dir(dir: &Path) -> Result<Self, Error> {
        let read = |name: &str| -> Result<(String, String), Error> {
            let path = dir.join(name);
            let text = std::fs::read_to_string(&path)
                .map_err(|e| Error::Fixture(format!("{}: {e}", path.display())))?;
            Ok((name.to_string(), text))
        };
        let theorems = THEOREM_FILES.iter().map(|(n, _)| read(n)).collect::<Result<Vec<_>, _>>()?;
        Self::from_texts(&theorems, read(EXAMPLES_FILE.0)?)
    }

    /// The directory named by `ORBCOH_FIXTURES` if set, else the compiled-in copy.
    pub fn from_env() -> Result<Self, Error> {
        match std::env::var_os(FIXTURES_ENV) {
            Some(dir) if !dir.is_empty() => Self::from_dir(Path::new(&dir)),
            _ => Ok(Self::embedded()),
        }
    }

    pub fn theorem(&self, d: u32, field: FieldTag) -> Option<&TheoremFixture> {
        self.theorems.iter().find(|t| t.d == d && t.field == field)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::template::env;

    #[test]
    fn embedded_corpus_loads() {
        let c = FixtureCorpus::embedded();
        assert_eq!(c.theorems.len(), 3);
        assert!(c.theorem(1, FieldTag::Q).is_none());
        let t = c.theorem(3, FieldTag::Z2).unwrap();
        let rows = t.rows_for(&env(3, 4, 7)).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].families, ["i", "ii"]);
        let rows = c.theorem(1, FieldTag::Z2).unwrap().rows_for(&env(1, 2, 4)).unwrap();
        assert!(rows.iter().all(|r| r.otherwise));
    }

    #[test]
    fn segments() {
        let seg = |dim, r: &str, f: &str, b: &str| Segment { dim, residue: r.into(), from: f.into(), below: b.into() };
        let p = table_profile(
            &[seg(1, "0", "0", "m"), seg(1, "1", "n", "n+m")],
            3,
            &env(3, 5, 7),
            12,
        )
        .unwrap();
        assert_eq!(p, GradedDims::from_pairs(12, &[(0, 1), (4, 1), (5, 1), (9, 1)]));
    }

    #[test]
    fn example_instances_are_sorted_fibres() {
        let c = FixtureCorpus::embedded();
        let inst = c.examples[0].instances().unwrap();
        assert_eq!(inst.len(), 2 * 5 * 12);
        assert!(inst.iter().all(|i| 1 <= i.n && i.n <= i.m));
    }
}
