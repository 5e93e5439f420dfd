//! Matches engine output against the family templates and runs the fixture grid.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{parameter_samples, poincare, same_ideal, GradedDims, Presentation};
use crate::field::fmt_scalar;
use crate::fixtures::{table_profile, ExampleFixture, ExampleInstance, FixtureCorpus, ProfileSpec, TheoremFixture};
use crate::gysin::{chase, congruence_precheck, validate_dnm, FiberProfile};
use crate::index::{ind_standard_sphere, IndexReport, Justification};
use crate::serre::{artifact_truncation, build_e2, enumerate_differentials, run_to_einf};
use crate::template::{env, eval_int, Env, GeneratorTemplate, ParamStatus};
use crate::{Error, FieldTag};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingFamily {
    pub theorem: String,
    pub tag: String,
    pub source_case: String,
    pub applicability: String,
    pub template: Presentation,
    pub profile: GradedDims,
    pub params: Vec<ParamStatus>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl RingFamily {
    pub fn flags(&self) -> Vec<String> {
        self.params
            .iter()
            .filter(|p| p.disagrees())
            .map(|p| {
                format!(
                    "{}: {} is {} by the stated side conditions but the term {} is {} in the quotient",
                    self.source_case,
                    p.param,
                    if p.stated_zero { "forced to 0" } else { "free" },
                    p.term,
                    if p.derived_zero { "already 0" } else { "nonzero" },
                )
            })
            .collect()
    }
}

pub struct Classifier {
    corpus: FixtureCorpus,
}

fn engine_profiles_uncached(d: u32, n: u32, m: u32, field: FieldTag) -> Result<BTreeSet<GradedDims>, Error> {
    match field {
        FieldTag::Z2 => Ok(chase(&FiberProfile::product_of_spheres(d, n, m, field)?)?
            .into_iter()
            .map(|s| s.profile)
            .collect()),
        FieldTag::Q => {
            let page = build_e2(d, n, m, field)?;
            Ok(enumerate_differentials(&page)
                .iter()
                .filter_map(|c| run_to_einf(&page, c).ok())
                .map(|e| e.total)
                .collect())
        }
    }
}

impl Classifier {
    pub fn new(corpus: FixtureCorpus) -> Self {
        Classifier { corpus }
    }

    pub fn embedded() -> &'static Classifier {
        static DEFAULT: OnceLock<Classifier> = OnceLock::new();
        DEFAULT.get_or_init(|| Classifier::new(FixtureCorpus::embedded()))
    }

    pub fn from_env() -> Result<Self, Error> {
        Ok(Classifier::new(FixtureCorpus::from_env()?))
    }

    pub fn corpus(&self) -> &FixtureCorpus {
        &self.corpus
    }

    pub fn theorem(&self, d: u32, field: FieldTag) -> Result<&TheoremFixture, Error> {
        if d == 1 && field == FieldTag::Q {
            return Err(Error::UnsupportedCombination("rational coefficients are only classified for S^3".into()));
        }
        self.corpus
            .theorem(d, field)
            .ok_or_else(|| Error::Fixture(format!("no theorem fixture for d={d} over {field}")))
    }

    /// Profiles the engine allows: the chase over Z2, the spectral sequence over Q.
    pub fn engine_profiles(&self, d: u32, n: u32, m: u32, field: FieldTag) -> Result<BTreeSet<GradedDims>, Error> {
        validate_dnm(d, n, m)?;
        self.theorem(d, field)?;
        engine_profiles_uncached(d, n, m, field)
    }

    /// Every family whose applicability holds at (n, m), instantiated, without
    /// consulting the engines.
    pub fn templates(&self, d: u32, n: u32, m: u32, field: FieldTag) -> Result<Vec<RingFamily>, Error> {
        validate_dnm(d, n, m)?;
        let t = self.theorem(d, field)?;
        let env = env(d, n, m);
        let truncation = artifact_truncation(d, n, m);
        let mut applicable = Vec::new();
        for f in &t.families {
            if f.applies(&env)? {
                applicable.push(f);
            }
        }
        let tags: Vec<String> = applicable.iter().map(|f| f.tag.clone()).collect();
        let mut out = Vec::new();
        for f in applicable {
            if n == m && f.same_as_when_n_eq_m.as_ref().is_some_and(|o| tags.contains(o)) {
                continue;
            }
            let inst = f.instantiate(&env, field, truncation)?;
            let profile = poincare(&inst.presentation)?;
            let mut notes = Vec::new();
            if let Some(e) = &f.erratum {
                let moved = e.applicability.is_some() && f.stated_applies(&env)? != f.applies(&env)?;
                if e.generators.is_some() || moved {
                    notes.push(format!("erratum: {}", e.note));
                }
            }
            out.push(RingFamily {
                theorem: t.theorem.clone(),
                tag: f.tag.clone(),
                source_case: format!("{} ({})", t.theorem, f.tag),
                applicability: f.effective_applicability().to_string(),
                template: inst.presentation,
                profile,
                params: inst.params,
                notes,
            });
        }
        out.sort_by(|a, b| a.tag.cmp(&b.tag));
        Ok(out)
    }

    /// Families that apply at (n, m) and whose profile the engine realises.
    pub fn classify(&self, d: u32, n: u32, m: u32, field: FieldTag) -> Result<Vec<RingFamily>, Error> {
        let templates = self.templates(d, n, m, field)?;
        if !congruence_precheck(d, n, m) {
            return Ok(Vec::new());
        }
        let feasible = engine_profiles_uncached(d, n, m, field)?;
        Ok(templates.into_iter().filter(|f| feasible.contains(&f.profile)).collect())
    }

    pub fn verify(&self, grid_max: u32) -> VerifyReport {
        let mut jobs: Vec<Job> = Vec::new();
        for t in &self.corpus.theorems {
            for m in 1..=grid_max {
                for n in 1..=m {
                    jobs.push(Job::Theorem(t, n, m));
                }
            }
        }
        for ex in &self.corpus.examples {
            match ex.instances() {
                Ok(list) => jobs.extend(list.into_iter().map(|i| Job::Example(ex, i))),
                Err(e) => jobs.push(Job::Broken(ex, e.to_string())),
            }
        }
        let rows: Vec<VerifyRow> = jobs.par_iter().map(|j| self.run_job(j)).collect();
        VerifyReport::new(grid_max, rows)
    }

    fn run_job(&self, job: &Job) -> VerifyRow {
        match job {
            Job::Theorem(t, n, m) => self.verify_theorem_point(t, *n, *m),
            Job::Example(ex, inst) => self.verify_example(ex, inst),
            Job::Broken(ex, msg) => VerifyRow {
                suite: ex.name.clone(),
                input: RowInput { d: 0, n: 0, m: 0, field: ex.field, vars: BTreeMap::new() },
                sources: vec![],
                expected: vec![],
                actual: vec![],
                pass: false,
                flagged: false,
                notes: vec![msg.clone()],
            },
        }
    }

    fn verify_theorem_point(&self, t: &TheoremFixture, n: u32, m: u32) -> VerifyRow {
        let mut row = VerifyRow {
            suite: t.theorem.clone(),
            input: RowInput { d: t.d, n, m, field: t.field, vars: BTreeMap::new() },
            sources: vec![],
            expected: vec![],
            actual: vec![],
            pass: false,
            flagged: false,
            notes: vec![],
        };
        if let Err(e) = self.fill_theorem_row(t, n, m, &mut row) {
            row.pass = false;
            row.notes.push(format!("error: {e}"));
        }
        row
    }

    fn fill_theorem_row(&self, t: &TheoremFixture, n: u32, m: u32, row: &mut VerifyRow) -> Result<(), Error> {
        let env = env(t.d, n, m);
        let truncation = artifact_truncation(t.d, n, m);
        let rows = t.rows_for(&env)?;
        if rows.is_empty() {
            row.notes.push("no fixture row covers this input".into());
            return Ok(());
        }
        let mut expected = BTreeSet::new();
        for r in &rows {
            row.sources.push(r.source.clone());
            for tag in &r.families {
                let profile = match r.profile.as_ref() {
                    Some(ProfileSpec::Table(segs)) => table_profile(segs, t.d, &env, truncation)?,
                    _ => {
                        let f = t.family(tag).expect("checked on load");
                        poincare(&f.instantiate(&env, t.field, truncation)?.presentation)?
                    }
                };
                expected.insert(FamilyOutcome { family: tag.clone(), profile });
            }
        }
        let families = self.classify(t.d, n, m, t.field)?;
        let actual: BTreeSet<FamilyOutcome> =
            families.iter().map(|f| FamilyOutcome { family: f.tag.clone(), profile: f.profile.clone() }).collect();
        let mut pass = expected == actual;
        if !pass {
            row.notes.push("families or profiles differ from the fixture".into());
        }
        let feasible = engine_profiles_uncached(t.d, n, m, t.field)?;
        for p in &feasible {
            if !families.iter().any(|f| &f.profile == p) {
                pass = false;
                row.notes.push(format!("engine profile {p} is not matched by any family"));
            }
        }
        if families.is_empty() == congruence_precheck(t.d, n, m) {
            row.notes.push(format!(
                "congruence condition {} but no family survives",
                if congruence_precheck(t.d, n, m) { "holds" } else { "fails" }
            ));
        }
        for f in &families {
            row.notes.extend(f.notes.iter().cloned());
            let flags = f.flags();
            row.flagged |= !flags.is_empty();
            row.notes.extend(flags);
        }
        row.expected = expected.into_iter().collect();
        row.actual = actual.into_iter().collect();
        row.pass = pass;
        Ok(())
    }

    fn verify_example(&self, ex: &ExampleFixture, inst: &ExampleInstance) -> VerifyRow {
        let mut row = VerifyRow {
            suite: ex.name.clone(),
            input: RowInput { d: inst.d, n: inst.n, m: inst.m, field: ex.field, vars: inst.env.clone() },
            sources: vec![ex.description.clone()],
            expected: vec![],
            actual: vec![],
            pass: false,
            flagged: false,
            notes: vec![],
        };
        if let Err(e) = self.fill_example_row(ex, inst, &mut row) {
            row.pass = false;
            row.notes.push(format!("error: {e}"));
        }
        row
    }

    fn fill_example_row(&self, ex: &ExampleFixture, inst: &ExampleInstance, row: &mut VerifyRow) -> Result<(), Error> {
        let (d, n, m) = (inst.d, inst.n, inst.m);
        let truncation = artifact_truncation(d, n, m);
        let families = self.classify(d, n, m, ex.field)?;
        let mut pass = true;
        for ring in &ex.rings {
            let expected = example_presentation(ex.field, &ring.generators, &ring.relations, &inst.env, truncation)?;
            row.expected.push(FamilyOutcome { family: ring.label.clone(), profile: poincare(&expected)? });
            match find_instance(&families, &expected)? {
                Some((fam, values, pres)) => {
                    let label = format!("{}{}", fam.source_case, render_values(&values));
                    if let Some(spec) = &ex.index {
                        pass &= check_example_index(spec, inst, &pres, row)?;
                    }
                    row.actual.push(FamilyOutcome { family: label, profile: fam.profile.clone() });
                }
                None => {
                    pass = false;
                    row.notes.push(format!("no family matches {}", ring.label));
                }
            }
        }
        row.pass = pass;
        Ok(())
    }
}

enum Job<'a> {
    Theorem(&'a TheoremFixture, u32, u32),
    Example(&'a ExampleFixture, ExampleInstance),
    Broken(&'a ExampleFixture, String),
}

/// Classifies with the compiled-in fixture corpus.
pub fn classify_orbit(d: u32, n: u32, m: u32, field: FieldTag) -> Result<Vec<RingFamily>, Error> {
    Classifier::embedded().classify(d, n, m, field)
}

/// Runs the full grid with the compiled-in fixture corpus.
pub fn verify_fixtures(grid_max: u32) -> VerifyReport {
    Classifier::embedded().verify(grid_max)
}

pub fn example_presentation(
    field: FieldTag,
    generators: &[GeneratorTemplate],
    relations: &[String],
    env: &Env,
    truncation: u32,
) -> Result<Presentation, Error> {
    let template = crate::template::FamilyTemplate {
        tag: String::new(),
        generators: generators.to_vec(),
        relations: relations.to_vec(),
        applicability: "true".into(),
        side_conditions: vec![],
        erratum: None,
        same_as_when_n_eq_m: None,
    };
    Ok(template.instantiate(env, field, truncation)?.presentation)
}

type Match<'a> = (&'a RingFamily, BTreeMap<String, crate::field::Scalar>, Presentation);

/// A family and a parameter assignment giving the same ideal as `target`.
pub fn find_instance<'a>(families: &'a [RingFamily], target: &Presentation) -> Result<Option<Match<'a>>, Error> {
    for fam in families {
        if fam.template.generators != target.generators {
            continue;
        }
        let params: Vec<String> = fam.template.params().into_iter().collect();
        for values in parameter_samples(fam.template.field, &params) {
            let pres = fam.template.instantiate(&values)?;
            if same_ideal(&pres, target)? {
                return Ok(Some((fam, values, pres)));
            }
        }
    }
    Ok(None)
}

fn render_values(values: &BTreeMap<String, crate::field::Scalar>) -> String {
    if values.is_empty() {
        return String::new();
    }
    let parts: Vec<String> = values.iter().map(|(k, v)| format!("{k}={}", fmt_scalar(v))).collect();
    format!(" with {}", parts.join(", "))
}

fn check_example_index(
    spec: &crate::fixtures::ExampleIndex,
    inst: &ExampleInstance,
    pres: &Presentation,
    row: &mut VerifyRow,
) -> Result<bool, Error> {
    let want_ci = eval_int(&spec.cohom_index, &inst.env)?;
    let want_lower = eval_int(&spec.ind_lower, &inst.env)?;
    let ci = crate::algebra::nilpotency_index(pres, "u")?;
    let source_dim = (i64::from(inst.d) + 1) * want_lower + i64::from(inst.d);
    let source = IndexReport::standard_sphere(inst.d, ind_standard_sphere(inst.d, source_dim as u32)?);
    let report = IndexReport::new(i64::from(ci), None, None, vec![Justification::new(i64::from(ci), "cohom-index")])?
        .with_map_from(&source, &spec.map)?;
    let ok = i64::from(ci) == want_ci && report.pinned() == Some(want_ci);
    row.notes.push(format!(
        "cohom-index {ci}, ind in [{}, {}]{}",
        report.ind_lower.map_or("?".into(), |v| v.to_string()),
        report.ind_upper,
        if ok { "" } else { " (expected both equal to the fixture value)" }
    ));
    Ok(ok)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowInput {
    pub d: u32,
    pub n: u32,
    pub m: u32,
    pub field: FieldTag,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub vars: BTreeMap<String, i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FamilyOutcome {
    pub family: String,
    pub profile: GradedDims,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyRow {
    pub suite: String,
    pub input: RowInput,
    pub sources: Vec<String>,
    pub expected: Vec<FamilyOutcome>,
    pub actual: Vec<FamilyOutcome>,
    pub pass: bool,
    pub flagged: bool,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifySummary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub flagged: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub schema_version: u32,
    pub grid_max: u32,
    pub rows: Vec<VerifyRow>,
    pub summary: VerifySummary,
    pub by_suite: BTreeMap<String, VerifySummary>,
}

impl VerifyReport {
    fn new(grid_max: u32, rows: Vec<VerifyRow>) -> Self {
        let tally = |rows: &[&VerifyRow]| VerifySummary {
            total: rows.len(),
            passed: rows.iter().filter(|r| r.pass).count(),
            failed: rows.iter().filter(|r| !r.pass).count(),
            flagged: rows.iter().filter(|r| r.flagged).count(),
        };
        let all: Vec<&VerifyRow> = rows.iter().collect();
        let mut suites: BTreeMap<String, Vec<&VerifyRow>> = BTreeMap::new();
        for r in &rows {
            suites.entry(r.suite.clone()).or_default().push(r);
        }
        let by_suite = suites.iter().map(|(k, v)| (k.clone(), tally(v))).collect();
        VerifyReport { schema_version: SCHEMA_VERSION, grid_max, summary: tally(&all), by_suite, rows }
    }

    pub fn all_pass(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn suite(&self, name: &str) -> impl Iterator<Item = &VerifyRow> {
        let name = name.to_string();
        self.rows.iter().filter(move |r| r.suite == name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tags(d: u32, n: u32, m: u32, f: FieldTag) -> Vec<String> {
        classify_orbit(d, n, m, f).unwrap().into_iter().map(|f| f.tag).collect()
    }

    #[test]
    fn spec_examples() {
        let fams = classify_orbit(3, 5, 7, FieldTag::Z2).unwrap();
        assert_eq!(fams.len(), 1);
        assert_eq!(fams[0].tag, "i");
        assert_eq!(fams[0].template.render(), "Z2[u,v]/<u^2, v^2>, deg u=4, deg v=5; alpha = 0 (term alpha*v*u^(n/4) does not exist); beta = 0 (term beta*u^(n/2) does not exist)");
        assert!(tags(3, 1, 2, FieldTag::Z2).is_empty());
        assert_eq!(tags(3, 4, 7, FieldTag::Z2), ["i", "ii"]);
        assert_eq!(tags(1, 1, 1, FieldTag::Z2), ["iii"]);
        assert!(matches!(classify_orbit(1, 1, 1, FieldTag::Q), Err(Error::UnsupportedCombination(_))));
    }

    #[test]
    fn rational_double_transgression_case() {
        let fams = classify_orbit(3, 3, 3, FieldTag::Q).unwrap();
        assert_eq!(fams.len(), 1);
        assert_eq!(fams[0].tag, "i");
        assert_eq!(fams[0].profile, GradedDims::from_pairs(0, &[(0, 1), (3, 1)]));
    }
}
