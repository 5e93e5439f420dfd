//! Versioned JSON reports shared by the command line and the Python bindings.

use serde::{Deserialize, Serialize};

use crate::algebra::{GradedDims, Presentation};
use crate::classify::{Classifier, RingFamily, SCHEMA_VERSION};
use crate::gysin::{chase, congruence_precheck, validate_dnm, ChaseSolution, FiberProfile};
use crate::index::{cohom_index_with, index_reports_with, CohomIndex, IndexReport, SpaceDescriptor};
use crate::serre::{build_e2, enumerate_differentials, ring_candidates, run_pages, DifferentialChoice};
use crate::{Error, FieldTag};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitInput {
    pub d: u32,
    pub n: u32,
    pub m: u32,
    pub field: FieldTag,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChaseReport {
    pub schema_version: u32,
    pub input: OrbitInput,
    pub solutions: Vec<ChaseSolution>,
}

pub fn chase_report(d: u32, n: u32, m: u32) -> Result<ChaseReport, Error> {
    let solutions = chase(&FiberProfile::product_of_spheres(d, n, m, FieldTag::Z2)?)?;
    Ok(ChaseReport { schema_version: SCHEMA_VERSION, input: OrbitInput { d, n, m, field: FieldTag::Z2 }, solutions })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SsChoice {
    pub choice: DifferentialChoice,
    pub feasible: bool,
    pub total: GradedDims,
    pub first_violation: Option<u32>,
    pub candidates: Vec<Presentation>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SsReport {
    pub schema_version: u32,
    pub input: OrbitInput,
    pub choices: Vec<SsChoice>,
}

pub fn ss_report(d: u32, n: u32, m: u32, field: FieldTag) -> Result<SsReport, Error> {
    let page = build_e2(d, n, m, field)?;
    let choices = enumerate_differentials(&page)
        .iter()
        .map(|choice| {
            let data = run_pages(&page, choice)?;
            Ok(SsChoice {
                choice: choice.clone(),
                feasible: data.is_free(),
                total: data.total.clone(),
                first_violation: data.first_violation,
                candidates: ring_candidates(&data),
            })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    Ok(SsReport { schema_version: SCHEMA_VERSION, input: OrbitInput { d, n, m, field }, choices })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexEntry {
    pub family: Option<String>,
    pub report: IndexReport,
    pub pinned: Option<i64>,
    pub forbidden_from: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexOutput {
    pub schema_version: u32,
    pub space: SpaceDescriptor,
    pub cohom_index: CohomIndex,
    pub entries: Vec<IndexEntry>,
}

pub fn index_output(classifier: &Classifier, space: SpaceDescriptor) -> Result<IndexOutput, Error> {
    let cohom_index = cohom_index_with(classifier, &space)?;
    let entries = index_reports_with(classifier, &space)?
        .into_iter()
        .map(|(family, report)| IndexEntry {
            family,
            pinned: report.pinned(),
            forbidden_from: report.forbidden_from(),
            report,
        })
        .collect();
    Ok(IndexOutput { schema_version: SCHEMA_VERSION, space, cohom_index, entries })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifyReport {
    pub schema_version: u32,
    pub input: OrbitInput,
    pub congruence_precheck: bool,
    pub families: Vec<RingFamily>,
}

pub fn classify_report(classifier: &Classifier, d: u32, n: u32, m: u32, field: FieldTag) -> Result<ClassifyReport, Error> {
    validate_dnm(d, n, m)?;
    Ok(ClassifyReport {
        schema_version: SCHEMA_VERSION,
        input: OrbitInput { d, n, m, field },
        congruence_precheck: congruence_precheck(d, n, m),
        families: classifier.classify(d, n, m, field)?,
    })
}
