//! Helpers shared by the integration tests.
#![allow(dead_code)]

pub mod oracle;

use std::collections::BTreeMap;
use std::sync::OnceLock;

use orbcoh::algebra::{parameter_samples, Presentation};
use orbcoh::classify::{example_presentation, Classifier};
use orbcoh::field::Scalar;
use orbcoh::serre::{build_e2, enumerate_differentials, ring_candidates, run_to_einf};
use orbcoh::serre::artifact_truncation;
use orbcoh::FieldTag;

/// Every presentation the crate hands out on the acceptance grids, labelled,
/// with truncation at most `max_truncation` (at most 40).
pub fn emitted_presentations(max_truncation: u32) -> Vec<(String, Presentation)> {
    static ALL: OnceLock<Vec<(String, Presentation)>> = OnceLock::new();
    ALL.get_or_init(|| collect(40)).iter().filter(|(_, p)| p.truncation <= max_truncation).cloned().collect()
}

fn collect(max_truncation: u32) -> Vec<(String, Presentation)> {
    let c = Classifier::embedded();
    let mut out = Vec::new();
    for (d, field, top) in [(3, FieldTag::Z2, 20), (1, FieldTag::Z2, 20), (3, FieldTag::Q, 16)] {
        for m in 1..=top {
            for n in 1..=m {
                if artifact_truncation(d, n, m) > max_truncation {
                    continue;
                }
                for f in c.classify(d, n, m, field).unwrap() {
                    out.push((format!("{} at ({n},{m})", f.source_case), f.template));
                }
                if field == FieldTag::Q {
                    let page = build_e2(d, n, m, field).unwrap();
                    for choice in enumerate_differentials(&page) {
                        if let Ok(e) = run_to_einf(&page, &choice) {
                            for p in ring_candidates(&e) {
                                out.push((format!("E-infinity ring {} at ({n},{m})", choice.render()), p));
                            }
                        }
                    }
                }
            }
        }
    }
    for ex in &c.corpus().examples {
        for inst in ex.instances().unwrap() {
            let t = artifact_truncation(inst.d, inst.n, inst.m);
            if t > max_truncation {
                continue;
            }
            for ring in &ex.rings {
                let p = example_presentation(ex.field, &ring.generators, &ring.relations, &inst.env, t).unwrap();
                out.push((format!("{} {:?}", ring.label, inst.env), p));
            }
        }
    }
    out
}

/// Parameter assignments to test a presentation at.
pub fn samples(p: &Presentation) -> Vec<BTreeMap<String, Scalar>> {
    let params: Vec<String> = p.params().into_iter().collect();
    parameter_samples(p.field, &params)
}

use std::collections::BTreeSet;

use orbcoh::algebra::GradedDims;
use orbcoh::gysin::{audit, chase, congruence_precheck, BranchKind, FiberProfile};
use orbcoh::serre::{leibniz_xy, run_pages, FiberClass};

pub fn grid(max: u32) -> impl Iterator<Item = (u32, u32, u32)> {
    [1, 3].into_iter().flat_map(move |d| (1..=max).flat_map(move |m| (1..=m).map(move |n| (d, n, m))))
}

pub fn chase_profiles(d: u32, n: u32, m: u32) -> BTreeSet<GradedDims> {
    let fp = FiberProfile::product_of_spheres(d, n, m, FieldTag::Z2).unwrap();
    chase(&fp).unwrap().into_iter().map(|s| s.profile).collect()
}

pub fn ss_profiles(d: u32, n: u32, m: u32, field: FieldTag) -> BTreeSet<GradedDims> {
    let page = build_e2(d, n, m, field).unwrap();
    enumerate_differentials(&page)
        .iter()
        .filter_map(|c| run_to_einf(&page, c).ok())
        .map(|e| e.total)
        .collect()
}

/// Exactness audit, vanishing line, the p* rank rule and determinism for every chase solution.
pub fn check_chase(d: u32, n: u32, m: u32) -> Result<usize, String> {
    let at = format!("d={d} n={n} m={m}");
    let fp = FiberProfile::product_of_spheres(d, n, m, FieldTag::Z2).unwrap();
    let sols = chase(&fp).map_err(|e| format!("{at}: {e}"))?;
    if !congruence_precheck(d, n, m) && !sols.is_empty() {
        return Err(format!("{at}: solutions despite failed congruence check"));
    }
    for s in &sols {
        audit(&fp, s).map_err(|e| format!("{at}: {e}"))?;
        if s.profile.dims.keys().any(|&i| i + d > n + m) {
            return Err(format!("{at}: class above the vanishing line"));
        }
        let kind = |deg: u32| s.scenario.iter().find(|b| b.degree == deg).map(|b| b.kind);
        if n < m && kind(n) == Some(BranchKind::PStarNontrivial) && kind(m) == Some(BranchKind::PStarNontrivial) {
            return Err(format!("{at}: p* nontrivial in both degrees n and m"));
        }
    }
    if chase(&fp).unwrap() != sols {
        return Err(format!("{at}: chase is not deterministic"));
    }
    Ok(sols.len())
}

/// Euler characteristic per page, convergence, freeness and the Leibniz rule for
/// every admissible differential choice. Returns the number of choices checked.
pub fn check_pages(d: u32, n: u32, m: u32, field: FieldTag) -> Result<usize, String> {
    let at = format!("d={d} n={n} m={m} {field}");
    let page = build_e2(d, n, m, field).unwrap();
    let choices = enumerate_differentials(&page);
    for choice in &choices {
        let e = run_pages(&page, choice).map_err(|e| format!("{at}: {e}"))?;
        let first = e.euler_by_page[0].1;
        if e.euler_by_page.iter().any(|(_, x)| *x != first) {
            return Err(format!("{at}: Euler characteristic changes: {:?}", e.euler_by_page));
        }
        if e.total != e.total_from_ranks() {
            return Err(format!("{at}: abutment differs from rank bookkeeping"));
        }
        let above = e.page.entries.iter().any(|x| !x.basis.is_empty() && x.k + x.l > n + m);
        if run_to_einf(&page, choice).is_ok() == above {
            return Err(format!("{at}: freeness verdict disagrees with the page"));
        }
        for ind in &choice.induced_xy {
            let on = |src: FiberClass| -> Vec<_> {
                choice
                    .transgressions
                    .iter()
                    .filter(|t| t.source == src && t.page == ind.page)
                    .map(|t| (t.target_t_power, t.target, orbcoh::field::int(1)))
                    .collect()
            };
            let mut expect = leibniz_xy(&on(FiberClass::X), &on(FiberClass::Y), n, m, field);
            expect.sort();
            let mut got: Vec<_> = ind
                .value
                .iter()
                .flat_map(|b| b.fiber.iter().map(move |f| (b.t_power, f.class, f.coeff.clone())))
                .collect();
            got.sort();
            if expect != got {
                return Err(format!("{at}: induced d(xy) breaks the Leibniz rule on page {}", ind.page));
            }
        }
    }
    Ok(choices.len())
}
