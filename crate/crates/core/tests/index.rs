mod common;

use common::grid;
use orbcoh::classify::Classifier;
use orbcoh::index::{
    borsuk_ulam_forbidden, cohom_index, ind_standard_sphere, index_reports, CohomIndex, IndexReport, SpaceDescriptor,
};
use orbcoh::FieldTag;

/// Closed form for each mod 2 family: the exponent of the top power of u.
fn closed_form_value(tag: &str, d: u32, n: u32, m: u32) -> (u32, u32) {
    let k = d + 1;
    match tag {
        "i" => ((m - d) / k, (m + 1) / k),
        "ii" => ((n + m - d) / k, (n + m + 1) / k),
        "iii" => ((n - d) / k, (n + 1) / k),
        _ => unreachable!(),
    }
}

#[test]
fn cohom_index_matches_the_closed_forms() {
    for (d, n, m) in grid(20) {
        let k = d + 1;
        let space = SpaceDescriptor::ProductSpheres { d, n, m, field: FieldTag::Z2 };
        let CohomIndex::ByFamily(map) = cohom_index(&space).unwrap() else { panic!() };
        let fams = Classifier::embedded().classify(d, n, m, FieldTag::Z2).unwrap();
        assert_eq!(map.len(), fams.len());
        for f in fams {
            let (value, threshold) = closed_form_value(&f.tag, d, n, m);
            let cong = match f.tag.as_str() {
                "i" => m % k == d,
                "ii" => (m - n) % k == d,
                _ => n % k == d,
            };
            assert!(cong, "d={d} n={n} m={m} {}", f.tag);
            assert_eq!(map[&f.source_case], value, "d={d} n={n} m={m} {}", f.tag);
            for kk in 0..threshold + 4 {
                assert_eq!(borsuk_ulam_forbidden(d, kk, value), kk >= threshold, "k={kk}");
            }
        }
    }
}

#[test]
fn spheres_up_to_ten() {
    for d in [1, 3] {
        for n in 0..=10 {
            assert_eq!(ind_standard_sphere(d, (d + 1) * n + d).unwrap(), n);
            let r = &index_reports(&SpaceDescriptor::StandardSphere { d, total_dim: (d + 1) * n + d }).unwrap()[0].1;
            assert_eq!(r.pinned(), Some(i64::from(n)));
            assert_eq!(r.coind_lower, Some(i64::from(n)));
        }
        assert!(ind_standard_sphere(d, d + 1).is_err());
    }
}

#[test]
fn reports_respect_ind_le_cohom_ind() {
    for (d, n, m) in grid(12) {
        for (_, r) in index_reports(&SpaceDescriptor::ProductSpheres { d, n, m, field: FieldTag::Z2 }).unwrap() {
            assert!(r.ind_lower.is_none_or(|l| l <= r.ind_upper));
            assert_eq!(r.ind_upper, r.cohom_index);
            let s = serde_json::to_string(&r).unwrap();
            assert_eq!(serde_json::from_str::<IndexReport>(&s).unwrap(), r);
        }
    }
}

#[test]
fn projective_space_times_sphere_pins_the_index() {
    let report = Classifier::embedded().verify(1);
    let rows: Vec<_> = report.suite("projective-space-times-sphere").collect();
    assert_eq!(rows.len(), 120);
    for r in rows {
        assert!(r.pass, "{r:?}");
        let a = r.input.vars["a"];
        assert!(r.notes.iter().any(|n| n == &format!("cohom-index {a}, ind in [{a}, {a}]")), "{:?}", r.notes);
    }
}

#[test]
fn space_descriptor_json() {
    let s = r#"{"kind":"product_spheres","d":3,"n":5,"m":7,"field":"z2"}"#;
    let sp: SpaceDescriptor = serde_json::from_str(s).unwrap();
    assert_eq!(serde_json::to_string(&sp).unwrap(), s);
    assert_eq!(cohom_index(&sp).unwrap().values(), [1].into());
}
