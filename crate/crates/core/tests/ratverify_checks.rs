use cg3::coeff::PrimeField;
use cg3::lr3::Weight;
use cg3::ratverify::{
    candidate_search, random_element, recheck_candidate, verify_double_bundle, verify_grassmannian_bundle,
    DoubleBundleInstance,
};
use cg3::Error;

fn w(a: u32, b: u32) -> Weight {
    Weight::new(a, b)
}

#[test]
fn second_basis_map_of_v44_also_has_full_rank() {
    let inst = DoubleBundleInstance::new(w(4, 4), w(2, 5), w(1, 7), 0).unwrap();
    let report = verify_double_bundle(&inst).unwrap();
    assert_eq!(report.map, "π∘ϑ∘α^3");
    assert_eq!(report.ranks, vec![80, 80]);
}

#[test]
fn small_grassmannian_instance() {
    let inst = DoubleBundleInstance::new(w(2, 1), w(1, 1), w(0, 2), 0).unwrap();
    assert_eq!(inst.k, 2);
    let report = verify_grassmannian_bundle(&inst).unwrap();
    assert_eq!(report.ranks, vec![6, 12]);
    assert!(report.passed);
}

#[test]
fn reports_are_reproducible() {
    let inst = DoubleBundleInstance::new(w(2, 1), w(1, 1), w(0, 2), 0).unwrap().with_seed(9);
    let mut a = verify_grassmannian_bundle(&inst).unwrap();
    let mut b = verify_grassmannian_bundle(&inst).unwrap();
    a.runtime_ms = None;
    b.runtime_ms = None;
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}

#[test]
fn wrong_k_is_rejected() {
    let inst = DoubleBundleInstance::new(w(2, 1), w(1, 1), w(0, 2), 0).unwrap();
    assert!(matches!(verify_double_bundle(&inst), Err(Error::InvalidInstance(_))));
}

#[test]
fn random_elements_differ_across_seeds() {
    let f = PrimeField::default();
    let x = random_element(w(4, 4), &f, 42).unwrap();
    assert_eq!(x, random_element(w(4, 4), &f, 42).unwrap());
    assert_ne!(x, random_element(w(4, 4), &f, 43).unwrap());
}

#[test]
fn small_search_fixture() {
    let hits = candidate_search(w(0, 4), 6, 2);
    for c in &hits {
        assert!(recheck_candidate(w(0, 4), c));
        let dim_w: u64 = c.summand_dims.iter().sum();
        assert_eq!(c.mid_dim, dim_w + 1);
        assert!(c.mid_dim < 15);
    }
    let pairs: Vec<_> = hits.iter().map(|c| (c.mid, c.summands.clone())).collect();
    assert_hits(&pairs);
}

fn assert_hits(pairs: &[(Weight, Vec<Weight>)]) {
    let text: Vec<String> = pairs
        .iter()
        .map(|(m, s)| format!("{m}:{}", s.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("+")))
        .collect();
    assert_eq!(text, SMALL_SEARCH);
}

const SMALL_SEARCH: &[&str] = &["V(3,0):V(0,1)+V(0,2)", "V(3,0):V(0,1)+V(2,0)"];
