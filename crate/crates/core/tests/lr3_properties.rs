use cg3::lr3::{admissible_j, decompose, expansion_from_j, expansions, HomSpaceSpec, Weight};
use proptest::prelude::*;

fn w(a: u32, b: u32) -> Weight {
    Weight::new(a, b)
}

#[test]
fn closed_form_agrees_with_enumeration() {
    for a in 0..=4 {
        for b in 0..=4 {
            for c in 0..=4 {
                for d in 0..=4 {
                    let dec = decompose(w(a, b), w(c, d));
                    for e in 0..=12 {
                        for f in 0..=12 {
                            let n = admissible_j(w(a, b), w(c, d), w(e, f)).len() as u32;
                            assert_eq!(n, dec.multiplicity(w(e, f)), "({a},{b})⊗({c},{d})→({e},{f})");
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn expansions_from_j_are_valid() {
    for a in 0..=4 {
        for b in 0..=4 {
            for c in 0..=4 {
                for d in 0..=4 {
                    let all = expansions(w(a, b), w(c, d));
                    for e in 0..=12 {
                        for f in 0..=12 {
                            let Some(spec) = HomSpaceSpec::new(w(a, b), w(c, d), w(e, f)) else {
                                continue;
                            };
                            for &j in &spec.js {
                                let x = expansion_from_j(j, &spec).unwrap();
                                assert!(x.is_valid(w(a, b), w(c, d)));
                                assert_eq!(x.target(w(a, b)), w(e, f));
                                assert!(all.contains(&x));
                            }
                        }
                    }
                }
            }
        }
    }
}

proptest! {
    #[test]
    fn tensor_product_commutes(a in 0u32..6, b in 0u32..6, c in 0u32..6, d in 0u32..6) {
        prop_assert_eq!(decompose(w(a, b), w(c, d)).as_map(), decompose(w(c, d), w(a, b)).as_map());
    }

    #[test]
    fn dimensions_add_up(a in 0u32..8, b in 0u32..8, c in 0u32..8, d in 0u32..8) {
        prop_assert_eq!(decompose(w(a, b), w(c, d)).total_dim(), w(a, b).dim() * w(c, d).dim());
    }

    #[test]
    fn duality(a in 0u32..6, b in 0u32..6, c in 0u32..6, d in 0u32..6) {
        let dec = decompose(w(a, b), w(c, d));
        let dual = decompose(w(b, a), w(d, c));
        for s in &dec.summands {
            prop_assert_eq!(dual.multiplicity(w(s.f, s.e)), s.mult);
        }
    }
}
