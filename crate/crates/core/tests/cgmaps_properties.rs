use cg3::cgmaps::{
    bilinear_matrix, cg_basis_map, kernel_basis, matrix_fixed_first, premap, test_monomial, verify_basis_independence,
    CGMapSpec, KernelBasis, SparseMatrix,
};
use cg3::coeff::{Coeff, Rational};
use cg3::lr3::{admissible_j, HomSpaceSpec, Weight};
use cg3::tensorpoly::{MultiDegree, TensorPoly};

fn w(a: u32, b: u32) -> Weight {
    Weight::new(a, b)
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d).unwrap()
}

fn q_basis() -> Vec<TensorPoly<Rational>> {
    let deg = MultiDegree::sd(1, 1);
    let unit = |i: usize| {
        let mut e = [0u32; 3];
        e[i - 1] = 1;
        e
    };
    let mono = |i: usize, k: usize| TensorPoly::monomial(deg.clone(), &[unit(i), unit(k)], q(1, 1)).unwrap();
    let mut out: Vec<_> = [(1, 2), (1, 3), (2, 1), (2, 3), (3, 1), (3, 2)]
        .into_iter()
        .map(|(i, k)| mono(i, k))
        .collect();
    out.push(mono(1, 1).sub(&mono(2, 2)).unwrap());
    out.push(mono(1, 1).sub(&mono(3, 3)).unwrap());
    out
}

#[test]
fn q_basis_spans_the_canonical_kernel() {
    let canonical = kernel_basis::<Rational>(w(1, 1), &()).unwrap();
    let fixture = KernelBasis::from_vectors(w(1, 1), q_basis(), &()).unwrap();
    for v in canonical.vectors() {
        let x = fixture.coordinates(v).unwrap();
        assert_eq!(&fixture.combination(&x).unwrap(), v);
    }
    for v in fixture.vectors() {
        let x = canonical.coordinates(v).unwrap();
        assert_eq!(&canonical.combination(&x).unwrap(), v);
    }
}

#[test]
fn worked_entry_fixes_the_row_convention() {
    // α(q12 ⊗ q21) = π(e2 x2) = −2/3 q22 + 1/3 q33
    let basis = KernelBasis::from_vectors(w(1, 1), q_basis(), &()).unwrap();
    let alpha = CGMapSpec::from_weights(w(1, 1), w(1, 1), w(1, 1), 0).unwrap();
    let v = cg_basis_map(&alpha, &q_basis()[0].tensor(&q_basis()[2]).unwrap(), &()).unwrap();
    let coords = basis.coordinates(&v).unwrap();
    let mut expected = vec![q(0, 1); 8];
    expected[6] = q(-2, 3);
    expected[7] = q(1, 3);
    assert_eq!(coords, expected);
    let v = cg_basis_map(&alpha, &q_basis()[0].tensor(&q_basis()[0]).unwrap(), &()).unwrap();
    assert!(v.is_zero());
}

#[test]
fn images_have_distinct_e1_degrees_up_to_label_four() {
    let mut spaces = 0;
    for a in 0..=4 {
        for b in 0..=4 {
            for c in 0..=4 {
                for d in 0..=4 {
                    for e in 0..=4 {
                        for f in 0..=4 {
                            let Some(spec) = HomSpaceSpec::new(w(a, b), w(c, d), w(e, f)) else {
                                continue;
                            };
                            if spec.js.len() < 2 {
                                continue;
                            }
                            let mut degrees: Vec<u16> = spec
                                .js
                                .iter()
                                .map(|&j| {
                                    let ms = CGMapSpec::new(spec.clone(), j).unwrap();
                                    let pre = premap::<Rational>(&ms, &test_monomial(&ms, &())).unwrap();
                                    assert_eq!(pre.len(), 1);
                                    pre.terms()[0].0.exp(0, 0)
                                })
                                .collect();
                            degrees.sort_unstable();
                            degrees.dedup();
                            assert_eq!(degrees.len(), spec.js.len());
                            spaces += 1;
                        }
                    }
                }
            }
        }
    }
    assert!(spaces > 0);
}

#[test]
fn independence_reports() {
    let r = verify_basis_independence(&HomSpaceSpec::new(w(4, 4), w(2, 5), w(1, 7)).unwrap()).unwrap();
    assert_eq!(r.rank, 2);
    assert!(r.divisible_by_e2x2.iter().all(|d| !d));
    let r = verify_basis_independence(&HomSpaceSpec::new(w(0, 34), w(14, 1), w(0, 21)).unwrap()).unwrap();
    assert_eq!(r.rank, 1);
    let r = verify_basis_independence(&HomSpaceSpec::new(w(1, 1), w(1, 1), w(1, 1)).unwrap()).unwrap();
    assert_eq!(r.rank, 2);
}

#[test]
fn matrix_agrees_with_columnwise_evaluation() {
    for (src1, src2, dst) in [(w(1, 1), w(1, 1), w(1, 1)), (w(2, 1), w(1, 1), w(0, 2)), (w(1, 2), w(2, 0), w(1, 1))] {
        for j in admissible_j(src1, src2, dst) {
            let ms = CGMapSpec::from_weights(src1, src2, dst, j).unwrap();
            let a = kernel_basis::<Rational>(src1, &()).unwrap();
            let b = kernel_basis::<Rational>(src2, &()).unwrap();
            let t = kernel_basis::<Rational>(dst, &()).unwrap();
            let full = bilinear_matrix(&ms, &a, &b, &t, &()).unwrap().to_dense(&());
            for (i, x) in a.vectors().iter().enumerate() {
                let curried = matrix_fixed_first(&ms, x, &b, &t, &()).unwrap().to_dense(&());
                for k in 0..b.len() {
                    let direct = t
                        .coordinates(&cg_basis_map(&ms, &x.tensor(&b.vectors()[k]).unwrap(), &()).unwrap())
                        .unwrap();
                    for r in 0..t.len() {
                        assert_eq!(full[r][i * b.len() + k], direct[r]);
                        assert_eq!(curried[r][k], direct[r]);
                    }
                }
            }
        }
    }
}

#[test]
fn csv_and_json_exports_agree() {
    let ms = CGMapSpec::from_weights(w(1, 1), w(1, 1), w(1, 1), 0).unwrap();
    let b = kernel_basis::<Rational>(w(1, 1), &()).unwrap();
    let m: SparseMatrix<Rational> = bilinear_matrix(&ms, &b, &b, &b, &()).unwrap();
    let json: serde_json::Value = serde_json::to_value(&m).unwrap();
    assert_eq!(json["rows"], 8);
    assert_eq!(json["cols"], 64);
    let entries = json["entries"].as_array().unwrap();
    assert_eq!(entries.len() + 1, m.to_csv().lines().count());
    assert!(m.entries.iter().all(|(_, _, c)| !c.is_zero()));
    assert!(m.entries.windows(2).all(|p| (p[0].0, p[0].1) < (p[1].0, p[1].1)));
}
