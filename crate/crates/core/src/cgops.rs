//! Elementary equivariant operators and the equivariant projector.
//!
//! | operator            | formula                                              | shape change                         |
//! |---------------------|------------------------------------------------------|--------------------------------------|
//! | [`contract`]        | `Σ ∂/∂eᵢ ⊗ ∂/∂xᵢ`                                   | `[S a, D b] → [S a−1, D b−1]`        |
//! | [`trace_mul`]       | multiplication by `Σ eᵢ ⊗ xᵢ`                        | `[S e−1, D f−1] → [S e, D f]`        |
//! | [`contract_outer`]  | `Σ ∂/∂eᵢ ⊗ id ⊗ id ⊗ ∂/∂xᵢ`                          | `[S a, D b, S c, D d] → [S a−1, D b, S c, D d−1]` |
//! | [`contract_inner`]  | `Σ id ⊗ ∂/∂xᵢ ⊗ ∂/∂eᵢ ⊗ id`                          | `[S a, D b, S c, D d] → [S a, D b−1, S c−1, D d]` |
//! | [`wedge_ss`]        | `Σ_σ sgn(σ) ∂/∂e_σ(1) ⊗ ∂/∂e_σ(2) ⊗ x_σ(3)`          | `[S a, S c, D m] → [S a−1, S c−1, D m+1]` |
//! | [`wedge_dd`]        | `Σ_σ sgn(σ) e_σ(1) ⊗ ∂/∂x_σ(2) ⊗ ∂/∂x_σ(3)`          | `[S m, D b, D d] → [S m+1, D b−1, D d−1]` |
//!
//! `V(a,b)` is realized as the kernel of [`contract`] inside `S^a ⊗ D^b`; the
//! image of [`trace_mul`] is its invariant complement. [`project`] is the
//! equivariant projection onto the kernel, written as `Σ μ_j δ^j Δ^j`.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use serde::Serialize;

use crate::coeff::{Coeff, Rational};
use crate::error::Error;
use crate::lr3::Weight;
use crate::tensorpoly::{MultiDegree, PolyError, SlotKind, TensorPoly};

/// Signed permutations of `{0, 1, 2}`.
const PERMUTATIONS: [([usize; 3], i64); 6] = [
    ([0, 1, 2], 1),
    ([0, 2, 1], -1),
    ([1, 0, 2], -1),
    ([1, 2, 0], 1),
    ([2, 0, 1], 1),
    ([2, 1, 0], -1),
];

fn expect_kinds<C: Coeff>(u: &TensorPoly<C>, kinds: &[SlotKind]) -> Result<(), PolyError> {
    let actual: Vec<SlotKind> = u.degree().slots().iter().map(|s| s.kind).collect();
    if actual == kinds {
        Ok(())
    } else {
        let expected = kinds
            .iter()
            .map(|k| format!("{k:?}"))
            .collect::<Vec<_>>()
            .join(", ");
        Err(PolyError::ShapeMismatch(
            u.degree().to_string(),
            format!("[{expected}]"),
        ))
    }
}

/// `Σᵢ ∂/∂eᵢ (slot s) · ∂/∂xᵢ (slot d)`.
fn pair_contract<C: Coeff>(u: &TensorPoly<C>, s: usize, d: usize) -> TensorPoly<C> {
    let (degree, clamped) = u.degree().shifted(&[(s, -1), (d, -1)]);
    if clamped {
        return TensorPoly::zero(degree);
    }
    u.transform(degree, |m, out| {
        for v in 0..3 {
            let ns = m.exp(s, v);
            let nd = m.exp(d, v);
            if ns > 0 && nd > 0 {
                let mut m2 = *m;
                *m2.exp_mut(s, v) -= 1;
                *m2.exp_mut(d, v) -= 1;
                out.push((m2, ns as i64 * nd as i64));
            }
        }
    })
}

/// The contraction `Δ : S^a ⊗ D^b → S^{a−1} ⊗ D^{b−1}`.
pub fn contract<C: Coeff>(u: &TensorPoly<C>) -> Result<TensorPoly<C>, PolyError> {
    expect_kinds(u, &[SlotKind::S, SlotKind::D])?;
    Ok(pair_contract(u, 0, 1))
}

/// Multiplication by the invariant `Σ eᵢ ⊗ xᵢ` on `S ⊗ D`.
pub fn trace_mul<C: Coeff>(u: &TensorPoly<C>) -> Result<TensorPoly<C>, PolyError> {
    expect_kinds(u, &[SlotKind::S, SlotKind::D])?;
    let (degree, _) = u.degree().shifted(&[(0, 1), (1, 1)]);
    Ok(u.transform(degree, |m, out| {
        for v in 0..3 {
            let mut m2 = *m;
            *m2.exp_mut(0, v) += 1;
            *m2.exp_mut(1, v) += 1;
            out.push((m2, 1));
        }
    }))
}

/// Contracts the first S factor against the second D factor of `(S ⊗ D) ⊗ (S ⊗ D)`.
pub fn contract_outer<C: Coeff>(u: &TensorPoly<C>) -> Result<TensorPoly<C>, PolyError> {
    expect_kinds(u, &[SlotKind::S, SlotKind::D, SlotKind::S, SlotKind::D])?;
    Ok(pair_contract(u, 0, 3))
}

/// Contracts the first D factor against the second S factor of `(S ⊗ D) ⊗ (S ⊗ D)`.
pub fn contract_inner<C: Coeff>(u: &TensorPoly<C>) -> Result<TensorPoly<C>, PolyError> {
    expect_kinds(u, &[SlotKind::S, SlotKind::D, SlotKind::S, SlotKind::D])?;
    Ok(pair_contract(u, 2, 1))
}

/// Multiplication by the determinant `x1 ∧ x2 ∧ x3` on `S ⊗ S ⊗ D`.
pub fn wedge_ss<C: Coeff>(u: &TensorPoly<C>) -> Result<TensorPoly<C>, PolyError> {
    expect_kinds(u, &[SlotKind::S, SlotKind::S, SlotKind::D])?;
    let (degree, clamped) = u.degree().shifted(&[(0, -1), (1, -1), (2, 1)]);
    if clamped {
        return Ok(TensorPoly::zero(degree));
    }
    Ok(u.transform(degree, |m, out| {
        for (sigma, sign) in PERMUTATIONS {
            let n0 = m.exp(0, sigma[0]);
            let n1 = m.exp(1, sigma[1]);
            if n0 > 0 && n1 > 0 {
                let mut m2 = *m;
                *m2.exp_mut(0, sigma[0]) -= 1;
                *m2.exp_mut(1, sigma[1]) -= 1;
                *m2.exp_mut(2, sigma[2]) += 1;
                out.push((m2, sign * n0 as i64 * n1 as i64));
            }
        }
    }))
}

/// Multiplication by `e1 ∧ e2 ∧ e3` on `S ⊗ D ⊗ D`.
pub fn wedge_dd<C: Coeff>(u: &TensorPoly<C>) -> Result<TensorPoly<C>, PolyError> {
    expect_kinds(u, &[SlotKind::S, SlotKind::D, SlotKind::D])?;
    let (degree, clamped) = u.degree().shifted(&[(0, 1), (1, -1), (2, -1)]);
    if clamped {
        return Ok(TensorPoly::zero(degree));
    }
    Ok(u.transform(degree, |m, out| {
        for (sigma, sign) in PERMUTATIONS {
            let n1 = m.exp(1, sigma[1]);
            let n2 = m.exp(2, sigma[2]);
            if n1 > 0 && n2 > 0 {
                let mut m2 = *m;
                *m2.exp_mut(0, sigma[0]) += 1;
                *m2.exp_mut(1, sigma[1]) -= 1;
                *m2.exp_mut(2, sigma[2]) -= 1;
                out.push((m2, sign * n1 as i64 * n2 as i64));
            }
        }
    }))
}

/// Applies `op` to `u` `times` times.
pub fn iterate<C, F>(u: &TensorPoly<C>, times: usize, op: F) -> Result<TensorPoly<C>, PolyError>
where
    C: Coeff,
    F: Fn(&TensorPoly<C>) -> Result<TensorPoly<C>, PolyError>,
{
    let mut v = u.clone();
    for _ in 0..times {
        v = op(&v)?;
    }
    Ok(v)
}

/// Coefficients of the projector `π_{a,b} = Σ_j μ_j δ^j Δ^j` onto `V(a,b) ⊂ S^a ⊗ D^b`.
///
/// `lambda[i-1]` is the constant with `π_{a,b,i} = λᵢ δ^i π_{a−i,b−i} Δ^i`,
/// the projection onto the copy `δ^i V(a−i,b−i)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProjectorCoefficients {
    pub weight: Weight,
    pub lambda: Vec<Rational>,
    pub mu: Vec<Rational>,
}

impl ProjectorCoefficients {
    pub fn mu_in<C: Coeff>(&self, ctx: &C::Ctx) -> Result<Vec<C>, Error> {
        Ok(self
            .mu
            .iter()
            .map(|m| C::from_rational(m, ctx))
            .collect::<Result<_, _>>()?)
    }
}

fn memo() -> &'static RwLock<HashMap<Weight, Arc<ProjectorCoefficients>>> {
    static MEMO: OnceLock<RwLock<HashMap<Weight, Arc<ProjectorCoefficients>>>> = OnceLock::new();
    MEMO.get_or_init(Default::default)
}

/// `λᵢ` from `(1/λᵢ)·m = Δ^i δ^i m` with `m = e1^{a−i} ⊗ x3^{b−i}`.
///
/// Panics if the image is not a multiple of `m`; that would contradict
/// Schur's lemma and indicates a bug in the operators.
pub fn lambda(w: Weight, i: u32) -> Rational {
    assert!(i >= 1 && i <= w.a.min(w.b), "λ_i needs 1 <= i <= min(a, b)");
    let degree = MultiDegree::sd(w.a - i, w.b - i);
    let m = TensorPoly::monomial(
        degree,
        &[[w.a - i, 0, 0], [0, 0, w.b - i]],
        Rational::from_integer(1),
    )
    .expect("valid monomial");
    let up = iterate(&m, i as usize, trace_mul).expect("S ⊗ D shape");
    let image = iterate(&up, i as usize, contract).expect("S ⊗ D shape");
    let mono = m.terms()[0].0;
    match image.terms() {
        [(m2, c)] if *m2 == mono => c
            .inverse()
            .expect("Δ^i δ^i acts invertibly on the highest weight vector"),
        _ => panic!(
            "internal consistency violation: Δ^{i} δ^{i} (e1^{} ⊗ x3^{}) = {image} is not a multiple of the input",
            w.a - i,
            w.b - i
        ),
    }
}

/// Memoized projector coefficients for `V(a,b)`.
pub fn projector_coefficients(w: Weight) -> Arc<ProjectorCoefficients> {
    if let Some(p) = memo().read().expect("memo lock").get(&w) {
        return p.clone();
    }
    let n = w.a.min(w.b);
    let lambdas: Vec<Rational> = (1..=n).map(|i| lambda(w, i)).collect();
    // π_{a,b} = id − Σᵢ λᵢ δ^i π_{a−i,b−i} Δ^i, expanded in powers δ^j Δ^j
    let mut mu = vec![Rational::from_integer(1)];
    for j in 1..=n {
        let mut acc = Rational::from_integer(0);
        for i in 1..=j {
            let inner = projector_coefficients(Weight::new(w.a - i, w.b - i));
            let term = lambdas[i as usize - 1].times(&inner.mu[(j - i) as usize]);
            acc = acc.minus(&term);
        }
        mu.push(acc);
    }
    let coeffs = Arc::new(ProjectorCoefficients {
        weight: w,
        lambda: lambdas,
        mu,
    });
    memo()
        .write()
        .expect("memo lock")
        .insert(w, coeffs.clone());
    coeffs
}

/// Equivariant projection `S^a ⊗ D^b → V(a,b)`.
pub fn project<C: Coeff>(w: Weight, u: &TensorPoly<C>, ctx: &C::Ctx) -> Result<TensorPoly<C>, Error> {
    let expected = MultiDegree::sd(w.a, w.b);
    if u.degree() != &expected {
        return Err(PolyError::ShapeMismatch(u.degree().to_string(), expected.to_string()).into());
    }
    let coeffs = projector_coefficients(w);
    let mu: Vec<C> = coeffs.mu_in(ctx)?;
    let n = mu.len() - 1;
    let mut powers = Vec::with_capacity(n + 1);
    powers.push(u.clone());
    for j in 1..=n {
        let next = contract(&powers[j - 1])?;
        powers.push(next);
    }
    // Horner: μ0 u + δ(μ1 Δu + δ(μ2 Δ²u + …))
    let mut acc = powers[n].scale(&mu[n]);
    for j in (0..n).rev() {
        acc = trace_mul(&acc)?.add(&powers[j].scale(&mu[j]))?;
    }
    Ok(acc)
}
