//! Sparse exact polynomials on multi-graded tensor spaces.
//!
//! A [`TensorPoly`] is an element of a tensor product of graded slots, each
//! slot being `S^a = Sym^a(C^3)` in the variables `e1, e2, e3` or
//! `D^b = Sym^b(C^3)^∨` in the dual variables `x1, x2, x3`. Terms are kept in
//! a sorted vector keyed by the concatenated exponent vectors, so iteration
//! order is canonical (lexicographic, slots left to right).

use std::collections::HashMap;
use std::fmt;

use rustc_hash::FxHashMap;
use serde::de::{self, DeserializeOwned};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::coeff::Coeff;

/// Upper bound on the number of slots of any tensor space used here.
pub const MAX_SLOTS: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("slot {slot} out of range for a {len}-slot space")]
    SlotOutOfRange { slot: usize, len: usize },
    #[error("variable index {0} out of range (expected 1, 2 or 3)")]
    BadVariable(usize),
    #[error("cannot merge an S slot with a D slot")]
    KindMismatch,
    #[error("at most {MAX_SLOTS} slots are supported, got {0}")]
    TooManySlots(usize),
    #[error("slot degree {0} exceeds the supported maximum")]
    DegreeOverflow(u64),
    #[error("monomial does not match the multidegree {0}")]
    DegreeMismatch(String),
    #[error("operands have different multidegrees ({0} vs {1})")]
    ShapeMismatch(String, String),
    #[error("slot permutation {0:?} is not a permutation of the slots")]
    BadPermutation(Vec<usize>),
    #[error("group element is singular")]
    SingularMatrix,
}

/// Which factor a slot belongs to: `S` (variables `e_i`) or `D` (variables `x_i`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SlotKind {
    S,
    D,
}

impl SlotKind {
    fn var_name(self) -> char {
        match self {
            SlotKind::S => 'e',
            SlotKind::D => 'x',
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Slot {
    pub kind: SlotKind,
    pub degree: u32,
}

impl Slot {
    pub fn s(degree: u32) -> Self {
        Slot {
            kind: SlotKind::S,
            degree,
        }
    }

    pub fn d(degree: u32) -> Self {
        Slot {
            kind: SlotKind::D,
            degree,
        }
    }
}

/// The ordered list of graded slots of a tensor space.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiDegree {
    slots: Vec<Slot>,
}

impl MultiDegree {
    pub fn new(slots: Vec<Slot>) -> Result<Self, PolyError> {
        if slots.len() > MAX_SLOTS {
            return Err(PolyError::TooManySlots(slots.len()));
        }
        if let Some(s) = slots.iter().find(|s| s.degree > u16::MAX as u32) {
            return Err(PolyError::DegreeOverflow(s.degree as u64));
        }
        Ok(MultiDegree { slots })
    }

    /// `S^a ⊗ D^b`.
    pub fn sd(a: u32, b: u32) -> Self {
        MultiDegree::new(vec![Slot::s(a), Slot::d(b)]).expect("two slots")
    }

    /// `(S^a ⊗ D^b) ⊗ (S^c ⊗ D^d)`.
    pub fn sdsd(a: u32, b: u32, c: u32, d: u32) -> Self {
        MultiDegree::new(vec![Slot::s(a), Slot::d(b), Slot::s(c), Slot::d(d)]).expect("four slots")
    }

    /// `S^a ⊗ S^c ⊗ D^m`.
    pub fn ssd(a: u32, c: u32, m: u32) -> Self {
        MultiDegree::new(vec![Slot::s(a), Slot::s(c), Slot::d(m)]).expect("three slots")
    }

    /// `S^m ⊗ D^b ⊗ D^d`.
    pub fn sdd(m: u32, b: u32, d: u32) -> Self {
        MultiDegree::new(vec![Slot::s(m), Slot::d(b), Slot::d(d)]).expect("three slots")
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn slot(&self, i: usize) -> Result<Slot, PolyError> {
        self.slots.get(i).copied().ok_or(PolyError::SlotOutOfRange {
            slot: i,
            len: self.slots.len(),
        })
    }

    fn with_degree(&self, i: usize, degree: u32) -> Self {
        let mut slots = self.slots.clone();
        slots[i].degree = degree;
        MultiDegree { slots }
    }

    /// Shifts the degree of several slots at once, clamping at zero.
    /// The flag is set when some slot was clamped, i.e. the result is identically zero.
    pub(crate) fn shifted(&self, shifts: &[(usize, i64)]) -> (Self, bool) {
        let mut slots = self.slots.clone();
        let mut clamped = false;
        for &(i, delta) in shifts {
            let d = slots[i].degree as i64 + delta;
            if d < 0 {
                clamped = true;
            }
            slots[i].degree = d.max(0) as u32;
        }
        (MultiDegree { slots }, clamped)
    }

    /// Enumerates every monomial of this space in canonical order.
    pub fn monomials(&self) -> Vec<Monomial> {
        let mut out = vec![Monomial::default()];
        for (k, slot) in self.slots.iter().enumerate() {
            let triples = exponent_triples(slot.degree);
            let mut next = Vec::with_capacity(out.len() * triples.len());
            for m in &out {
                for t in &triples {
                    let mut m2 = *m;
                    m2.0[3 * k..3 * k + 3].copy_from_slice(t);
                    next.push(m2);
                }
            }
            out = next;
        }
        out.sort_unstable();
        out
    }

    /// Number of monomials, i.e. the dimension of the tensor space.
    pub fn dimension(&self) -> u64 {
        self.slots
            .iter()
            .map(|s| {
                let d = s.degree as u64;
                (d + 1) * (d + 2) / 2
            })
            .product()
    }
}

impl fmt::Display for MultiDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .slots
            .iter()
            .map(|s| format!("{:?}{}", s.kind, s.degree))
            .collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

fn exponent_triples(degree: u32) -> Vec<[u16; 3]> {
    let d = degree as u16;
    let mut out = Vec::with_capacity(((degree + 1) * (degree + 2) / 2) as usize);
    for n1 in 0..=d {
        for n2 in 0..=(d - n1) {
            out.push([n1, n2, d - n1 - n2]);
        }
    }
    out
}

/// One exponent triple per slot, packed into a fixed array. Unused slots are zero.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial([u16; 3 * MAX_SLOTS]);

impl Monomial {
    pub fn from_slots(exps: &[[u32; 3]]) -> Result<Self, PolyError> {
        if exps.len() > MAX_SLOTS {
            return Err(PolyError::TooManySlots(exps.len()));
        }
        let mut m = Monomial::default();
        for (k, e) in exps.iter().enumerate() {
            for (v, &x) in e.iter().enumerate() {
                m.0[3 * k + v] = u16::try_from(x).map_err(|_| PolyError::DegreeOverflow(x as u64))?;
            }
        }
        Ok(m)
    }

    pub fn slot(&self, k: usize) -> [u16; 3] {
        [self.0[3 * k], self.0[3 * k + 1], self.0[3 * k + 2]]
    }

    /// Exponent of variable `var` (0-based) in slot `slot`.
    #[inline]
    pub fn exp(&self, slot: usize, var: usize) -> u16 {
        self.0[3 * slot + var]
    }

    #[inline]
    pub(crate) fn exp_mut(&mut self, slot: usize, var: usize) -> &mut u16 {
        &mut self.0[3 * slot + var]
    }

    pub fn slot_degree(&self, k: usize) -> u32 {
        self.slot(k).iter().map(|&n| n as u32).sum()
    }

    fn matches(&self, degree: &MultiDegree) -> bool {
        degree
            .slots
            .iter()
            .enumerate()
            .all(|(k, s)| self.slot_degree(k) == s.degree)
            && (degree.len()..MAX_SLOTS).all(|k| self.slot(k) == [0, 0, 0])
    }

    /// Renders the monomial for the given slot layout, e.g. `e1^2e3⊗x2`.
    pub fn label(&self, degree: &MultiDegree) -> String {
        let parts: Vec<String> = degree
            .slots
            .iter()
            .enumerate()
            .map(|(k, s)| {
                let mut out = String::new();
                for v in 0..3 {
                    match self.exp(k, v) {
                        0 => {}
                        1 => out.push_str(&format!("{}{}", s.kind.var_name(), v + 1)),
                        n => out.push_str(&format!("{}{}^{}", s.kind.var_name(), v + 1, n)),
                    }
                }
                if out.is_empty() {
                    out.push('1');
                }
                out
            })
            .collect();
        parts.join("⊗")
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let nonzero = (0..MAX_SLOTS)
            .rev()
            .find(|&k| self.slot(k) != [0, 0, 0])
            .map_or(1, |k| k + 1);
        let slots: Vec<[u16; 3]> = (0..nonzero).map(|k| self.slot(k)).collect();
        write!(f, "{slots:?}")
    }
}

/// Accumulates terms into a hash map and emits a canonical, zero-free polynomial.
pub(crate) struct Accumulator<C> {
    map: FxHashMap<Monomial, C>,
}

impl<C: Coeff> Accumulator<C> {
    pub(crate) fn with_capacity(n: usize) -> Self {
        Accumulator {
            map: FxHashMap::with_capacity_and_hasher(n, Default::default()),
        }
    }

    #[inline]
    pub(crate) fn push(&mut self, m: Monomial, c: C) {
        use std::collections::hash_map::Entry;
        match self.map.entry(m) {
            Entry::Occupied(mut o) => o.get_mut().add_assign(&c),
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub(crate) fn finish(self, degree: MultiDegree) -> TensorPoly<C> {
        let mut terms: Vec<(Monomial, C)> =
            self.map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by_key(|a| a.0);
        TensorPoly { degree, terms }
    }
}

/// A sparse element of a multi-graded tensor space with exact coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorPoly<C> {
    degree: MultiDegree,
    terms: Vec<(Monomial, C)>,
}

/// Image of one slot's monomial: exponent triples with coefficients.
type SlotImage<C> = Vec<([u16; 3], C)>;

impl<C: Coeff> TensorPoly<C> {
    pub fn zero(degree: MultiDegree) -> Self {
        TensorPoly {
            degree,
            terms: Vec::new(),
        }
    }

    pub fn monomial(degree: MultiDegree, exps: &[[u32; 3]], c: C) -> Result<Self, PolyError> {
        let m = Monomial::from_slots(exps)?;
        Self::from_terms(degree, [(m, c)])
    }

    /// Builds a polynomial from arbitrary terms: duplicates are summed and zeros dropped.
    pub fn from_terms(
        degree: MultiDegree,
        terms: impl IntoIterator<Item = (Monomial, C)>,
    ) -> Result<Self, PolyError> {
        let mut acc = Accumulator::with_capacity(0);
        for (m, c) in terms {
            if !m.matches(&degree) {
                return Err(PolyError::DegreeMismatch(degree.to_string()));
            }
            acc.push(m, c);
        }
        Ok(acc.finish(degree))
    }

    pub fn degree(&self) -> &MultiDegree {
        &self.degree
    }

    pub fn terms(&self) -> &[(Monomial, C)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Same as [`is_zero`](Self::is_zero).
    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn coeff(&self, m: &Monomial) -> Option<&C> {
        self.terms
            .binary_search_by(|t| t.0.cmp(m))
            .ok()
            .map(|i| &self.terms[i].1)
    }

    fn check_same_shape(&self, other: &Self) -> Result<(), PolyError> {
        if self.degree == other.degree {
            Ok(())
        } else {
            Err(PolyError::ShapeMismatch(
                self.degree.to_string(),
                other.degree.to_string(),
            ))
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_same_shape(other)?;
        let mut acc = Accumulator::with_capacity(self.len() + other.len());
        for (m, c) in self.terms.iter().chain(&other.terms) {
            acc.push(*m, c.clone());
        }
        Ok(acc.finish(self.degree.clone()))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        TensorPoly {
            degree: self.degree.clone(),
            terms: self.terms.iter().map(|(m, c)| (*m, c.negate())).collect(),
        }
    }

    pub fn scale(&self, k: &C) -> Self {
        if k.is_zero() {
            return TensorPoly::zero(self.degree.clone());
        }
        TensorPoly {
            degree: self.degree.clone(),
            terms: self.terms.iter().map(|(m, c)| (*m, c.times(k))).collect(),
        }
    }

    /// `Σ kᵢ · polysᵢ`; all inputs must share `degree`.
    pub fn linear_combination(
        degree: MultiDegree,
        coeffs: &[C],
        polys: &[TensorPoly<C>],
    ) -> Result<Self, PolyError> {
        let mut acc = Accumulator::with_capacity(0);
        for (k, p) in coeffs.iter().zip(polys) {
            if p.degree != degree {
                return Err(PolyError::ShapeMismatch(
                    degree.to_string(),
                    p.degree.to_string(),
                ));
            }
            if k.is_zero() {
                continue;
            }
            for (m, c) in &p.terms {
                acc.push(*m, c.times(k));
            }
        }
        Ok(acc.finish(degree))
    }

    /// Applies a linear map defined on monomials. `f` pushes `(image, multiplier)`
    /// pairs into the buffer; the coefficient of each image is the source
    /// coefficient times the integer multiplier.
    pub(crate) fn transform<F>(&self, degree: MultiDegree, mut f: F) -> Self
    where
        F: FnMut(&Monomial, &mut Vec<(Monomial, i64)>),
    {
        let mut acc = Accumulator::with_capacity(self.len() * 2);
        let mut buf = Vec::with_capacity(8);
        for (m, c) in &self.terms {
            buf.clear();
            f(m, &mut buf);
            for &(m2, k) in &buf {
                acc.push(m2, if k == 1 { c.clone() } else { c.times_int(k) });
            }
        }
        acc.finish(degree)
    }

    fn check_slot(&self, slot: usize) -> Result<Slot, PolyError> {
        self.degree.slot(slot)
    }

    /// Formal partial derivative `∂/∂v` in one slot, `var` in `1..=3`
    /// (`e_var` for S slots, `x_var` for D slots). A derivative of a degree-0
    /// slot is the zero polynomial of that same (clamped) degree.
    pub fn partial_derivative(&self, slot: usize, var: usize) -> Result<Self, PolyError> {
        let s = self.check_slot(slot)?;
        let v = var_index(var)?;
        if s.degree == 0 {
            return Ok(TensorPoly::zero(self.degree.clone()));
        }
        let degree = self.degree.with_degree(slot, s.degree - 1);
        Ok(self.transform(degree, |m, out| {
            let n = m.exp(slot, v);
            if n > 0 {
                let mut m2 = *m;
                *m2.exp_mut(slot, v) -= 1;
                out.push((m2, n as i64));
            }
        }))
    }

    /// Multiplies one slot by its variable `var` in `1..=3`.
    pub fn multiply_into_slot(&self, slot: usize, var: usize) -> Result<Self, PolyError> {
        let s = self.check_slot(slot)?;
        let v = var_index(var)?;
        if s.degree as u64 + 1 > u16::MAX as u64 {
            return Err(PolyError::DegreeOverflow(s.degree as u64 + 1));
        }
        let degree = self.degree.with_degree(slot, s.degree + 1);
        Ok(TensorPoly {
            degree,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut m2 = *m;
                    *m2.exp_mut(slot, v) += 1;
                    (m2, c.clone())
                })
                .collect(),
        })
    }

    /// Multiplies slots `i` and `j` (of equal kind) together. The product is
    /// stored at position `min(i, j)` and the other slot is removed.
    pub fn merge_slots(&self, i: usize, j: usize) -> Result<Self, PolyError> {
        let si = self.check_slot(i)?;
        let sj = self.check_slot(j)?;
        if i == j {
            return Err(PolyError::BadPermutation(vec![i, j]));
        }
        if si.kind != sj.kind {
            return Err(PolyError::KindMismatch);
        }
        let total = si.degree as u64 + sj.degree as u64;
        if total > u16::MAX as u64 {
            return Err(PolyError::DegreeOverflow(total));
        }
        let (lo, hi) = (i.min(j), i.max(j));
        let mut slots = self.degree.slots.clone();
        slots[lo].degree = total as u32;
        slots.remove(hi);
        let degree = MultiDegree { slots };
        let n = self.degree.len();
        Ok(self.transform(degree, |m, out| {
            let mut m2 = Monomial::default();
            let mut k2 = 0;
            for k in 0..n {
                if k == hi {
                    continue;
                }
                for v in 0..3 {
                    *m2.exp_mut(k2, v) = m.exp(k, v) + if k == lo { m.exp(hi, v) } else { 0 };
                }
                k2 += 1;
            }
            out.push((m2, 1));
        }))
    }

    /// Reorders slots: slot `k` of the result is slot `order[k]` of `self`.
    pub fn permute_slots(&self, order: &[usize]) -> Result<Self, PolyError> {
        let n = self.degree.len();
        let mut seen = vec![false; n];
        if order.len() != n || order.iter().any(|&k| k >= n || std::mem::replace(&mut seen[k], true)) {
            return Err(PolyError::BadPermutation(order.to_vec()));
        }
        let degree = MultiDegree {
            slots: order.iter().map(|&k| self.degree.slots[k]).collect(),
        };
        let mut terms: Vec<(Monomial, C)> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut m2 = Monomial::default();
                for (k2, &k) in order.iter().enumerate() {
                    for v in 0..3 {
                        *m2.exp_mut(k2, v) = m.exp(k, v);
                    }
                }
                (m2, c.clone())
            })
            .collect();
        terms.sort_unstable_by_key(|a| a.0);
        Ok(TensorPoly { degree, terms })
    }

    /// Tensor product `self ⊗ other`, concatenating the slot lists.
    pub fn tensor(&self, other: &Self) -> Result<Self, PolyError> {
        let mut slots = self.degree.slots.clone();
        slots.extend_from_slice(&other.degree.slots);
        let degree = MultiDegree::new(slots)?;
        let shift = self.degree.len();
        let mut terms = Vec::with_capacity(self.len() * other.len());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let mut m = *m1;
                for k in 0..other.degree.len() {
                    for v in 0..3 {
                        *m.exp_mut(shift + k, v) = m2.exp(k, v);
                    }
                }
                let c = c1.times(c2);
                if !c.is_zero() {
                    terms.push((m, c));
                }
            }
        }
        // Lexicographic order on the concatenation is already respected.
        Ok(TensorPoly { degree, terms })
    }

    /// Acts by `g ∈ GL_3`: `e_i ↦ Σ_j g_{ji} e_j` on S slots and the
    /// contragredient `x_i ↦ Σ_j (g⁻¹)_{ij} x_j` on D slots, so that the
    /// pairing `Σ e_i ⊗ x_i` is invariant. Acting by `g` and then `h`
    /// equals acting by `h·g`.
    pub fn act(&self, g: &GroupElement<C>) -> Self {
        let mut cache: HashMap<(SlotKind, [u16; 3]), SlotImage<C>> = HashMap::new();
        let kinds: Vec<SlotKind> = self.degree.slots.iter().map(|s| s.kind).collect();
        let mut acc = Accumulator::with_capacity(self.len());
        for (m, c) in &self.terms {
            let mut partial: Vec<(Monomial, C)> = vec![(Monomial::default(), c.clone())];
            for (k, &kind) in kinds.iter().enumerate() {
                let exps = m.slot(k);
                let image = cache
                    .entry((kind, exps))
                    .or_insert_with(|| g.slot_image(kind, exps));
                let mut next = Vec::with_capacity(partial.len() * image.len());
                for (pm, pc) in &partial {
                    for (e, ic) in image.iter() {
                        let mut m2 = *pm;
                        for (v, &x) in e.iter().enumerate() {
                            *m2.exp_mut(k, v) = x;
                        }
                        next.push((m2, pc.times(ic)));
                    }
                }
                partial = next;
            }
            for (m2, c2) in partial {
                acc.push(m2, c2);
            }
        }
        acc.finish(self.degree.clone())
    }
}

fn var_index(var: usize) -> Result<usize, PolyError> {
    if (1..=3).contains(&var) {
        Ok(var - 1)
    } else {
        Err(PolyError::BadVariable(var))
    }
}

type Poly3<C> = Vec<([u16; 3], C)>;

fn mul3<C: Coeff>(a: &Poly3<C>, b: &Poly3<C>) -> Poly3<C> {
    let mut map: FxHashMap<[u16; 3], C> = FxHashMap::default();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]];
            let c = ca.times(cb);
            map.entry(e)
                .and_modify(|x| x.add_assign(&c))
                .or_insert(c);
        }
    }
    let mut out: Poly3<C> = map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
    out.sort_unstable_by_key(|x| x.0);
    out
}

/// An invertible 3×3 matrix together with its inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupElement<C> {
    mat: [[C; 3]; 3],
    inv: [[C; 3]; 3],
}

impl<C: Coeff> GroupElement<C> {
    pub fn new(mat: [[C; 3]; 3]) -> Result<Self, PolyError> {
        let m = &mat;
        let cof = |r0: usize, r1: usize, c0: usize, c1: usize| {
            m[r0][c0].times(&m[r1][c1]).minus(&m[r0][c1].times(&m[r1][c0]))
        };
        // adjugate: adj[i][j] = cofactor of entry (j, i)
        let adj = [
            [cof(1, 2, 1, 2), cof(0, 2, 1, 2).negate(), cof(0, 1, 1, 2)],
            [cof(1, 2, 0, 2).negate(), cof(0, 2, 0, 2), cof(0, 1, 0, 2).negate()],
            [cof(1, 2, 0, 1), cof(0, 2, 0, 1).negate(), cof(0, 1, 0, 1)],
        ];
        let det = (0..3).fold(C::zero(&m[0][0].ctx()), |acc, j| {
            acc.plus(&m[0][j].times(&adj[j][0]))
        });
        let det_inv = det.inverse().map_err(|_| PolyError::SingularMatrix)?;
        let inv = adj.map(|row| row.map(|x| x.times(&det_inv)));
        Ok(GroupElement { mat, inv })
    }

    pub fn identity(ctx: &C::Ctx) -> Self {
        let mat = std::array::from_fn(|i| {
            std::array::from_fn(|j| C::from_i64((i == j) as i64, ctx))
        });
        GroupElement::new(mat).expect("identity is invertible")
    }

    /// `I + λ·E_{ij}` with `i ≠ j` (0-based), which has determinant 1.
    pub fn elementary(i: usize, j: usize, lambda: i64, ctx: &C::Ctx) -> Self {
        assert!(i != j && i < 3 && j < 3, "elementary matrix needs i != j < 3");
        let mat = std::array::from_fn(|r| {
            std::array::from_fn(|c| {
                let base = (r == c) as i64;
                let extra = if (r, c) == (i, j) { lambda } else { 0 };
                C::from_i64(base + extra, ctx)
            })
        });
        GroupElement::new(mat).expect("elementary matrices are unimodular")
    }

    pub fn matrix(&self) -> &[[C; 3]; 3] {
        &self.mat
    }

    pub fn inverse_matrix(&self) -> &[[C; 3]; 3] {
        &self.inv
    }

    /// Matrix product `self · other`.
    pub fn compose(&self, other: &Self) -> Self {
        let a = &self.mat;
        let b = &other.mat;
        let ctx = a[0][0].ctx();
        let mat = std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                (0..3).fold(C::zero(&ctx), |acc, k| acc.plus(&a[i][k].times(&b[k][j])))
            })
        });
        GroupElement::new(mat).expect("product of invertible matrices")
    }

    fn linear_form(&self, kind: SlotKind, var: usize) -> Poly3<C> {
        let mut out = Vec::with_capacity(3);
        for j in (0..3).rev() {
            let c = match kind {
                SlotKind::S => self.mat[j][var].clone(),
                SlotKind::D => self.inv[var][j].clone(),
            };
            if !c.is_zero() {
                let mut e = [0u16; 3];
                e[j] = 1;
                out.push((e, c));
            }
        }
        out
    }

    fn slot_image(&self, kind: SlotKind, exps: [u16; 3]) -> Poly3<C> {
        let ctx = self.mat[0][0].ctx();
        let mut out: Poly3<C> = vec![([0, 0, 0], C::one(&ctx))];
        for (var, &n) in exps.iter().enumerate() {
            if n == 0 {
                continue;
            }
            let form = self.linear_form(kind, var);
            for _ in 0..n {
                out = mul3(&out, &form);
            }
        }
        out
    }
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
#[serde(bound(serialize = "C: Serialize", deserialize = "C: DeserializeOwned"))]
struct TermRepr<C> {
    exps: Vec<[u32; 3]>,
    coeff: C,
}

#[derive(Serialize, Deserialize)]
#[serde(bound(serialize = "C: Serialize", deserialize = "C: DeserializeOwned"))]
struct PolyRepr<C> {
    slots: Vec<(SlotKind, u32)>,
    terms: Vec<TermRepr<C>>,
}

impl<C: Coeff> Serialize for TensorPoly<C> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let n = self.degree.len();
        let repr = PolyRepr {
            slots: self.degree.slots.iter().map(|s| (s.kind, s.degree)).collect(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| TermRepr {
                    exps: (0..n)
                        .map(|k| m.slot(k).map(|e| e as u32))
                        .collect(),
                    coeff: c.clone(),
                })
                .collect(),
        };
        repr.serialize(serializer)
    }
}

impl<'de, C: Coeff> Deserialize<'de> for TensorPoly<C> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = PolyRepr::<C>::deserialize(deserializer)?;
        let degree = MultiDegree::new(
            repr.slots
                .iter()
                .map(|&(kind, degree)| Slot { kind, degree })
                .collect(),
        )
        .map_err(de::Error::custom)?;
        let mut terms = Vec::with_capacity(repr.terms.len());
        for t in repr.terms {
            if t.exps.len() != degree.len() {
                return Err(de::Error::custom(PolyError::DegreeMismatch(degree.to_string())));
            }
            terms.push((Monomial::from_slots(&t.exps).map_err(de::Error::custom)?, t.coeff));
        }
        TensorPoly::from_terms(degree, terms).map_err(de::Error::custom)
    }
}

impl<C: Coeff> fmt::Display for TensorPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})*{}", m.label(&self.degree))?;
        }
        Ok(())
    }
}
