//! Basis maps of `Hom_G(V(a,b) ⊗ V(c,d), V(e,f))`, bases of `V(a,b)` and
//! their matrix representatives.

use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::cgops::{
    contract, contract_inner, contract_outer, iterate, project, wedge_dd, wedge_ss,
};
use crate::coeff::{Coeff, Rational};
use crate::error::Error;
use crate::linalg;
use crate::lr3::{HomSpaceSpec, LrError, Weight};
use crate::tensorpoly::{Monomial, MultiDegree, TensorPoly};

/// A basis of `V(a,b) = ker Δ ⊂ S^a ⊗ D^b` together with a coordinate solver.
///
/// Coordinates are read off at `n = dim V(a,b)` pivot monomials: if `P` is
/// the matrix of the basis restricted to those monomials, the coordinates
/// of `v` are `v|_P · P⁻¹`. For the canonical basis `P` is the identity.
#[derive(Clone, Debug)]
pub struct KernelBasis<C: Coeff> {
    weight: Weight,
    vectors: Vec<TensorPoly<C>>,
    pivots: Vec<Monomial>,
    inverse: Option<Vec<Vec<C>>>,
    ctx: C::Ctx,
}

/// The canonical basis of `V(a,b)`: the reduced-echelon kernel of Δ, one
/// vector per non-pivot monomial, in canonical monomial order.
pub fn kernel_basis<C: Coeff>(w: Weight, ctx: &C::Ctx) -> Result<KernelBasis<C>, Error> {
    let degree = MultiDegree::sd(w.a, w.b);
    let cols = degree.monomials();
    let expected = w.dim();
    if w.a == 0 || w.b == 0 {
        let vectors = cols
            .iter()
            .map(|m| TensorPoly::from_terms(degree.clone(), [(*m, C::one(ctx))]))
            .collect::<Result<Vec<_>, _>>()?;
        return Ok(KernelBasis {
            weight: w,
            vectors,
            pivots: cols,
            inverse: None,
            ctx: ctx.clone(),
        });
    }
    let rows = MultiDegree::sd(w.a - 1, w.b - 1).monomials();
    let mut matrix = vec![vec![C::zero(ctx); cols.len()]; rows.len()];
    for (k, m) in cols.iter().enumerate() {
        let image = contract(&TensorPoly::from_terms(degree.clone(), [(*m, C::one(ctx))])?)?;
        for (m2, c) in image.terms() {
            let r = rows.binary_search(m2).expect("image monomial in target space");
            matrix[r][k] = c.clone();
        }
    }
    let ech = linalg::rref(matrix, cols.len());
    let free = ech.free_columns();
    if free.len() as u64 != expected {
        return Err(Error::KernelDimension {
            weight: w,
            found: free.len(),
            expected,
        });
    }
    let vectors = ech
        .kernel(ctx)
        .into_iter()
        .map(|v| {
            TensorPoly::from_terms(
                degree.clone(),
                v.into_iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(k, c)| (cols[k], c)),
            )
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(KernelBasis {
        weight: w,
        vectors,
        pivots: free.into_iter().map(|k| cols[k]).collect(),
        inverse: None,
        ctx: ctx.clone(),
    })
}

impl<C: Coeff> KernelBasis<C> {
    /// Wraps an arbitrary basis of `V(w)`, e.g. a hand-written fixture.
    pub fn from_vectors(w: Weight, vectors: Vec<TensorPoly<C>>, ctx: &C::Ctx) -> Result<Self, Error> {
        let degree = MultiDegree::sd(w.a, w.b);
        if vectors.len() as u64 != w.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{} vectors given for {w} of dimension {}",
                vectors.len(),
                w.dim()
            )));
        }
        for v in &vectors {
            if v.degree() != &degree {
                return Err(Error::DimensionMismatch(format!("vector on {} for {w}", v.degree())));
            }
            if !contract(v)?.is_zero() {
                return Err(Error::NotInSpan);
            }
        }
        let cols = degree.monomials();
        let rows: Vec<Vec<C>> = vectors.iter().map(|v| dense(v, &cols, ctx)).collect();
        let ech = linalg::rref(rows.clone(), cols.len());
        if ech.rank() != vectors.len() {
            return Err(Error::DimensionMismatch(format!(
                "vectors for {w} span only {} dimensions",
                ech.rank()
            )));
        }
        let restricted: Vec<Vec<C>> = rows
            .iter()
            .map(|r| ech.pivots.iter().map(|&p| r[p].clone()).collect())
            .collect();
        let inverse = linalg::invert(&restricted, ctx).ok_or_else(|| {
            Error::Internal("restriction of a basis to its pivot monomials is singular".into())
        })?;
        Ok(KernelBasis {
            weight: w,
            vectors,
            pivots: ech.pivots.iter().map(|&p| cols[p]).collect(),
            inverse: Some(inverse),
            ctx: ctx.clone(),
        })
    }

    pub fn weight(&self) -> Weight {
        self.weight
    }

    pub fn vectors(&self) -> &[TensorPoly<C>] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Monomials at which coordinates are read.
    pub fn pivots(&self) -> &[Monomial] {
        &self.pivots
    }

    /// Human-readable labels, one per basis vector.
    pub fn labels(&self) -> Vec<String> {
        let degree = MultiDegree::sd(self.weight.a, self.weight.b);
        match self.inverse {
            None => self.pivots.iter().map(|m| m.label(&degree)).collect(),
            Some(_) => (1..=self.len()).map(|i| format!("v{i}")).collect(),
        }
    }

    /// Coordinates of `v ∈ V(a,b)` in this basis.
    pub fn coordinates(&self, v: &TensorPoly<C>) -> Result<Vec<C>, Error> {
        let degree = MultiDegree::sd(self.weight.a, self.weight.b);
        if v.degree() != &degree {
            return Err(Error::DimensionMismatch(format!(
                "vector on {} for {}",
                v.degree(),
                self.weight
            )));
        }
        if !contract(v)?.is_zero() {
            return Err(Error::NotInSpan);
        }
        let zero = C::zero(&self.ctx);
        let restricted: Vec<C> = self
            .pivots
            .iter()
            .map(|m| v.coeff(m).cloned().unwrap_or_else(|| zero.clone()))
            .collect();
        Ok(match &self.inverse {
            None => restricted,
            Some(inv) => (0..self.len())
                .map(|k| {
                    restricted
                        .iter()
                        .zip(inv)
                        .fold(zero.clone(), |acc, (x, row)| acc.plus(&x.times(&row[k])))
                })
                .collect(),
        })
    }

    /// `Σ coeffsᵢ vᵢ`.
    pub fn combination(&self, coeffs: &[C]) -> Result<TensorPoly<C>, Error> {
        if coeffs.len() != self.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} coefficients for a basis of size {}",
                coeffs.len(),
                self.len()
            )));
        }
        Ok(TensorPoly::linear_combination(
            MultiDegree::sd(self.weight.a, self.weight.b),
            coeffs,
            &self.vectors,
        )?)
    }
}

fn dense<C: Coeff>(v: &TensorPoly<C>, cols: &[Monomial], ctx: &C::Ctx) -> Vec<C> {
    let mut row = vec![C::zero(ctx); cols.len()];
    for (m, c) in v.terms() {
        let k = cols.binary_search(m).expect("monomial of the ambient space");
        row[k] = c.clone();
    }
    row
}

/// Which of the two composite formulas realizes the basis map.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Branch {
    /// `π ∘ ϑ^t ∘ β^j ∘ α^{s−j}`, for `t ≥ 0`.
    Theta,
    /// `π ∘ ω^{−t} ∘ β^j ∘ α^{s+t−j}`, for `t ≤ 0`.
    Omega,
}

/// One basis map of a hom space.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CGMapSpec {
    pub spec: HomSpaceSpec,
    pub j: u32,
    pub branch: Branch,
}

impl CGMapSpec {
    /// The basis map with index `j`; `t = 0` uses [`Branch::Theta`].
    pub fn new(spec: HomSpaceSpec, j: u32) -> Result<Self, Error> {
        if !spec.contains(j) {
            return Err(LrError::NotAdmissible {
                j,
                admissible: spec.js.clone(),
            }
            .into());
        }
        let branch = if spec.t >= 0 { Branch::Theta } else { Branch::Omega };
        Ok(CGMapSpec { spec, j, branch })
    }

    pub fn from_weights(src1: Weight, src2: Weight, dst: Weight, j: u32) -> Result<Self, Error> {
        let spec = HomSpaceSpec::new(src1, src2, dst)
            .filter(|s| !s.js.is_empty())
            .ok_or(Error::NotOccurring { src1, src2, dst })?;
        CGMapSpec::new(spec, j)
    }

    pub fn with_branch(mut self, branch: Branch) -> Result<Self, Error> {
        let ok = match branch {
            Branch::Theta => self.spec.t >= 0,
            Branch::Omega => self.spec.t <= 0,
        };
        if !ok {
            return Err(Error::InvalidInstance(format!(
                "{branch:?} branch needs t of the other sign (t = {})",
                self.spec.t
            )));
        }
        self.branch = branch;
        Ok(self)
    }

    /// Composite operator as a string, e.g. `π∘ϑ∘β∘α^2`.
    pub fn label(&self) -> String {
        fn power(name: &str, k: i64) -> Option<String> {
            match k {
                0 => None,
                1 => Some(name.to_string()),
                k => Some(format!("{name}^{k}")),
            }
        }
        let (s, t, j) = (self.spec.s, self.spec.t, self.j as i64);
        let parts = match self.branch {
            Branch::Theta => [power("ϑ", t), power("β", j), power("α", s - j)],
            Branch::Omega => [power("ω", -t), power("β", j), power("α", s + t - j)],
        };
        let mut out = vec!["π".to_string()];
        out.extend(parts.into_iter().flatten());
        out.join("∘")
    }

    pub fn source_degree(&self) -> MultiDegree {
        let (w1, w2) = (self.spec.src1, self.spec.src2);
        MultiDegree::sdsd(w1.a, w1.b, w2.a, w2.b)
    }
}

/// The basis map before the final projection: an element of `S^e ⊗ D^f`.
pub fn premap<C: Coeff>(ms: &CGMapSpec, u: &TensorPoly<C>) -> Result<TensorPoly<C>, Error> {
    let expected = ms.source_degree();
    if u.degree() != &expected {
        return Err(Error::DimensionMismatch(format!(
            "input on {} for a map from {expected}",
            u.degree()
        )));
    }
    let (s, t, j) = (ms.spec.s, ms.spec.t, ms.j as usize);
    let out = match ms.branch {
        Branch::Theta => {
            let v = iterate(u, (s - j as i64) as usize, contract_outer)?;
            let v = iterate(&v, j, contract_inner)?;
            let v = v.merge_slots(1, 3)?.permute_slots(&[0, 2, 1])?;
            let v = iterate(&v, t as usize, wedge_ss)?;
            v.merge_slots(0, 1)?
        }
        Branch::Omega => {
            let v = iterate(u, (s + t - j as i64) as usize, contract_outer)?;
            let v = iterate(&v, j, contract_inner)?;
            let v = v.merge_slots(0, 2)?;
            let v = iterate(&v, (-t) as usize, wedge_dd)?;
            v.merge_slots(1, 2)?
        }
    };
    let dst = ms.spec.dst;
    if out.degree() != &MultiDegree::sd(dst.a, dst.b) {
        return Err(Error::Internal(format!(
            "{} landed on {} instead of {}",
            ms.label(),
            out.degree(),
            dst
        )));
    }
    Ok(out)
}

/// The basis map `V(a,b) ⊗ V(c,d) → V(e,f)` applied to `u`.
pub fn cg_basis_map<C: Coeff>(ms: &CGMapSpec, u: &TensorPoly<C>, ctx: &C::Ctx) -> Result<TensorPoly<C>, Error> {
    project(ms.spec.dst, &premap(ms, u)?, ctx)
}

/// `map(x ⊗ y)` for `x ∈ V(a,b)`, `y ∈ V(c,d)`.
pub fn apply_bilinear<C: Coeff>(
    ms: &CGMapSpec,
    x: &TensorPoly<C>,
    y: &TensorPoly<C>,
    ctx: &C::Ctx,
) -> Result<TensorPoly<C>, Error> {
    cg_basis_map(ms, &x.tensor(y)?, ctx)
}

/// The image of the test monomial `(e1^a ⊗ x3^b) ⊗ (e3^c ⊗ x1^d)`.
pub fn test_monomial<C: Coeff>(ms: &CGMapSpec, ctx: &C::Ctx) -> TensorPoly<C> {
    let (w1, w2) = (ms.spec.src1, ms.spec.src2);
    TensorPoly::monomial(
        ms.source_degree(),
        &[[w1.a, 0, 0], [0, 0, w1.b], [0, 0, w2.a], [w2.b, 0, 0]],
        C::one(ctx),
    )
    .expect("shape matches")
}

/// A sparse matrix with labelled rows and columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix<C> {
    pub rows: usize,
    pub cols: usize,
    pub basis_rows: Vec<String>,
    pub basis_cols: Vec<String>,
    /// `(row, col, value)`, sorted, without zeros.
    pub entries: Vec<(usize, usize, C)>,
}

impl<C: Coeff> SparseMatrix<C> {
    /// Builds a matrix from its columns (dense coordinate vectors).
    pub fn from_columns(basis_rows: Vec<String>, basis_cols: Vec<String>, columns: &[Vec<C>]) -> Self {
        let mut entries = Vec::new();
        for (j, col) in columns.iter().enumerate() {
            for (i, c) in col.iter().enumerate() {
                if !c.is_zero() {
                    entries.push((i, j, c.clone()));
                }
            }
        }
        entries.sort_by_key(|e| (e.0, e.1));
        SparseMatrix {
            rows: basis_rows.len(),
            cols: basis_cols.len(),
            basis_rows,
            basis_cols,
            entries,
        }
    }

    pub fn to_dense(&self, ctx: &C::Ctx) -> Vec<Vec<C>> {
        let mut m = vec![vec![C::zero(ctx); self.cols]; self.rows];
        for (i, j, c) in &self.entries {
            m[*i][*j] = c.clone();
        }
        m
    }

    pub fn rank(&self, ctx: &C::Ctx) -> usize {
        linalg::rank(self.to_dense(ctx), self.cols)
    }

    /// Null space as dense column-coordinate vectors.
    pub fn kernel(&self, ctx: &C::Ctx) -> Vec<Vec<C>> {
        linalg::kernel(self.to_dense(ctx), self.cols, ctx)
    }

    /// Stacks matrices with equal column sets on top of each other.
    pub fn vstack(blocks: &[SparseMatrix<C>]) -> Result<Self, Error> {
        let first = blocks
            .first()
            .ok_or_else(|| Error::DimensionMismatch("nothing to stack".into()))?;
        let mut out = SparseMatrix {
            rows: 0,
            cols: first.cols,
            basis_rows: Vec::new(),
            basis_cols: first.basis_cols.clone(),
            entries: Vec::new(),
        };
        for (k, b) in blocks.iter().enumerate() {
            if b.cols != first.cols {
                return Err(Error::DimensionMismatch(format!(
                    "block {k} has {} columns, expected {}",
                    b.cols, first.cols
                )));
            }
            let offset = out.rows;
            out.entries
                .extend(b.entries.iter().map(|(i, j, c)| (i + offset, *j, c.clone())));
            out.basis_rows
                .extend(b.basis_rows.iter().map(|l| format!("{}:{l}", k + 1)));
            out.rows += b.rows;
        }
        Ok(out)
    }

    /// `row,col,value` triplets with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("row,col,value\n");
        for (i, j, c) in &self.entries {
            out.push_str(&format!("{i},{j},{c}\n"));
        }
        out
    }
}

impl<C: Coeff> Serialize for SparseMatrix<C> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        #[serde(untagged)]
        enum Cell<'a, C> {
            Index(usize),
            Value(&'a C),
        }
        let entries: Vec<[Cell<C>; 3]> = self
            .entries
            .iter()
            .map(|(i, j, c)| [Cell::Index(*i), Cell::Index(*j), Cell::Value(c)])
            .collect();
        let mut st = serializer.serialize_struct("SparseMatrix", 5)?;
        st.serialize_field("rows", &self.rows)?;
        st.serialize_field("cols", &self.cols)?;
        st.serialize_field("basisRows", &self.basis_rows)?;
        st.serialize_field("basisCols", &self.basis_cols)?;
        st.serialize_field("entries", &entries)?;
        st.end()
    }
}

fn check_basis<C: Coeff>(basis: &KernelBasis<C>, w: Weight, role: &str) -> Result<(), Error> {
    if basis.weight() != w {
        return Err(Error::DimensionMismatch(format!(
            "{role} basis is for {}, expected {w}",
            basis.weight()
        )));
    }
    Ok(())
}

fn columns<C, F>(n: usize, f: F) -> Result<Vec<Vec<C>>, Error>
where
    C: Coeff,
    F: Fn(usize) -> Result<Vec<C>, Error> + Sync + Send,
{
    (0..n).into_par_iter().map(f).collect()
}

/// Matrix of `y ↦ map(x ⊗ y)` with columns over `basis_b` and rows over `basis_t`.
pub fn matrix_fixed_first<C: Coeff>(
    ms: &CGMapSpec,
    x: &TensorPoly<C>,
    basis_b: &KernelBasis<C>,
    basis_t: &KernelBasis<C>,
    ctx: &C::Ctx,
) -> Result<SparseMatrix<C>, Error> {
    check_basis(basis_b, ms.spec.src2, "second source")?;
    check_basis(basis_t, ms.spec.dst, "target")?;
    let cols = columns(basis_b.len(), |k| {
        basis_t.coordinates(&apply_bilinear(ms, x, &basis_b.vectors()[k], ctx)?)
    })?;
    Ok(SparseMatrix::from_columns(basis_t.labels(), basis_b.labels(), &cols))
}

/// Matrix of `x ↦ map(x ⊗ y)` with columns over `basis_a` and rows over `basis_t`.
pub fn matrix_fixed_second<C: Coeff>(
    ms: &CGMapSpec,
    basis_a: &KernelBasis<C>,
    y: &TensorPoly<C>,
    basis_t: &KernelBasis<C>,
    ctx: &C::Ctx,
) -> Result<SparseMatrix<C>, Error> {
    check_basis(basis_a, ms.spec.src1, "first source")?;
    check_basis(basis_t, ms.spec.dst, "target")?;
    let cols = columns(basis_a.len(), |k| {
        basis_t.coordinates(&apply_bilinear(ms, &basis_a.vectors()[k], y, ctx)?)
    })?;
    Ok(SparseMatrix::from_columns(basis_t.labels(), basis_a.labels(), &cols))
}

/// The full bilinear map: rows over `basis_t`, column `i·dim B + k` holds
/// `map(aᵢ ⊗ b_k)`.
pub fn bilinear_matrix<C: Coeff>(
    ms: &CGMapSpec,
    basis_a: &KernelBasis<C>,
    basis_b: &KernelBasis<C>,
    basis_t: &KernelBasis<C>,
    ctx: &C::Ctx,
) -> Result<SparseMatrix<C>, Error> {
    check_basis(basis_a, ms.spec.src1, "first source")?;
    check_basis(basis_b, ms.spec.src2, "second source")?;
    check_basis(basis_t, ms.spec.dst, "target")?;
    let nb = basis_b.len();
    let cols = columns(basis_a.len() * nb, |k| {
        let (i, l) = (k / nb, k % nb);
        basis_t.coordinates(&apply_bilinear(
            ms,
            &basis_a.vectors()[i],
            &basis_b.vectors()[l],
            ctx,
        )?)
    })?;
    let (la, lb) = (basis_a.labels(), basis_b.labels());
    let col_labels = la
        .iter()
        .flat_map(|a| lb.iter().map(move |b| format!("({a})⊗({b})")))
        .collect();
    Ok(SparseMatrix::from_columns(basis_t.labels(), col_labels, &cols))
}

/// `T[i][k]` = coordinates of `map(aᵢ ⊗ b_k)` in `basis_t`; the first
/// argument indexes rows.
pub fn square_table<C: Coeff>(
    ms: &CGMapSpec,
    basis_a: &KernelBasis<C>,
    basis_b: &KernelBasis<C>,
    basis_t: &KernelBasis<C>,
    ctx: &C::Ctx,
) -> Result<Vec<Vec<Vec<C>>>, Error> {
    let m = bilinear_matrix(ms, basis_a, basis_b, basis_t, ctx)?;
    let dense = m.to_dense(ctx);
    let nb = basis_b.len();
    Ok((0..basis_a.len())
        .map(|i| {
            (0..nb)
                .map(|k| dense.iter().map(|row| row[i * nb + k].clone()).collect())
                .collect()
        })
        .collect())
}

/// Evidence that the basis maps of a hom space are linearly independent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct IndependenceReport {
    pub spec: HomSpaceSpec,
    /// `e1`-degree of each pre-projection image of the test monomial, per `j`.
    pub e1_degrees: Vec<u32>,
    /// Whether each pre-projection image is divisible by `e2 ⊗ x2`.
    pub divisible_by_e2x2: Vec<bool>,
    /// Rank of the projected images of the test monomial.
    pub rank: usize,
    pub independent: bool,
}

/// Evaluates every basis map on the test monomial and checks that the
/// results are linearly independent in `V(e,f)`.
pub fn verify_basis_independence(spec: &HomSpaceSpec) -> Result<IndependenceReport, Error> {
    if spec.js.is_empty() {
        return Err(Error::NotOccurring {
            src1: spec.src1,
            src2: spec.src2,
            dst: spec.dst,
        });
    }
    let mut e1_degrees = Vec::new();
    let mut divisible = Vec::new();
    let mut projected = Vec::new();
    for &j in &spec.js {
        let ms = CGMapSpec::new(spec.clone(), j)?;
        let pre = premap::<Rational>(&ms, &test_monomial(&ms, &()))?;
        let [(m, _)] = pre.terms() else {
            return Err(Error::IndependenceFailure(format!(
                "{} maps the test monomial to {} terms",
                ms.label(),
                pre.len()
            )));
        };
        e1_degrees.push(m.exp(0, 0) as u32);
        divisible.push(m.exp(0, 1) > 0 && m.exp(1, 1) > 0);
        projected.push(project(spec.dst, &pre, &())?);
    }
    let dst = spec.dst;
    let cols = MultiDegree::sd(dst.a, dst.b).monomials();
    let rows: Vec<Vec<Rational>> = projected.iter().map(|v| dense(v, &cols, &())).collect();
    let rank = linalg::rank(rows, cols.len());
    let mut sorted = e1_degrees.clone();
    sorted.sort_unstable();
    sorted.dedup();
    let distinct = sorted.len() == e1_degrees.len();
    let report = IndependenceReport {
        spec: spec.clone(),
        e1_degrees,
        divisible_by_e2x2: divisible,
        rank,
        independent: rank == spec.js.len(),
    };
    if !report.independent || !distinct {
        return Err(Error::IndependenceFailure(format!(
            "rank {} of {} maps, e1-degrees {:?}",
            report.rank,
            spec.js.len(),
            report.e1_degrees
        )));
    }
    Ok(report)
}
