//! Dense exact linear algebra over any [`Coeff`] ring that is a field.
//!
//! Elimination always pivots on the first nonzero entry of a column, so
//! results are deterministic.

use crate::coeff::Coeff;

/// Reduced row echelon form: the nonzero rows and their pivot columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Echelon<C> {
    pub rows: Vec<Vec<C>>,
    pub pivots: Vec<usize>,
    pub ncols: usize,
}

impl<C: Coeff> Echelon<C> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Columns without a pivot.
    pub fn free_columns(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.ncols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.ncols).filter(|&c| !is_pivot[c]).collect()
    }

    /// Null-space basis, one vector per free column, with a 1 in that column.
    pub fn kernel(&self, ctx: &C::Ctx) -> Vec<Vec<C>> {
        self.free_columns()
            .into_iter()
            .map(|f| {
                let mut v = vec![C::zero(ctx); self.ncols];
                v[f] = C::one(ctx);
                for (row, &p) in self.rows.iter().zip(&self.pivots) {
                    v[p] = row[f].negate();
                }
                v
            })
            .collect()
    }
}

fn eliminate_below<C: Coeff>(m: &mut [Vec<C>], r: usize, c: usize, full: bool) {
    let (head, tail) = m.split_at_mut(r);
    let (pivot, tail) = tail.split_first_mut().expect("pivot row exists");
    let pivot_row = &*pivot;
    let others: Vec<&mut Vec<C>> = if full {
        head.iter_mut().chain(tail.iter_mut()).collect()
    } else {
        tail.iter_mut().collect()
    };
    let support: Vec<usize> = (c..pivot_row.len())
        .filter(|&k| !pivot_row[k].is_zero())
        .collect();
    for row in others {
        if row[c].is_zero() {
            continue;
        }
        let f = row[c].clone();
        for &k in &support {
            row[k] = row[k].minus(&f.times(&pivot_row[k]));
        }
    }
}

fn reduce<C: Coeff>(mut m: Vec<Vec<C>>, ncols: usize, full: bool) -> Echelon<C> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inverse().expect("pivot is nonzero");
        for x in m[r][c..].iter_mut() {
            if !x.is_zero() {
                *x = x.times(&inv);
            }
        }
        eliminate_below(&mut m, r, c, full);
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    Echelon {
        rows: m,
        pivots,
        ncols,
    }
}

/// Reduced row echelon form of a matrix given by rows of length `ncols`.
pub fn rref<C: Coeff>(m: Vec<Vec<C>>, ncols: usize) -> Echelon<C> {
    debug_assert!(m.iter().all(|r| r.len() == ncols));
    reduce(m, ncols, true)
}

/// Rank by forward elimination only.
pub fn rank<C: Coeff>(m: Vec<Vec<C>>, ncols: usize) -> usize {
    debug_assert!(m.iter().all(|r| r.len() == ncols));
    reduce(m, ncols, false).rank()
}

/// Null space of the matrix, as column vectors of length `ncols`.
pub fn kernel<C: Coeff>(m: Vec<Vec<C>>, ncols: usize, ctx: &C::Ctx) -> Vec<Vec<C>> {
    rref(m, ncols).kernel(ctx)
}

/// Coefficients `x` with `Σ xᵢ basisᵢ = target`, or `None` if `target` is
/// outside the span. Free directions are set to zero.
pub fn solve_in_span<C: Coeff>(basis: &[Vec<C>], target: &[C], ctx: &C::Ctx) -> Option<Vec<C>> {
    let n = basis.len();
    let len = target.len();
    let rows: Vec<Vec<C>> = (0..len)
        .map(|i| {
            let mut row: Vec<C> = basis.iter().map(|b| b[i].clone()).collect();
            row.push(target[i].clone());
            row
        })
        .collect();
    let ech = rref(rows, n + 1);
    if ech.pivots.last() == Some(&n) {
        return None;
    }
    let mut x = vec![C::zero(ctx); n];
    for (row, &p) in ech.rows.iter().zip(&ech.pivots) {
        x[p] = row[n].clone();
    }
    Some(x)
}

/// Inverse of a square matrix, or `None` if singular.
pub fn invert<C: Coeff>(m: &[Vec<C>], ctx: &C::Ctx) -> Option<Vec<Vec<C>>> {
    let n = m.len();
    let rows: Vec<Vec<C>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|k| if k == i { C::one(ctx) } else { C::zero(ctx) }));
            row
        })
        .collect();
    let ech = rref(rows, 2 * n);
    if ech.rank() < n || ech.pivots[n - 1] != n - 1 {
        return None;
    }
    Some(ech.rows.into_iter().map(|r| r[n..].to_vec()).collect())
}
