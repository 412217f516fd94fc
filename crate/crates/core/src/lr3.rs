//! Littlewood-Richardson combinatorics for SL3.
//!
//! `V(a,b)` corresponds to the Young diagram `(a+b, b, 0)`. Tensoring with
//! `V(c,d)` adds `c+d` boxes labelled 1 and `d` boxes labelled 2; an
//! [`Expansion`] records how many of each land in every row. Two independent
//! routes to multiplicities are provided: [`decompose`] enumerates expansions
//! directly, while [`admissible_j`] solves the same conditions in closed form
//! through the parameters `s`, `t` and `j`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LrError {
    #[error("invalid weight {0:?}: expected two non-negative integers \"a,b\"")]
    BadWeight(String),
    #[error("rows {0:?} are not weakly decreasing and non-negative")]
    BadDiagram([i64; 3]),
    #[error("j = {j} is not admissible (admissible: {admissible:?})")]
    NotAdmissible { j: u32, admissible: Vec<u32> },
}

/// Highest-weight labels `(a, b)` of the irreducible SL3 representation `V(a,b)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Weight {
    pub a: u32,
    pub b: u32,
}

impl Weight {
    pub const fn new(a: u32, b: u32) -> Self {
        Weight { a, b }
    }

    /// Labels of the dual representation, `V(a,b)^∨ = V(b,a)`.
    pub fn dual(self) -> Self {
        Weight::new(self.b, self.a)
    }

    pub fn dim(self) -> u64 {
        dim_irrep(self)
    }

    pub fn young_diagram(self) -> YoungDiagram3 {
        YoungDiagram3 {
            rows: [self.a + self.b, self.b, 0],
        }
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "V({},{})", self.a, self.b)
    }
}

impl FromStr for Weight {
    type Err = LrError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || LrError::BadWeight(s.to_string());
        let (a, b) = s.split_once(',').ok_or_else(bad)?;
        Ok(Weight::new(
            a.trim().parse().map_err(|_| bad())?,
            b.trim().parse().map_err(|_| bad())?,
        ))
    }
}

/// A Young diagram with at most three rows.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct YoungDiagram3 {
    rows: [u32; 3],
}

impl YoungDiagram3 {
    pub fn new(rows: [i64; 3]) -> Result<Self, LrError> {
        if rows[2] < 0 || rows[0] < rows[1] || rows[1] < rows[2] {
            return Err(LrError::BadDiagram(rows));
        }
        Ok(YoungDiagram3 {
            rows: rows.map(|r| r as u32),
        })
    }

    pub fn rows(&self) -> [u32; 3] {
        self.rows
    }

    /// SL3 labels of the diagram; full columns of height three are dropped.
    pub fn weight(&self) -> Weight {
        Weight::new(self.rows[0] - self.rows[1], self.rows[1] - self.rows[2])
    }
}

/// Weyl dimension `(a+1)(b+1)(a+b+2)/2`.
pub fn dim_irrep(w: Weight) -> u64 {
    let (a, b) = (w.a as u64, w.b as u64);
    (a + 1) * (b + 1) * (a + b + 2) / 2
}

/// Box counts of a labelled expansion of `(a+b, b, 0)` by `(c+d, d, 0)`:
/// `p[i]` boxes labelled 1 and `q[i]` boxes labelled 2 go into row `i+1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Expansion {
    pub p: [i64; 3],
    pub q: [i64; 3],
}

impl Expansion {
    /// Names of the violated conditions; empty when this is a valid expansion.
    pub fn violations(&self, w1: Weight, w2: Weight) -> Vec<&'static str> {
        let (a, b) = (w1.a as i64, w1.b as i64);
        let (c, d) = (w2.a as i64, w2.b as i64);
        let [p1, p2, p3] = self.p;
        let [q1, q2, q3] = self.q;
        let checks: [(&str, bool); 11] = [
            ("1a: p_i >= 0", self.p.iter().all(|&x| x >= 0)),
            ("1b: q_i >= 0", self.q.iter().all(|&x| x >= 0)),
            ("2a: p2 <= a", p2 <= a),
            ("2b: p3 <= b", p3 <= b),
            ("2c: p2 + q2 - a <= p1", p2 + q2 - a <= p1),
            ("2d: p3 + q3 - b <= p2", p3 + q3 - b <= p2),
            ("3a: q1 = 0", q1 == 0),
            ("3b: q2 <= p1", q2 <= p1),
            ("3c: q2 + q3 <= p1 + p2", q2 + q3 <= p1 + p2),
            ("4a: p1 + p2 + p3 = c + d", p1 + p2 + p3 == c + d),
            ("4b: q1 + q2 + q3 = d", q1 + q2 + q3 == d),
        ];
        checks
            .iter()
            .filter(|(_, ok)| !ok)
            .map(|(name, _)| *name)
            .collect()
    }

    pub fn is_valid(&self, w1: Weight, w2: Weight) -> bool {
        self.violations(w1, w2).is_empty()
    }

    /// The diagram obtained after adding all labelled boxes to `w1`'s diagram.
    pub fn shape(&self, w1: Weight) -> YoungDiagram3 {
        let base = w1.young_diagram().rows();
        let rows: [i64; 3] =
            std::array::from_fn(|i| base[i] as i64 + self.p[i] + self.q[i]);
        YoungDiagram3::new(rows).expect("valid expansions give Young diagrams")
    }

    pub fn target(&self, w1: Weight) -> Weight {
        self.shape(w1).weight()
    }
}

/// `s = ((a+c−e) + 2(b+d−f))/3` and `t = ((a+c−e) − (b+d−f))/3`, when both are integers.
pub fn st_parameters(src1: Weight, src2: Weight, dst: Weight) -> Option<(i64, i64)> {
    let x = src1.a as i64 + src2.a as i64 - dst.a as i64;
    let y = src1.b as i64 + src2.b as i64 - dst.b as i64;
    let s3 = x + 2 * y;
    let t3 = x - y;
    (s3 % 3 == 0 && t3 % 3 == 0).then_some((s3 / 3, t3 / 3))
}

/// All `j` satisfying the inequality list that parametrizes the basis of
/// `Hom(V(a,b) ⊗ V(c,d), V(e,f))`. Empty when `V(e,f)` does not occur.
pub fn admissible_j(src1: Weight, src2: Weight, dst: Weight) -> Vec<u32> {
    let Some((s, t)) = st_parameters(src1, src2, dst) else {
        return Vec::new();
    };
    let (a, b) = (src1.a as i64, src1.b as i64);
    let (c, d) = (src2.a as i64, src2.b as i64);
    if !(0..=c + d).contains(&(s + t)) {
        return Vec::new();
    }
    (0..=s + t)
        .filter(|&j| {
            (0..=d).contains(&(s - j))
                && s + t - j <= a
                && j <= b
                && j <= b + t
                && j <= c - t
                && j <= c
        })
        .map(|j| j as u32)
        .collect()
}

pub fn multiplicity(src1: Weight, src2: Weight, dst: Weight) -> u32 {
    admissible_j(src1, src2, dst).len() as u32
}

/// The data describing `Hom_G(V(a,b) ⊗ V(c,d), V(e,f))` and its basis maps.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomSpaceSpec {
    pub src1: Weight,
    pub src2: Weight,
    pub dst: Weight,
    pub s: i64,
    pub t: i64,
    pub js: Vec<u32>,
}

impl HomSpaceSpec {
    /// `None` when `s` or `t` is not an integer, i.e. the multiplicity is zero
    /// for weight reasons.
    pub fn new(src1: Weight, src2: Weight, dst: Weight) -> Option<Self> {
        let (s, t) = st_parameters(src1, src2, dst)?;
        Some(HomSpaceSpec {
            src1,
            src2,
            dst,
            s,
            t,
            js: admissible_j(src1, src2, dst),
        })
    }

    pub fn multiplicity(&self) -> usize {
        self.js.len()
    }

    pub fn contains(&self, j: u32) -> bool {
        self.js.binary_search(&j).is_ok()
    }
}

/// Box counts of the expansion attached to the basis index `j`.
pub fn expansion_from_j(j: u32, spec: &HomSpaceSpec) -> Result<Expansion, LrError> {
    if !spec.contains(j) {
        return Err(LrError::NotAdmissible {
            j,
            admissible: spec.js.clone(),
        });
    }
    let (s, t, j) = (spec.s, spec.t, j as i64);
    let (c, d) = (spec.src2.a as i64, spec.src2.b as i64);
    Ok(Expansion {
        p: [c + d - (s + t), s + t - j, j],
        q: [0, d - s + j, s - j],
    })
}

/// Every expansion of `w1`'s diagram by `w2`'s, by exhaustive search.
pub fn expansions(w1: Weight, w2: Weight) -> Vec<Expansion> {
    let n = (w2.a + w2.b) as i64;
    let d = w2.b as i64;
    let mut out = Vec::new();
    for p1 in 0..=n {
        for p2 in 0..=n - p1 {
            let p3 = n - p1 - p2;
            for q2 in 0..=d {
                let e = Expansion {
                    p: [p1, p2, p3],
                    q: [0, q2, d - q2],
                };
                if e.is_valid(w1, w2) {
                    out.push(e);
                }
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summand {
    pub e: u32,
    pub f: u32,
    pub mult: u32,
}

/// Irreducible decomposition of a tensor product, sorted by `(e, f)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub summands: Vec<Summand>,
}

impl Decomposition {
    pub fn multiplicity(&self, w: Weight) -> u32 {
        self.summands
            .iter()
            .find(|s| s.e == w.a && s.f == w.b)
            .map_or(0, |s| s.mult)
    }

    pub fn as_map(&self) -> BTreeMap<Weight, u32> {
        self.summands
            .iter()
            .map(|s| (Weight::new(s.e, s.f), s.mult))
            .collect()
    }

    pub fn total_dim(&self) -> u64 {
        self.summands
            .iter()
            .map(|s| s.mult as u64 * dim_irrep(Weight::new(s.e, s.f)))
            .sum()
    }
}

/// Decomposes `V(w1) ⊗ V(w2)` by tallying the shapes of all expansions.
pub fn decompose(w1: Weight, w2: Weight) -> Decomposition {
    let mut tally: BTreeMap<(u32, u32), u32> = BTreeMap::new();
    for e in expansions(w1, w2) {
        let w = e.target(w1);
        *tally.entry((w.a, w.b)).or_default() += 1;
    }
    Decomposition {
        summands: tally
            .into_iter()
            .map(|((e, f), mult)| Summand { e, f, mult })
            .collect(),
    }
}
