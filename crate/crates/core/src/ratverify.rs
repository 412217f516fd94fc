//! Finite-field rank certificates for bilinear maps `ψ : V(a,b) ⊗ V(c,d) → V(e,f)`
//! and the search for candidate inclusions `V(a,b) ⊂ Hom(V(c,d), W)`.
//!
//! A matrix that has full rank over 𝔽_p also has full rank over ℚ, since
//! every minor is an integer whose reduction mod p is nonzero. So a single
//! seeded random point over 𝔽_p certifies the generic-rank condition.

use std::collections::HashMap;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::cgmaps::{kernel_basis, matrix_fixed_first, matrix_fixed_second, CGMapSpec, SparseMatrix};
use crate::coeff::{Fp, PrimeField, DEFAULT_PRIME};
use crate::error::Error;
use crate::lr3::{decompose, multiplicity, HomSpaceSpec, Weight};
use crate::tensorpoly::{MultiDegree, TensorPoly};

pub const DEFAULT_SEED: u64 = 42;

const SEMICONTINUITY: &str = "rank is lower semicontinuous over Spec Z: full rank over F_p implies full rank over Q";

/// A seeded random element of `V(w)` over `field`.
pub fn random_element(w: Weight, field: &PrimeField, seed: u64) -> Result<TensorPoly<Fp>, Error> {
    let basis = kernel_basis::<Fp>(w, field)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coeffs: Vec<Fp> = (0..basis.len())
        .map(|_| field.element(rng.random_range(0..field.modulus()) as i64))
        .collect();
    basis.combination(&coeffs)
}

/// The data of a double-bundle check for `ψ : V(src) ⊗ V(mid) → V(dst)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DoubleBundleInstance {
    pub src: Weight,
    pub mid: Weight,
    pub dst: Weight,
    pub j: u32,
    /// Expected dimension of `ker ψ(x₀, ·)`, i.e. `dim V(mid) − dim V(dst)`.
    pub k: u64,
    pub prime: u32,
    pub seed: u64,
}

impl DoubleBundleInstance {
    pub fn new(src: Weight, mid: Weight, dst: Weight, j: u32) -> Result<Self, Error> {
        let (dm, dd) = (mid.dim(), dst.dim());
        if dm <= dd {
            return Err(Error::InvalidInstance(format!(
                "dim {mid} = {dm} must exceed dim {dst} = {dd}"
            )));
        }
        Ok(DoubleBundleInstance {
            src,
            mid,
            dst,
            j,
            k: dm - dd,
            prime: DEFAULT_PRIME,
            seed: DEFAULT_SEED,
        })
    }

    pub fn with_prime(mut self, prime: u32) -> Self {
        self.prime = prime;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// The basis map, or `None` when `V(dst)` does not occur with index `j`
    /// and `ψ` is the zero map.
    pub fn map(&self) -> Option<CGMapSpec> {
        let spec = HomSpaceSpec::new(self.src, self.mid, self.dst)?;
        CGMapSpec::new(spec, self.j).ok()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct VerificationReport {
    pub instance: DoubleBundleInstance,
    pub map: String,
    /// Rank of `ψ(x₀, ·)` and, if reached, of the stacked `ψ(·, yᵢ)`.
    pub ranks: Vec<usize>,
    pub expected_ranks: Vec<u64>,
    /// Dimension of `ker ψ(x₀, ·)`.
    pub kernel_vectors: usize,
    pub passed: bool,
    pub prime: u32,
    pub seed: u64,
    pub seeds_tried: Vec<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u64>,
    pub note: String,
}

impl VerificationReport {
    pub fn summary(&self) -> String {
        format!(
            "{} on {} ⊗ {} → {}: ranks {:?}, expected {:?} (p = {}, seed = {})",
            self.map,
            self.instance.src,
            self.instance.mid,
            self.instance.dst,
            self.ranks,
            self.expected_ranks,
            self.prime,
            self.seed
        )
    }
}

/// `ψ(x, ·)` for a possibly absent map.
fn fixed_first(
    ms: Option<&CGMapSpec>,
    inst: &DoubleBundleInstance,
    x: &TensorPoly<Fp>,
    field: &PrimeField,
) -> Result<SparseMatrix<Fp>, Error> {
    let mid = kernel_basis::<Fp>(inst.mid, field)?;
    let dst = kernel_basis::<Fp>(inst.dst, field)?;
    match ms {
        Some(ms) => matrix_fixed_first(ms, x, &mid, &dst, field),
        None => Ok(SparseMatrix::from_columns(dst.labels(), mid.labels(), &[])),
    }
}

fn fixed_second(
    ms: Option<&CGMapSpec>,
    inst: &DoubleBundleInstance,
    y: &TensorPoly<Fp>,
    field: &PrimeField,
) -> Result<SparseMatrix<Fp>, Error> {
    let src = kernel_basis::<Fp>(inst.src, field)?;
    let dst = kernel_basis::<Fp>(inst.dst, field)?;
    match ms {
        Some(ms) => matrix_fixed_second(ms, &src, y, &dst, field),
        None => Ok(SparseMatrix::from_columns(dst.labels(), src.labels(), &[])),
    }
}

/// Runs the two rank checks at an explicit point `x0 ∈ V(src)`.
///
/// Returns the report on success and `RankDeficient` otherwise.
pub fn verify_at(inst: &DoubleBundleInstance, x0: &TensorPoly<Fp>) -> Result<VerificationReport, Error> {
    let start = Instant::now();
    let field = PrimeField::new(inst.prime)?;
    if x0.degree() != &MultiDegree::sd(inst.src.a, inst.src.b) {
        return Err(Error::DimensionMismatch(format!(
            "x0 lives on {}, expected {}",
            x0.degree(),
            inst.src
        )));
    }
    let ms = inst.map();
    let dst_dim = inst.dst.dim();
    let mut report = VerificationReport {
        instance: inst.clone(),
        map: ms.as_ref().map_or_else(|| "0".to_string(), |m| m.label()),
        ranks: Vec::new(),
        expected_ranks: vec![dst_dim, inst.k * dst_dim],
        kernel_vectors: 0,
        passed: false,
        prime: inst.prime,
        seed: inst.seed,
        seeds_tried: vec![inst.seed],
        runtime_ms: None,
        note: SEMICONTINUITY.to_string(),
    };
    let m0 = fixed_first(ms.as_ref(), inst, x0, &field)?;
    let r0 = m0.rank(&field);
    report.ranks.push(r0);
    let kernel = m0.kernel(&field);
    report.kernel_vectors = kernel.len();
    log::debug!("rank of psi(x0, .) = {r0}, kernel dimension {}", kernel.len());
    if r0 as u64 == dst_dim {
        let mid = kernel_basis::<Fp>(inst.mid, &field)?;
        let blocks = kernel
            .iter()
            .map(|coords| fixed_second(ms.as_ref(), inst, &mid.combination(coords)?, &field))
            .collect::<Result<Vec<_>, Error>>()?;
        let stacked = SparseMatrix::vstack(&blocks)?;
        let r1 = stacked.rank(&field);
        log::debug!("rank of stacked {}x{} matrix = {r1}", stacked.rows, stacked.cols);
        report.ranks.push(r1);
        report.passed = r1 as u64 == inst.k * dst_dim;
    }
    report.runtime_ms = Some(start.elapsed().as_millis() as u64);
    if report.passed {
        Ok(report)
    } else {
        Err(Error::RankDeficient(Box::new(report)))
    }
}

/// Rank checks for a projective-space base, `dim V(mid) − dim V(dst) = 1`.
pub fn verify_double_bundle(inst: &DoubleBundleInstance) -> Result<VerificationReport, Error> {
    if inst.k != 1 {
        return Err(Error::InvalidInstance(format!(
            "double-bundle check needs k = 1, found k = {}",
            inst.k
        )));
    }
    let field = PrimeField::new(inst.prime)?;
    verify_at(inst, &random_element(inst.src, &field, inst.seed)?)
}

/// Rank checks for a Grassmannian base, `k ≥ 2`.
pub fn verify_grassmannian_bundle(inst: &DoubleBundleInstance) -> Result<VerificationReport, Error> {
    if inst.k < 2 {
        return Err(Error::InvalidInstance(format!(
            "Grassmannian check needs k >= 2, found k = {}",
            inst.k
        )));
    }
    let field = PrimeField::new(inst.prime)?;
    verify_at(inst, &random_element(inst.src, &field, inst.seed)?)
}

/// Calls `check` with `inst.seed`, then with up to `retries` following seeds
/// while the result is `RankDeficient`. The last report lists every seed tried.
pub fn with_retries<F>(inst: &DoubleBundleInstance, retries: u64, check: F) -> Result<VerificationReport, Error>
where
    F: Fn(&DoubleBundleInstance) -> Result<VerificationReport, Error>,
{
    let mut tried = Vec::new();
    let mut attempt = 0;
    loop {
        let current = inst.clone().with_seed(inst.seed + attempt);
        tried.push(current.seed);
        match check(&current) {
            Ok(mut report) => {
                report.seeds_tried = tried;
                return Ok(report);
            }
            Err(Error::RankDeficient(mut report)) => {
                log::warn!("seed {} failed: {}", current.seed, report.summary());
                if attempt == retries {
                    report.seeds_tried = tried;
                    return Err(Error::RankDeficient(report));
                }
            }
            Err(e) => return Err(e),
        }
        attempt += 1;
    }
}

/// A candidate inclusion `V(source) ⊂ Hom(V(mid), W)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Candidate {
    pub mid: Weight,
    pub summands: Vec<Weight>,
    pub mid_dim: u64,
    pub summand_dims: Vec<u64>,
    /// Multiplicity of `V(source)` in `V(mid)^∨ ⊗ Wᵢ`, per summand.
    pub multiplicities: Vec<u32>,
    /// Every summand receives `V(source)`. Otherwise the map factors through
    /// a smaller `W` and the dimension condition fails for it.
    pub essential: bool,
}

/// All `(mid, W)` with labels at most `max_label` and `W` a sum of at most
/// `max_summands` irreducibles such that `V(source)` occurs in `Hom(V(mid), W)`,
/// `dim V(mid) = dim W + 1` and `dim V(source) > dim V(mid)`.
pub fn candidate_search(source: Weight, max_label: u32, max_summands: u32) -> Vec<Candidate> {
    let weights: Vec<Weight> = (0..=max_label)
        .flat_map(|a| (0..=max_label).map(move |b| Weight::new(a, b)))
        .collect();
    let mut by_dim: HashMap<u64, Vec<Weight>> = HashMap::new();
    for &w in &weights {
        by_dim.entry(w.dim()).or_default().push(w);
    }
    let source_dim = source.dim();
    let mut hits: Vec<Candidate> = weights
        .par_iter()
        .filter(|mid| mid.dim() < source_dim)
        .flat_map_iter(|&mid| {
            let target = mid.dim() - 1;
            let dual = mid.dual();
            let mult = move |w: Weight| multiplicity(dual, w, source);
            let mut out = Vec::new();
            if max_summands >= 1 {
                for &w in by_dim.get(&target).into_iter().flatten() {
                    let m = mult(w);
                    if m >= 1 {
                        out.push(candidate(mid, vec![w], vec![m]));
                    }
                }
            }
            if max_summands >= 2 {
                for &w1 in &weights {
                    let d1 = w1.dim();
                    if d1 >= target {
                        continue;
                    }
                    for &w2 in by_dim.get(&(target - d1)).into_iter().flatten() {
                        if w2 < w1 {
                            continue;
                        }
                        let (m1, m2) = (mult(w1), mult(w2));
                        if m1 + m2 >= 1 {
                            out.push(candidate(mid, vec![w1, w2], vec![m1, m2]));
                        }
                    }
                }
            }
            out
        })
        .collect();
    hits.sort_by(|x, y| (x.mid, &x.summands).cmp(&(y.mid, &y.summands)));
    hits
}

fn candidate(mid: Weight, summands: Vec<Weight>, multiplicities: Vec<u32>) -> Candidate {
    Candidate {
        mid,
        mid_dim: mid.dim(),
        summand_dims: summands.iter().map(|w| w.dim()).collect(),
        summands,
        essential: multiplicities.iter().all(|&m| m >= 1),
        multiplicities,
    }
}

/// Re-checks the three filters by brute-force decomposition.
pub fn recheck_candidate(source: Weight, c: &Candidate) -> bool {
    let occurs: u32 = c
        .summands
        .iter()
        .map(|&w| decompose(c.mid.dual(), w).multiplicity(source))
        .sum();
    let dim_w: u64 = c.summands.iter().map(|w| w.dim()).sum();
    occurs >= 1 && c.mid.dim() == dim_w + 1 && source.dim() > c.mid.dim()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(a: u32, b: u32) -> Weight {
        Weight::new(a, b)
    }

    #[test]
    fn random_elements_are_reproducible() {
        let f = PrimeField::default();
        let x = random_element(w(2, 2), &f, 7).unwrap();
        assert_eq!(x, random_element(w(2, 2), &f, 7).unwrap());
        assert_ne!(x, random_element(w(2, 2), &f, 8).unwrap());
        assert!(crate::cgops::contract(&x).unwrap().is_zero());
    }

    #[test]
    fn instance_k() {
        let inst = DoubleBundleInstance::new(w(0, 34), w(14, 1), w(0, 21), 14).unwrap();
        assert_eq!(inst.k, 2);
        assert!(DoubleBundleInstance::new(w(1, 1), w(1, 0), w(1, 1), 0).is_err());
    }

    #[test]
    fn zero_point_is_rank_deficient() {
        let inst = DoubleBundleInstance::new(w(1, 1), w(1, 1), w(2, 0), 0).unwrap();
        let zero = TensorPoly::<Fp>::zero(MultiDegree::sd(1, 1));
        match verify_at(&inst, &zero) {
            Err(Error::RankDeficient(r)) => assert_eq!(r.ranks, vec![0]),
            other => panic!("expected rank deficiency, got {other:?}"),
        }
    }

    #[test]
    fn retries_log_seeds() {
        // V(2,2) does not occur in V(1,0) ⊗ V(6,0), so ψ = 0
        let inst = DoubleBundleInstance::new(w(1, 0), w(6, 0), w(2, 2), 0).unwrap();
        assert!(inst.map().is_none());
        match with_retries(&inst.with_seed(5), 3, verify_double_bundle) {
            Err(Error::RankDeficient(r)) => {
                assert_eq!(r.seeds_tried, vec![5, 6, 7, 8]);
                assert_eq!(r.ranks, vec![0]);
                assert_eq!(r.map, "0");
            }
            other => panic!("expected rank deficiency, got {other:?}"),
        }
    }

    #[test]
    fn small_search_passes_recheck() {
        let hits = candidate_search(w(0, 4), 4, 2);
        for c in &hits {
            assert!(recheck_candidate(w(0, 4), c), "{c:?}");
            assert_eq!(c.essential, c.multiplicities.iter().all(|&m| m > 0));
        }
    }
}
