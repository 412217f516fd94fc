//! The `cg3` command line.
//!
//! Every invocation writes exactly one JSON document to the output stream.
//! Exit codes: 0 success, 1 failed verification, 2 error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::cgmaps::{bilinear_matrix, kernel_basis, CGMapSpec, SparseMatrix};
use crate::cgops::project;
use crate::coeff::{reduce_mod_p, Coeff, Fp, PrimeField, Rational, DEFAULT_PRIME};
use crate::error::Error;
use crate::lr3::{decompose, HomSpaceSpec, Weight};
use crate::ratverify::{
    candidate_search, recheck_candidate, verify_double_bundle, verify_grassmannian_bundle, with_retries,
    DoubleBundleInstance, VerificationReport, DEFAULT_SEED,
};
use crate::tensorpoly::TensorPoly;

#[derive(Debug, Parser)]
#[command(name = "cg3", version, about = "Exact SL3 Clebsch-Gordan calculus")]
pub struct Cli {
    /// Include wall-clock timings in the output (makes it non-reproducible).
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decompose V(a,b) ⊗ V(c,d) into irreducibles.
    Decompose {
        #[arg(long = "rep", num_args = 1, required = true)]
        reps: Vec<Weight>,
    },
    /// Parameters s, t, J and the multiplicity of V(e,f) in V(a,b) ⊗ V(c,d).
    Homspace {
        #[arg(long = "src", num_args = 1, required = true)]
        srcs: Vec<Weight>,
        #[arg(long)]
        dst: Weight,
    },
    /// Matrix of a basis map on the canonical bases.
    Matrix {
        #[arg(long = "src", num_args = 1, required = true)]
        srcs: Vec<Weight>,
        #[arg(long)]
        dst: Weight,
        #[arg(long)]
        j: u32,
        /// Work over F_p instead of the rationals.
        #[arg(long)]
        prime: Option<u32>,
        /// Write the matrix here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write CSV triplets instead of JSON (requires --out).
        #[arg(long)]
        csv: bool,
    },
    /// Apply the equivariant projection S^a ⊗ D^b → V(a,b).
    Project {
        #[arg(long)]
        rep: Weight,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        prime: Option<u32>,
    },
    /// Finite-field rank certificates.
    Verify {
        #[command(subcommand)]
        kind: VerifyKind,
    },
    /// Search for inclusions V(src) ⊂ Hom(V(c,d), W) with dim V(c,d) = dim W + 1.
    Search {
        #[arg(long)]
        src: Weight,
        #[arg(long)]
        max_label: u32,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..=2))]
        summands: u32,
        /// Keep only candidates in which every summand receives V(src).
        #[arg(long)]
        essential_only: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum VerifyKind {
    /// ψ(x₀,·) and ψ(·,y₀) must have maximal rank (k = 1).
    DoubleBundle {
        #[command(flatten)]
        common: VerifyArgs,
        #[arg(long)]
        j: u32,
    },
    /// ψ(x₀,·) and the stacked ψ(·,yᵢ) must have maximal rank (k ≥ 2).
    Grass {
        #[command(flatten)]
        common: VerifyArgs,
        /// Defaults to the smallest admissible index.
        #[arg(long)]
        j: Option<u32>,
        /// Expected kernel dimension; checked against dim V(mid) − dim V(dst).
        #[arg(long)]
        k: Option<u64>,
    },
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    src: Weight,
    #[arg(long)]
    mid: Weight,
    #[arg(long)]
    dst: Weight,
    #[arg(long, default_value_t = DEFAULT_PRIME)]
    prime: u32,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Fresh seeds to try after a rank-deficient point.
    #[arg(long, default_value_t = 3)]
    retries: u64,
}

impl VerifyArgs {
    fn instance(&self, j: u32) -> Result<DoubleBundleInstance, Error> {
        Ok(DoubleBundleInstance::new(self.src, self.mid, self.dst, j)?
            .with_prime(self.prime)
            .with_seed(self.seed))
    }
}

/// Outcome of a command: a JSON document and an exit code.
struct Outcome {
    doc: Value,
    code: i32,
}

impl Outcome {
    fn ok<T: Serialize>(v: &T) -> Result<Self, Error> {
        Ok(Outcome {
            doc: to_value(v)?,
            code: 0,
        })
    }
}

fn to_value<T: Serialize>(v: &T) -> Result<Value, Error> {
    serde_json::to_value(v).map_err(|e| Error::Internal(e.to_string()))
}

fn error_doc(kind: &str, message: &str) -> Value {
    json!({ "error": { "kind": kind, "message": message } })
}

fn pair(ws: &[Weight], flag: &str) -> Result<(Weight, Weight), Error> {
    match ws {
        [a, b] => Ok((*a, *b)),
        _ => Err(Error::InvalidInstance(format!(
            "expected exactly two --{flag} flags, got {}",
            ws.len()
        ))),
    }
}

fn homspace_json(src1: Weight, src2: Weight, dst: Weight) -> Value {
    match HomSpaceSpec::new(src1, src2, dst) {
        Some(h) => json!({ "s": h.s, "t": h.t, "J": h.js, "mult": h.multiplicity() }),
        None => json!({ "s": null, "t": null, "J": [], "mult": 0 }),
    }
}

fn matrix<C: Coeff>(ms: &CGMapSpec, ctx: &C::Ctx) -> Result<SparseMatrix<C>, Error> {
    let a = kernel_basis::<C>(ms.spec.src1, ctx)?;
    let b = kernel_basis::<C>(ms.spec.src2, ctx)?;
    let t = kernel_basis::<C>(ms.spec.dst, ctx)?;
    bilinear_matrix(ms, &a, &b, &t, ctx)
}

fn emit_matrix<C: Coeff>(m: &SparseMatrix<C>, label: &str, out: Option<&PathBuf>, csv: bool) -> Result<Outcome, Error> {
    let Some(path) = out else {
        if csv {
            return Err(Error::InvalidInstance("--csv requires --out".into()));
        }
        return Outcome::ok(m);
    };
    let body = if csv {
        m.to_csv()
    } else {
        serde_json::to_string(m).map_err(|e| Error::Internal(e.to_string()))?
    };
    fs::write(path, body).map_err(|e| Error::InvalidInstance(format!("{}: {e}", path.display())))?;
    Outcome::ok(&json!({
        "map": label,
        "out": path.display().to_string(),
        "rows": m.rows,
        "cols": m.cols,
        "nonzeros": m.entries.len(),
    }))
}

fn report_outcome(result: Result<VerificationReport, Error>, timing: bool) -> Result<Outcome, Error> {
    let (mut report, code) = match result {
        Ok(r) => (r, 0),
        Err(Error::RankDeficient(r)) => (*r, 1),
        Err(e) => return Err(e),
    };
    if !timing {
        report.runtime_ms = None;
    }
    Ok(Outcome {
        doc: to_value(&report)?,
        code,
    })
}

fn execute(cli: &Cli) -> Result<Outcome, Error> {
    match &cli.command {
        Command::Decompose { reps } => {
            let (w1, w2) = pair(reps, "rep")?;
            Outcome::ok(&decompose(w1, w2))
        }
        Command::Homspace { srcs, dst } => {
            let (w1, w2) = pair(srcs, "src")?;
            Outcome::ok(&homspace_json(w1, w2, *dst))
        }
        Command::Matrix {
            srcs,
            dst,
            j,
            prime,
            out,
            csv,
        } => {
            let (w1, w2) = pair(srcs, "src")?;
            let ms = CGMapSpec::from_weights(w1, w2, *dst, *j)?;
            match prime {
                None => emit_matrix(&matrix::<Rational>(&ms, &())?, &ms.label(), out.as_ref(), *csv),
                Some(p) => {
                    let field = PrimeField::new(*p)?;
                    emit_matrix(&matrix::<Fp>(&ms, &field)?, &ms.label(), out.as_ref(), *csv)
                }
            }
        }
        Command::Project { rep, input, prime } => {
            let text = fs::read_to_string(input)
                .map_err(|e| Error::InvalidInstance(format!("{}: {e}", input.display())))?;
            let u: TensorPoly<Rational> =
                serde_json::from_str(&text).map_err(|e| Error::InvalidInstance(format!("{}: {e}", input.display())))?;
            match prime {
                None => Outcome::ok(&project(*rep, &u, &())?),
                Some(p) => {
                    let field = PrimeField::new(*p)?;
                    let terms = u
                        .terms()
                        .iter()
                        .map(|(m, c)| Ok((*m, reduce_mod_p(c, &field)?)))
                        .collect::<Result<Vec<_>, Error>>()?;
                    let v = TensorPoly::from_terms(u.degree().clone(), terms)?;
                    Outcome::ok(&project(*rep, &v, &field)?)
                }
            }
        }
        Command::Verify { kind } => match kind {
            VerifyKind::DoubleBundle { common, j } => {
                let inst = common.instance(*j)?;
                report_outcome(with_retries(&inst, common.retries, verify_double_bundle), cli.timing)
            }
            VerifyKind::Grass { common, j, k } => {
                let j = match j {
                    Some(j) => *j,
                    None => HomSpaceSpec::new(common.src, common.mid, common.dst)
                        .and_then(|h| h.js.first().copied())
                        .ok_or(Error::NotOccurring {
                            src1: common.src,
                            src2: common.mid,
                            dst: common.dst,
                        })?,
                };
                let inst = common.instance(j)?;
                if let Some(k) = k {
                    if *k != inst.k {
                        return Err(Error::InvalidInstance(format!(
                            "--k {k} disagrees with dim {} − dim {} = {}",
                            inst.mid, inst.dst, inst.k
                        )));
                    }
                }
                report_outcome(with_retries(&inst, common.retries, verify_grassmannian_bundle), cli.timing)
            }
        },
        Command::Search {
            src,
            max_label,
            summands,
            essential_only,
        } => {
            let mut hits = candidate_search(*src, *max_label, *summands);
            if *essential_only {
                hits.retain(|c| c.essential);
            }
            let rechecked = hits.iter().all(|c| recheck_candidate(*src, c));
            Outcome::ok(&json!({
                "source": src,
                "maxLabel": max_label,
                "maxSummands": summands,
                "candidates": hits,
                "recheckPassed": rechecked,
            }))
        }
    }
}

/// Applies `CG3_THREADS` to the global worker pool, if set.
pub fn configure_threads() {
    if let Some(n) = std::env::var("CG3_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            log::warn!("CG3_THREADS ignored: {e}");
        }
    }
}

/// Parses `args`, runs the command, writes one JSON document to `out` and
/// returns the exit code.
pub fn run<I, T, W>(args: I, out: &mut W) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
    W: Write,
{
    let (doc, code) = match Cli::try_parse_from(args) {
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            (error_doc("Usage", e.to_string().trim()), 2)
        }
        Ok(cli) => match execute(&cli) {
            Ok(o) => (o.doc, o.code),
            Err(e) => (error_doc(e.kind(), &e.to_string()), 2),
        },
    };
    let text = serde_json::to_string_pretty(&doc).expect("JSON values serialize");
    if writeln!(out, "{text}").is_err() {
        return 2;
    }
    code
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, Value) {
        let mut buf = Vec::new();
        let code = run(std::iter::once("cg3").chain(args.iter().copied()), &mut buf);
        (code, serde_json::from_slice(&buf).unwrap())
    }

    #[test]
    fn homspace_values() {
        let (code, v) = run_str(&["homspace", "--src", "4,4", "--src", "2,5", "--dst", "1,7"]);
        assert_eq!(code, 0);
        assert_eq!(v, json!({"s": 3, "t": 1, "J": [0, 1], "mult": 2}));
        let (_, v) = run_str(&["homspace", "--src", "1,0", "--src", "0,0", "--dst", "0,0"]);
        assert_eq!(v["mult"], 0);
    }

    #[test]
    fn bad_weight_is_usage_error() {
        let (code, v) = run_str(&["decompose", "--rep", "-1,2", "--rep", "1,1"]);
        assert_eq!(code, 2);
        assert_eq!(v["error"]["kind"], "Usage");
        let (code, v) = run_str(&["decompose", "--rep", "1,1"]);
        assert_eq!(code, 2);
        assert_eq!(v["error"]["kind"], "InvalidInstance");
    }
}
