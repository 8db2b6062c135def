//! Command implementations behind the binary, separated from argument
//! parsing so integration tests can drive them directly.
//!
//! Exit-code contract: 0 means every produced or checked code passed the
//! brute-force oracle; 1 means a verification failure (including a
//! construction that failed its own self-check before writing); 2 means a
//! usage or parameter problem. Stdout carries artifacts, stderr the
//! human-readable report.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use permcode_core::extend::baer_ipc;
use permcode_core::latin::{
    field_idempotent_mols, idempotent_mols_for_order, macneish_floor, mols_to_ipc, MolsSet,
};
use permcode_core::perm::{
    merge_scan, min_distance_over_rows, verify_words_scanned, Distance, PermutationCode,
    VerificationReport,
};
use permcode_core::sieve::synthesize_ipc;
use permcode_core::Error as CoreError;

use crate::formats::{self, CodeDocument};

/// What a command run produced.
#[derive(Debug)]
pub struct CommandOutcome {
    /// 0 success, 1 verification failure, 2 usage or parameter error.
    pub exit_code: i32,
    /// Human-readable summary for stderr.
    pub report: String,
    /// Output file, when one was written.
    pub artifact_path: Option<PathBuf>,
}

impl CommandOutcome {
    fn ok(report: String, artifact_path: Option<PathBuf>) -> Self {
        CommandOutcome { exit_code: 0, report, artifact_path }
    }
}

enum CmdError {
    Usage(String),
    Verification(String),
}

impl From<CmdError> for CommandOutcome {
    fn from(e: CmdError) -> Self {
        match e {
            CmdError::Usage(report) => CommandOutcome { exit_code: 2, report, artifact_path: None },
            CmdError::Verification(report) => {
                CommandOutcome { exit_code: 1, report, artifact_path: None }
            }
        }
    }
}

impl From<CoreError> for CmdError {
    fn from(e: CoreError) -> Self {
        CmdError::Usage(e.to_string())
    }
}

fn finish(result: Result<CommandOutcome, CmdError>) -> CommandOutcome {
    result.unwrap_or_else(CommandOutcome::from)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Debug, Clone)]
pub struct OutputOpts {
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
    pub threads: usize,
}

/// Splits the pairwise scan over `threads` workers by row ranges balanced
/// on pair count, then assembles the usual report.
pub fn threaded_report(n: usize, words: &[Vec<u16>], threads: usize) -> VerificationReport {
    let w = words.len();
    if threads <= 1 || w < 4 * threads {
        return permcode_core::perm::verify_words(n, words);
    }
    // row i contributes w - 1 - i pairs; cut where the running total
    // crosses equal shares
    let total = w * (w - 1) / 2;
    let mut bounds = vec![0usize];
    let mut acc = 0;
    for i in 0..w {
        acc += w - 1 - i;
        if acc >= total / threads * bounds.len() && bounds.len() < threads {
            bounds.push(i + 1);
        }
    }
    bounds.push(w);
    let scan = std::thread::scope(|scope| {
        let handles: Vec<_> = bounds
            .windows(2)
            .map(|span| {
                let range = span[0]..span[1];
                scope.spawn(move || min_distance_over_rows(words, range))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("scan worker panicked"))
            .fold((Distance::Infinite, None), merge_scan)
    });
    verify_words_scanned(n, words, scan)
}

fn read_file(path: &Path) -> Result<String, CmdError> {
    std::fs::read_to_string(path)
        .map_err(|e| CmdError::Usage(format!("cannot read {}: {e}", path.display())))
}

/// Self-verifies a constructed code against the oracle, then writes it to
/// the requested destination (stdout when no path is given).
fn verify_and_emit(
    code: &PermutationCode,
    expect_r: usize,
    what: &str,
    opts: &OutputOpts,
) -> Result<CommandOutcome, CmdError> {
    let doc = CodeDocument::from_code(code);
    let report = threaded_report(code.n(), &doc.words, opts.threads);
    if !report.is_ripc(expect_r) {
        return Err(CmdError::Verification(format!(
            "self-verification failed for {what}: {report}"
        )));
    }
    let rendered = match opts.format {
        OutputFormat::Text => doc.to_text(),
        OutputFormat::Json => doc.to_json(),
    };
    let artifact_path = match &opts.out {
        Some(path) => {
            std::fs::write(path, rendered)
                .map_err(|e| CmdError::Usage(format!("cannot write {}: {e}", path.display())))?;
            Some(path.clone())
        }
        None => {
            print!("{rendered}");
            None
        }
    };
    Ok(CommandOutcome::ok(format!("{what}: verified, {report}"), artifact_path))
}

fn emit_squares(set: &MolsSet, path: &Option<PathBuf>) -> Result<(), CmdError> {
    if let Some(path) = path {
        std::fs::write(path, formats::write_latin(set))
            .map_err(|e| CmdError::Usage(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

pub fn construct_mols_ipc(
    q: u64,
    squares_out: Option<PathBuf>,
    opts: &OutputOpts,
) -> CommandOutcome {
    finish((|| {
        let set = field_idempotent_mols(q)?;
        emit_squares(&set, &squares_out)?;
        let code = mols_to_ipc(&set)?;
        let r = set.len();
        verify_and_emit(&code, r, &format!("{r}-IPC({q}, {})", q - 1), opts)
    })())
}

pub fn construct_baer(q: u64, opts: &OutputOpts) -> CommandOutcome {
    finish((|| {
        let code = baer_ipc(q)?;
        let r = (q - 1) as usize;
        verify_and_emit(
            &code,
            r,
            &format!("{r}-IPC({}, {})", q * q + 1, q * q),
            opts,
        )
    })())
}

pub fn construct_macneish(n: u64, squares_out: Option<PathBuf>, opts: &OutputOpts) -> CommandOutcome {
    finish((|| {
        if n < 2 {
            return Err(CmdError::Usage("--n must be at least 2".into()));
        }
        let (_, idem_floor) = macneish_floor(n);
        if idem_floor == 0 {
            return Err(CmdError::Usage(format!(
                "the least prime-power factor of {n} guarantees no idempotent squares"
            )));
        }
        let set = idempotent_mols_for_order(n, idem_floor as usize)?;
        emit_squares(&set, &squares_out)?;
        let code = mols_to_ipc(&set)?;
        verify_and_emit(
            &code,
            idem_floor as usize,
            &format!("{idem_floor}-IPC({n}, {})", n - 1),
            opts,
        )
    })())
}

pub fn verify(path: &Path, expect_r: Option<usize>, threads: usize) -> CommandOutcome {
    finish((|| {
        let doc = CodeDocument::parse(&read_file(path)?)
            .map_err(|e| CmdError::Usage(format!("{}: {e}", path.display())))?;
        let report = threaded_report(doc.n, &doc.words, threads);
        let summary = report.to_string();
        if let Some((w, defect)) = &report.malformed {
            return Err(CmdError::Verification(format!(
                "{summary}\nword {} {defect}",
                w + 1
            )));
        }
        match expect_r.or(doc.claimed_r) {
            Some(r) => {
                if report.is_ripc(r) {
                    Ok(CommandOutcome::ok(format!("{summary}: valid {r}-IPC"), None))
                } else {
                    Err(CmdError::Verification(format!(
                        "{summary}: not a valid {r}-IPC"
                    )))
                }
            }
            None => match doc.claimed_d {
                Some(d) if !report.min_distance.at_least(d) => Err(CmdError::Verification(
                    format!("{summary}: claimed distance {d} not met"),
                )),
                _ => Ok(CommandOutcome::ok(summary, None)),
            },
        }
    })())
}

pub fn compose(
    pbd_path: &Path,
    ingredient_paths: &[PathBuf],
    r: usize,
    opts: &OutputOpts,
) -> CommandOutcome {
    finish((|| {
        let pbd = formats::parse_pbd(&read_file(pbd_path)?)
            .map_err(|e| CmdError::Usage(format!("{}: {e}", pbd_path.display())))?;
        let mut ingredients: BTreeMap<usize, PermutationCode> = BTreeMap::new();
        for path in ingredient_paths {
            let doc = CodeDocument::parse(&read_file(path)?)
                .map_err(|e| CmdError::Usage(format!("{}: {e}", path.display())))?;
            let code = doc
                .to_code()
                .map_err(|e| CmdError::Usage(format!("{}: {e}", path.display())))?;
            if ingredients.insert(code.n(), code).is_some() {
                return Err(CmdError::Usage(format!(
                    "two ingredient codes of length {}",
                    doc.n
                )));
            }
        }
        let code = permcode_core::compose::compose_via_pbd(&pbd, &ingredients, r)?;
        verify_and_emit(
            &code,
            r,
            &format!("{r}-IPC({}, {})", pbd.n(), pbd.n() - 1),
            opts,
        )
    })())
}

pub fn synthesize(n: u64, r: usize, opts: &OutputOpts) -> CommandOutcome {
    finish((|| {
        if n < 10 {
            return Err(CmdError::Usage("--n must be at least 10".into()));
        }
        if r < 1 {
            return Err(CmdError::Usage("--r must be at least 1".into()));
        }
        let (plan, code) = synthesize_ipc(n, r)?;
        let mut outcome = verify_and_emit(&code, r, &format!("{r}-IPC({n}, {})", n - 1), opts)?;
        outcome.report = format!(
            "plan {}\n{}\nM({n},{}) >= {}",
            formats::plan_to_json(plan),
            outcome.report,
            n - 1,
            r as u64 * n + 1
        );
        Ok(outcome)
    })())
}

/// Builds an `r`-regular idempotent code of length `n` by the cheapest
/// applicable construction, adjoins the identity, re-verifies, and prints
/// the size bound `r*n + 1`.
pub fn bound(n: u64, r: usize, threads: usize) -> CommandOutcome {
    finish((|| {
        if n < 2 || r < 1 {
            return Err(CmdError::Usage("need --n >= 2 and --r >= 1".into()));
        }
        let code = build_ripc(n, r)?;
        let adjoined = code.adjoin_identity()?;
        let doc = CodeDocument::from_code(&adjoined);
        let report = threaded_report(adjoined.n(), &doc.words, threads);
        let expected_size = r * n as usize + 1;
        if !report.is_pc(n as usize - 1) || adjoined.len() != expected_size {
            return Err(CmdError::Verification(format!(
                "bound self-check failed: {report}"
            )));
        }
        Ok(CommandOutcome::ok(
            format!(
                "n={n} size={expected_size} d={} ({r}-regular idempotent code plus the identity)\nM({n},{}) >= {expected_size}",
                report.min_distance,
                n - 1
            ),
            None,
        ))
    })())
}

/// Construction chain shared by `bound`: product squares when the floor
/// allows, the length-`q^2+1` extension when `n` has that shape, otherwise
/// the full pipeline.
fn build_ripc(n: u64, r: usize) -> Result<PermutationCode, CmdError> {
    let (_, idem_floor) = macneish_floor(n);
    if idem_floor >= r as u64 {
        let set = idempotent_mols_for_order(n, r)?;
        return Ok(mols_to_ipc(&set)?);
    }
    if let Some(q) = baer_shape(n) {
        if (q - 1) as usize >= r {
            let code = baer_ipc(q)?;
            return Ok(if (q - 1) as usize == r {
                code
            } else {
                code.trim_to_regularity(r)?
            });
        }
    }
    if n >= 10 {
        let (_, code) = synthesize_ipc(n, r)?;
        return Ok(code);
    }
    Err(CmdError::Usage(format!(
        "no construction reaches regularity {r} at length {n}"
    )))
}

/// `Some(q)` when `n = q^2 + 1` for a prime power `q`.
fn baer_shape(n: u64) -> Option<u64> {
    let q = (n - 1).isqrt();
    (q >= 2 && q * q == n - 1 && permcode_core::gf::is_prime_power(q)).then_some(q)
}
