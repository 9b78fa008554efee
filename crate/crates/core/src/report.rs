//! Per-law verdicts with replayable witnesses.

use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Skipped => "SKIPPED",
        })
    }
}

/// What exhibits a failure.
///
/// Finite laws point at element indices (lexicographically least failing
/// tuple). Sampled laws over `C(R^n)` record the seed, the trial index and the
/// orthonormal bases involved so the trial can be replayed exactly.
#[derive(Clone, Debug, PartialEq)]
pub enum Witness {
    None,
    Elements(Vec<usize>),
    Sample {
        seed: u64,
        trial: usize,
        bases: Vec<Vec<Vec<f64>>>,
    },
}

impl Witness {
    pub fn is_empty(&self) -> bool {
        match self {
            Witness::None => true,
            Witness::Elements(v) => v.is_empty(),
            Witness::Sample { .. } => false,
        }
    }

    pub fn elements(&self) -> Option<&[usize]> {
        match self {
            Witness::Elements(v) => Some(v),
            _ => None,
        }
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::None => f.write_str("-"),
            Witness::Elements(v) => {
                let parts: Vec<String> = v.iter().map(|i| i.to_string()).collect();
                write!(f, "({})", parts.join(","))
            }
            Witness::Sample { seed, trial, bases } => {
                write!(f, "seed={seed} trial={trial}")?;
                for (k, basis) in bases.iter().enumerate() {
                    let cols: Vec<String> = basis
                        .iter()
                        .map(|c| {
                            c.iter()
                                .map(|x| format!("{x:.17e}"))
                                .collect::<Vec<_>>()
                                .join(",")
                        })
                        .collect();
                    write!(f, " b{k}=[{}]", cols.join(";"))?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LawReport {
    pub law: String,
    pub verdict: Verdict,
    pub witness: Witness,
    pub note: String,
}

impl LawReport {
    pub fn pass(law: impl Into<String>) -> Self {
        LawReport {
            law: law.into(),
            verdict: Verdict::Pass,
            witness: Witness::None,
            note: String::new(),
        }
    }

    /// A failure must carry a witness; an empty one is a bug in the checker.
    pub fn fail(law: impl Into<String>, witness: Witness) -> Self {
        debug_assert!(!witness.is_empty(), "FAIL without witness");
        LawReport {
            law: law.into(),
            verdict: Verdict::Fail,
            witness,
            note: String::new(),
        }
    }

    pub fn fail_at(law: impl Into<String>, elements: Vec<usize>) -> Self {
        Self::fail(law, Witness::Elements(elements))
    }

    pub fn skipped(law: impl Into<String>, reason: impl Into<String>) -> Self {
        LawReport {
            law: law.into(),
            verdict: Verdict::Skipped,
            witness: Witness::None,
            note: reason.into(),
        }
    }

    /// PASS when `failure` is `None`, otherwise FAIL at the given elements.
    pub fn from_scan(law: impl Into<String>, failure: Option<Vec<usize>>) -> Self {
        match failure {
            None => Self::pass(law),
            Some(w) => Self::fail_at(law, w),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn failed(&self) -> bool {
        self.verdict == Verdict::Fail
    }
}

/// Folds sub-reports into one: FAIL if any failed (first failing witness is
/// kept), SKIPPED if all skipped, PASS otherwise.
pub fn combine(law: impl Into<String>, parts: &[LawReport]) -> LawReport {
    let law = law.into();
    if let Some(bad) = parts.iter().find(|r| r.failed()) {
        return LawReport {
            law,
            verdict: Verdict::Fail,
            witness: bad.witness.clone(),
            note: format!("{} failed", bad.law),
        };
    }
    if !parts.is_empty() && parts.iter().all(|r| r.verdict == Verdict::Skipped) {
        return LawReport::skipped(law, "all sub-checks skipped");
    }
    LawReport::pass(law)
}

/// Exit status contract: 0 when nothing failed, 1 otherwise.
pub fn exit_code(reports: &[LawReport]) -> i32 {
    if reports.iter().any(LawReport::failed) {
        1
    } else {
        0
    }
}
