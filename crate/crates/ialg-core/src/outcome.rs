//! Verdicts with certificates — the result algebra every decision procedure
//! returns.
//!
//! A `Verified` or `Refuted` verdict always carries a certificate that a
//! small independent validator can replay.  `Inconclusive` carries evidence
//! of *why* the window budget was not enough: either fresh generators kept
//! appearing as windows grew, or a probe ran out of room.

use alloc::string::String;
use alloc::vec::Vec;

use crate::poset::IndexElement;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// Established directly inside the window policy.
    Verified,
    /// Established indirectly; the string names the criterion used.
    VerifiedByCriterion(String),
    /// False, with a finite counterexample in the certificate.
    Refuted,
    Inconclusive(InconclusiveReason),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InconclusiveReason {
    /// Generator counts kept growing with the window: evidence against,
    /// but a finite window proves nothing either way.
    Growth(GrowthEvidence),
    /// The window chain was too short, or a probe failed to stabilize.
    WindowExhausted { detail: String },
}

/// Per-window minimal-generator profile over a nested window chain.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GrowthEvidence {
    /// Human label of each window, innermost first.
    pub windows: Vec<String>,
    /// Total generator count per window.
    pub totals: Vec<usize>,
    /// Per window: (degree, generators found at that degree).
    pub degree_counts: Vec<Vec<(IndexElement, usize)>>,
}

/// Outcome of one check; `C` is the checker-specific certificate payload.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckOutcome<C> {
    pub verdict: Verdict,
    /// Label of the window or window chain the verdict refers to.
    pub window: Option<String>,
    pub certificate: Option<C>,
}

impl<C> CheckOutcome<C> {
    pub fn verified(window: Option<String>, certificate: C) -> Self {
        CheckOutcome { verdict: Verdict::Verified, window, certificate: Some(certificate) }
    }

    pub fn by_criterion(criterion: &str, window: Option<String>, certificate: C) -> Self {
        CheckOutcome {
            verdict: Verdict::VerifiedByCriterion(String::from(criterion)),
            window,
            certificate: Some(certificate),
        }
    }

    pub fn refuted(window: Option<String>, certificate: C) -> Self {
        CheckOutcome { verdict: Verdict::Refuted, window, certificate: Some(certificate) }
    }

    pub fn inconclusive(window: Option<String>, reason: InconclusiveReason) -> Self {
        CheckOutcome { verdict: Verdict::Inconclusive(reason), window, certificate: None }
    }

    pub fn is_verified(&self) -> bool {
        matches!(self.verdict, Verdict::Verified | Verdict::VerifiedByCriterion(_))
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self.verdict, Verdict::Refuted)
    }

    pub fn is_inconclusive(&self) -> bool {
        matches!(self.verdict, Verdict::Inconclusive(_))
    }

    pub fn growth_evidence(&self) -> Option<&GrowthEvidence> {
        match &self.verdict {
            Verdict::Inconclusive(InconclusiveReason::Growth(g)) => Some(g),
            _ => None,
        }
    }
}
