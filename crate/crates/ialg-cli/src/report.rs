//! The result of running a session: one entry per command, serialized as
//! a versioned JSON document or rendered as plain text.
//!
//! Reports are deterministic: every collection is emitted in a fixed
//! order, scalars never reach the report (only dimensions, ranks, labels
//! and index names do), and the input is identified by a SHA-256 digest.
//! `schema` is bumped whenever the shape of the document changes.

use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

use ialg_core::checks::GenerationCertificate;
use ialg_core::outcome::{CheckOutcome, InconclusiveReason, Verdict};

pub const SCHEMA: u32 = 1;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct Report {
    pub schema: u32,
    pub engine: EngineInfo,
    pub input: InputInfo,
    pub field: String,
    pub poset: String,
    pub results: Vec<CommandReport>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct EngineInfo {
    pub name: String,
    pub version: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct InputInfo {
    pub session: String,
    pub digest: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CommandReport {
    pub command: String,
    pub status: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub data: Option<CommandData>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorInfo>,
}

/// A command that could not run.  `limit` means a resource ceiling was
/// hit; `input` means the command did not apply to the session; `engine`
/// is any other failure from the computation itself.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ErrorInfo {
    pub kind: String,
    pub message: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct DimEntry {
    pub at: String,
    pub dim: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct GenEntry {
    pub at: String,
    pub count: usize,
    pub labels: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct TorsionEntry {
    pub at: String,
    pub rank: usize,
    /// Per torsion row, the least cut past which it dies, when one exists
    /// inside the window.
    pub witnesses: Vec<Option<String>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct GrowthInfo {
    pub windows: Vec<String>,
    pub totals: Vec<usize>,
    pub degree_counts: Vec<Vec<DimEntry>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ReasonInfo {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub growth: Option<GrowthInfo>,
}

/// A check verdict with its context, scrubbed of scalar data.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct OutcomeInfo {
    pub verdict: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub criterion: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<ReasonInfo>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct GenerationCertInfo {
    pub module: String,
    pub windows: Vec<String>,
    pub generators: Vec<GenEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct IndexOutcome {
    pub at: String,
    pub outcome: OutcomeInfo,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<GenerationCertInfo>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct PairFailure {
    pub lower: String,
    pub cut: String,
    pub outcome: OutcomeInfo,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<GenerationCertInfo>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct StrongFailureInfo {
    pub lower: String,
    pub mid: String,
    pub upper: String,
    pub product_rank: usize,
    pub full_dim: usize,
    pub missing: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct MapOutcome {
    pub name: String,
    pub outcome: OutcomeInfo,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<GenerationCertInfo>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct SatComponent {
    pub at: String,
    pub saturation: usize,
    pub dim: usize,
}

/// Evidence attached to a saturated-tail decision: per-index saturation
/// dimensions, injectivity of the comparison maps, and the tail generation
/// certificate when the tail half of the check ran.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct Chi1CertInfo {
    pub components: Vec<SatComponent>,
    pub natural_maps_injective: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail: Option<GenerationCertInfo>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct PairDim {
    pub from: String,
    pub to: String,
    pub dim: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct SampleBound {
    pub sample: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<String>,
    pub outcome: OutcomeInfo,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CommandData {
    Dims {
        object: String,
        window: String,
        entries: Vec<DimEntry>,
        total: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        grid: Option<Vec<Vec<usize>>>,
    },
    Tail {
        module: String,
        cut: String,
        strict: bool,
        window: String,
        entries: Vec<DimEntry>,
        total: usize,
    },
    Gens {
        module: String,
        window: String,
        generators: Vec<GenEntry>,
        total: usize,
    },
    Torsion {
        module: String,
        window: String,
        components: Vec<TorsionEntry>,
        total: usize,
    },
    Hom {
        source: String,
        target: String,
        dim: usize,
    },
    Tau {
        module: String,
        window: String,
        cuts: Vec<String>,
        totals: Vec<usize>,
        stabilized: bool,
        stable: Vec<DimEntry>,
    },
    QgrHom {
        source: String,
        target: String,
        window: String,
        cuts: Vec<String>,
        skipped: Vec<String>,
        totals: Vec<usize>,
        complete: Vec<bool>,
        stabilized: bool,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        terminal_dim: Option<usize>,
    },
    Saturate {
        module: String,
        at: String,
        window: String,
        cuts: Vec<String>,
        totals: Vec<usize>,
        natural_map_injective: Vec<bool>,
        stabilized: bool,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        terminal_dim: Option<usize>,
    },
    Chi1 {
        module: String,
        cut: String,
        window: String,
        outcome: OutcomeInfo,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        certificate: Option<Chi1CertInfo>,
    },
    Aofseq {
        name: String,
        entries: Vec<String>,
        connected: OutcomeInfo,
        built: bool,
        dims: Vec<PairDim>,
    },
    CheckStar {
        window: String,
        verdict: String,
        per_index: Vec<IndexOutcome>,
    },
    CheckCocompact {
        window: String,
        verdict: String,
        pairs_examined: usize,
        pairs_total: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        failure: Option<PairFailure>,
    },
    CheckStrong {
        window: String,
        outcome: OutcomeInfo,
        triples: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        failure: Option<StrongFailureInfo>,
    },
    CheckCoherence {
        verdict: String,
        per_map: Vec<MapOutcome>,
    },
    CheckSequence {
        window: String,
        samples: Vec<String>,
        ample: String,
        tails: String,
        surjectivity: String,
        bounds: Vec<SampleBound>,
    },
}

// ---------------------------------------------------------------------------
// conversions from engine outcomes

pub fn verdict_str(v: &Verdict) -> &'static str {
    match v {
        Verdict::Verified => "verified",
        Verdict::VerifiedByCriterion(_) => "verified_by_criterion",
        Verdict::Refuted => "refuted",
        Verdict::Inconclusive(_) => "inconclusive",
    }
}

pub fn outcome_info<C>(o: &CheckOutcome<C>) -> OutcomeInfo {
    let criterion = match &o.verdict {
        Verdict::VerifiedByCriterion(c) => Some(c.clone()),
        _ => None,
    };
    let reason = match &o.verdict {
        Verdict::Inconclusive(InconclusiveReason::Growth(g)) => Some(ReasonInfo {
            kind: "growth".into(),
            detail: None,
            growth: Some(GrowthInfo {
                windows: g.windows.clone(),
                totals: g.totals.clone(),
                degree_counts: g
                    .degree_counts
                    .iter()
                    .map(|per| {
                        per.iter()
                            .map(|(at, n)| DimEntry { at: at.to_string(), dim: *n })
                            .collect()
                    })
                    .collect(),
            }),
        }),
        Verdict::Inconclusive(InconclusiveReason::WindowExhausted { detail }) => Some(ReasonInfo {
            kind: "window_exhausted".into(),
            detail: Some(detail.clone()),
            growth: None,
        }),
        _ => None,
    };
    OutcomeInfo {
        verdict: verdict_str(&o.verdict).into(),
        criterion,
        window: o.window.clone(),
        reason,
    }
}

pub fn generation_cert_info(c: &GenerationCertificate) -> GenerationCertInfo {
    let generators = c
        .generators
        .iter()
        .map(|(at, count)| {
            let labels = c
                .labels
                .iter()
                .find(|(l, _)| l == at)
                .map(|(_, ls)| ls.clone())
                .unwrap_or_default();
            GenEntry { at: at.to_string(), count: *count, labels }
        })
        .collect();
    GenerationCertInfo {
        module: c.module.clone(),
        windows: c.windows.clone(),
        generators,
    }
}

// ---------------------------------------------------------------------------
// exit codes

impl Report {
    /// 0 all checks verified, 2 something refuted, 3 something
    /// inconclusive, 4 a resource limit was hit, 1 any other command
    /// failure.  Probes (`tau`, `qgrhom`, `saturate`) report but do not
    /// decide, so they never affect the code.
    pub fn exit_code(&self) -> u8 {
        let mut limit = false;
        let mut errored = false;
        let mut refuted = false;
        let mut inconclusive = false;
        let mut see = |v: &str| match v {
            "refuted" => refuted = true,
            "inconclusive" => inconclusive = true,
            _ => {}
        };
        for r in &self.results {
            if let Some(e) = &r.error {
                if e.kind == "limit" {
                    limit = true;
                } else {
                    errored = true;
                }
            }
            match &r.data {
                Some(CommandData::Chi1 { outcome, .. }) => see(&outcome.verdict),
                Some(CommandData::Aofseq { connected, .. }) => see(&connected.verdict),
                Some(CommandData::CheckStar { verdict, .. }) => see(verdict),
                Some(CommandData::CheckCocompact { verdict, .. }) => see(verdict),
                Some(CommandData::CheckStrong { outcome, .. }) => see(&outcome.verdict),
                Some(CommandData::CheckCoherence { verdict, .. }) => see(verdict),
                Some(CommandData::CheckSequence { ample, tails, surjectivity, .. }) => {
                    see(ample);
                    see(tails);
                    see(surjectivity);
                }
                _ => {}
            }
        }
        if limit {
            4
        } else if errored {
            1
        } else if refuted {
            2
        } else if inconclusive {
            3
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}

// ---------------------------------------------------------------------------
// text rendering

fn outcome_line(o: &OutcomeInfo) -> String {
    let mut s = o.verdict.clone();
    if let Some(c) = &o.criterion {
        write!(s, " ({c})").unwrap();
    }
    if let Some(r) = &o.reason {
        match (&r.detail, &r.growth) {
            (Some(d), _) => write!(s, ": {d}").unwrap(),
            (None, Some(g)) => {
                write!(s, ": generator totals {:?} over {} windows", g.totals, g.windows.len())
                    .unwrap()
            }
            _ => {}
        }
    }
    s
}

fn push_gens(out: &mut String, gens: &[GenEntry]) {
    for g in gens {
        let labels = if g.labels.is_empty() {
            String::new()
        } else {
            format!("  [{}]", g.labels.join(", "))
        };
        writeln!(out, "    {}: {}{}", g.at, g.count, labels).unwrap();
    }
}

pub fn render_text(r: &Report) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "{} {} — session {} over {}, poset {}",
        r.engine.name, r.engine.version, r.input.session, r.field, r.poset
    )
    .unwrap();
    writeln!(out, "input {}", r.input.digest).unwrap();
    for res in &r.results {
        write!(out, "\n== {}", res.command).unwrap();
        if let Some(e) = &res.error {
            writeln!(out, ": error ({})\n    {}", e.kind, e.message).unwrap();
            continue;
        }
        let Some(data) = &res.data else {
            writeln!(out, ": (no data)").unwrap();
            continue;
        };
        match data {
            CommandData::Dims { object, window, entries, total, grid } => {
                writeln!(out, ": {object} over {window}, total {total}").unwrap();
                if let Some(rows) = grid {
                    let w = rows
                        .iter()
                        .flatten()
                        .map(|n| n.to_string().len())
                        .max()
                        .unwrap_or(1);
                    for row in rows {
                        let line: Vec<String> =
                            row.iter().map(|n| format!("{n:>w$}")).collect();
                        writeln!(out, "    {}", line.join(" ")).unwrap();
                    }
                } else {
                    for e in entries {
                        if e.dim > 0 {
                            writeln!(out, "    {}: {}", e.at, e.dim).unwrap();
                        }
                    }
                }
            }
            CommandData::Tail { cut, strict, total, entries, .. } => {
                let cmp = if *strict { ">" } else { ">=" };
                writeln!(out, ": support {cmp} {cut}, total {total}").unwrap();
                for e in entries {
                    if e.dim > 0 {
                        writeln!(out, "    {}: {}", e.at, e.dim).unwrap();
                    }
                }
            }
            CommandData::Gens { generators, total, .. } => {
                writeln!(out, ": minimal generators, total {total}").unwrap();
                push_gens(&mut out, generators);
            }
            CommandData::Torsion { components, total, .. } => {
                writeln!(out, ": total rank {total}").unwrap();
                for c in components {
                    let wit: Vec<String> = c
                        .witnesses
                        .iter()
                        .map(|w| w.clone().unwrap_or_else(|| "-".into()))
                        .collect();
                    writeln!(out, "    {}: rank {}, dies past {}", c.at, c.rank, wit.join(", "))
                        .unwrap();
                }
            }
            CommandData::Hom { dim, .. } => {
                writeln!(out, ": dimension {dim}").unwrap();
            }
            CommandData::Tau { totals, stabilized, stable, .. } => {
                writeln!(
                    out,
                    ": totals {totals:?}, {}",
                    if *stabilized { "stabilized" } else { "not stabilized" }
                )
                .unwrap();
                for e in stable {
                    if e.dim > 0 {
                        writeln!(out, "    {}: {}", e.at, e.dim).unwrap();
                    }
                }
            }
            CommandData::QgrHom { totals, skipped, stabilized, terminal_dim, complete, .. } => {
                writeln!(
                    out,
                    ": totals {totals:?}, {}{}",
                    if *stabilized { "stabilized" } else { "not stabilized" },
                    match terminal_dim {
                        Some(d) => format!(", terminal dimension {d}"),
                        None => String::new(),
                    }
                )
                .unwrap();
                if !skipped.is_empty() {
                    writeln!(out, "    skipped cuts: {}", skipped.join(", ")).unwrap();
                }
                if complete.iter().any(|c| !c) {
                    writeln!(out, "    some window presentations are truncated").unwrap();
                }
            }
            CommandData::Saturate { totals, natural_map_injective, stabilized, terminal_dim, .. } => {
                writeln!(
                    out,
                    ": totals {totals:?}, {}{}",
                    if *stabilized { "stabilized" } else { "not stabilized" },
                    match terminal_dim {
                        Some(d) => format!(", terminal dimension {d}"),
                        None => String::new(),
                    }
                )
                .unwrap();
                writeln!(out, "    natural map injective: {natural_map_injective:?}").unwrap();
            }
            CommandData::Chi1 { outcome, certificate, .. } => {
                writeln!(out, ": {}", outcome_line(outcome)).unwrap();
                if let Some(cert) = certificate {
                    for c in &cert.components {
                        writeln!(
                            out,
                            "    {}: saturation {}, dimension {}",
                            c.at, c.saturation, c.dim
                        )
                        .unwrap();
                    }
                    writeln!(out, "    natural maps injective: {}", cert.natural_maps_injective)
                        .unwrap();
                    if let Some(t) = &cert.tail {
                        writeln!(out, "    tail generators:").unwrap();
                        push_gens(&mut out, &t.generators);
                    }
                }
            }
            CommandData::Aofseq { connected, built, dims, .. } => {
                writeln!(
                    out,
                    ": {}, connected {}",
                    if *built { "built" } else { "not built" },
                    outcome_line(connected)
                )
                .unwrap();
                for d in dims {
                    if d.dim > 0 {
                        writeln!(out, "    {} -> {}: {}", d.from, d.to, d.dim).unwrap();
                    }
                }
            }
            CommandData::CheckStar { verdict, per_index, .. } => {
                writeln!(out, ": {verdict}").unwrap();
                for i in per_index {
                    if i.outcome.verdict != "verified" {
                        writeln!(out, "    {}: {}", i.at, outcome_line(&i.outcome)).unwrap();
                    }
                }
            }
            CommandData::CheckCocompact { verdict, pairs_examined, pairs_total, failure, .. } => {
                writeln!(out, ": {verdict} ({pairs_examined} of {pairs_total} pairs examined)")
                    .unwrap();
                if let Some(f) = failure {
                    writeln!(
                        out,
                        "    tail of P{} past {}: {}",
                        f.lower,
                        f.cut,
                        outcome_line(&f.outcome)
                    )
                    .unwrap();
                }
            }
            CommandData::CheckStrong { outcome, triples, failure, .. } => {
                writeln!(out, ": {} ({triples} triples)", outcome_line(outcome)).unwrap();
                if let Some(f) = failure {
                    writeln!(
                        out,
                        "    at {} -> {} -> {}: products span {} of {}, missing {}",
                        f.lower, f.mid, f.upper, f.product_rank, f.full_dim, f.missing
                    )
                    .unwrap();
                }
            }
            CommandData::CheckCoherence { verdict, per_map } => {
                writeln!(out, ": {verdict}").unwrap();
                for m in per_map {
                    writeln!(out, "    {}: {}", m.name, outcome_line(&m.outcome)).unwrap();
                }
            }
            CommandData::CheckSequence { ample, tails, surjectivity, bounds, .. } => {
                writeln!(
                    out,
                    ": ample {ample}, tails {tails}, surjectivity {surjectivity}"
                )
                .unwrap();
                for b in bounds {
                    writeln!(
                        out,
                        "    {}: cover surjective {}{}",
                        b.sample,
                        b.outcome.verdict,
                        match &b.bound {
                            Some(x) => format!(", from {x} on"),
                            None => String::new(),
                        }
                    )
                    .unwrap();
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reports_serialize_and_deserialize_unchanged() {
        let report = Report {
            schema: SCHEMA,
            engine: EngineInfo { name: "ialg".into(), version: "0.0.0".into() },
            input: InputInfo { session: "t".into(), digest: "sha256:00".into() },
            field: "Q".into(),
            poset: "Z^2".into(),
            results: vec![
                CommandReport {
                    command: "hom P(0,0) S(0,0)".into(),
                    status: "ok".into(),
                    data: Some(CommandData::Hom {
                        source: "P(0,0)".into(),
                        target: "S(0,0)".into(),
                        dim: 1,
                    }),
                    error: None,
                },
                CommandReport {
                    command: "dims (0,0) (9,9)".into(),
                    status: "error".into(),
                    data: None,
                    error: Some(ErrorInfo { kind: "limit".into(), message: "too big".into() }),
                },
            ],
        };
        let json = report.to_json();
        let back: Report = serde_json::from_str(&json).unwrap();
        assert_eq!(back, report);
        assert_eq!(back.to_json(), json);
        assert_eq!(report.exit_code(), 4);
    }

    #[test]
    fn exit_codes_rank_refutation_over_inconclusive() {
        let base = |data| Report {
            schema: SCHEMA,
            engine: EngineInfo { name: "ialg".into(), version: "0".into() },
            input: InputInfo { session: "t".into(), digest: "d".into() },
            field: "Q".into(),
            poset: "Z^1".into(),
            results: vec![CommandReport {
                command: "check".into(),
                status: "ok".into(),
                data: Some(data),
                error: None,
            }],
        };
        let strong = |verdict: &str| CommandData::CheckStrong {
            window: "w".into(),
            outcome: OutcomeInfo {
                verdict: verdict.into(),
                criterion: None,
                window: None,
                reason: None,
            },
            triples: 1,
            failure: None,
        };
        assert_eq!(base(strong("verified")).exit_code(), 0);
        assert_eq!(base(strong("refuted")).exit_code(), 2);
        assert_eq!(base(strong("inconclusive")).exit_code(), 3);
    }
}
