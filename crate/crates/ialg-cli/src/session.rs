//! Running a parsed session: build the poset, algebra, modules and window,
//! execute each command against the engine, and assemble a [`Report`].
//!
//! Resolution errors (a declaration the engine rejects) abort the whole
//! run; errors inside a single command are recorded in that command's
//! report entry and the remaining commands still execute.

use std::fmt;
use std::sync::Arc;

use sha2::{Digest, Sha256};

use ialg_core::algebra::{
    Algebra, Generator, GeneratorDegree, PresentedAlgebra, RelationInput, RelationSpan,
};
use ialg_core::checks::{
    check_coherence_probe, check_sequence_conditions, check_star, check_strongly_indexed,
    check_tails_cocompact, window_pairs, SweepChain,
};
use ialg_core::field::{Field, PrimeField, Rationals};
use ialg_core::gradedmod::{
    hom_space, min_generators, torsion_report, Module, ModuleGenerator, ModuleMap, PresRelation,
    Presentation,
};
use ialg_core::outcome::Verdict;
use ialg_core::poset::{IndexElement, Poset, Window};
use ialg_core::qgr::{
    a_of_sequence, check_saturated_tail, diagonal_cut_chain, qgr_hom, saturation_component,
    tau_colimit,
};
use ialg_core::{EngineError, Limits};

use crate::parse::{
    self, CheckCmd, Command, Coord, DegreeDecl, Expr, ExprTerm, FieldChoice, ModRef, ModuleDef,
    ParseError, PosetDecl, PosetLine, RawIndex, SeqEntry, SessionSpec,
};
use crate::report::{
    generation_cert_info, outcome_info, verdict_str, Chi1CertInfo, CommandData, CommandReport,
    DimEntry, EngineInfo, ErrorInfo, GenEntry, IndexOutcome, InputInfo, MapOutcome, PairDim,
    PairFailure, Report, SampleBound, SatComponent, StrongFailureInfo, TorsionEntry, SCHEMA,
};

/// A session that never produced a report: the text did not parse, or a
/// declaration was rejected while building the engine objects.
#[derive(Debug)]
pub enum CliError {
    Parse(ParseError),
    Session(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse(e) => write!(f, "{e}"),
            CliError::Session(m) => write!(f, "{m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::Parse(e)
    }
}

/// Overrides applied on top of the session text.
#[derive(Clone, Debug)]
pub struct RunOptions {
    /// Session name used when the text does not declare one.
    pub session_name: Option<String>,
    /// Replaces the file's `run` lines.
    pub commands: Option<Vec<Command>>,
    /// Replaces the file's `window` line.
    pub window: Option<(RawIndex, RawIndex)>,
    /// Replaces the file's `field` line.
    pub field: Option<FieldChoice>,
    /// Length of the cut chains used by the colimit probes.
    pub chain_len: usize,
    pub limits: Limits,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            session_name: None,
            commands: None,
            window: None,
            field: None,
            chain_len: 4,
            limits: Limits::default(),
        }
    }
}

/// Parse and run a session, producing the full report.
pub fn run_text(text: &str, opts: &RunOptions) -> Result<Report, CliError> {
    let spec = parse::parse(text)?;
    let digest = format!("sha256:{:x}", Sha256::digest(text.as_bytes()));
    match opts.field.or(spec.field).unwrap_or(FieldChoice::Q) {
        FieldChoice::Q => run_with(&spec, Rationals, &digest, opts),
        FieldChoice::Fp(p) => {
            let f = PrimeField::new(p).map_err(|e| CliError::Session(e.to_string()))?;
            run_with(&spec, f, &digest, opts)
        }
    }
}

fn run_with<F: Field>(
    spec: &SessionSpec,
    field: F,
    digest: &str,
    opts: &RunOptions,
) -> Result<Report, CliError> {
    let field_name = field.name();
    let res = resolve(spec, field, opts)?;
    let cmds: &[Command] = match &opts.commands {
        Some(c) => c,
        None => &spec.commands,
    };
    let results = cmds.iter().map(|c| execute(&res, c)).collect();
    Ok(Report {
        schema: SCHEMA,
        engine: EngineInfo {
            name: "ialg".into(),
            version: env!("CARGO_PKG_VERSION").into(),
        },
        input: InputInfo { session: res.name.clone(), digest: digest.into() },
        field: field_name,
        poset: res.algebra.poset().to_string(),
        results,
    })
}

// ---------------------------------------------------------------------------
// resolution

/// The stored pieces of a `coker` declaration, kept so `check coherence`
/// can rebuild the covering map (not just its cokernel).
struct CokerParts<F: Field> {
    covers: Vec<ModuleGenerator>,
    images: Vec<Vec<F::Elem>>,
    target: Arc<Module<F>>,
}

struct Resolved<F: Field> {
    name: String,
    algebra: Algebra<F>,
    modules: Vec<(String, Arc<Module<F>>)>,
    cokers: Vec<(String, CokerParts<F>)>,
    /// Session window corners; the window itself is built per command so
    /// that limit failures land in that command's report entry.
    window: Option<(IndexElement, IndexElement)>,
    chain_len: usize,
}

fn resolve<F: Field>(
    spec: &SessionSpec,
    field: F,
    opts: &RunOptions,
) -> Result<Resolved<F>, CliError> {
    let name = spec
        .name
        .clone()
        .or_else(|| opts.session_name.clone())
        .unwrap_or_else(|| "session".into());
    let poset = build_poset(&spec.posets)?;

    let generators = spec
        .gens
        .iter()
        .map(|g| Generator { name: g.name.clone(), degree: generator_degree(&g.degree) })
        .collect();
    let mut relations = Vec::with_capacity(spec.rels.len());
    for r in &spec.rels {
        let mut terms = Vec::with_capacity(r.terms.len());
        for t in &r.terms {
            let c = term_scalar(&field, t)
                .map_err(|m| CliError::Session(format!("line {}: {m}", r.line)))?;
            terms.push((c, t.word.clone()));
        }
        relations.push(RelationInput { span: relation_span(&r.span), terms });
    }
    let presented = PresentedAlgebra::new(
        &name,
        poset.clone(),
        field.clone(),
        generators,
        relations,
        opts.limits.clone(),
    )
    .map_err(|e| CliError::Session(e.to_string()))?;
    let algebra = Algebra::Presented(presented);

    let mut modules: Vec<(String, Arc<Module<F>>)> = Vec::with_capacity(spec.modules.len());
    let mut cokers = Vec::new();
    for decl in &spec.modules {
        let at_line = |m: String| CliError::Session(format!("line {}: {m}", decl.line));
        let m = match &decl.def {
            ModuleDef::Free(i) => {
                let at = index(&poset, i).map_err(at_line)?;
                Module::free(algebra.clone(), &at, &decl.name)
                    .map_err(|e| at_line(e.to_string()))?
            }
            ModuleDef::Simple(i) => {
                let at = index(&poset, i).map_err(at_line)?;
                Module::simple(algebra.clone(), &at, &decl.name)
                    .map_err(|e| at_line(e.to_string()))?
            }
            ModuleDef::Coker { covers, targets, images } => {
                let (m, parts) =
                    build_coker(&algebra, &field, &decl.name, covers, targets, images)
                        .map_err(at_line)?;
                cokers.push((decl.name.clone(), parts));
                m
            }
        };
        modules.push((decl.name.clone(), m));
    }

    let window = match (&opts.window, &spec.window) {
        (Some(c), _) => Some(window_corners(&poset, c, "window override")?),
        (None, Some(c)) => {
            let ctx = format!("line {}", spec.window_line);
            Some(window_corners(&poset, c, &ctx)?)
        }
        (None, None) => None,
    };

    Ok(Resolved { name, algebra, modules, cokers, window, chain_len: opts.chain_len })
}

fn build_poset(decls: &[PosetLine]) -> Result<Arc<Poset>, CliError> {
    let mut named: Vec<(&str, Arc<Poset>)> = Vec::new();
    let mut last = None;
    for p in decls {
        let at_line = |e: EngineError| CliError::Session(format!("line {}: {e}", p.line));
        let built = match &p.decl {
            PosetDecl::ZLattice(rank) => Poset::lattice(*rank).map_err(at_line)?,
            PosetDecl::Finite { labels, rels } => {
                let ls: Vec<&str> = labels.iter().map(String::as_str).collect();
                let rs: Vec<(&str, &str)> =
                    rels.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
                Poset::finite(&ls, &rs).map_err(at_line)?
            }
            PosetDecl::Product(a, b) => {
                // The parser guarantees both names refer to earlier lines.
                let part = |n: &str| named.iter().find(|(k, _)| *k == n).unwrap().1.clone();
                Poset::product(part(a), part(b))
            }
        };
        if let Some(n) = &p.name {
            named.push((n, built.clone()));
        }
        last = Some(built);
    }
    last.ok_or_else(|| CliError::Session("no poset declared".into()))
}

fn window_corners(
    poset: &Arc<Poset>,
    corners: &(RawIndex, RawIndex),
    ctx: &str,
) -> Result<(IndexElement, IndexElement), CliError> {
    let at_ctx = |m: String| CliError::Session(format!("{ctx}: {m}"));
    let lo = index(poset, &corners.0).map_err(at_ctx)?;
    let hi = index(poset, &corners.1).map_err(at_ctx)?;
    Ok((lo, hi))
}

fn generator_degree(d: &DegreeDecl) -> GeneratorDegree {
    match d {
        DegreeDecl::Shift(s) => GeneratorDegree::Shift(s.clone()),
        DegreeDecl::Arrow(a, b) => GeneratorDegree::Arrow {
            from: IndexElement::atom(a),
            to: IndexElement::atom(b),
        },
        DegreeDecl::Mixed(s, a, b) => GeneratorDegree::Mixed {
            shift: s.clone(),
            from: IndexElement::atom(a),
            to: IndexElement::atom(b),
        },
    }
}

fn relation_span(d: &DegreeDecl) -> RelationSpan {
    match d {
        DegreeDecl::Shift(s) => RelationSpan::Shift(s.clone()),
        DegreeDecl::Arrow(a, b) => RelationSpan::Arrow {
            from: IndexElement::atom(a),
            to: IndexElement::atom(b),
        },
        DegreeDecl::Mixed(s, a, b) => RelationSpan::Mixed {
            shift: s.clone(),
            from: IndexElement::atom(a),
            to: IndexElement::atom(b),
        },
    }
}

fn term_scalar<F: Field>(field: &F, t: &ExprTerm) -> Result<F::Elem, String> {
    let c = field.parse(&t.coeff).map_err(|e| e.to_string())?;
    Ok(if t.neg { field.neg(&c) } else { c })
}

/// Interpret a raw index against the poset: integers fill lattice ranks,
/// labels fill finite factors, products consume both sides in order.
fn index(poset: &Arc<Poset>, raw: &RawIndex) -> Result<IndexElement, String> {
    let (el, used) = index_rec(poset, &raw.0)?;
    if used != raw.0.len() {
        return Err(format!(
            "index {raw} has {} coordinates but the poset uses {used}",
            raw.0.len()
        ));
    }
    poset.check_member(&el).map_err(|e| e.to_string())?;
    Ok(el)
}

fn index_rec(poset: &Poset, coords: &[Coord]) -> Result<(IndexElement, usize), String> {
    if let Some((a, b)) = poset.product_parts() {
        let (ea, ua) = index_rec(a, coords)?;
        let (eb, ub) = index_rec(b, &coords[ua..])?;
        return Ok((IndexElement::pair(ea, eb), ua + ub));
    }
    if let Some(rank) = poset.rank() {
        if coords.len() < rank {
            return Err(format!("too few coordinates for a rank-{rank} lattice"));
        }
        let mut cs = Vec::with_capacity(rank);
        for c in &coords[..rank] {
            match c {
                Coord::Int(n) => cs.push(*n),
                Coord::Atom(a) => {
                    return Err(format!("expected an integer coordinate, found `{a}`"))
                }
            }
        }
        return Ok((IndexElement::lattice(&cs), rank));
    }
    match coords.first() {
        Some(Coord::Atom(a)) => Ok((IndexElement::atom(a), 1)),
        Some(Coord::Int(n)) => Err(format!("expected a poset label, found `{n}`")),
        None => Err("too few coordinates".into()),
    }
}

type CokerBuilt<F> = (Arc<Module<F>>, CokerParts<F>);

fn build_coker<F: Field>(
    algebra: &Algebra<F>,
    field: &F,
    name: &str,
    covers: &[RawIndex],
    targets: &[RawIndex],
    images: &[Vec<Expr>],
) -> Result<CokerBuilt<F>, String> {
    let poset = algebra.poset();
    let mut tgens = Vec::with_capacity(targets.len());
    for (k, i) in targets.iter().enumerate() {
        tgens.push(ModuleGenerator { name: format!("g{k}"), at: index(poset, i)? });
    }
    let mut cgens = Vec::with_capacity(covers.len());
    for (k, i) in covers.iter().enumerate() {
        cgens.push(ModuleGenerator { name: format!("r{k}"), at: index(poset, i)? });
    }
    let mut rels = Vec::new();
    let mut flat = Vec::with_capacity(cgens.len());
    for (ci, cover) in cgens.iter().enumerate() {
        let mut terms = Vec::new();
        let mut row = Vec::new();
        for (ti, tgt) in tgens.iter().enumerate() {
            let block = eval_block(algebra, field, &tgt.at, &cover.at, &images[ci][ti])
                .map_err(|m| format!("image of {} in block {}: {m}", cover.name, ti + 1))?;
            if block.iter().any(|c| !field.is_zero(c)) {
                terms.push((ti, block.clone()));
            }
            row.extend(block);
        }
        // An all-zero image row adds no relation but still defines the map.
        if !terms.is_empty() {
            rels.push(PresRelation { at: cover.at.clone(), terms });
        }
        flat.push(row);
    }
    let target = Module::presented(
        algebra.clone(),
        Presentation { gens: tgens.clone(), rels: Vec::new() },
        &format!("{name}.sum"),
    )
    .map_err(|e| e.to_string())?;
    let module = Module::presented(algebra.clone(), Presentation { gens: tgens, rels }, name)
        .map_err(|e| e.to_string())?;
    Ok((module, CokerParts { covers: cgens, images: flat, target }))
}

/// Evaluate one image block: an element of the component `from -> to` of
/// the algebra, written as a sum of scalar-weighted generator words.  A
/// lone literal `0` denotes the zero block.
fn eval_block<F: Field>(
    algebra: &Algebra<F>,
    field: &F,
    from: &IndexElement,
    to: &IndexElement,
    expr: &Expr,
) -> Result<Vec<F::Elem>, String> {
    let dim = algebra.dim(from, to).map_err(|e| e.to_string())?;
    let mut terms = Vec::new();
    for t in expr {
        let c = term_scalar(field, t)?;
        if t.word.is_empty() && field.is_zero(&c) {
            continue;
        }
        terms.push((c, t.word.clone()));
    }
    if terms.is_empty() {
        return Ok(vec![field.zero(); dim]);
    }
    let el = algebra.element_from_words(from, &terms).map_err(|e| e.to_string())?;
    if el.to != *to {
        return Err(format!("the expression lands at {}, expected {to}", el.to));
    }
    Ok(el.coords)
}

// ---------------------------------------------------------------------------
// execution

enum ExecError {
    Engine(EngineError),
    Input(String),
}

impl From<EngineError> for ExecError {
    fn from(e: EngineError) -> Self {
        ExecError::Engine(e)
    }
}

fn error_info(e: ExecError) -> ErrorInfo {
    match e {
        ExecError::Engine(err) => {
            let kind = match &err {
                EngineError::LimitExceeded { .. } => "limit",
                EngineError::MissingInput { .. } | EngineError::InvalidWindow { .. } => "input",
                _ => "engine",
            };
            ErrorInfo { kind: kind.into(), message: err.to_string() }
        }
        ExecError::Input(m) => ErrorInfo { kind: "input".into(), message: m },
    }
}

fn execute<F: Field>(res: &Resolved<F>, cmd: &Command) -> CommandReport {
    match res.data_for(cmd) {
        Ok(data) => CommandReport {
            command: cmd.to_string(),
            status: "ok".into(),
            data: Some(data),
            error: None,
        },
        Err(e) => CommandReport {
            command: cmd.to_string(),
            status: "error".into(),
            data: None,
            error: Some(error_info(e)),
        },
    }
}

impl<F: Field> Resolved<F> {
    fn poset(&self) -> &Arc<Poset> {
        self.algebra.poset()
    }

    fn limits(&self) -> &Limits {
        self.algebra.limits()
    }

    fn index(&self, raw: &RawIndex) -> Result<IndexElement, ExecError> {
        index(self.poset(), raw).map_err(ExecError::Input)
    }

    fn session_window(&self) -> Result<Window, ExecError> {
        let (lo, hi) = self.window.as_ref().ok_or_else(|| {
            ExecError::Input("no session window; add a `window` line or pass --window".into())
        })?;
        Ok(Window::interval_box(self.poset(), lo, hi, self.limits())?)
    }

    /// The window for a check: an explicit corner pair if given, otherwise
    /// the session window.
    fn window_from(&self, corners: &Option<(RawIndex, RawIndex)>) -> Result<Window, ExecError> {
        match corners {
            Some((lo, hi)) => {
                let lo = self.index(lo)?;
                let hi = self.index(hi)?;
                Ok(Window::interval_box(self.poset(), &lo, &hi, self.limits())?)
            }
            None => self.session_window(),
        }
    }

    fn module(&self, r: &ModRef) -> Result<Arc<Module<F>>, ExecError> {
        match r {
            ModRef::Named(n) => self
                .modules
                .iter()
                .find(|(name, _)| name == n)
                .map(|(_, m)| m.clone())
                .ok_or_else(|| ExecError::Input(format!("unknown module `{n}`"))),
            ModRef::Free(i) => {
                let at = self.index(i)?;
                Ok(Module::free(self.algebra.clone(), &at, &format!("P{at}"))?)
            }
            ModRef::Simple(i) => {
                let at = self.index(i)?;
                Ok(Module::simple(self.algebra.clone(), &at, &format!("S{at}"))?)
            }
        }
    }

    fn cut_chain(&self, w: &Window) -> Result<Vec<IndexElement>, ExecError> {
        Ok(diagonal_cut_chain(w, self.chain_len)?)
    }

    fn data_for(&self, cmd: &Command) -> Result<CommandData, ExecError> {
        match cmd {
            Command::Dims { module, lo, hi } => self.run_dims(module.as_ref(), lo, hi),
            Command::Tail { module, cut, strict } => self.run_tail(module, cut, *strict),
            Command::Gens { module } => self.run_gens(module),
            Command::Torsion { module } => self.run_torsion(module),
            Command::Hom { source, target } => self.run_hom(source, target),
            Command::Tau { module } => self.run_tau(module),
            Command::QgrHom { source, target } => self.run_qgr_hom(source, target),
            Command::Saturate { module, at } => self.run_saturate(module, at),
            Command::Chi1 { module, cut } => self.run_chi1(module, cut),
            Command::ASeq { entries } => self.run_aseq(entries),
            Command::Check(c) => self.run_check(c),
        }
    }

    fn run_dims(
        &self,
        module: Option<&ModRef>,
        lo: &RawIndex,
        hi: &RawIndex,
    ) -> Result<CommandData, ExecError> {
        let lo_i = self.index(lo)?;
        let hi_i = self.index(hi)?;
        let w = Window::interval_box(self.poset(), &lo_i, &hi_i, self.limits())?;
        let (object, dims) = match module {
            None => {
                let mut v = Vec::with_capacity(w.len());
                for j in w.elements() {
                    v.push((j.clone(), self.algebra.dim(&lo_i, j)?));
                }
                (format!("{} from {lo_i}", self.algebra.name()), v)
            }
            Some(r) => {
                let m = self.module(r)?;
                (m.name().to_string(), m.dims_over(&w)?)
            }
        };
        let total = dims.iter().map(|(_, d)| d).sum();
        let grid = grid_of(&w, &dims);
        let entries = dims
            .iter()
            .filter(|(_, d)| *d > 0)
            .map(|(at, d)| DimEntry { at: at.to_string(), dim: *d })
            .collect();
        Ok(CommandData::Dims { object, window: w.to_string(), entries, total, grid })
    }

    fn run_tail(&self, module: &ModRef, cut: &RawIndex, strict: bool) -> Result<CommandData, ExecError> {
        let w = self.session_window()?;
        let m = self.module(module)?;
        let cut_i = self.index(cut)?;
        let symbol = if strict { ">" } else { ">=" };
        let t = Module::tail(&m, &cut_i, strict, &format!("{}{symbol}{cut_i}", m.name()))?;
        let dims = t.dims_over(&w)?;
        let total = dims.iter().map(|(_, d)| d).sum();
        let entries = dims
            .iter()
            .filter(|(_, d)| *d > 0)
            .map(|(at, d)| DimEntry { at: at.to_string(), dim: *d })
            .collect();
        Ok(CommandData::Tail {
            module: m.name().into(),
            cut: cut_i.to_string(),
            strict,
            window: w.to_string(),
            entries,
            total,
        })
    }

    fn run_gens(&self, module: &ModRef) -> Result<CommandData, ExecError> {
        let w = self.session_window()?;
        let m = self.module(module)?;
        let gens = min_generators(&m, &w)?;
        let mut entries = Vec::with_capacity(gens.len());
        let mut total = 0;
        for (at, positions) in &gens {
            let mut labels = Vec::with_capacity(positions.len());
            for p in positions {
                labels.push(m.basis_label(at, *p)?);
            }
            total += positions.len();
            entries.push(GenEntry { at: at.to_string(), count: positions.len(), labels });
        }
        Ok(CommandData::Gens {
            module: m.name().into(),
            window: w.to_string(),
            generators: entries,
            total,
        })
    }

    fn run_torsion(&self, module: &ModRef) -> Result<CommandData, ExecError> {
        let w = self.session_window()?;
        let m = self.module(module)?;
        let rep = torsion_report(&m, &w)?;
        let components = rep
            .components
            .iter()
            .map(|c| TorsionEntry {
                at: c.at.to_string(),
                rank: c.rows.len(),
                witnesses: c.witnesses.iter().map(|o| o.as_ref().map(|i| i.to_string())).collect(),
            })
            .collect();
        Ok(CommandData::Torsion {
            module: m.name().into(),
            window: w.to_string(),
            components,
            total: rep.total_dim(),
        })
    }

    fn run_hom(&self, source: &ModRef, target: &ModRef) -> Result<CommandData, ExecError> {
        let s = self.module(source)?;
        let t = self.module(target)?;
        let pres = s.implicit_presentation()?;
        let basis = hom_space(&pres, &t)?;
        Ok(CommandData::Hom {
            source: s.name().into(),
            target: t.name().into(),
            dim: basis.len(),
        })
    }

    fn run_tau(&self, module: &ModRef) -> Result<CommandData, ExecError> {
        let w = self.session_window()?;
        let m = self.module(module)?;
        let cuts = self.cut_chain(&w)?;
        let probe = tau_colimit(&m, &cuts, &w)?;
        let stable = probe
            .stable
            .as_ref()
            .map(|rows| {
                rows.iter()
                    .filter(|(_, r)| !r.is_empty())
                    .map(|(at, r)| DimEntry { at: at.to_string(), dim: r.len() })
                    .collect()
            })
            .unwrap_or_default();
        Ok(CommandData::Tau {
            module: m.name().into(),
            window: w.to_string(),
            cuts: probe.probe.steps.iter().map(|s| s.cut.to_string()).collect(),
            totals: probe.probe.totals(),
            stabilized: probe.probe.stabilized,
            stable,
        })
    }

    fn run_qgr_hom(&self, source: &ModRef, target: &ModRef) -> Result<CommandData, ExecError> {
        let w = self.session_window()?;
        let s = self.module(source)?;
        let t = self.module(target)?;
        let cuts = self.cut_chain(&w)?;
        let probe = qgr_hom(&s, &t, &cuts, &w)?;
        Ok(CommandData::QgrHom {
            source: s.name().into(),
            target: t.name().into(),
            window: w.to_string(),
            cuts: probe.probe.steps.iter().map(|s| s.cut.to_string()).collect(),
            skipped: probe.skipped_cuts.iter().map(|c| c.to_string()).collect(),
            totals: probe.probe.totals(),
            complete: probe.complete.clone(),
            stabilized: probe.probe.stabilized,
            terminal_dim: probe.terminal_dim(),
        })
    }

    fn run_saturate(&self, module: &ModRef, at: &RawIndex) -> Result<CommandData, ExecError> {
        let w = self.session_window()?;
        let m = self.module(module)?;
        let at_i = self.index(at)?;
        let cuts = self.cut_chain(&w)?;
        let sat = saturation_component(&m, &at_i, &cuts, &w)?;
        Ok(CommandData::Saturate {
            module: m.name().into(),
            at: at_i.to_string(),
            window: w.to_string(),
            cuts: sat.hom.probe.steps.iter().map(|s| s.cut.to_string()).collect(),
            totals: sat.hom.probe.totals(),
            natural_map_injective: sat.natural_map_injective.clone(),
            stabilized: sat.hom.probe.stabilized,
            terminal_dim: sat.hom.terminal_dim(),
        })
    }

    fn run_chi1(&self, module: &ModRef, cut: &RawIndex) -> Result<CommandData, ExecError> {
        let w = self.session_window()?;
        let m = self.module(module)?;
        let cut_i = self.index(cut)?;
        let cuts = self.cut_chain(&w)?;
        let out = check_saturated_tail(&m, &cut_i, &cuts, &w)?;
        let certificate = out.certificate.as_ref().map(|c| Chi1CertInfo {
            components: c
                .components
                .iter()
                .map(|(at, sat, dim)| SatComponent { at: at.to_string(), saturation: *sat, dim: *dim })
                .collect(),
            natural_maps_injective: c.natural_maps_injective,
            tail: c.tail.as_ref().map(generation_cert_info),
        });
        Ok(CommandData::Chi1 {
            module: m.name().into(),
            cut: cut_i.to_string(),
            window: w.to_string(),
            outcome: outcome_info(&out),
            certificate,
        })
    }

    fn run_aseq(&self, entries: &[SeqEntry]) -> Result<CommandData, ExecError> {
        let mut built: Vec<(IndexElement, Arc<Module<F>>)> = Vec::with_capacity(entries.len());
        for e in entries {
            match e {
                SeqEntry::Free(i) => {
                    let at = self.index(i)?;
                    let m = Module::free(self.algebra.clone(), &at, &format!("P{at}"))?;
                    built.push((at, m));
                }
                SeqEntry::Simple(i) => {
                    let at = self.index(i)?;
                    let m = Module::simple(self.algebra.clone(), &at, &format!("S{at}"))?;
                    built.push((at, m));
                }
                SeqEntry::At(n, i) => {
                    let at = self.index(i)?;
                    let m = self.module(&ModRef::Named(n.clone()))?;
                    built.push((at, m));
                }
            }
        }
        let name = format!("End({})", self.name);
        let seq = a_of_sequence(&built, &name)?;
        let mut dims = Vec::new();
        if let Some(alg) = &seq.algebra {
            let poset = self.poset();
            let mut idxs: Vec<IndexElement> = built.iter().map(|(i, _)| i.clone()).collect();
            idxs.sort_by_key(|i| poset.linext_key(i));
            for i in &idxs {
                for j in &idxs {
                    if poset.leq(i, j)? {
                        dims.push(PairDim {
                            from: i.to_string(),
                            to: j.to_string(),
                            dim: alg.dim(i, j)?,
                        });
                    }
                }
            }
        }
        Ok(CommandData::Aofseq {
            name,
            entries: entries.iter().map(|e| e.to_string()).collect(),
            connected: outcome_info(&seq.connected),
            built: seq.algebra.is_some(),
            dims,
        })
    }

    fn run_check(&self, check: &CheckCmd) -> Result<CommandData, ExecError> {
        match check {
            CheckCmd::Star { window } => {
                let w = self.window_from(window)?;
                let rep = check_star(&self.algebra, &w, &SweepChain::default())?;
                let per_index = rep
                    .per_index
                    .iter()
                    .map(|(at, o)| IndexOutcome {
                        at: at.to_string(),
                        outcome: outcome_info(o),
                        certificate: o.certificate.as_ref().map(generation_cert_info),
                    })
                    .collect();
                Ok(CommandData::CheckStar {
                    window: w.to_string(),
                    verdict: verdict_str(&rep.verdict()).into(),
                    per_index,
                })
            }
            CheckCmd::Cocompact { window } => {
                let w = self.window_from(window)?;
                let pairs = window_pairs(self.poset(), &w);
                let chain = SweepChain::default();
                let mut examined = 0;
                let mut verdict = Verdict::Verified;
                let mut failure = None;
                // One pair at a time, stopping at the first one that fails
                // to verify: on algebras with growing tails the later pairs
                // only get more expensive, never more informative.
                for (i, d) in &pairs {
                    let rep =
                        check_tails_cocompact(&self.algebra, &[(i.clone(), d.clone())], &chain)?;
                    examined += 1;
                    let (_, _, out) = &rep.per_pair[0];
                    if !out.is_verified() {
                        verdict = out.verdict.clone();
                        failure = Some(PairFailure {
                            lower: i.to_string(),
                            cut: d.to_string(),
                            outcome: outcome_info(out),
                            certificate: out.certificate.as_ref().map(generation_cert_info),
                        });
                        break;
                    }
                }
                Ok(CommandData::CheckCocompact {
                    window: w.to_string(),
                    verdict: verdict_str(&verdict).into(),
                    pairs_examined: examined,
                    pairs_total: pairs.len(),
                    failure,
                })
            }
            CheckCmd::Strong { window } => {
                let w = self.window_from(window)?;
                let out = check_strongly_indexed(&self.algebra, &w)?;
                let (triples, failure) = match &out.certificate {
                    Some(c) => (
                        c.triples,
                        c.failure.as_ref().map(|f| StrongFailureInfo {
                            lower: f.lower.to_string(),
                            mid: f.mid.to_string(),
                            upper: f.upper.to_string(),
                            product_rank: f.product_rank,
                            full_dim: f.full_dim,
                            missing: f.missing.clone(),
                        }),
                    ),
                    None => (0, None),
                };
                Ok(CommandData::CheckStrong {
                    window: w.to_string(),
                    outcome: outcome_info(&out),
                    triples,
                    failure,
                })
            }
            CheckCmd::Coherence { module } => {
                let parts = self
                    .cokers
                    .iter()
                    .find(|(n, _)| n == module)
                    .map(|(_, p)| p)
                    .ok_or_else(|| {
                        ExecError::Input(format!("`{module}` is not a coker module"))
                    })?;
                let map = ModuleMap {
                    name: format!("{module}.cover"),
                    gens: parts.covers.clone(),
                    images: parts.images.clone(),
                    target: parts.target.clone(),
                };
                let rep = check_coherence_probe(&[map], &SweepChain::default())?;
                let per_map = rep
                    .per_map
                    .iter()
                    .map(|(n, o)| MapOutcome {
                        name: n.clone(),
                        outcome: outcome_info(o),
                        certificate: o.certificate.as_ref().map(generation_cert_info),
                    })
                    .collect();
                Ok(CommandData::CheckCoherence {
                    verdict: verdict_str(&rep.verdict()).into(),
                    per_map,
                })
            }
            CheckCmd::Sequence { samples } => {
                let w = self.session_window()?;
                let mut mods = Vec::with_capacity(samples.len());
                for r in samples {
                    mods.push(self.module(r)?);
                }
                let rep = check_sequence_conditions(&mods, &w, &SweepChain::default())?;
                let bounds = rep
                    .surjectivity
                    .iter()
                    .map(|(n, o)| SampleBound {
                        sample: n.clone(),
                        bound: o
                            .certificate
                            .as_ref()
                            .and_then(|c| c.bound.as_ref())
                            .map(|b| b.to_string()),
                        outcome: outcome_info(o),
                    })
                    .collect();
                Ok(CommandData::CheckSequence {
                    window: w.to_string(),
                    samples: mods.iter().map(|m| m.name().to_string()).collect(),
                    ample: verdict_str(&rep.ample_verdict()).into(),
                    tails: verdict_str(&rep.tails_verdict()).into(),
                    surjectivity: verdict_str(&rep.surjectivity_verdict()).into(),
                    bounds,
                })
            }
        }
    }
}

/// A dense dimension grid for rank-2 lattice boxes, rows indexed by the
/// first coordinate.
fn grid_of(w: &Window, dims: &[(IndexElement, usize)]) -> Option<Vec<Vec<usize>>> {
    let (lo, hi) = w.box_corners()?;
    let lc = lo.coords()?;
    let hc = hi.coords()?;
    if lc.len() != 2 {
        return None;
    }
    let rows = (hc[0] - lc[0] + 1) as usize;
    let cols = (hc[1] - lc[1] + 1) as usize;
    let mut g = vec![vec![0usize; cols]; rows];
    for (at, d) in dims {
        let c = at.coords()?;
        g[(c[0] - lc[0]) as usize][(c[1] - lc[1]) as usize] = *d;
    }
    Some(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::CommandData;

    const POLY: &str = "\
poset zlattice 2
field Q
algebra invariant
gen x (1,0)
gen y (0,1)
rel (1,1): x*y - y*x
window (0,0) (4,4)
";

    const FREE: &str = "\
poset zlattice 2
field Q
algebra invariant
gen x (1,0)
gen y (0,1)
window (0,0) (4,4)
";

    fn run(text: &str, cmd: &str) -> Report {
        run_opts(text, cmd, RunOptions::default())
    }

    fn run_opts(text: &str, cmd: &str, mut opts: RunOptions) -> Report {
        opts.commands = Some(vec![parse::parse_command_text(cmd).expect("command parses")]);
        run_text(text, &opts).expect("session runs")
    }

    fn data(r: &Report) -> &CommandData {
        assert_eq!(r.results.len(), 1);
        r.results[0].data.as_ref().expect("command produced data")
    }

    #[test]
    fn commuting_plane_dims_form_the_all_ones_grid() {
        let r = run(POLY, "dims (0,0) (3,3)");
        match data(&r) {
            CommandData::Dims { total, grid, .. } => {
                assert_eq!(*total, 16);
                assert_eq!(grid.as_ref().unwrap(), &vec![vec![1usize; 4]; 4]);
            }
            other => panic!("unexpected data {other:?}"),
        }
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn cokernel_of_both_coordinates_is_the_simple_module() {
        let text = format!("{POLY}module M = coker [ P(1,0) P(0,1) -> P(0,0) : x ; y ]\n");
        let r = run(&text, "dims M (0,0) (2,2)");
        match data(&r) {
            CommandData::Dims { total, entries, .. } => {
                assert_eq!(*total, 1);
                assert_eq!(entries.len(), 1);
                assert_eq!(entries[0].at, "(0,0)");
                assert_eq!(entries[0].dim, 1);
            }
            other => panic!("unexpected data {other:?}"),
        }
    }

    #[test]
    fn hom_from_a_free_module_counts_the_target_component() {
        let r = run(POLY, "hom P(0,0) P(0,0)");
        match data(&r) {
            CommandData::Hom { dim, .. } => assert_eq!(*dim, 1),
            other => panic!("unexpected data {other:?}"),
        }
        let r = run(POLY, "hom P(1,1) P(0,0)");
        match data(&r) {
            CommandData::Hom { dim, .. } => assert_eq!(*dim, 1),
            other => panic!("unexpected data {other:?}"),
        }
    }

    #[test]
    fn free_plane_refutes_strong_indexing_with_the_missing_word() {
        let r = run(FREE, "check strong (0,0)..(2,2)");
        match data(&r) {
            CommandData::CheckStrong { outcome, failure, .. } => {
                assert_eq!(outcome.verdict, "refuted");
                let f = failure.as_ref().expect("failure triple");
                assert_eq!(f.lower, "(0,0)");
                assert_eq!(f.mid, "(1,0)");
                assert_eq!(f.upper, "(1,1)");
                assert_eq!(f.missing, "y*x");
            }
            other => panic!("unexpected data {other:?}"),
        }
        assert_eq!(r.exit_code(), 2);
    }

    #[test]
    fn growth_of_free_tails_exits_inconclusive_without_scanning_all_pairs() {
        let r = run(FREE, "check cocompact (0,0)..(2,2)");
        match data(&r) {
            CommandData::CheckCocompact { verdict, pairs_examined, pairs_total, failure, .. } => {
                assert_eq!(verdict, "inconclusive");
                assert!(pairs_examined < pairs_total);
                let f = failure.as_ref().expect("failing pair");
                let reason = f.outcome.reason.as_ref().expect("reason");
                assert_eq!(reason.kind, "growth");
                let g = reason.growth.as_ref().expect("growth evidence");
                assert!(g.totals.windows(2).all(|p| p[0] < p[1]));
            }
            other => panic!("unexpected data {other:?}"),
        }
        assert_eq!(r.exit_code(), 3);
    }

    #[test]
    fn sequence_of_frees_rebuilds_the_commuting_plane() {
        let r = run(POLY, "aofseq P(0,0) P(1,0) P(0,1) P(1,1)");
        match data(&r) {
            CommandData::Aofseq { built, connected, dims, .. } => {
                assert!(built);
                assert_eq!(connected.verdict, "verified");
                assert_eq!(dims.len(), 9);
                assert!(dims.iter().all(|p| p.dim == 1));
            }
            other => panic!("unexpected data {other:?}"),
        }
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn resource_limits_surface_as_limit_errors() {
        let opts = RunOptions {
            limits: Limits { max_window: 4, ..Limits::default() },
            ..RunOptions::default()
        };
        let r = run_opts(POLY, "dims (0,0) (3,3)", opts);
        assert_eq!(r.results[0].status, "error");
        let e = r.results[0].error.as_ref().expect("error entry");
        assert_eq!(e.kind, "limit");
        assert_eq!(r.exit_code(), 4);
    }

    #[test]
    fn field_override_runs_the_session_mod_p() {
        let opts = RunOptions { field: Some(FieldChoice::Fp(7)), ..RunOptions::default() };
        let r = run_opts(POLY, "dims (0,0) (3,3)", opts);
        assert_eq!(r.field, "F7");
        match data(&r) {
            CommandData::Dims { total, .. } => assert_eq!(*total, 16),
            other => panic!("unexpected data {other:?}"),
        }
    }

    #[test]
    fn mixed_product_session_reports_thin_dims() {
        let text = crate::corpus::find("chain3_product").expect("corpus entry").text;
        let r = run(text, "dims (0,a) (1,c)");
        match data(&r) {
            CommandData::Dims { total, entries, .. } => {
                assert_eq!(*total, 6);
                assert!(entries.iter().all(|e| e.dim == 1));
            }
            other => panic!("unexpected data {other:?}"),
        }
    }

    #[test]
    fn rank_one_star_check_verifies() {
        let text = crate::corpus::find("deloop_zn").expect("corpus entry").text;
        let r = run(text, "check star (0)..(2)");
        match data(&r) {
            CommandData::CheckStar { verdict, per_index, .. } => {
                assert_eq!(verdict, "verified");
                assert_eq!(per_index.len(), 3);
            }
            other => panic!("unexpected data {other:?}"),
        }
        assert_eq!(r.exit_code(), 0);
    }
}
